#include "nilhecke/cyc.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace nilhecke {

namespace {

// Polynomial helpers over Q (dense, index = degree).
using QPoly = std::vector<Rational>;

void trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly polydiv_exact(QPoly num, const QPoly& den) {
  QPoly q(num.size(), Rational(0));
  while (num.size() >= den.size() && !num.empty()) {
    Rational c = num.back() / den.back();
    size_t off = num.size() - den.size();
    q[off] = c;
    for (size_t i = 0; i < den.size(); ++i) num[off + i] -= c * den[i];
    trim(num);
  }
  trim(q);
  return q;
}

QPoly cyclotomic(int n) {
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
  QPoly num(n + 1, Rational(0));
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    num = polydiv_exact(num, cyclotomic(d));
  }
  return num;
}

}  // namespace

CycField::CycField(int n) : n_(n) {
  QPoly phi = cyclotomic(n);
  deg_ = static_cast<int>(phi.size()) - 1;
  // zeta^deg = -(phi[0] + phi[1] z + ...)/phi[deg]; phi monic.  Products of
  // basis elements reach zeta^{2 deg - 2} and zeta_pow() reaches zeta^{n-1},
  // so provide reduction rows for all of those.
  int nrows = std::max(n - deg_, deg_ - 1);
  if (nrows < 1) nrows = 1;
  rows_.assign(nrows, std::vector<Rational>(deg_, Rational(0)));
  std::vector<Rational> cur(deg_);
  for (int i = 0; i < deg_; ++i) cur[i] = -phi[i];
  rows_[0] = cur;
  for (int k = 1; k < nrows; ++k) {
    // multiply cur by zeta and reduce
    std::vector<Rational> nxt(deg_, Rational(0));
    Rational top = cur[deg_ - 1];
    for (int i = deg_ - 1; i > 0; --i) nxt[i] = cur[i - 1];
    nxt[0] = 0;
    if (top != 0)
      for (int i = 0; i < deg_; ++i) nxt[i] += top * rows_[0][i];
    rows_[k] = nxt;
    cur = nxt;
  }
}

const CycField& CycField::get(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycField>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<CycField>(n)).first;
  return *it->second;
}

Cyc Cyc::zeta_pow(const CycField& f, long long k) {
  long long n = f.n();
  k %= n;
  if (k < 0) k += n;
  Cyc r(f);
  if (k < f.degree()) {
    r.c_[k] = 1;
  } else {
    const auto& row = f.reduction_row(static_cast<int>(k) - f.degree());
    for (int i = 0; i < f.degree(); ++i) r.c_[i] = row[i];
  }
  return r;
}

bool Cyc::is_zero() const {
  for (const auto& x : c_)
    if (x != 0) return false;
  return true;
}

bool Cyc::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Cyc Cyc::operator+(const Cyc& o) const {
  Cyc r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
  return r;
}

Cyc Cyc::operator-(const Cyc& o) const {
  Cyc r = *this;
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

Cyc Cyc::operator-() const {
  Cyc r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Cyc Cyc::operator*(const Cyc& o) const {
  int d = f_->degree();
  std::vector<Rational> prod(2 * d - 1, Rational(0));
  for (int i = 0; i < d; ++i) {
    if (c_[i] == 0) continue;
    for (int j = 0; j < d; ++j) prod[i + j] += c_[i] * o.c_[j];
  }
  Cyc r(*f_);
  for (int i = 0; i < d; ++i) r.c_[i] = prod[i];
  for (int k = d; k < 2 * d - 1; ++k) {
    if (prod[k] == 0) continue;
    const auto& row = f_->reduction_row(k - d);
    for (int i = 0; i < d; ++i) r.c_[i] += prod[k] * row[i];
  }
  return r;
}

Cyc Cyc::operator*(const Rational& s) const {
  Cyc r = *this;
  for (auto& x : r.c_) x *= s;
  return r;
}

Cyc Cyc::conj() const {
  int d = f_->degree();
  Cyc r(*f_);
  for (int i = 0; i < d; ++i) {
    if (c_[i] == 0) continue;
    Cyc z = zeta_pow(*f_, -(long long)i);
    r = r + z * c_[i];
  }
  return r;
}

Cyc Cyc::inverse() const {
  // Solve x*y = 1 by Gaussian elimination on the multiplication matrix.
  int d = f_->degree();
  if (is_zero()) throw NotAUnit("0 has no inverse in Q(zeta)");
  std::vector<std::vector<Rational>> M(d, std::vector<Rational>(d + 1, Rational(0)));
  for (int j = 0; j < d; ++j) {
    Cyc col = *this * zeta_pow(*f_, j);
    for (int i = 0; i < d; ++i) M[i][j] = col.c_[i];
  }
  M[0][d] = 1;
  for (int col = 0, row = 0; col < d && row < d; ++col) {
    int piv = -1;
    for (int i = row; i < d; ++i)
      if (M[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[piv], M[row]);
    Rational p = M[row][col];
    for (int j = 0; j <= d; ++j) M[row][j] /= p;
    for (int i = 0; i < d; ++i) {
      if (i == row || M[i][col] == 0) continue;
      Rational c = M[i][col];
      for (int j = 0; j <= d; ++j) M[i][j] -= c * M[row][j];
    }
    ++row;
  }
  Cyc r(*f_);
  for (int i = 0; i < d; ++i) r.c_[i] = M[i][d];
  if (!((*this * r) == Cyc(*f_, Rational(1)))) throw Error("cyclotomic inversion failed");
  return r;
}

bool Cyc::operator==(const Cyc& o) const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

std::string Cyc::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].str();
    if (i > 0) os << "*z^" << i;
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace nilhecke
