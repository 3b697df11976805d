#include "nilhecke/poly.hpp"

#include <sstream>

namespace nilhecke {

Poly Poly::constant(const GF& k, fq_t v) {
  Poly p(k);
  if (v) p.c_ = {v};
  return p;
}

Poly Poly::x(const GF& k) {
  Poly p(k);
  p.c_ = {0, 1};
  return p;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  Poly r(*k_);
  r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = k_->add(coeff(i), o.coeff(i));
  r.trim();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& v : r.c_) v = k_->neg(v);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r(*k_);
  if (is_zero() || o.is_zero()) return r;
  r.c_.assign(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size(); ++j)
      r.c_[i + j] = k_->add(r.c_[i + j], k_->mul(c_[i], o.c_[j]));
  }
  r.trim();
  return r;
}

Poly Poly::mul_scalar(fq_t s) const {
  Poly r = *this;
  for (auto& v : r.c_) v = k_->mul(v, s);
  r.trim();
  return r;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return mul_scalar(k_->inv(lead()));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  if (d.is_zero()) throw Error("polynomial division by zero");
  Poly q(*k_), r = *this;
  q.c_.assign(std::max<int>(0, deg() - d.deg() + 1), 0);
  fq_t li = k_->inv(d.lead());
  while (!r.is_zero() && r.deg() >= d.deg()) {
    fq_t f = k_->mul(r.lead(), li);
    int off = r.deg() - d.deg();
    q.c_[off] = f;
    for (int i = 0; i <= d.deg(); ++i)
      r.c_[off + i] = k_->sub(r.c_[off + i], k_->mul(f, d.coeff(i)));
    r.trim();
  }
  q.trim();
  return {q, r};
}

Poly Poly::gcd(const Poly& o) const {
  Poly a = *this, b = o;
  while (!b.is_zero()) {
    Poly r = a.divmod(b).second;
    a = b;
    b = r;
  }
  return a.monic();
}

Poly Poly::derivative() const {
  Poly r(*k_);
  if (deg() < 1) return r;
  r.c_.assign(c_.size() - 1, 0);
  for (int i = 1; i <= deg(); ++i) {
    fq_t m = 0;
    for (int j = 0; j < i % k_->p; ++j) m = k_->add(m, c_[i]);
    r.c_[i - 1] = m;
  }
  r.trim();
  return r;
}

fq_t Poly::eval(fq_t v) const {
  fq_t acc = 0;
  for (int i = deg(); i >= 0; --i) acc = k_->add(k_->mul(acc, v), c_[i]);
  return acc;
}

fq_t Poly::eval_in(const GF& big, const std::vector<fq_t>& emb, fq_t v) const {
  fq_t acc = 0;
  for (int i = deg(); i >= 0; --i) acc = big.add(big.mul(acc, v), emb[c_[i]]);
  return acc;
}

bool Poly::is_irreducible() const {
  int d = deg();
  if (d <= 0) return false;
  if (d == 1) return true;
  // no roots, and not divisible by smaller irreducibles
  for (int dd = 1; 2 * dd <= d; ++dd)
    for (const Poly& p : monic_irreducibles(*k_, dd))
      if (divmod(p).second.is_zero()) return false;
  return true;
}

std::vector<Poly> Poly::monic_irreducibles(const GF& k, int deg) {
  static_assert(sizeof(long long) >= 8, "");
  std::vector<Poly> out;
  long long count = 1;
  for (int i = 0; i < deg; ++i) count *= k.q;
  for (long long code = 0; code < count; ++code) {
    std::vector<fq_t> c(deg + 1, 0);
    long long t = code;
    for (int i = 0; i < deg; ++i) {
      c[i] = static_cast<fq_t>(t % k.q);
      t /= k.q;
    }
    c[deg] = 1;
    Poly p(k, c);
    if (p.is_irreducible()) out.push_back(p);
  }
  return out;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= deg(); ++i) {
    if (!c_[i]) continue;
    if (!first) os << "+";
    first = false;
    if (c_[i] != 1 || i == 0) os << static_cast<int>(c_[i]);
    if (i >= 1) {
      if (c_[i] != 1) os << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace nilhecke
