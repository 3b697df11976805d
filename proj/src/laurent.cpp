#include "nilhecke/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>

namespace nilhecke {

Laurent Laurent::constant(const Dual& c, int prec) { return monomial(c, 0, prec); }

Laurent Laurent::monomial(const Dual& c, int e, int prec) {
  Laurent r(c.field(), prec);
  if (e < prec && !c.is_zero()) {
    r.lo_ = e;
    r.c_.assign(1, c);
  }
  return r;
}

Laurent Laurent::t_pow(const GF& k, int e, int prec) {
  return monomial(Dual::one(k), e, prec);
}

Dual Laurent::coeff(int e) const {
  if (e < lo_ || e >= lo_ + static_cast<int>(c_.size())) return Dual::zero(*k_);
  return c_[e - lo_];
}

void Laurent::set_coeff(int e, const Dual& d) {
  if (e >= prec_) return;
  if (c_.empty()) {
    lo_ = e;
    c_.assign(1, d);
    normalize();
    return;
  }
  if (e < lo_) {
    c_.insert(c_.begin(), lo_ - e, Dual::zero(*k_));
    lo_ = e;
  } else if (e >= lo_ + static_cast<int>(c_.size())) {
    c_.resize(e - lo_ + 1, Dual::zero(*k_));
  }
  c_[e - lo_] = d;
  normalize();
}

void Laurent::normalize() {
  size_t i = 0;
  while (i < c_.size() && c_[i].is_zero()) ++i;
  if (i > 0) {
    c_.erase(c_.begin(), c_.begin() + i);
    lo_ += static_cast<int>(i);
  }
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  if (c_.empty()) lo_ = prec_;
  if (lo_ + static_cast<int>(c_.size()) > prec_) c_.resize(prec_ - lo_);
  if (c_.empty()) lo_ = prec_;
}

Laurent Laurent::operator+(const Laurent& o) const {
  int np = std::min(prec_, o.prec_);
  Laurent r(*k_, np);
  int lo = std::min(lo_, o.lo_);
  if (lo >= np) return r;
  r.lo_ = lo;
  r.c_.assign(np - lo, Dual::zero(*k_));
  for (int e = lo; e < np; ++e) r.c_[e - lo] = coeff(e) + o.coeff(e);
  r.normalize();
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& d : r.c_) d = -d;
  return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
  // knowing a mod t^{Na} with val >= va, b mod t^{Nb} with val >= vb:
  // the product is known mod t^{min(Na+vb, Nb+va)}.
  int va = lo_, vb = o.lo_;
  int np = std::min(prec_ + vb, o.prec_ + va);
  Laurent r(*k_, np);
  if (c_.empty() || o.c_.empty()) return r;
  int lo = va + vb;
  if (lo >= np) return r;
  r.lo_ = lo;
  r.c_.assign(np - lo, Dual::zero(*k_));
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) {
      int e = lo_ + static_cast<int>(i) + o.lo_ + static_cast<int>(j);
      if (e >= np) break;
      r.c_[e - lo] = r.c_[e - lo] + c_[i] * o.c_[j];
    }
  }
  r.normalize();
  return r;
}

Laurent Laurent::mul_scalar(const Dual& d) const {
  Laurent r = *this;
  for (auto& x : r.c_) x = x * d;
  r.normalize();
  return r;
}

Laurent Laurent::shift(int e) const {
  Laurent r = *this;
  r.lo_ += e;
  r.prec_ += e;
  return r;
}

Laurent Laurent::truncated(int new_prec) const {
  Laurent r = *this;
  if (new_prec < r.prec_) {
    r.prec_ = new_prec;
    if (r.lo_ > r.prec_) r.lo_ = r.prec_;
    if (static_cast<int>(r.c_.size()) > r.prec_ - r.lo_)
      r.c_.resize(std::max(0, r.prec_ - r.lo_));
    r.normalize();
  }
  return r;
}

Laurent Laurent::reduction() const {
  Laurent r(*k_, prec_);
  r.lo_ = lo_;
  r.c_ = c_;
  for (auto& d : r.c_) d.a1 = Fq(*k_, 0);
  r.normalize();
  return r;
}

Laurent Laurent::eps_part() const {
  Laurent r(*k_, prec_);
  r.lo_ = lo_;
  r.c_ = c_;
  for (auto& d : r.c_) {
    d.a0 = d.a1;
    d.a1 = Fq(*k_, 0);
  }
  r.normalize();
  return r;
}

bool Laurent::eps_free() const {
  for (const auto& d : c_)
    if (!d.a1.is_zero()) return false;
  return true;
}

bool Laurent::is_integral() const { return c_.empty() || lo_ >= 0; }

bool Laurent::is_unit_integral() const {
  if (!is_integral()) return false;
  return !coeff(0).a0.is_zero();
}

bool Laurent::equals(const Laurent& o) const {
  int np = std::min(prec_, o.prec_);
  int lo = std::min(lo_, o.lo_);
  for (int e = lo; e < np; ++e)
    if (coeff(e) != o.coeff(e)) return false;
  return true;
}

bool Laurent::identical(const Laurent& o) const {
  return prec_ == o.prec_ && lo_ == o.lo_ && equals(o);
}

Laurent::Val Laurent::valuation() const {
  if (c_.empty()) throw PrecisionExhausted("valuation of 0 at finite precision");
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].a0.is_zero()) return {false, lo_ + static_cast<int>(i)};
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].a1.is_zero()) return {true, lo_ + static_cast<int>(i)};
  throw PrecisionExhausted("valuation of 0 at finite precision");
}

Laurent Laurent::inverse() const {
  // x = xbar + eps*x1 is a unit of the fraction ring iff xbar != 0, and then
  // x^{-1} = xbar^{-1} - eps * x1 * xbar^{-2}.  The eps-part of x may sit at
  // lower t-degree than the valuation of xbar, so invert the reduction as a
  // plain series and correct.
  Val v = valuation();
  if (v.eps_torsion) throw NotAUnit("eps-torsion element has no inverse");
  Laurent red = reduction();
  int n = red.prec_ - v.v;  // known coefficients of the unit part of xbar
  if (n <= 0) throw PrecisionExhausted("no known coefficients for inversion");
  std::vector<Fq> u(n, Fq(*k_, 0));
  for (int i = 0; i < n; ++i) u[i] = red.coeff(v.v + i).a0;
  std::vector<Fq> b(n, Fq(*k_, 0));
  Fq u0i = u[0].inv();
  b[0] = u0i;
  for (int i = 1; i < n; ++i) {
    Fq s(*k_, 0);
    for (int j = 1; j <= i; ++j) s = s + u[j] * b[i - j];
    b[i] = -(u0i * s);
  }
  // xbar^{-1} = t^{-v} u^{-1}, known mod t^{prec - 2v}.
  Laurent redinv(*k_, prec_ - 2 * v.v);
  redinv.lo_ = -v.v;
  redinv.c_.assign(n, Dual::zero(*k_));
  for (int i = 0; i < n; ++i) redinv.c_[i] = Dual(b[i]);
  redinv.normalize();
  Laurent e = eps_part();
  if (e.known_zero()) return redinv;
  return redinv - (e * redinv * redinv).mul_scalar(Dual::eps(*k_));
}

std::string Laurent::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](Fq cf, bool eps, int e) {
    if (cf.is_zero()) return;
    if (!first) os << " + ";
    first = false;
    bool coef_one = (cf.v == 1);
    bool printed = false;
    if (!coef_one || (!eps && e == 0)) {
      os << static_cast<int>(cf.v);
      printed = true;
    }
    if (eps) {
      if (printed) os << "*";
      os << "eps";
      printed = true;
    }
    if (e != 0) {
      if (printed) os << "*";
      os << "t^" << e;
      printed = true;
    } else if (!printed) {
      os << "1";
    }
  };
  for (int e = lo_; e < lo_ + static_cast<int>(c_.size()); ++e) {
    emit(coeff(e).a0, false, e);
    emit(coeff(e).a1, true, e);
  }
  if (first) os << "0";
  os << "@N=" << prec_;
  return os.str();
}

Laurent Laurent::parse(const GF& k, const std::string& text, int default_prec) {
  std::string body = text;
  int prec = default_prec;
  auto at = body.find('@');
  if (at != std::string::npos) {
    std::string suffix = body.substr(at + 1);
    body = body.substr(0, at);
    auto eq = suffix.find('=');
    if (suffix.substr(0, eq) != "N" || eq == std::string::npos)
      throw ConfigError("bad precision suffix in '" + text + "'");
    prec = std::atoi(suffix.c_str() + eq + 1);
  }
  Laurent r(k, prec);
  // split on '+' at top level
  std::string term;
  std::vector<std::string> terms;
  for (char ch : body) {
    if (ch == '+') {
      terms.push_back(term);
      term.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      term.push_back(ch);
    }
  }
  terms.push_back(term);
  for (const auto& t : terms) {
    if (t.empty() || t == "0") continue;
    int coef = 1;
    bool eps = false;
    int e = 0;
    size_t i = 0;
    auto read_factor = [&]() {
      if (t.compare(i, 3, "eps") == 0) {
        eps = true;
        i += 3;
      } else if (t[i] == 't') {
        ++i;
        if (i < t.size() && t[i] == '^') {
          ++i;
          size_t j = i;
          if (j < t.size() && (t[j] == '-' || t[j] == '+')) ++j;
          while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
          e = std::atoi(t.substr(i, j - i).c_str());
          i = j;
        } else {
          e = 1;
        }
      } else if (std::isdigit(static_cast<unsigned char>(t[i]))) {
        size_t j = i;
        while (j < t.size() && std::isdigit(static_cast<unsigned char>(t[j]))) ++j;
        int val = std::atoi(t.substr(i, j - i).c_str());
        if (val >= k.q) {
          if (k.m != 1) throw ConfigError("coefficient exceeds field encoding range");
          val %= k.p;
        }
        coef = k.mul(static_cast<fq_t>(coef), static_cast<fq_t>(val));
        i = j;
      } else {
        throw ConfigError("cannot parse ring element term '" + t + "'");
      }
      if (i < t.size() && t[i] == '*') ++i;
    };
    while (i < t.size()) read_factor();
    Dual d = eps ? Dual(Fq(k, 0), Fq(k, coef)) : Dual(Fq(k, coef));
    r.set_coeff(e, r.coeff(e) + d);
  }
  return r;
}

}  // namespace nilhecke
