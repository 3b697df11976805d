#pragma once

#include "nilhecke/fq.hpp"

namespace nilhecke {

// Element a0 + eps*a1 of F_q[eps]/(eps^2).
struct Dual {
  Fq a0, a1;

  Dual() = default;
  Dual(Fq r) : a0(r), a1(*r.f, 0) {}
  Dual(Fq r, Fq e) : a0(r), a1(e) {}
  static Dual zero(const GF& f) { return Dual(Fq(f, 0), Fq(f, 0)); }
  static Dual one(const GF& f) { return Dual(Fq(f, 1), Fq(f, 0)); }
  static Dual eps(const GF& f) { return Dual(Fq(f, 0), Fq(f, 1)); }

  const GF& field() const { return *a0.f; }
  bool is_zero() const { return a0.is_zero() && a1.is_zero(); }
  bool is_unit() const { return !a0.is_zero(); }

  Dual operator+(const Dual& o) const { return {a0 + o.a0, a1 + o.a1}; }
  Dual operator-(const Dual& o) const { return {a0 - o.a0, a1 - o.a1}; }
  Dual operator-() const { return {-a0, -a1}; }
  Dual operator*(const Dual& o) const { return {a0 * o.a0, a0 * o.a1 + a1 * o.a0}; }
  bool operator==(const Dual& o) const { return a0 == o.a0 && a1 == o.a1; }
  bool operator!=(const Dual& o) const { return !(*this == o); }
};

// (a0 + eps a1)^{-1} = a0^{-1} - eps a1 a0^{-2}.
inline Dual dual_invert(const Dual& x) {
  if (x.a0.is_zero()) throw NotAUnit("dual number with zero reduction");
  Fq i = x.a0.inv();
  return {i, -(x.a1 * i * i)};
}

inline Dual operator*(Fq c, const Dual& d) { return Dual(c) * d; }

}  // namespace nilhecke
