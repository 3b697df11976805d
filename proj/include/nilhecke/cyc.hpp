#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "nilhecke/errors.hpp"

namespace nilhecke {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Exact arithmetic in the cyclotomic field Q(zeta_n).  Elements are stored
// on the power basis 1, zeta, ..., zeta^{phi(n)-1}; powers above are reduced
// with the n-th cyclotomic polynomial.  n = p covers the additive character
// values; the eigenvalue checks at genus 1 also need roots of unity of the
// character orders, so n is configurable.
class CycField {
 public:
  explicit CycField(int n);
  static const CycField& get(int n);

  int n() const { return n_; }
  int degree() const { return deg_; }
  // rows_[k] = coefficients of zeta^{deg+k} on the power basis, 0 <= k < n-deg
  const std::vector<Rational>& reduction_row(int k) const { return rows_[k]; }

 private:
  int n_, deg_;
  std::vector<std::vector<Rational>> rows_;
};

class Cyc {
 public:
  Cyc() = default;
  explicit Cyc(const CycField& f) : f_(&f), c_(f.degree()) {}
  Cyc(const CycField& f, const Rational& r) : Cyc(f) { c_[0] = r; }
  static Cyc zeta_pow(const CycField& f, long long k);

  const CycField& field() const { return *f_; }
  bool is_zero() const;
  bool is_rational() const;
  Rational rational_part() const { return c_.empty() ? Rational(0) : c_[0]; }
  const std::vector<Rational>& coeffs() const { return c_; }

  Cyc operator+(const Cyc& o) const;
  Cyc operator-(const Cyc& o) const;
  Cyc operator-() const;
  Cyc operator*(const Cyc& o) const;
  Cyc operator*(const Rational& r) const;
  Cyc inverse() const;
  Cyc conj() const;  // complex conjugation zeta -> zeta^{-1}
  bool operator==(const Cyc& o) const;
  bool operator!=(const Cyc& o) const { return !(*this == o); }

  std::string to_string() const;

 private:
  const CycField* f_ = nullptr;
  std::vector<Rational> c_;
};

}  // namespace nilhecke
