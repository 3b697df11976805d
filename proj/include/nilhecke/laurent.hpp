#pragma once

#include <string>
#include <vector>

#include "nilhecke/dual.hpp"

namespace nilhecke {

// Truncated Laurent series over F_q[eps]/(eps^2): coefficients for
// t-exponents in [lo, prec) are stored, everything at exponent >= prec is
// unknown.  This models the local rings O = F_q[eps][[t]] and their total
// fraction rings at a fixed working precision.
class Laurent {
 public:
  Laurent() = default;
  Laurent(const GF& k, int prec) : k_(&k), lo_(prec), prec_(prec) {}
  static Laurent zero(const GF& k, int prec) { return Laurent(k, prec); }
  static Laurent constant(const Dual& c, int prec);
  static Laurent monomial(const Dual& c, int e, int prec);
  // t^e
  static Laurent t_pow(const GF& k, int e, int prec);

  const GF& field() const { return *k_; }
  int prec() const { return prec_; }
  int lo() const { return lo_; }
  bool known_zero() const { return c_.empty(); }

  Dual coeff(int e) const;
  void set_coeff(int e, const Dual& d);

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator-() const;
  Laurent operator*(const Laurent& o) const;
  Laurent mul_scalar(const Dual& d) const;
  Laurent shift(int e) const;  // multiply by t^e
  // Inverse of a unit of the fraction ring (reduction mod eps nonzero).
  Laurent inverse() const;
  // Truncate knowledge to exponents < new_prec.
  Laurent truncated(int new_prec) const;

  // Reduction mod eps (eps-parts dropped), and the eps-part as a plain
  // series (formal division by eps).
  Laurent reduction() const;
  Laurent eps_part() const;
  bool eps_free() const;

  bool is_integral() const;               // no known coefficient below t^0
  bool is_unit_integral() const;          // integral and reduction has val 0
  bool equals(const Laurent& o) const;    // agree on shared known range
  bool identical(const Laurent& o) const; // same coefficients and precision

  struct Val {
    bool eps_torsion = false;
    int v = 0;
  };
  // Valuation of the reduction when nonzero, else of the eps-part with the
  // eps_torsion flag set.  Throws PrecisionExhausted when identically 0 at
  // the known precision.
  Val valuation() const;

  std::string to_string() const;
  static Laurent parse(const GF& k, const std::string& text, int default_prec);

 private:
  void normalize();
  const GF* k_ = nullptr;
  int lo_ = 0, prec_ = 0;
  std::vector<Dual> c_;  // c_[i] is coefficient of t^{lo_+i}
};

}  // namespace nilhecke
