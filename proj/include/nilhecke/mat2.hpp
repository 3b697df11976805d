#pragma once

#include <array>

#include "nilhecke/laurent.hpp"

namespace nilhecke {

// 2x2 matrix over the truncated local rings.
class Mat2 {
 public:
  Mat2() = default;
  Mat2(Laurent a, Laurent b, Laurent c, Laurent d) : e_{a, b, c, d} {}
  static Mat2 identity(const GF& k, int prec);
  static Mat2 zero(const GF& k, int prec);
  static Mat2 diag(const Laurent& a, const Laurent& d);
  // 1 + eps*x*E21 and friends
  static Mat2 unipotent_lower_eps(const Laurent& x_reduction);
  static Mat2 unipotent_upper(const Laurent& x);
  static Mat2 unipotent_lower(const Laurent& x);

  const Laurent& at(int i, int j) const { return e_[2 * i + j]; }
  Laurent& at(int i, int j) { return e_[2 * i + j]; }
  const GF& field() const { return e_[0].field(); }
  int prec() const;

  Mat2 operator*(const Mat2& o) const;
  Mat2 operator+(const Mat2& o) const;
  Mat2 operator-(const Mat2& o) const;
  Mat2 mul_scalar(const Laurent& s) const;
  Laurent det() const;
  Mat2 inverse() const;  // throws NotInvertible
  Mat2 transpose() const;
  Mat2 reduction() const;  // entrywise mod eps
  Mat2 eps_part() const;
  Mat2 truncated(int new_prec) const;

  bool is_integral() const;
  bool in_glo() const;  // integral with unit determinant: element of GL2(O)
  bool is_upper_triangular() const;
  bool equals(const Mat2& o) const;

  std::string to_string() const;
  static Mat2 parse(const GF& k, const std::string& text, int default_prec);

 private:
  std::array<Laurent, 4> e_;
};

// The transpose anti-involution.
inline Mat2 theta(const Mat2& g) { return g.transpose(); }

// g = b * (1 + eps*phi_n) * k with b upper triangular invertible over the
// fraction ring, phi_n = t^{-n} E21, and k in GL2(O).
struct IwasawaDatum {
  Mat2 b;
  int n = 0;
  Mat2 k;
};

IwasawaDatum iwasawa_decompose(const Mat2& g);

// 1 + eps * t^{-n} E21
Mat2 iwasawa_stratum_rep(const GF& k, int n, int prec);

}  // namespace nilhecke
