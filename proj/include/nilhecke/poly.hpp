#pragma once

#include <string>
#include <vector>

#include "nilhecke/fq.hpp"

namespace nilhecke {

// Dense univariate polynomials over a tabled finite field.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const GF& k) : k_(&k) {}
  Poly(const GF& k, std::vector<fq_t> coeffs) : k_(&k), c_(std::move(coeffs)) { trim(); }
  static Poly constant(const GF& k, fq_t v);
  static Poly x(const GF& k);

  const GF& field() const { return *k_; }
  bool is_zero() const { return c_.empty(); }
  int deg() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  fq_t coeff(int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : 0; }
  const std::vector<fq_t>& coeffs() const { return c_; }
  fq_t lead() const { return c_.empty() ? 0 : c_.back(); }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly mul_scalar(fq_t s) const;
  Poly monic() const;
  // division with remainder
  std::pair<Poly, Poly> divmod(const Poly& d) const;
  Poly gcd(const Poly& o) const;
  Poly derivative() const;
  fq_t eval(fq_t v) const;
  // evaluate with coefficients pushed through an embedding into a bigger field
  fq_t eval_in(const GF& big, const std::vector<fq_t>& emb, fq_t v) const;
  bool operator==(const Poly& o) const { return k_ == o.k_ && c_ == o.c_; }

  // deterministic enumeration of monic irreducibles by (degree, encoding)
  static std::vector<Poly> monic_irreducibles(const GF& k, int deg);
  bool is_irreducible() const;
  std::string to_string() const;

 private:
  void trim();
  const GF* k_ = nullptr;
  std::vector<fq_t> c_;
};

}  // namespace nilhecke
