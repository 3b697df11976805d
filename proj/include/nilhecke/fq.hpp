#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilhecke/errors.hpp"

namespace nilhecke {

using fq_t = uint16_t;

// Finite field F_q, q = p^m <= 27, with full operation tables.
// Elements are encoded as integers in [0, q): the element sum c_i * g^i
// (g the class of x modulo the defining polynomial) is encoded as
// sum c_i * p^i.  The defining polynomials are fixed per (p, m) so the
// encoding is reproducible across runs and platforms.
class GF {
 public:
  int p = 0;
  int m = 0;
  int q = 0;

  static const GF& get(int q);
  // Smallest field containing both operands' fields is not needed; we only
  // ever extend a prime-power field by degree: F_{q^e}.
  const GF& extension(int e) const { return GF::get_pm(p, m * e); }
  static const GF& get_pm(int p, int m);

  fq_t add(fq_t a, fq_t b) const { return add_[a * q + b]; }
  fq_t sub(fq_t a, fq_t b) const { return add_[a * q + neg_[b]]; }
  fq_t neg(fq_t a) const { return neg_[a]; }
  fq_t mul(fq_t a, fq_t b) const { return mul_[a * q + b]; }
  fq_t inv(fq_t a) const {
    if (a == 0) throw NotAUnit("0 has no inverse in F_q");
    return inv_[a];
  }
  fq_t div(fq_t a, fq_t b) const { return mul(a, inv(b)); }
  fq_t pow(fq_t a, long long e) const;
  fq_t frob(fq_t a) const { return frob_[a]; }  // x -> x^p
  // Trace to the prime field, returned as an integer in [0, p).
  int trace_to_prime(fq_t a) const { return trace_[a]; }
  // Norm to the prime field.
  int norm_to_prime(fq_t a) const;
  // Multiplicative generator.
  fq_t generator() const { return gen_; }
  bool is_square(fq_t a) const;
  // Returns a square root if one exists, else throws.
  fq_t sqrt(fq_t a) const;

  // Embedding of this field into its degree-e extension (same p).
  // emb[a] is the image of a; deterministic (least root of the defining
  // polynomial is used).
  std::vector<fq_t> embedding_into(const GF& big) const;

  std::string to_string(fq_t a) const;

 private:
  GF() = default;
  void build(int p, int m);
  std::vector<fq_t> add_, mul_, neg_, inv_, frob_;
  std::vector<int> trace_;
  fq_t gen_ = 0;
  std::vector<int> defpoly_;  // coefficients of defining poly, degree m
  friend class GFRegistry;
};

// A field element carrying its field.  Cheap to copy.
struct Fq {
  const GF* f = nullptr;
  fq_t v = 0;

  Fq() = default;
  Fq(const GF& field, int value) : f(&field), v(static_cast<fq_t>(value)) {}

  bool is_zero() const { return v == 0; }
  Fq operator+(Fq o) const { return {*f, f->add(v, o.v)}; }
  Fq operator-(Fq o) const { return {*f, f->sub(v, o.v)}; }
  Fq operator-() const { return {*f, f->neg(v)}; }
  Fq operator*(Fq o) const { return {*f, f->mul(v, o.v)}; }
  Fq operator/(Fq o) const { return {*f, f->div(v, o.v)}; }
  Fq inv() const { return {*f, f->inv(v)}; }
  bool operator==(Fq o) const { return f == o.f && v == o.v; }
  bool operator!=(Fq o) const { return !(*this == o); }
};

}  // namespace nilhecke
