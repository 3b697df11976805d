#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nilhecke/cyc.hpp"
#include "nilhecke/mat2.hpp"

namespace nilhecke {

// Canonical serialized invariant of a left coset x*GL2(O).  Two matrices
// give the same key iff they generate the same O-lattice together with the
// same eps-deformation class, i.e. iff they lie in the same left coset.
using CosetKey = std::vector<int32_t>;

struct CosetKeyHash {
  size_t operator()(const CosetKey& k) const {
    size_t h = 1469598103934665603ull;
    for (int32_t v : k) {
      h ^= static_cast<size_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

CosetKey left_coset_key(const Mat2& x);

// Exact polynomial representative of the coset encoded by a key, at the
// requested working precision.  left_coset_key(canonical_rep(k)) == k.
Mat2 canonical_rep(const CosetKey& key, const GF& k, int prec);

// Local equation of a simple divisor: reduction is a uniformizer.
struct SimpleDivisorLocal {
  Laurent f;          // f = t + eps*a after normalization
  int residue_degree = 1;
};

// A double coset G(O) g G(O) at a fixed truncation, stored through the set
// of its left cosets.  canonical() is the lexicographically least left key.
class DoubleCoset {
 public:
  DoubleCoset() = default;
  static DoubleCoset of(const Mat2& rep);

  const Mat2& representative() const { return rep_; }
  const std::vector<CosetKey>& left_keys() const { return keys_; }
  const std::vector<Mat2>& left_reps() const { return reps_; }
  const CosetKey& canonical() const { return keys_.front(); }
  bool contains(const Mat2& g) const;
  bool operator==(const DoubleCoset& o) const { return canonical() == o.canonical(); }

 private:
  Mat2 rep_;
  std::vector<CosetKey> keys_;  // sorted, keys_[0] lexicographically least
  std::vector<Mat2> reps_;      // aligned with keys_
};

// Coset representatives x_i with G(O) g G(O) = disjoint union of x_i G(O).
std::vector<Mat2> left_coset_reps(const DoubleCoset& s);

// Topological generators of GL2(O/t^N) used by the orbit searches.
std::vector<Mat2> glo_generators(const GF& k, int prec);

// Formal rational combination of double cosets, keyed canonically.
struct HeckeElement {
  std::map<CosetKey, std::pair<Rational, Mat2>> terms;  // key -> (weight, representative)

  static HeckeElement characteristic(const Mat2& rep);
  Rational total_weight() const;
  bool operator==(const HeckeElement& o) const;
};

// Convolution of normalized characteristic-measure combinations.
HeckeElement convolve(const HeckeElement& a, const HeckeElement& b);

// h_c for a simple divisor: characteristic measure of G(O) diag(f^-1,1) G(O).
HeckeElement h_of_divisor(const Laurent& f);

bool verify_theta_invariance(const DoubleCoset& s);

// Certificate that the products G(O)g_c^{-1}G(O)g_c^{-2}G(O) and
// G(O)g_c^{-2}G(O)g_c^{-1}G(O) differ, witnessed by (f 0; eps f^2).
struct NonCommutationCertificate {
  bool in_first_product = false;
  bool in_second_product = false;
  Mat2 witness;
  Mat2 factor1, factor2, factor3;  // explicit factorization for the first product
  bool valid() const { return in_first_product && !in_second_product; }
};

NonCommutationCertificate noncommutation_witness(const SimpleDivisorLocal& c, int prec);

// Multiset of left-coset keys of the product set S*T (as x_i y_j G(O)).
std::map<CosetKey, long long> product_left_cosets(const DoubleCoset& s, const DoubleCoset& t);

}  // namespace nilhecke
