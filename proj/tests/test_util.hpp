#pragma once

#include <random>

#include "nilhecke/mat2.hpp"

namespace nilhecke::testutil {

// Random Laurent with t-valuation in [vmin, vmax], eps-part independent.
inline Laurent random_laurent(std::mt19937_64& rng, const GF& k, int prec, int vmin, int vmax,
                              bool force_unit = false) {
  Laurent x = Laurent::zero(k, prec);
  int v = vmin + static_cast<int>(rng() % (vmax - vmin + 1));
  int lead = force_unit ? 1 + static_cast<int>(rng() % (k.q - 1)) : static_cast<int>(rng() % k.q);
  x.set_coeff(v, Dual(Fq(k, lead), Fq(k, static_cast<int>(rng() % k.q))));
  for (int e = v + 1; e < std::min(prec, v + 8); ++e)
    x.set_coeff(e, Dual(Fq(k, static_cast<int>(rng() % k.q)),
                        Fq(k, static_cast<int>(rng() % k.q))));
  return x;
}

// Random invertible matrix with entry valuations in [-4, 4].
inline Mat2 random_invertible(std::mt19937_64& rng, const GF& k, int prec) {
  for (;;) {
    Mat2 g(random_laurent(rng, k, prec, -4, 4), random_laurent(rng, k, prec, -4, 4),
           random_laurent(rng, k, prec, -4, 4), random_laurent(rng, k, prec, -4, 4));
    Laurent d = g.det();
    if (d.known_zero()) continue;
    auto v = d.valuation();
    if (v.eps_torsion) continue;
    return g;
  }
}

// Random element of B(K): upper triangular with unit-times-t-power diagonal.
inline Mat2 random_borel(std::mt19937_64& rng, const GF& k, int prec) {
  Laurent a = random_laurent(rng, k, prec, -3, 3, true);
  Laurent d = random_laurent(rng, k, prec, -3, 3, true);
  Laurent b = random_laurent(rng, k, prec, -3, 3);
  return Mat2(a, b, Laurent::zero(k, prec), d);
}

// Random element of GL2(O).
inline Mat2 random_glo(std::mt19937_64& rng, const GF& k, int prec) {
  for (;;) {
    Mat2 g(random_laurent(rng, k, prec, 0, 2), random_laurent(rng, k, prec, 0, 2),
           random_laurent(rng, k, prec, 0, 2), random_laurent(rng, k, prec, 0, 2));
    if (g.in_glo()) return g;
  }
}

}  // namespace nilhecke::testutil
