#pragma once

#include "nilhecke/cyc.hpp"
#include "nilhecke/fq.hpp"

namespace nilhecke {

// psi(x) = zeta_p^{Tr_{F_q/F_p}(x)}: a nontrivial additive character of F_q
// valued in the cyclotomic field.  The field may be any Q(zeta_n) with p | n.
inline Cyc psi_eval(const CycField& cf, Fq x) {
  const GF& k = *x.f;
  if (cf.n() % k.p != 0) throw ConfigError("cyclotomic field does not contain zeta_p");
  long long tr = k.trace_to_prime(x.v);
  return Cyc::zeta_pow(cf, tr * (cf.n() / k.p));
}

}  // namespace nilhecke
