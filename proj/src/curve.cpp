#include "nilhecke/curve.hpp"

#include <algorithm>

#include "nilhecke/fqmat.hpp"

namespace nilhecke {

// ---------- series helpers shared by the backends ----------

namespace curveser {

Laurent eval_poly(const Poly& p, const std::vector<fq_t>& emb, const Laurent& s, int prec) {
  const GF& k = s.field();
  Laurent acc = Laurent::zero(k, prec);
  for (int i = p.deg(); i >= 0; --i) {
    acc = acc * s;
    Fq c(k, emb[p.coeff(i)]);
    acc.set_coeff(0, acc.coeff(0) + Dual(c));
  }
  return acc.truncated(prec);
}

Laurent derivative(const Laurent& x) {
  const GF& k = x.field();
  Laurent r = Laurent::zero(k, x.prec() - 1);
  for (int e = x.lo(); e < x.prec(); ++e) {
    Dual c = x.coeff(e);
    if (c.is_zero() || e == 0) continue;
    int m = ((e % k.p) + k.p) % k.p;
    Fq f(k, 0);
    for (int i = 0; i < m; ++i) f = f + Fq(k, 1);
    r.set_coeff(e - 1, Dual(c.a0 * f));
  }
  return r;
}

// compositional inverse of t(s) = c1 s + c2 s^2 + ... with c1 a unit
Laurent series_inverse_comp(const Laurent& t_of_s, int prec) {
  const GF& k = t_of_s.field();
  if (t_of_s.lo() != 1) throw Error("compositional inverse needs valuation exactly 1");
  Fq c1 = t_of_s.coeff(1).a0;
  Fq c1i = c1.inv();
  // s(t), iterate s <- s - c1^{-1} (t(s) - t)
  Laurent s = Laurent::monomial(Dual(c1i), 1, prec);
  for (int it = 0; it < prec + 2; ++it) {
    // evaluate t_of_s at s
    Laurent acc = Laurent::zero(k, prec);
    for (int e = t_of_s.prec() - 1; e >= 1; --e) {
      acc = (acc * s).truncated(prec);
      acc.set_coeff(0, acc.coeff(0) + t_of_s.coeff(e));
    }
    acc = (acc * s).truncated(prec);
    Laurent err = acc - Laurent::t_pow(k, 1, prec);
    if (err.known_zero()) break;
    s = s - err.mul_scalar(Dual(c1i));
  }
  return s;
}

// composition f(s(t)) for a power series f (lo >= 0) and s with v(s) >= 1
Laurent compose(const Laurent& f, const Laurent& s, int prec) {
  const GF& k = f.field();
  if (f.lo() < 0) throw Error("compose expects a power series");
  Laurent acc = Laurent::zero(k, prec);
  for (int e = std::min(f.prec(), prec + 1) - 1; e >= 0; --e) {
    acc = (acc * s).truncated(prec);
    acc.set_coeff(0, acc.coeff(0) + f.coeff(e));
  }
  return acc;
}

}  // namespace curveser

void Curve::ensure_places(int max_deg) {
  if (max_deg <= built_deg_) return;
  build_places(max_deg);
  built_deg_ = max_deg;
}

std::vector<int> Curve::places_up_to(int max_deg) {
  ensure_places(max_deg);
  std::vector<int> out;
  for (const auto& p : places_)
    if (p.deg <= max_deg) out.push_back(p.id);
  return out;
}

int Curve::divisor_degree(const Divisor& d) const {
  int s = 0;
  for (const auto& [pid, m] : d) s += m * places_.at(pid).deg;
  return s;
}

Fn Curve::fn_zero() const { return Fn{Poly(*k_), Poly(*k_), Poly::constant(*k_, 1)}; }
Fn Curve::fn_one() const { return Fn{Poly::constant(*k_, 1), Poly(*k_), Poly::constant(*k_, 1)}; }
Fn Curve::fn_x() const { return Fn{Poly::x(*k_), Poly(*k_), Poly::constant(*k_, 1)}; }
Fn Curve::fn_scalar(fq_t v) const {
  return Fn{Poly::constant(*k_, v), Poly(*k_), Poly::constant(*k_, 1)};
}
Fn Curve::fn_from_poly(const Poly& p) const { return Fn{p, Poly(*k_), Poly::constant(*k_, 1)}; }

namespace {

Fn normalize_fn(const GF& k, Poly a, Poly b, Poly c) {
  if (c.is_zero()) throw Error("zero denominator");
  Poly g = a.gcd(b.is_zero() ? c : b.gcd(c));
  if (a.is_zero() && b.is_zero()) return Fn{Poly(k), Poly(k), Poly::constant(k, 1)};
  if (!g.is_zero() && g.deg() > 0) {
    a = a.divmod(g).first;
    b = b.divmod(g).first;
    c = c.divmod(g).first;
  }
  fq_t lead = c.lead();
  if (lead != 1) {
    fq_t li = k.inv(lead);
    a = a.mul_scalar(li);
    b = b.mul_scalar(li);
    c = c.mul_scalar(li);
  }
  return Fn{a, b, c};
}

}  // namespace

Fn Curve::add(const Fn& f, const Fn& g) const {
  return normalize_fn(*k_, f.a * g.c + g.a * f.c, f.b * g.c + g.b * f.c, f.c * g.c);
}

Fn Curve::sub(const Fn& f, const Fn& g) const { return add(f, neg(g)); }

Fn Curve::neg(const Fn& f) const { return Fn{-f.a, -f.b, f.c}; }

Fn Curve::mul_scalar(const Fn& f, fq_t s) const { return Fn{f.a.mul_scalar(s), f.b.mul_scalar(s), f.c}; }

void Curve::cached_xy(int pid, int prec, Laurent& x, Laurent& y) const {
  auto key = std::make_pair(pid, prec);
  auto it = xy_cache_.find(key);
  if (it == xy_cache_.end()) {
    Laurent xx = expand_x(pid, prec);
    Laurent yy = expand_y(pid, prec);
    it = xy_cache_.emplace(key, std::make_pair(xx, yy)).first;
  }
  x = it->second.first;
  y = it->second.second;
}

Laurent Curve::expand(const Fn& f, int pid, int prec) const {
  const PlaceInfo& pl = places_.at(pid);
  if (f.is_zero()) return Laurent::zero(*pl.residue, prec);
  // generous internal precision: numerator/denominator valuations can shift
  int slack = 3 * (std::max({f.a.deg(), f.b.deg(), f.c.deg(), 1}) + 2);
  for (int attempt = 0; attempt < 7; ++attempt, slack *= 2) {
    int wp = prec + slack;
    Laurent x, y;
    cached_xy(pid, wp, x, y);
    Laurent num = curveser::eval_poly(f.a, pl.emb, x, wp);
    if (!f.b.is_zero()) num = num + curveser::eval_poly(f.b, pl.emb, x, wp) * y;
    Laurent den = curveser::eval_poly(f.c, pl.emb, x, wp);
    if (den.known_zero()) continue;
    int vden = den.valuation().v;
    if (num.known_zero()) {
      if (wp - 2 * std::abs(vden) >= prec) return Laurent::zero(*pl.residue, prec);
      continue;
    }
    Laurent r = num * den.inverse();
    if (r.prec() >= prec) return r.truncated(prec);
  }
  throw PrecisionExhausted("expansion did not stabilize at the requested precision");
}

Fq Curve::residue(const Fn& f, int pid) const {
  const PlaceInfo& pl = places_.at(pid);
  if (f.is_zero()) return Fq(*pl.residue, 0);
  int wp = 6;
  for (;;) {
    Laurent fe = expand(f, pid, wp);
    Laurent om = omega0_factor(pid, wp);
    Laurent prod = fe * om;
    if (prod.prec() >= 0) return prod.coeff(-1).a0;
    wp += 8;
    if (wp > 200) throw PrecisionExhausted("residue: cannot stabilize expansion");
  }
}

Fq Curve::residue_pair(const Fn& f, const Laurent& xloc, int pid) const {
  const PlaceInfo& pl = places_.at(pid);
  const GF& base = *k_;
  Fq r(*pl.residue, 0);
  if (!f.is_zero() && !xloc.known_zero()) {
    int wp = 6 - xloc.lo();
    for (;;) {
      Laurent fe = expand(f, pid, wp);
      Laurent om = omega0_factor(pid, wp);
      Laurent prod = fe * om * xloc;
      if (prod.prec() >= 0) {
        r = prod.coeff(-1).a0;
        break;
      }
      wp += 8;
      if (wp > 220) throw PrecisionExhausted("residue_pair");
    }
  }
  const GF& rf = *pl.residue;
  int steps = rf.m / base.m;
  fq_t acc = 0, cur = r.v;
  for (int i = 0; i < steps; ++i) {
    acc = rf.add(acc, cur);
    for (int j = 0; j < base.m; ++j) cur = rf.frob(cur);
  }
  SubfieldCoords sc(base, rf);
  fq_t out[8];
  sc.coords(acc, out);
  return Fq(base, out[0]);
}

Fq Curve::residue_trace(const Fn& f, int pid) const {
  Fq r = residue(f, pid);
  const GF& rf = *r.f;
  // trace from F_{q^d} down to F_q: sum of Frobenius^ (m of base) iterates
  const GF& base = *k_;
  int steps = rf.m / base.m;
  fq_t acc = 0, cur = r.v;
  for (int i = 0; i < steps; ++i) {
    acc = rf.add(acc, cur);
    for (int j = 0; j < base.m; ++j) cur = rf.frob(cur);
  }
  // acc lies in the embedded base field; find its preimage
  SubfieldCoords sc(base, rf);
  fq_t out[8];
  sc.coords(acc, out);
  return Fq(base, out[0]);
}

int Curve::valuation(const Fn& f, int pid) const {
  if (f.is_zero()) throw Error("valuation of the zero function");
  int wp = 8;
  for (;;) {
    Laurent fe = expand(f, pid, wp);
    if (!fe.known_zero()) return fe.valuation().v;
    wp *= 2;
    if (wp > 512) throw PrecisionExhausted("valuation: function vanishes deeply");
  }
}

const std::vector<Fn>& Curve::rr_basis_cached(const Divisor& d) const {
  std::vector<int> key;
  for (const auto& [pid, m] : d)
    if (m != 0) {
      key.push_back(pid);
      key.push_back(m);
    }
  auto it = rr_cache_.find(key);
  if (it == rr_cache_.end()) it = rr_cache_.emplace(key, rr_basis(d)).first;
  return it->second;
}

Fn Curve::reduction_function(const Divisor& d) const {
  PicBar c = divisor_class(d);
  Divisor dc = canonical_divisor(c);
  // w with div(w) = D - Dc spans L(Dc - D)
  Divisor diff;
  for (const auto& [pid, m] : dc) diff[pid] += m;
  for (const auto& [pid, m] : d) diff[pid] -= m;
  auto basis = rr_basis(diff);
  if (basis.size() != 1) throw Error("reduction witness space has wrong dimension");
  return basis[0];
}

// ---------- subfield coordinates ----------

SubfieldCoords::SubfieldCoords(const GF& small, const GF& big) : small_(&small), big_(&big) {
  d_ = big.m / small.m;
  emb_ = small.embedding_into(big);
  basis_.resize(d_);
  fq_t g = big.generator();
  fq_t cur = 1;
  for (int j = 0; j < d_; ++j) {
    basis_[j] = cur;
    cur = big.mul(cur, g);
  }
  // solve for each element once: big-field element e = sum_j c_j basis_j, c_j in small
  // set up the F_p-linear system implicitly by brute force over small-field tuples
  // (fields are tiny; build via Gaussian elimination over small field instead)
  // Represent big field as vector space over small via coordinates in the
  // F_p-basis; solve with FqMat over small is not direct since the embedding
  // mixes encodings, so use a lookup built by enumeration of all tuples when
  // cheap, else by elimination over F_p.
  coord_table_.assign(static_cast<size_t>(big.q) * d_, 0);
  std::vector<bool> seen(big.q, false);
  // enumerate all small-field tuples: small.q^d = big.q combinations
  std::vector<fq_t> tup(d_, 0);
  long long total = 1;
  for (int j = 0; j < d_; ++j) total *= small.q;
  for (long long code = 0; code < total; ++code) {
    long long t = code;
    fq_t val = 0;
    for (int j = 0; j < d_; ++j) {
      fq_t cj = static_cast<fq_t>(t % small.q);
      t /= small.q;
      tup[j] = cj;
      val = big.add(val, big.mul(emb_[cj], basis_[j]));
    }
    if (!seen[val]) {
      seen[val] = true;
      for (int j = 0; j < d_; ++j) coord_table_[static_cast<size_t>(val) * d_ + j] = tup[j];
    }
  }
  for (int v = 0; v < big.q; ++v)
    if (!seen[v]) throw Error("subfield basis does not span");
}

void SubfieldCoords::coords(fq_t big_el, fq_t* out) const {
  for (int j = 0; j < d_; ++j) out[j] = coord_table_[static_cast<size_t>(big_el) * d_ + j];
}

fq_t SubfieldCoords::lift(const fq_t* small_els) const {
  fq_t val = 0;
  for (int j = 0; j < d_; ++j)
    val = big_->add(val, big_->mul(emb_[small_els[j]], basis_[j]));
  return val;
}

}  // namespace nilhecke
