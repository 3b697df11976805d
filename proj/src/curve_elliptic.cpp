#include <algorithm>
#include <set>

#include "nilhecke/curve.hpp"
#include "nilhecke/fqmat.hpp"

namespace nilhecke {

namespace curveser {
Laurent eval_poly(const Poly& p, const std::vector<fq_t>& emb, const Laurent& s, int prec);
Laurent derivative(const Laurent& x);
Laurent series_inverse_comp(const Laurent& t_of_s, int prec);
Laurent compose(const Laurent& f, const Laurent& s, int prec);
}  // namespace curveser

EllipticCurve::EllipticCurve(int q, fq_t a, fq_t b) : Curve(GF::get(q), 1), a_(a), b_(b) {
  if (k_->p == 2) throw CharacteristicTwo("elliptic backend requires odd characteristic");
  // nonsingular: x^3+ax+b squarefree
  Poly f = fpoly();
  if (!f.gcd(f.derivative()).is_zero() && f.gcd(f.derivative()).deg() > 0)
    throw ConfigError("singular Weierstrass model");
  pts_.push_back(EPoint{});  // O
  for (int x = 0; x < k_->q; ++x)
    for (int y = 0; y < k_->q; ++y)
      if (k_->mul(y, y) == f.eval(static_cast<fq_t>(x)))
        pts_.push_back(EPoint{static_cast<fq_t>(x), static_cast<fq_t>(y), false});
  ensure_places(1);
}

Poly EllipticCurve::fpoly() const {
  Poly f(*k_);
  f = Poly(*k_, {b_, a_, 0, 1});
  return f;
}

EPoint EllipticCurve::pneg(const GF& kk, const EPoint& p) const {
  if (p.inf) return p;
  return EPoint{p.x, kk.neg(p.y), false};
}

EPoint EllipticCurve::padd(const GF& kk, fq_t a_emb, const EPoint& p, const EPoint& r) const {
  if (p.inf) return r;
  if (r.inf) return p;
  if (p.x == r.x && p.y == kk.neg(r.y)) return EPoint{};
  fq_t lam;
  if (p.x == r.x) {
    // tangent: (3x^2 + a) / (2y)
    fq_t x2 = kk.mul(p.x, p.x);
    fq_t three = 0;
    for (int i = 0; i < 3; ++i) three = kk.add(three, 1);
    fq_t num = kk.add(kk.mul(three, x2), a_emb);
    fq_t two = kk.add(1, 1);
    lam = kk.div(num, kk.mul(two, p.y));
  } else {
    lam = kk.div(kk.sub(r.y, p.y), kk.sub(r.x, p.x));
  }
  fq_t x3 = kk.sub(kk.sub(kk.mul(lam, lam), p.x), r.x);
  fq_t y3 = kk.sub(kk.mul(lam, kk.sub(p.x, x3)), p.y);
  return EPoint{x3, y3, false};
}

EPoint EllipticCurve::pmul(const GF& kk, fq_t a_emb, const EPoint& p, long long n) const {
  EPoint acc{};
  EPoint base = p;
  if (n < 0) {
    base = pneg(kk, base);
    n = -n;
  }
  while (n) {
    if (n & 1) acc = padd(kk, a_emb, acc, base);
    base = padd(kk, a_emb, base, base);
    n >>= 1;
  }
  return acc;
}

int EllipticCurve::point_index(const EPoint& p) const {
  for (size_t i = 0; i < pts_.size(); ++i)
    if (pts_[i] == p) return static_cast<int>(i);
  throw Error("point not rational");
}

long long EllipticCurve::count_points(int e) const {
  const GF& kk = k_->extension(e);
  auto emb = k_->embedding_into(kk);
  long long n = 1;
  Poly f = fpoly();
  for (int x = 0; x < kk.q; ++x) {
    fq_t fx = f.eval_in(kk, emb, static_cast<fq_t>(x));
    for (int y = 0; y < kk.q; ++y)
      if (kk.mul(y, y) == fx) ++n;
  }
  return n;
}

Fn EllipticCurve::mul(const Fn& f, const Fn& g) const {
  Poly fx = fpoly();
  Poly a = f.a * g.a + f.b * g.b * fx;
  Poly b = f.a * g.b + f.b * g.a;
  Poly c = f.c * g.c;
  Poly gg = a.gcd(b.is_zero() ? c : b.gcd(c));
  if (!gg.is_zero() && gg.deg() > 0) {
    a = a.divmod(gg).first;
    b = b.divmod(gg).first;
    c = c.divmod(gg).first;
  }
  fq_t lead = c.lead();
  if (lead != 1) {
    fq_t li = k_->inv(lead);
    a = a.mul_scalar(li);
    b = b.mul_scalar(li);
    c = c.mul_scalar(li);
  }
  return Fn{a, b, c};
}

Fn EllipticCurve::inverse(const Fn& f) const {
  if (f.is_zero()) throw NotAUnit("inverse of the zero function");
  // 1 / ((a+by)/c) = c (a - by) / (a^2 - b^2 f)
  Poly den = f.a * f.a - f.b * f.b * fpoly();
  if (den.is_zero()) throw Error("function algebra degenerate");
  Fn out{f.c * f.a, -(f.c * f.b), den};
  // normalize
  Poly gg = out.a.gcd(out.b.is_zero() ? out.c : out.b.gcd(out.c));
  if (!gg.is_zero() && gg.deg() > 0) {
    out.a = out.a.divmod(gg).first;
    out.b = out.b.divmod(gg).first;
    out.c = out.c.divmod(gg).first;
  }
  fq_t lead = out.c.lead();
  if (lead != 1) {
    fq_t li = k_->inv(lead);
    out.a = out.a.mul_scalar(li);
    out.b = out.b.mul_scalar(li);
    out.c = out.c.mul_scalar(li);
  }
  return out;
}

Fn EllipticCurve::uniformizer(int pid) const {
  const PlaceInfo& pl = places_.at(pid);
  if (pl.at_infinity) {
    // x/y
    Fn f;
    f.a = Poly(*k_);
    f.b = Poly::x(*k_);  // numerator x * ybar? represent x/y = x*y/f(x)
    // x/y = x*y / y^2 = x*y/f(x)
    f.a = Poly(*k_);
    f.b = Poly::x(*k_);
    f.c = fpoly();
    return f;
  }
  if (pl.y0 == 0) {
    Fn f;
    f.a = Poly(*k_);
    f.b = Poly::constant(*k_, 1);
    f.c = Poly::constant(*k_, 1);
    return f;  // y
  }
  return fn_from_poly(pl.minpoly);
}

void EllipticCurve::build_places(int max_deg) {
  Poly f = fpoly();
  for (int dd = std::max(1, built_deg_ + 1); dd <= max_deg; ++dd) {
    const GF& rf = k_->extension(dd);
    auto emb = k_->embedding_into(rf);
    if (dd == 1) {
      PlaceInfo origin;
      origin.id = 0;
      origin.deg = 1;
      origin.residue = k_;
      origin.at_infinity = true;
      origin.emb.resize(k_->q);
      for (int i = 0; i < k_->q; ++i) origin.emb[i] = static_cast<fq_t>(i);
      places_.push_back(origin);
      for (size_t i = 1; i < pts_.size(); ++i) {
        PlaceInfo pl;
        pl.id = static_cast<int>(places_.size());
        pl.deg = 1;
        pl.residue = k_;
        pl.emb = origin.emb;
        pl.x0 = pts_[i].x;
        pl.y0 = pts_[i].y;
        pl.minpoly = Poly(*k_, {k_->neg(pts_[i].x), 1});
        places_.push_back(pl);
      }
      continue;
    }
    // affine points over F_{q^dd} of exact definition degree dd, grouped in
    // Frobenius orbits; scan order makes the representative lexicographically
    // least
    auto frob_q = [&](fq_t v) {
      fq_t r = v;
      for (int j = 0; j < k_->m; ++j) r = rf.frob(r);
      return r;
    };
    std::set<std::pair<fq_t, fq_t>> seen;
    for (int x = 0; x < rf.q; ++x) {
      fq_t fx = f.eval_in(rf, emb, static_cast<fq_t>(x));
      for (int y = 0; y < rf.q; ++y) {
        if (rf.mul(y, y) != fx) continue;
        if (seen.count({static_cast<fq_t>(x), static_cast<fq_t>(y)})) continue;
        // orbit
        std::vector<std::pair<fq_t, fq_t>> orbit;
        fq_t cx = static_cast<fq_t>(x), cy = static_cast<fq_t>(y);
        do {
          orbit.push_back({cx, cy});
          cx = frob_q(cx);
          cy = frob_q(cy);
        } while (!(cx == x && cy == y));
        for (auto& pt : orbit) seen.insert(pt);
        if (static_cast<int>(orbit.size()) != dd) continue;  // lives in a smaller degree
        PlaceInfo pl;
        pl.id = static_cast<int>(places_.size());
        pl.deg = dd;
        pl.residue = &rf;
        pl.emb = emb;
        pl.x0 = static_cast<fq_t>(x);
        pl.y0 = static_cast<fq_t>(y);
        // minimal polynomial of x0 over F_q
        std::set<fq_t> xroots;
        fq_t rx = pl.x0;
        do {
          xroots.insert(rx);
          rx = frob_q(rx);
        } while (rx != pl.x0);
        std::vector<fq_t> mp = {1};  // coefficients in rf, low degree first
        for (fq_t root : xroots) {
          std::vector<fq_t> nxt(mp.size() + 1, 0);
          for (size_t i = 0; i < mp.size(); ++i) {
            nxt[i + 1] = rf.add(nxt[i + 1], mp[i]);
            nxt[i] = rf.add(nxt[i], rf.mul(mp[i], rf.neg(root)));
          }
          mp = nxt;
        }
        SubfieldCoords sc(*k_, rf);
        std::vector<fq_t> small(mp.size());
        for (size_t i = 0; i < mp.size(); ++i) {
          fq_t coords[8];
          sc.coords(mp[i], coords);
          for (int j = 1; j < sc.dim(); ++j)
            if (coords[j]) throw Error("minimal polynomial not rational");
          small[i] = coords[0];
        }
        pl.minpoly = Poly(*k_, small);
        places_.push_back(pl);
      }
    }
  }
}

EPoint EllipticCurve::place_point_sum(int pid) const {
  const PlaceInfo& pl = places_.at(pid);
  if (pl.at_infinity) return EPoint{};
  if (pl.deg == 1) return EPoint{pl.x0, pl.y0, false};
  const GF& rf = *pl.residue;
  fq_t a_emb = pl.emb[a_];
  auto frob_q = [&](fq_t v) {
    fq_t r = v;
    for (int j = 0; j < k_->m; ++j) r = rf.frob(r);
    return r;
  };
  EPoint acc{};
  fq_t cx = pl.x0, cy = pl.y0;
  for (int i = 0; i < pl.deg; ++i) {
    acc = padd(rf, a_emb, acc, EPoint{cx, cy, false});
    cx = frob_q(cx);
    cy = frob_q(cy);
  }
  if (acc.inf) return EPoint{};
  // descend coordinates
  SubfieldCoords sc(*k_, rf);
  fq_t cs[8];
  sc.coords(acc.x, cs);
  for (int j = 1; j < sc.dim(); ++j)
    if (cs[j]) throw Error("orbit sum not rational");
  fq_t xs = cs[0];
  sc.coords(acc.y, cs);
  for (int j = 1; j < sc.dim(); ++j)
    if (cs[j]) throw Error("orbit sum not rational");
  return EPoint{xs, cs[0], false};
}

PicBar EllipticCurve::divisor_class(const Divisor& d) const {
  EPoint acc{};
  fq_t a_emb = a_;
  for (const auto& [pid, m] : d) {
    if (m == 0) continue;
    EPoint s = place_point_sum(pid);
    acc = padd(*k_, a_emb, acc, pmul(*k_, a_emb, s, m));
  }
  return PicBar{divisor_degree(d), point_index(acc)};
}

Divisor EllipticCurve::canonical_divisor(const PicBar& c) const {
  Divisor d;
  if (c.pt == 0) {
    if (c.deg != 0) d[0] = c.deg;
    return d;
  }
  // (deg-1) * O + place(P)
  const EPoint& p = pts_.at(c.pt);
  int pid = -1;
  for (int i = 0; i < place_count(); ++i) {
    const PlaceInfo& pl = places_.at(i);
    if (!pl.at_infinity && pl.deg == 1 && pl.x0 == p.x && pl.y0 == p.y) {
      pid = i;
      break;
    }
  }
  if (pid < 0) throw Error("rational point has no place");
  if (c.deg != 1) d[0] = c.deg - 1;
  d[pid] = 1;
  return d;
}

PicBar EllipticCurve::pic_add(const PicBar& a, const PicBar& b) const {
  EPoint s = padd(*k_, a_, pts_.at(a.pt), pts_.at(b.pt));
  return PicBar{a.deg + b.deg, point_index(s)};
}

PicBar EllipticCurve::pic_neg(const PicBar& a) const {
  return PicBar{-a.deg, point_index(pneg(*k_, pts_.at(a.pt)))};
}

std::vector<PicBar> EllipticCurve::pic0_elements() const {
  std::vector<PicBar> out;
  for (size_t i = 0; i < pts_.size(); ++i) out.push_back(PicBar{0, static_cast<int>(i)});
  return out;
}

std::string EllipticCurve::describe() const {
  return "elliptic y^2=x^3+" + std::to_string(a_) + "x+" + std::to_string(b_) + " over F_" +
         std::to_string(k_->q);
}

// ---------- expansions ----------

Laurent EllipticCurve::expand_x(int pid, int prec) const {
  const PlaceInfo& pl = places_.at(pid);
  const GF& rf = *pl.residue;
  Poly f = fpoly();
  if (pl.at_infinity) {
    // x = t^-2 w, w^3 - w^2 + a t^4 w + b t^6 = 0, w(0) = 1
    Laurent w = Laurent::constant(Dual(Fq(rf, 1)), prec + 8);
    Laurent at4 = Laurent::monomial(Dual(Fq(rf, pl.emb[a_])), 4, prec + 8);
    Laurent bt6 = Laurent::monomial(Dual(Fq(rf, pl.emb[b_])), 6, prec + 8);
    for (int it = 0; it < prec + 10; ++it) {
      Laurent g = w * w * w - w * w + at4 * w + bt6;
      if (g.known_zero()) break;
      Laurent three = Laurent::constant(Dual(Fq(rf, rf.p == 3 ? 0 : 3 % rf.p)), prec + 8);
      Laurent two = Laurent::constant(Dual(Fq(rf, 2 % rf.p)), prec + 8);
      Laurent gp = three * w * w - two * w + at4;
      w = w - g * gp.inverse();
    }
    return w.shift(-2).truncated(prec);
  }
  if (pl.y0 == 0) {
    // t = y, x(t): f(x) = t^2, x(0) = x0, f'(x0) != 0
    Laurent x = Laurent::constant(Dual(Fq(rf, pl.x0)), prec);
    Laurent t2 = Laurent::t_pow(rf, 2, prec);
    for (int it = 0; it < prec + 2; ++it) {
      Laurent g = curveser::eval_poly(f, pl.emb, x, prec) - t2;
      if (g.known_zero()) break;
      Laurent gp = curveser::eval_poly(f.derivative(), pl.emb, x, prec);
      x = x - g * gp.inverse();
    }
    return x;
  }
  // generic affine place: s = x - x0; t = minpoly(x0 + s); x = x0 + s(t)
  int wp = prec + 4;
  // t(s) as polynomial in s over the residue field
  // minpoly(x0 + s) = sum_j c_j s^j
  Laurent s_var = Laurent::t_pow(rf, 1, wp);
  Laurent x_of_s = Laurent::constant(Dual(Fq(rf, pl.x0)), wp) + s_var;
  Laurent t_of_s = curveser::eval_poly(pl.minpoly, pl.emb, x_of_s, wp);
  Laurent s_of_t = curveser::series_inverse_comp(t_of_s, wp);
  return (Laurent::constant(Dual(Fq(rf, pl.x0)), wp) + s_of_t).truncated(prec);
}

Laurent EllipticCurve::expand_y(int pid, int prec) const {
  const PlaceInfo& pl = places_.at(pid);
  const GF& rf = *pl.residue;
  if (pl.at_infinity) {
    // y = x / t
    Laurent x = expand_x(pid, prec + 2);
    return x.shift(-1).truncated(prec);
  }
  if (pl.y0 == 0) return Laurent::t_pow(rf, 1, prec);
  // y(t) = sqrt(f(x(t))), y(0) = y0: Newton y <- (y + F/y) / 2
  Laurent x = expand_x(pid, prec + 2);
  Laurent F = curveser::eval_poly(fpoly(), pl.emb, x, prec + 2);
  Laurent y = Laurent::constant(Dual(Fq(rf, pl.y0)), prec + 2);
  Fq half = Fq(rf, 2 % rf.p).inv();
  for (int it = 0; it < prec + 4; ++it) {
    Laurent g = y * y - F;
    if (g.known_zero()) break;
    y = (y + F * y.inverse()).mul_scalar(Dual(half));
  }
  return y.truncated(prec);
}

Laurent EllipticCurve::omega0_factor(int pid, int prec) const {
  // omega0 = dx/(2y); factor against dt: x'(t) / (2 y(t))
  const PlaceInfo& pl = places_.at(pid);
  const GF& rf = *pl.residue;
  int wp = prec + 8;
  Laurent x = expand_x(pid, wp);
  Laurent y = expand_y(pid, wp);
  Laurent two = Laurent::constant(Dual(Fq(rf, 2 % rf.p)), wp);
  return (curveser::derivative(x) * (two * y).inverse()).truncated(prec);
}

// ---------- Riemann-Roch ----------

std::vector<Fn> EllipticCurve::rr_basis(const Divisor& d) const {
  const_cast<EllipticCurve*>(this)->ensure_places(1);
  Poly f = fpoly();
  // find the conjugate place of an affine place (orbit of (x0,-y0))
  auto conj_place = [&](int pid) -> int {
    const PlaceInfo& pl = places_.at(pid);
    const GF& rf = *pl.residue;
    fq_t ny = rf.neg(pl.y0);
    auto frob_q = [&](fq_t v) {
      fq_t r = v;
      for (int j = 0; j < k_->m; ++j) r = rf.frob(r);
      return r;
    };
    // scan places of the same degree for one whose orbit contains (x0,-y0)
    for (int i = 0; i < place_count(); ++i) {
      const PlaceInfo& cand = places_.at(i);
      if (cand.at_infinity || cand.deg != pl.deg) continue;
      fq_t cx = cand.x0, cy = cand.y0;
      for (int it = 0; it < cand.deg; ++it) {
        if (cx == pl.x0 && cy == ny) return i;
        cx = frob_q(cx);
        cy = frob_q(cy);
      }
    }
    throw Error("conjugate place not found");
  };

  // required = div(g) - D with g = prod minpoly(p)^{n_p} over n_p > 0 affine
  Divisor required;
  for (const auto& [pid, m] : d) required[pid] -= m;
  Poly g = Poly::constant(*k_, 1);
  for (const auto& [pid, m] : d) {
    if (m <= 0 || pid == 0) continue;
    const PlaceInfo& pl = places_.at(pid);
    Poly pw = Poly::constant(*k_, 1);
    for (int i = 0; i < m; ++i) pw = pw * pl.minpoly;
    g = g * pw;
    if (pl.y0 == 0) {
      // div(minpoly) = 2 p - 2 deg O
      required[pid] += 2 * m;
      required[0] -= 2 * m * pl.deg;
    } else {
      int cp = conj_place(pid);
      required[pid] += m;
      required[cp] += m;
      required[0] -= 2 * m * pl.minpoly.deg();
    }
  }
  int M = -required[0];
  if (M < 0) return {};
  // candidates x^i y^j with 2i + 3j <= M, j <= 1
  std::vector<std::pair<int, int>> mons;
  for (int i = 0; 2 * i <= M; ++i) mons.push_back({i, 0});
  for (int i = 0; 2 * i + 3 <= M; ++i) mons.push_back({i, 1});
  // vanishing conditions at places with required > 0
  std::vector<std::vector<fq_t>> rows;
  for (const auto& [pid, m] : required) {
    if (m <= 0 || pid == 0) continue;
    const PlaceInfo& pl = places_.at(pid);
    SubfieldCoords sc(*k_, *pl.residue);
    std::vector<Laurent> monexp;
    Laurent x = expand_x(pid, m + 2);
    Laurent y = expand_y(pid, m + 2);
    for (auto [i, j] : mons) {
      Laurent v = Laurent::constant(Dual(Fq(*pl.residue, 1)), m + 2);
      for (int it = 0; it < i; ++it) v = v * x;
      if (j) v = v * y;
      monexp.push_back(v.truncated(m));
    }
    for (int e = 0; e < m; ++e) {
      for (int cc = 0; cc < sc.dim(); ++cc) {
        std::vector<fq_t> row(mons.size(), 0);
        bool nonzero = false;
        for (size_t mi = 0; mi < mons.size(); ++mi) {
          fq_t cs[8];
          sc.coords(monexp[mi].coeff(e).a0.v, cs);
          row[mi] = cs[cc];
          if (cs[cc]) nonzero = true;
        }
        if (nonzero) rows.push_back(row);
      }
    }
  }
  FqMat mat(*k_, static_cast<int>(rows.size()), static_cast<int>(mons.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < mons.size(); ++j) mat.at(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  FqMat ker = mat.kernel();
  std::vector<Fn> out;
  Fn ginv = inverse(fn_from_poly(g));
  for (int r = 0; r < ker.rows(); ++r) {
    Poly pa(*k_), pb(*k_);
    for (size_t mi = 0; mi < mons.size(); ++mi) {
      fq_t c = ker.at(r, static_cast<int>(mi));
      if (!c) continue;
      auto [i, j] = mons[mi];
      Poly xi = Poly::constant(*k_, c);
      for (int it = 0; it < i; ++it) xi = xi * Poly::x(*k_);
      if (j)
        pb = pb + xi;
      else
        pa = pa + xi;
    }
    out.push_back(mul(Fn{pa, pb, Poly::constant(*k_, 1)}, ginv));
  }
  return out;
}

std::unique_ptr<Curve> make_elliptic(int q, fq_t a, fq_t b) {
  return std::make_unique<EllipticCurve>(q, a, b);
}

}  // namespace nilhecke
