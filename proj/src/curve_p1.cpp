#include <algorithm>

#include "nilhecke/curve.hpp"

namespace nilhecke {

namespace curveser {
Laurent eval_poly(const Poly& p, const std::vector<fq_t>& emb, const Laurent& s, int prec);
Laurent derivative(const Laurent& x);
}  // namespace curveser

// The projective line: places are the point at infinity (id 0, uniformizer
// 1/x) and monic irreducible polynomials (uniformizer the polynomial
// itself).
class P1Curve final : public Curve {
 public:
  explicit P1Curve(int q) : Curve(GF::get(q), 0) {
    PlaceInfo inf;
    inf.id = 0;
    inf.deg = 1;
    inf.residue = k_;
    inf.at_infinity = true;
    inf.emb.resize(k_->q);
    for (int i = 0; i < k_->q; ++i) inf.emb[i] = static_cast<fq_t>(i);
    places_.push_back(inf);
    built_deg_ = 0;
  }

  Fn mul(const Fn& f, const Fn& g) const override {
    Poly a = f.a * g.a;
    Poly c = f.c * g.c;
    Poly gg = a.gcd(c);
    if (!gg.is_zero() && gg.deg() > 0) {
      a = a.divmod(gg).first;
      c = c.divmod(gg).first;
    }
    fq_t lead = c.lead();
    if (lead != 1) {
      fq_t li = k_->inv(lead);
      a = a.mul_scalar(li);
      c = c.mul_scalar(li);
    }
    return Fn{a, Poly(*k_), c};
  }

  Fn inverse(const Fn& f) const override {
    if (f.is_zero()) throw NotAUnit("inverse of the zero function");
    Poly a = f.c, c = f.a;
    fq_t lead = c.lead();
    if (lead != 1) {
      fq_t li = k_->inv(lead);
      a = a.mul_scalar(li);
      c = c.mul_scalar(li);
    }
    return Fn{a, Poly(*k_), c};
  }

  Fn uniformizer(int pid) const override {
    const PlaceInfo& pl = places_.at(pid);
    if (pl.at_infinity) {
      // 1/x
      Fn f = fn_one();
      f.c = Poly::x(*k_);
      return f;
    }
    return fn_from_poly(pl.minpoly);
  }

  std::vector<Fn> rr_basis(const Divisor& d) const override {
    // L(D) = { num_factor * h / denom : deg bounded }
    Poly denom = Poly::constant(*k_, 1), numf = Poly::constant(*k_, 1);
    int n_inf = 0;
    for (const auto& [pid, m] : d) {
      if (m == 0) continue;
      const PlaceInfo& pl = places_.at(pid);
      if (pl.at_infinity) {
        n_inf = m;
        continue;
      }
      Poly pw = Poly::constant(*k_, 1);
      for (int i = 0; i < std::abs(m); ++i) pw = pw * pl.minpoly;
      if (m > 0)
        denom = denom * pw;
      else
        numf = numf * pw;
    }
    int hmax = denom.deg() + n_inf - numf.deg();
    std::vector<Fn> out;
    for (int i = 0; i <= hmax; ++i) {
      Poly xi = Poly::constant(*k_, 1);
      for (int j = 0; j < i; ++j) xi = xi * Poly::x(*k_);
      Fn f{numf * xi, Poly(*k_), denom};
      out.push_back(f);
    }
    return out;
  }

  PicBar divisor_class(const Divisor& d) const override { return PicBar{divisor_degree(d), 0}; }

  Divisor canonical_divisor(const PicBar& c) const override {
    Divisor d;
    if (c.deg != 0) d[0] = c.deg;
    return d;
  }

  PicBar pic_add(const PicBar& a, const PicBar& b) const override {
    return PicBar{a.deg + b.deg, 0};
  }
  PicBar pic_neg(const PicBar& a) const override { return PicBar{-a.deg, 0}; }
  int pic0_size() const override { return 1; }
  std::vector<PicBar> pic0_elements() const override { return {PicBar{0, 0}}; }
  PicBar canonical_class() const override { return PicBar{-2, 0}; }

  std::string describe() const override { return "p1 over F_" + std::to_string(k_->q); }

 protected:
  void build_places(int max_deg) override {
    for (int dd = built_deg_ + 1; dd <= max_deg; ++dd) {
      if (dd < 1) continue;
      for (const Poly& p : Poly::monic_irreducibles(*k_, dd)) {
        PlaceInfo pl;
        pl.id = static_cast<int>(places_.size());
        pl.deg = dd;
        pl.residue = &k_->extension(dd);
        pl.emb = k_->embedding_into(*pl.residue);
        pl.minpoly = p;
        places_.push_back(pl);
      }
    }
  }

  Laurent expand_x(int pid, int prec) const override {
    const PlaceInfo& pl = places_.at(pid);
    const GF& rf = *pl.residue;
    if (pl.at_infinity) return Laurent::t_pow(rf, -1, prec);
    // x(t) with pi(x(t)) = t, x(0) = least root of pi in the residue field
    fq_t alpha = 0;
    bool ok = false;
    for (int r = 0; r < rf.q && !ok; ++r)
      if (pl.minpoly.eval_in(rf, pl.emb, static_cast<fq_t>(r)) == 0) {
        alpha = static_cast<fq_t>(r);
        ok = true;
      }
    if (!ok) throw Error("place has no root in its residue field");
    Laurent x = Laurent::constant(Dual(Fq(rf, alpha)), prec);
    Laurent t = Laurent::t_pow(rf, 1, prec);
    for (int it = 0; it < prec + 2; ++it) {
      Laurent val = curveser::eval_poly(pl.minpoly, pl.emb, x, prec) - t;
      if (val.known_zero()) break;
      Laurent dv = curveser::eval_poly(pl.minpoly.derivative(), pl.emb, x, prec);
      x = x - val * dv.inverse();
    }
    return x;
  }

  Laurent expand_y(int, int prec) const override { return Laurent::zero(*k_, prec); }

  Laurent omega0_factor(int pid, int prec) const override {
    // omega0 = dx; factor = dx/dt
    Laurent x = expand_x(pid, prec + 3);
    return curveser::derivative(x).truncated(prec);
  }
};

std::unique_ptr<Curve> make_p1(int q) { return std::make_unique<P1Curve>(q); }

}  // namespace nilhecke
