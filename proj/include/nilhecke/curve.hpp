#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "nilhecke/laurent.hpp"
#include "nilhecke/poly.hpp"

namespace nilhecke {

// Rational function (a + b*y)/c on the curve; b = 0 identically on P^1.
struct Fn {
  Poly a, b, c;
  bool is_zero() const { return a.is_zero() && b.is_zero(); }
};

// place id -> multiplicity
using Divisor = std::map<int, int>;

struct PlaceInfo {
  int id = 0;
  int deg = 1;
  const GF* residue = nullptr;
  std::vector<fq_t> emb;  // embedding F_q -> residue field
  bool at_infinity = false;
  Poly minpoly;    // finite places: minimal polynomial of the x-coordinate
  fq_t x0 = 0, y0 = 0;  // elliptic affine places: chosen orbit representative
};

// Divisor class label on the reduced curve: degree plus (for genus 1) the
// index of a rational point representing the Pic^0 part.
struct PicBar {
  int deg = 0;
  int pt = 0;  // index into rational_points(); 0 is the anchor
  bool operator==(const PicBar& o) const { return deg == o.deg && pt == o.pt; }
  bool operator<(const PicBar& o) const { return std::tie(deg, pt) < std::tie(o.deg, o.pt); }
};

class Curve {
 public:
  virtual ~Curve() = default;

  const GF& base() const { return *k_; }
  int q() const { return k_->q; }
  int genus() const { return genus_; }

  // -- places ------------------------------------------------------------
  // Places are created on demand up to a degree bound and then keep stable
  // ids; id 0 is the anchor (infinity on P^1, the origin on E).
  void ensure_places(int max_deg);
  int place_count() const { return static_cast<int>(places_.size()); }
  const PlaceInfo& place(int id) const { return places_.at(id); }
  std::vector<int> places_up_to(int max_deg);
  int divisor_degree(const Divisor& d) const;

  // -- rational function arithmetic ---------------------------------------
  Fn fn_zero() const;
  Fn fn_one() const;
  Fn fn_x() const;
  Fn fn_scalar(fq_t v) const;
  Fn fn_from_poly(const Poly& p) const;
  Fn add(const Fn& f, const Fn& g) const;
  Fn sub(const Fn& f, const Fn& g) const;
  Fn neg(const Fn& f) const;
  virtual Fn mul(const Fn& f, const Fn& g) const = 0;
  virtual Fn inverse(const Fn& f) const = 0;
  Fn div(const Fn& f, const Fn& g) const { return mul(f, inverse(g)); }
  Fn mul_scalar(const Fn& f, fq_t s) const;

  // -- local analysis ------------------------------------------------------
  // Expansion of f in the canonical uniformizer at the place, coefficients
  // in the residue field, eps-free, known modulo t^prec.
  Laurent expand(const Fn& f, int pid, int prec) const;
  // The canonical uniformizer as a global function.
  virtual Fn uniformizer(int pid) const = 0;
  // Residue of f * omega0 at the place (omega0 = dx on P^1, dx/(2y) on E),
  // as an element of the residue field.
  Fq residue(const Fn& f, int pid) const;
  // Trace of the residue down to F_q (the global pairing uses these).
  Fq residue_trace(const Fn& f, int pid) const;
  // Residue of (f * xloc) * omega0 at the place, traced down to F_q; xloc is
  // a local Laurent tail over the residue field.
  Fq residue_pair(const Fn& f, const Laurent& xloc, int pid) const;
  int valuation(const Fn& f, int pid) const;

  // -- Riemann-Roch --------------------------------------------------------
  const std::vector<Fn>& rr_basis_cached(const Divisor& d) const;
  virtual std::vector<Fn> rr_basis(const Divisor& d) const = 0;
  int h0(const Divisor& d) const { return static_cast<int>(rr_basis_cached(d).size()); }

  // -- divisor classes ------------------------------------------------------
  virtual PicBar divisor_class(const Divisor& d) const = 0;
  virtual Divisor canonical_divisor(const PicBar& c) const = 0;
  virtual PicBar pic_add(const PicBar& a, const PicBar& b) const = 0;
  virtual PicBar pic_neg(const PicBar& a) const = 0;
  virtual int pic0_size() const = 0;
  virtual std::vector<PicBar> pic0_elements() const = 0;
  // w with div(w) = D - canonical_divisor(class(D)); degree-0 class witness
  Fn reduction_function(const Divisor& d) const;
  // class of the canonical bundle omega (trivialized by omega0: O(-2) on P^1,
  // O on E)
  virtual PicBar canonical_class() const = 0;

  virtual std::string describe() const = 0;

 protected:
  Curve(const GF& k, int genus) : k_(&k), genus_(genus) {}
  virtual void build_places(int max_deg) = 0;
  // power-series expansions of x and (for E) y at the place, in the
  // canonical uniformizer
  virtual Laurent expand_x(int pid, int prec) const = 0;
  virtual Laurent expand_y(int pid, int prec) const = 0;
  virtual Laurent omega0_factor(int pid, int prec) const = 0;  // omega0 / dt

  const GF* k_;
  int genus_;
  std::vector<PlaceInfo> places_;
  int built_deg_ = 0;

 private:
  mutable std::map<std::pair<int, int>, std::pair<Laurent, Laurent>> xy_cache_;
  mutable std::map<std::vector<int>, std::vector<Fn>> rr_cache_;
  void cached_xy(int pid, int prec, Laurent& x, Laurent& y) const;
};

std::unique_ptr<Curve> make_p1(int q);
// y^2 = x^3 + a x + b over F_q, q odd
std::unique_ptr<Curve> make_elliptic(int q, fq_t a, fq_t b);

// Elliptic-curve point utilities exposed for the spectral module.
struct EPoint {
  fq_t x = 0, y = 0;
  bool inf = true;
  bool operator==(const EPoint& o) const {
    return inf == o.inf && (inf || (x == o.x && y == o.y));
  }
  bool operator<(const EPoint& o) const {
    int ai = inf ? 0 : 1, bi = o.inf ? 0 : 1;
    return std::tie(ai, x, y) < std::tie(bi, o.x, o.y);
  }
};

class EllipticCurve : public Curve {
 public:
  EllipticCurve(int q, fq_t a, fq_t b);
  // group law over an arbitrary extension of the base field
  EPoint padd(const GF& kk, fq_t a_emb, const EPoint& p, const EPoint& r) const;
  EPoint pneg(const GF& kk, const EPoint& p) const;
  EPoint pmul(const GF& kk, fq_t a_emb, const EPoint& p, long long n) const;
  const std::vector<EPoint>& rational_points() const { return pts_; }
  int point_index(const EPoint& p) const;
  long long count_points(int ext_deg) const;  // |E(F_{q^e})|
  fq_t coeff_a() const { return a_; }
  fq_t coeff_b() const { return b_; }

  Fn mul(const Fn& f, const Fn& g) const override;
  Fn inverse(const Fn& f) const override;
  Fn uniformizer(int pid) const override;
  std::vector<Fn> rr_basis(const Divisor& d) const override;
  PicBar divisor_class(const Divisor& d) const override;
  Divisor canonical_divisor(const PicBar& c) const override;
  PicBar pic_add(const PicBar& a, const PicBar& b) const override;
  PicBar pic_neg(const PicBar& a) const override;
  int pic0_size() const override { return static_cast<int>(pts_.size()); }
  std::vector<PicBar> pic0_elements() const override;
  PicBar canonical_class() const override { return PicBar{0, 0}; }
  std::string describe() const override;

  // point-sum of the Frobenius orbit of a place, as a rational point
  EPoint place_point_sum(int pid) const;

 protected:
  void build_places(int max_deg) override;
  Laurent expand_x(int pid, int prec) const override;
  Laurent expand_y(int pid, int prec) const override;
  Laurent omega0_factor(int pid, int prec) const override;

 private:
  Poly fpoly() const;  // x^3 + a x + b
  fq_t a_, b_;
  std::vector<EPoint> pts_;  // rational points, pts_[0] = O
};

}  // namespace nilhecke
