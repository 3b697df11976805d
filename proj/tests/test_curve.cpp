#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilhecke/lattice.hpp"

using namespace nilhecke;

TEST_CASE("riemann-roch bases on stated examples") {
  auto p1 = make_p1(2);
  // P1, O(3): dim 4, basis 1, x, x^2, x^3
  Divisor d3{{0, 3}};
  auto b = p1->rr_basis(d3);
  CHECK(b.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(b[i].c.deg() == 0);
    CHECK(b[i].a.deg() == i);
  }

  auto ec = make_elliptic(3, 1, 0);
  // 2*O: dim 2, basis {1, x}
  Divisor d2O{{0, 2}};
  auto be = ec->rr_basis(d2O);
  CHECK(be.size() == 2);
  // divisor 0: dim 1, basis {1}
  auto b0 = ec->rr_basis(Divisor{});
  CHECK(b0.size() == 1);
  CHECK(b0[0].a.deg() == 0);
  CHECK(b0[0].b.is_zero());
}

TEST_CASE("place enumeration and point counts") {
  auto ec = make_elliptic(3, 1, 0);
  auto& e = dynamic_cast<EllipticCurve&>(*ec);
  CHECK(e.rational_points().size() == 4);  // y^2 = x^3 + x over F_3
  CHECK(e.count_points(2) == 16);
  ec->ensure_places(2);
  int deg2 = 0;
  for (int i = 0; i < ec->place_count(); ++i)
    if (ec->place(i).deg == 2) ++deg2;
  CHECK(deg2 == (16 - 4) / 2);

  auto p1 = make_p1(2);
  p1->ensure_places(3);
  int c1 = 0, c2 = 0, c3 = 0;
  for (int i = 0; i < p1->place_count(); ++i) {
    if (p1->place(i).deg == 1) ++c1;
    if (p1->place(i).deg == 2) ++c2;
    if (p1->place(i).deg == 3) ++c3;
  }
  CHECK(c1 == 3);  // 0, 1, infinity
  CHECK(c2 == 1);  // x^2+x+1
  CHECK(c3 == 2);
}

TEST_CASE("riemann-roch dimension formula via the lattice solver") {
  for (int q : {2, 3}) {
    auto p1 = make_p1(q);
    p1->ensure_places(2);
    for (int n = -3; n <= 4; ++n) {
      Divisor d{{0, n}};
      LatticeSystem sys(*p1, 1, {}, 0);
      LatticeSystem tw = line_bundle_system(*p1, d);
      CHECK(tw.h0() - tw.h1() == n + 1);
      CHECK(tw.h0() == std::max(0, n + 1));
    }
  }
  auto ec = make_elliptic(3, 1, 0);
  ec->ensure_places(2);
  // mixed divisors across several places
  std::vector<Divisor> ds = {
      {{0, 2}}, {{0, -1}}, {{1, 1}}, {{0, 1}, {1, 1}}, {{2, 2}, {0, -1}}, {{1, -2}, {0, 3}}};
  for (const auto& d : ds) {
    LatticeSystem tw = line_bundle_system(*ec, d);
    int deg = ec->divisor_degree(d);
    CHECK(tw.h0() - tw.h1() == deg);  // genus 1
    if (deg > 0) CHECK(tw.h0() == deg);
  }
  // degree 0: h0 = 1 iff the class is trivial
  Divisor dP{{1, 1}, {0, -1}};  // P - O
  LatticeSystem tw0 = line_bundle_system(*ec, dP);
  CHECK(tw0.h0() == 0);
  CHECK(tw0.h1() == 0);
  LatticeSystem twO = line_bundle_system(*ec, Divisor{});
  CHECK(twO.h0() == 1);
  CHECK(twO.h1() == 1);
}

TEST_CASE("adelic class reduction") {
  // P1, twist O(-2): principal part t^-1 at a rational point is nonzero in
  // the 1-dimensional H^1
  auto p1 = make_p1(2);
  p1->ensure_places(1);
  int pt = 1;  // first finite rational place
  Divisor dm2{{0, -2}};
  LatticeSystem tw = line_bundle_system(*p1, dm2, 2, {1, 2});
  CHECK(tw.h1() == 1);
  LatticeSystem::AdeleVec v;
  const GF& rf = *p1->place(pt).residue;
  v[pt] = {Laurent::monomial(Dual(Fq(rf, 1)), -1, 24)};
  auto coords = tw.h1_coords(v);
  bool nonzero = false;
  for (auto c : coords)
    if (c) nonzero = true;
  CHECK(nonzero);
  CHECK_FALSE(tw.global_witness(v).has_value());

  // any principal adele maps to zero, with an explicit witness
  Fn f = p1->div(p1->fn_one(), p1->mul(p1->fn_x(), p1->fn_x()));  // 1/x^2, poles only at x=0
  LatticeSystem::AdeleVec pr;
  for (int pid : {0, 1, 2}) {
    Laurent e = p1->expand(f, pid, 24);
    pr[pid] = {e};
  }
  // strip to window: classes only care mod lattice; h1_coords embeds directly
  auto c2 = tw.h1_coords(pr);
  for (auto c : c2) CHECK(c == 0);
  CHECK(tw.global_witness(pr).has_value());

  // elliptic, twist O: t_O^{-1} at the origin is nonzero in H^1(O) = F_q
  auto ec = make_elliptic(3, 1, 0);
  ec->ensure_places(1);
  LatticeSystem two = line_bundle_system(*ec, Divisor{}, 2, {0});
  CHECK(two.h1() == 1);
  LatticeSystem::AdeleVec w;
  w[0] = {Laurent::monomial(Dual(Fq(ec->base(), 1)), -1, 24)};
  auto cw = two.h1_coords(w);
  bool nz = false;
  for (auto c : cw)
    if (c) nz = true;
  CHECK(nz);

  // reduce(adele + principal) == reduce(adele)
  LatticeSystem::AdeleVec w2 = w;
  Fn xfun = ec->fn_x();  // pole of order 2 at O only
  w2[0] = {w[0][0] + ec->expand(xfun, 0, 24)};
  CHECK(tw.h1_coords(v) == tw.h1_coords(v));
  CHECK(two.h1_coords(w2) == two.h1_coords(w));
}

TEST_CASE("serre pairing") {
  auto ec = make_elliptic(3, 1, 0);
  ec->ensure_places(1);
  // x integral at O: pairing of an integral adele with any section is 0
  Fn one = ec->fn_one();
  Laurent integral = Laurent::t_pow(ec->base(), 0, 20);
  CHECK(ec->residue_pair(one, integral, 0).is_zero());
  // principal adele pairs to zero: sum of residues of a rational form is 0
  Fn f = ec->fn_x();
  Fq total(ec->base(), 0);
  for (int pid = 0; pid < ec->place_count(); ++pid)
    total = total + ec->residue_trace(f, pid);
  CHECK(total.is_zero());
  // x = [t_O^{-1}], phi = 1 (omega = O trivialized by dx/2y): residue nonzero
  Laurent pole = Laurent::monomial(Dual(Fq(ec->base(), 1)), -1, 20);
  CHECK_FALSE(ec->residue_pair(one, pole, 0).is_zero());
}

TEST_CASE("serre pairing is perfect on window twists") {
  auto ec = make_elliptic(3, 1, 0);
  ec->ensure_places(1);
  for (int n : {-1, -2, -3}) {
    Divisor d{{0, n}};
    LatticeSystem tw = line_bundle_system(*ec, d, 2);
    // omega = O on E: dual space is H^0(O(-n*O))
    Divisor dd{{0, -n}};
    auto dual_basis = ec->rr_basis(dd);
    CHECK(static_cast<int>(dual_basis.size()) == tw.h1());
    // pairing matrix between h1 reps and dual sections must be invertible
    FqMat pm(ec->base(), tw.h1(), tw.h1());
    for (int i = 0; i < tw.h1(); ++i) {
      auto rep = tw.h1_rep(i);
      for (int j = 0; j < tw.h1(); ++j) {
        Fq acc(ec->base(), 0);
        for (const auto& [pid, vec] : rep) acc = acc + ec->residue_pair(dual_basis[j], vec[0], pid);
        pm.at(i, j) = acc.v;
      }
    }
    CHECK(pm.rank() == tw.h1());
  }
  // and on P1 against omega = O(-2)
  auto p1 = make_p1(3);
  p1->ensure_places(1);
  for (int n : {-2, -3, -4}) {
    Divisor d{{0, n}};
    LatticeSystem tw = line_bundle_system(*p1, d, 2);
    Divisor dd{{0, -n - 2}};
    auto dual_basis = p1->rr_basis(dd);
    CHECK(static_cast<int>(dual_basis.size()) == tw.h1());
    FqMat pm(p1->base(), tw.h1(), tw.h1());
    for (int i = 0; i < tw.h1(); ++i) {
      auto rep = tw.h1_rep(i);
      for (int j = 0; j < tw.h1(); ++j) {
        Fq acc(p1->base(), 0);
        for (const auto& [pid, vec] : rep) acc = acc + p1->residue_pair(dual_basis[j], vec[0], pid);
        pm.at(i, j) = acc.v;
      }
    }
    CHECK(pm.rank() == tw.h1());
  }
}

TEST_CASE("picard enumeration and group law") {
  auto p1 = make_p1(5);
  CHECK(p1->pic0_size() == 1);
  CHECK(p1->pic_add(PicBar{2, 0}, PicBar{3, 0}).deg == 5);

  auto ec = make_elliptic(3, 1, 0);
  auto& e = dynamic_cast<EllipticCurve&>(*ec);
  CHECK(e.pic0_size() == 4);
  // group law witnesses: associativity and inverses on all pairs
  for (auto a : e.pic0_elements())
    for (auto b : e.pic0_elements()) {
      PicBar s = e.pic_add(a, b);
      CHECK(s.deg == 0);
      CHECK(e.pic_add(s, e.pic_neg(b)) == a);
      for (auto c : e.pic0_elements())
        CHECK(e.pic_add(e.pic_add(a, b), c) == e.pic_add(a, e.pic_add(b, c)));
    }
  // degree map is a homomorphism onto Z
  CHECK(e.pic_add(PicBar{1, 1}, PicBar{2, 2}).deg == 3);
  // divisor_class respects the canonical representative
  ec->ensure_places(2);
  for (int pid = 0; pid < ec->place_count(); ++pid) {
    Divisor d{{pid, 1}};
    PicBar c = ec->divisor_class(d);
    Fn w = ec->reduction_function(d);
    // w has divisor D - canonical(D): check by valuations
    Divisor dc = ec->canonical_divisor(c);
    for (int r = 0; r < ec->place_count(); ++r) {
      int expect = 0;
      auto it = d.find(r);
      if (it != d.end()) expect += it->second;
      it = dc.find(r);
      if (it != dc.end()) expect -= it->second;
      if (expect != 0) CHECK(ec->valuation(w, r) == expect);
    }
  }
}
