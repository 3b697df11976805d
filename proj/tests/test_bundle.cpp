#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "nilhecke/bundle.hpp"

using namespace nilhecke;

namespace {

AdelicMatrix rep_diag(Curve& c, int pid, int n1, int n2, int prec) {
  const GF& rf = *c.place(pid).residue;
  AdelicMatrix g;
  g.local.emplace(pid, Mat2::diag(Laurent::t_pow(rf, n1, prec), Laurent::t_pow(rf, n2, prec)));
  return g;
}

}  // namespace

TEST_CASE("C-level cohomology of standard bundles") {
  auto p1 = make_p1(2);
  p1->ensure_places(1);
  // trivial rank-2 bundle on P1 x Spec D: h0 = 4 = 2 * h0(O_C)
  auto triv = c_bundle_cohomology(*p1, AdelicMatrix::identity());
  CHECK(triv.h0 == 4);
  CHECK(triv.h1 == 0);

  // O(-1) + O(-1): no sections for any eps-class
  AdelicMatrix gm = rep_diag(*p1, 0, 1, 1, 24);
  auto neg = c_bundle_cohomology(*p1, gm);
  CHECK(neg.h0 == 0);
  // add a generic eps-deformation and recheck
  const GF& rf = *p1->place(0).residue;
  Mat2 m = gm.local.at(0);
  m.at(1, 0) = Laurent::monomial(Dual::eps(rf), 0, 24);
  AdelicMatrix gm2;
  gm2.local.emplace(0, m);
  auto neg2 = c_bundle_cohomology(*p1, gm2);
  CHECK(neg2.h0 == 0);

  // O(d) + O(d) with trivial eps-class: 2 * 2 * (d+1)
  for (int d : {0, 1, 2}) {
    auto coh = c_bundle_cohomology(*p1, rep_diag(*p1, 0, -d, -d, 24));
    CHECK(coh.h0 == 4 * (d + 1));
  }
}

TEST_CASE("euler characteristic on window classes") {
  for (int q : {2, 3}) {
    auto p1 = make_p1(q);
    Window w(*p1, PicC{PicBar{0, 0}, {}}, 4);
    for (const auto& b : w.classes()) {
      auto coh = c_bundle_cohomology(*p1, w.class_rep(b));
      CHECK(coh.h0 - coh.h1 == 2 * (0 + 2 * (1 - 0)));
    }
  }
  auto ec = make_elliptic(3, 1, 0);
  Window w(*ec, PicC{PicBar{1, 1}, {0}}, 3);
  int checked = 0;
  for (const auto& b : w.classes()) {
    auto coh = c_bundle_cohomology(*ec, w.class_rep(b));
    CHECK(coh.h0 - coh.h1 == 2 * 1);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("canonicalize on stated examples") {
  auto p1 = make_p1(2);
  Window w(*p1, PicC{PicBar{0, 0}, {}}, 4);
  // identity: trivial reduction (0,0 split), zero eps-class
  auto b = w.canonicalize(AdelicMatrix::identity());
  REQUIRE(b.has_value());
  const Reduction& r = w.reductions()[b->red];
  CHECK(r.sub.deg == 0);
  CHECK(r.quot.deg == 0);
  for (auto v : b->fib) CHECK(v == 0);

  // reduction O(-1)+O(1) with a nonzero eps-class generating H1(O(-2))
  AdelicMatrix g = rep_diag(*p1, 0, 1, -1, 24);
  const GF& rf = *p1->place(0).residue;
  Mat2 m = g.local.at(0);
  // eps * t^{-1} in the (1,2) slot: a nontrivial class of H1(Hom(quot,sub))
  m.at(0, 1) = Laurent::monomial(Dual::eps(rf), 0, 24);
  AdelicMatrix g2;
  g2.local.emplace(0, m);
  auto b2 = w.canonicalize(g2);
  REQUIRE(b2.has_value());
  CHECK(w.reductions()[b2->red].gap == 2);
  bool nonzero = false;
  for (auto v : b2->fib)
    if (v) nonzero = true;
  CHECK(nonzero);

  // idempotence: canonicalize(class_rep(b)) == b
  for (const auto& cls : w.classes()) {
    auto back = w.canonicalize(w.class_rep(cls));
    REQUIRE(back.has_value());
    CHECK(*back == cls);
  }
}

TEST_CASE("canonicalize is constant on double cosets") {
  std::mt19937_64 rng(314);
  auto p1 = make_p1(2);
  const GF& k = p1->base();
  Window w(*p1, PicC{PicBar{0, 0}, {}}, 4);
  p1->ensure_places(1);
  int npl = p1->place_count();
  for (int iter = 0; iter < 40; ++iter) {
    // start from a window class representative
    const auto& cls = w.classes()[rng() % w.classes().size()];
    AdelicMatrix g = w.class_rep(cls);
    // gamma in G(F): product of elementary matrices with small rational entries
    std::array<Fn, 4> gamma = {p1->fn_one(), p1->fn_zero(), p1->fn_zero(), p1->fn_one()};
    for (int s = 0; s < 2; ++s) {
      Poly num(k, {static_cast<fq_t>(rng() % k.q), static_cast<fq_t>(rng() % k.q)});
      Poly den = Poly::x(k);
      Fn f{num, Poly(k), den};
      std::array<Fn, 4> e = {p1->fn_one(), p1->fn_zero(), p1->fn_zero(), p1->fn_one()};
      if (rng() % 2)
        e[1] = f;
      else
        e[2] = f;
      std::array<Fn, 4> ng;
      ng[0] = p1->add(p1->mul(gamma[0], e[0]), p1->mul(gamma[1], e[2]));
      ng[1] = p1->add(p1->mul(gamma[0], e[1]), p1->mul(gamma[1], e[3]));
      ng[2] = p1->add(p1->mul(gamma[2], e[0]), p1->mul(gamma[3], e[2]));
      ng[3] = p1->add(p1->mul(gamma[2], e[1]), p1->mul(gamma[3], e[3]));
      gamma = ng;
    }
    AdelicMatrix gg;
    std::set<int> sup;
    for (auto& [pid, mm] : g.local) sup.insert(pid);
    for (int pid = 0; pid < npl; ++pid) sup.insert(pid);
    bool bad = false;
    for (int pid : sup) {
      const GF& rr = *p1->place(pid).residue;
      Mat2 gl = Mat2::zero(rr, 24);
      try {
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            if (!gamma[2 * i + j].is_zero()) gl.at(i, j) = p1->expand(gamma[2 * i + j], pid, 24);
      } catch (const Error&) {
        bad = true;
        break;
      }
      Mat2 base = g.at(pid) ? *g.at(pid) : Mat2::identity(rr, 24);
      gg.local.emplace(pid, gl * base);
    }
    if (bad) continue;
    // random k in G(O) at a random place
    int pid = static_cast<int>(rng() % npl);
    const GF& rr = *p1->place(pid).residue;
    Mat2 kk = Mat2::identity(rr, 24);
    kk.at(0, 1) = Laurent::monomial(Dual(Fq(rr, 1), Fq(rr, static_cast<fq_t>(rng() % k.q))),
                                    static_cast<int>(rng() % 3), 24);
    Mat2 cur = gg.at(pid) ? *gg.at(pid) : Mat2::identity(rr, 24);
    gg.local[pid] = cur * kk;

    auto c1 = w.canonicalize(g);
    auto c2 = w.canonicalize(gg);
    REQUIRE(c1.has_value());
    REQUIRE(c2.has_value());
    CHECK(*c1 == *c2);
  }
}

TEST_CASE("automorphism orders") {
  auto p1 = make_p1(2);
  int q = 2;
  Window w(*p1, PicC{PicBar{0, 0}, {}}, 6);
  // trivial bundle on P1 x D: |GL2(D)| = (q^2-1)(q^2-q) q^4
  auto b = w.canonicalize(AdelicMatrix::identity());
  REQUIRE(b.has_value());
  CHECK(w.aut_order(*b) == (long long)(q * q - 1) * (q * q - q) * q * q * q * q);
  // O(a) + O(b), a<b: |Aut(V-bar)| = (q-1)^2 q^{h0(O(b-a))}
  for (const auto& r : w.reductions()) {
    if (r.type != RedType::Split) continue;
    long long expect = (q - 1) * (q - 1);
    for (int i = 0; i < r.gap + 1; ++i) expect *= q;
    CHECK(r.aut_bar == expect);
  }
}

TEST_CASE("window enumeration on P1") {
  auto p1 = make_p1(2);
  {
    Window w(*p1, PicC{PicBar{0, 0}, {}}, 2);
    // reductions O+O and O(-1)+O(1)
    REQUIRE(w.reductions().size() == 2);
    CHECK(w.reductions()[0].h == 0);
    CHECK(w.reductions()[1].h == 1);
    // classes: trivial fiber + (zero class, one projective class)
    CHECK(w.class_count() == 3);
  }
  {
    Window w(*p1, PicC{PicBar{1, 0}, {}}, 1);
    REQUIRE(w.reductions().size() == 1);
    CHECK(w.reductions()[0].h == 0);
    CHECK(w.class_count() == 1);
  }
}

TEST_CASE("window enumeration on the elliptic backend") {
  auto ec = make_elliptic(3, 1, 0);
  Window w(*ec, PicC{PicBar{0, 0}, {0}}, 4);
  // mass identity is checked internally by classes(); exercise it
  int n = w.class_count();
  CHECK(n > 0);
  // pi-fiber count: sum over eps-orbits of |Aut(Vbar)|/|stab| = |H1(End0)|
  for (size_t ri = 0; ri < w.reductions().size(); ++ri) {
    const auto& r = w.reductions()[ri];
    long long total = 0;
    for (const auto& b : w.classes()) {
      if (b.red != static_cast<int>(ri)) continue;
      total += r.aut_bar / w.stab_order(b);
    }
    long long expect = 1;
    for (int i = 0; i < r.h; ++i) expect *= 3;
    CHECK(total == expect);
  }
}

TEST_CASE("picard group of C") {
  // P1: Pic(C) = Z (no eps part at genus 0)
  auto p1 = make_p1(3);
  CHECK(picc_zero(*p1).eps.size() == 0);
  // elliptic: |Pic0(C)| = |E(F_q)| * q
  auto ec = make_elliptic(3, 1, 0);
  CHECK(picc_zero(*ec).eps.size() == 1);
  long long count = 0;
  auto& e = dynamic_cast<EllipticCurve&>(*ec);
  for (auto p0 : e.pic0_elements())
    for (int c = 0; c < 3; ++c) ++count;
  CHECK(count == 4 * 3);
  // group law sanity
  PicC a{PicBar{0, 1}, {2}};
  PicC b{PicBar{0, 2}, {2}};
  PicC s = picc_add(*ec, a, b);
  CHECK(s.eps[0] == 1);
  PicC z = picc_add(*ec, a, picc_neg(*ec, a));
  CHECK(z == picc_zero(*ec));
}
