#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nilhecke/localhecke.hpp"
#include "test_util.hpp"

using namespace nilhecke;
using namespace nilhecke::testutil;

namespace {

Mat2 gc_inv_rep(const GF& k, const std::string& f_text, int prec) {
  Laurent f = Laurent::parse(k, f_text, prec);
  return Mat2::diag(f.inverse(), Laurent::t_pow(k, 0, prec));
}

HeckeElement h_c(const GF& k, const std::string& f_text, int prec) {
  return h_of_divisor(Laurent::parse(k, f_text, prec));
}

}  // namespace

TEST_CASE("left coset keys separate and glue correctly") {
  std::mt19937_64 rng(42);
  const GF& k = GF::get(2);
  int N = 14;
  for (int iter = 0; iter < 100; ++iter) {
    Mat2 g = random_invertible(rng, k, N);
    Mat2 kk = random_glo(rng, k, N);
    CHECK(left_coset_key(g) == left_coset_key(g * kk));
    // membership ground truth: same key iff x^-1 y integral both ways
    Mat2 h = random_invertible(rng, k, N);
    bool same_key = left_coset_key(g) == left_coset_key(h);
    Mat2 q = g.inverse() * h;
    bool same_coset = q.in_glo();
    CHECK(same_key == same_coset);
  }
}

TEST_CASE("coset counts |P^1(A(c))|") {
  // G(O) itself: one coset
  {
    const GF& k = GF::get(2);
    DoubleCoset triv = DoubleCoset::of(Mat2::identity(k, 10));
    CHECK(triv.left_keys().size() == 1);
  }
  // deg-1 simple divisor: q(q+1) cosets
  {
    const GF& k = GF::get(2);
    DoubleCoset dc = DoubleCoset::of(gc_inv_rep(k, "t", 12).inverse());
    CHECK(dc.left_keys().size() == 6);
    // pairwise disjointness via the membership ground truth
    auto reps = left_coset_reps(dc);
    for (size_t i = 0; i < reps.size(); ++i)
      for (size_t j = i + 1; j < reps.size(); ++j)
        CHECK_FALSE((reps[i].inverse() * reps[j]).in_glo());
    for (const auto& r : reps) CHECK(dc.contains(r));
  }
  {
    const GF& k = GF::get(3);
    DoubleCoset dc = DoubleCoset::of(gc_inv_rep(k, "t", 12).inverse());
    CHECK(dc.left_keys().size() == 12);
  }
  // central element: single coset
  {
    const GF& k = GF::get(2);
    Laurent ti = Laurent::t_pow(k, -1, 12);
    DoubleCoset dc = DoubleCoset::of(Mat2::diag(ti, ti));
    CHECK(dc.left_keys().size() == 1);
  }
}

TEST_CASE("convolution unit and basic products") {
  const GF& k = GF::get(2);
  int N = 12;
  HeckeElement unit = HeckeElement::characteristic(Mat2::identity(k, N));
  HeckeElement hc = h_c(k, "t", N);
  CHECK(convolve(unit, hc) == hc);
  CHECK(convolve(hc, unit) == hc);

  // h_c * h_c contains the class of diag(t^-2, 1)
  HeckeElement sq = convolve(hc, hc);
  CHECK(sq.total_weight() == Rational(1));
  DoubleCoset target = DoubleCoset::of(
      Mat2::diag(Laurent::t_pow(k, -2, N), Laurent::t_pow(k, 0, N)));
  CHECK(sq.terms.count(target.canonical()) == 1);
}

TEST_CASE("local commutation for simple divisors, stable under N -> N+1") {
  for (int q : {2, 3}) {
    const GF& k = GF::get(q);
    std::vector<std::string> fs = {"t", "t + eps", "t + eps*t", "t + eps + eps*t"};
    for (int N : {10, 11}) {
      for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = i; j < fs.size(); ++j) {
          HeckeElement a = h_c(k, fs[i], N), b = h_c(k, fs[j], N);
          HeckeElement ab = convolve(a, b), ba = convolve(b, a);
          CHECK(ab == ba);
          CHECK(ab.total_weight() == Rational(1));
        }
    }
  }
}

TEST_CASE("support confinement in the triangular double-class union") {
  const GF& k = GF::get(2);
  int N = 12;
  Laurent fc = Laurent::parse(k, "t", N);
  Laurent fd = Laurent::parse(k, "t + eps", N);
  // candidate classes: diag(1, fc fd) and (fc 0; x fd), x in eps*O-bar
  std::vector<DoubleCoset> cands;
  cands.push_back(DoubleCoset::of(Mat2::diag(Laurent::t_pow(k, 0, N), fc * fd)));
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int a2 = 0; a2 < 2; ++a2) {
        Laurent x = Laurent::zero(k, N);
        x.set_coeff(0, Dual(Fq(k, 0), Fq(k, a0)));
        x.set_coeff(1, Dual(Fq(k, 0), Fq(k, a1)));
        x.set_coeff(2, Dual(Fq(k, 0), Fq(k, a2)));
        Mat2 m = Mat2::diag(fc, fd);
        m.at(1, 0) = x;
        cands.push_back(DoubleCoset::of(m));
        Mat2 m2 = Mat2::diag(fd, fc);
        m2.at(1, 0) = x;
        cands.push_back(DoubleCoset::of(m2));
      }
  // the product support must lie inside the candidate classes, inverted:
  // h_c * h_d is supported on classes of diag(fc^-1,..)-style products, which
  // match the transposed-inverse of the lemma's classes; check both orders.
  HeckeElement prod = convolve(h_of_divisor(fc), h_of_divisor(fd));
  for (const auto& term : prod.terms) {
    // invert the representative to land in the lemma's normalization
    DoubleCoset inv = DoubleCoset::of(term.second.second.inverse());
    bool found = false;
    for (const auto& c : cands)
      if (inv.canonical() == c.canonical()) {
        found = true;
        break;
      }
    CHECK(found);
  }
  // every coset in the support is theta-invariant (Gelfand hypothesis)
  for (const auto& term : prod.terms)
    CHECK(verify_theta_invariance(DoubleCoset::of(term.second.second)));
}

TEST_CASE("theta invariance checks") {
  const GF& k = GF::get(2);
  int N = 12;
  CHECK(verify_theta_invariance(
      DoubleCoset::of(Mat2::diag(Laurent::t_pow(k, -1, N), Laurent::t_pow(k, 0, N)))));
  // (fc 0; eps fd) is theta-invariant per the symmetric-by-B witness
  Laurent fc = Laurent::parse(k, "t", N);
  Laurent fd = Laurent::parse(k, "t + eps", N);
  Mat2 m = Mat2::diag(fc, fd);
  m.at(1, 0) = Laurent::constant(Dual::eps(k), N);
  CHECK(verify_theta_invariance(DoubleCoset::of(m)));
  // (t, eps t^-1; 0, t^2): decided by the complete decision procedure
  Mat2 m2 = Mat2::diag(Laurent::t_pow(k, 1, N), Laurent::t_pow(k, 2, N));
  m2.at(0, 1) = Laurent::monomial(Dual::eps(k), -1, N);
  bool inv2 = verify_theta_invariance(DoubleCoset::of(m2));
  bool inv2b = verify_theta_invariance(DoubleCoset::of(theta(m2)));
  CHECK(inv2 == inv2b);  // theta-invariance is symmetric under theta
}

TEST_CASE("non-commutation witness") {
  for (int q : {2, 3}) {
    const GF& k = GF::get(q);
    SimpleDivisorLocal c{Laurent::parse(k, "t", 12), 1};
    auto cert = noncommutation_witness(c, 12);
    CHECK(cert.in_first_product);
    CHECK_FALSE(cert.in_second_product);
    CHECK(cert.valid());
    // the factorization really multiplies to the witness
    CHECK((cert.factor1 * cert.factor2 * cert.factor3).equals(cert.witness));
  }
}

TEST_CASE("associativity on random small-support elements") {
  std::mt19937_64 rng(2024);
  const GF& k = GF::get(2);
  // triple products have poles to order 3; the soundness rule needs N >= 13
  int N = 16;
  std::vector<HeckeElement> pool = {
      h_c(k, "t", N), h_c(k, "t + eps", N),
      HeckeElement::characteristic(Mat2::diag(Laurent::t_pow(k, -1, N), Laurent::t_pow(k, 0, N))),
      HeckeElement::characteristic(Mat2::identity(k, N))};
  for (int iter = 0; iter < 4; ++iter) {
    const HeckeElement& a = pool[rng() % pool.size()];
    const HeckeElement& b = pool[rng() % pool.size()];
    const HeckeElement& c = pool[rng() % pool.size()];
    CHECK(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)));
  }
}
