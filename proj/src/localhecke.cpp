#include "nilhecke/localhecke.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace nilhecke {

namespace {

void append_series(CosetKey& key, const Laurent& x, int hi) {
  // serialize coefficients of x for exponents in [lo, hi)
  std::vector<int32_t> cells;
  for (int e = x.lo(); e < hi; ++e) {
    Dual d = x.coeff(e);
    if (d.is_zero()) continue;
    cells.push_back(e);
    cells.push_back(d.a0.v);
    cells.push_back(d.a1.v);
  }
  key.push_back(static_cast<int32_t>(cells.size() / 3));
  key.insert(key.end(), cells.begin(), cells.end());
}

int val_or_prec(const Laurent& x) {
  if (x.known_zero()) return x.prec();
  return x.valuation().v;
}

}  // namespace

CosetKey left_coset_key(const Mat2& x) {
  const GF& k = x.field();
  int prec = x.prec();
  if (prec < 1) throw PrecisionExhausted("coset key needs positive precision");

  Mat2 red = x.reduction();
  {
    auto dv = x.det().valuation();
    if (dv.eps_torsion) throw NotInvertible("coset of a non-invertible matrix");
  }

  // Hermite form of the reduced lattice: columns ops over O-bar to reach
  // (t^alpha rho; 0 t^delta), rho reduced mod t^alpha.
  Mat2 kbar = Mat2::identity(k, prec);
  auto colswap = [&](Mat2& m) {
    Mat2 w = Mat2::zero(k, prec);
    w.at(0, 1) = Laurent::t_pow(k, 0, prec);
    w.at(1, 0) = Laurent::t_pow(k, 0, prec);
    m = m * w;
    kbar = kbar * w;
  };
  auto colscale = [&](Mat2& m, int col, const Laurent& u) {
    Mat2 s = Mat2::identity(k, prec);
    s.at(col, col) = u;
    m = m * s;
    kbar = kbar * s;
  };
  auto coladd = [&](Mat2& m, int src, int dst, const Laurent& f) {
    // col_dst += f * col_src
    Mat2 s = Mat2::identity(k, prec);
    s.at(src, dst) = f;
    m = m * s;
    kbar = kbar * s;
  };

  int v21 = val_or_prec(red.at(1, 0)), v22 = val_or_prec(red.at(1, 1));
  if (v21 < v22) colswap(red);
  int delta = val_or_prec(red.at(1, 1));
  colscale(red, 1, (red.at(1, 1).shift(-delta)).inverse());
  if (!red.at(1, 0).known_zero()) {
    Laurent ratio = red.at(1, 0).shift(-delta);
    coladd(red, 1, 0, -ratio);
  }
  int alpha = val_or_prec(red.at(0, 0));
  colscale(red, 0, (red.at(0, 0).shift(-alpha)).inverse());
  // reduce rho mod t^alpha
  {
    const Laurent& rho0 = red.at(0, 1);
    Laurent q = Laurent::zero(k, prec);
    for (int e = std::max(alpha, rho0.lo()); e < rho0.prec(); ++e)
      q.set_coeff(e - alpha, rho0.coeff(e));
    if (!q.known_zero()) coladd(red, 0, 1, -q);
  }

  Mat2 y = x * kbar;
  Mat2 H = y.reduction();
  // sanity: H must be (t^alpha, rho; 0, t^delta)
  Laurent rho = H.at(0, 1);
  if (rho.prec() < alpha)
    throw PrecisionExhausted("coset key: rho not known through t^alpha");

  // eps-class data: P = H^{-1} * eps_part(y), principal parts.
  Mat2 Hinv(Laurent::t_pow(k, -alpha, prec - std::max(0, alpha + std::max(0, delta))),
            Laurent::zero(k, prec), Laurent::zero(k, prec), Laurent::t_pow(k, 0, prec));
  // build H^{-1} exactly: (t^-alpha, -rho t^{-alpha-delta}; 0, t^-delta)
  Hinv = Mat2::zero(k, prec);
  Hinv.at(0, 0) = Laurent::t_pow(k, -alpha, prec);
  Hinv.at(0, 1) = (-rho).shift(-alpha - delta);
  Hinv.at(1, 1) = Laurent::t_pow(k, -delta, prec);
  Mat2 P = Hinv * y.eps_part();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (P.at(i, j).prec() < 0)
        throw PrecisionExhausted("coset key: eps-class principal part not determined");

  CosetKey key;
  key.push_back(alpha);
  key.push_back(delta);
  append_series(key, rho, alpha);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) append_series(key, P.at(i, j), 0);
  return key;
}

namespace {

Laurent read_series(const CosetKey& key, size_t& pos, const GF& k, int prec) {
  int n = key[pos++];
  Laurent x = Laurent::zero(k, prec);
  for (int i = 0; i < n; ++i) {
    int e = key[pos], a0 = key[pos + 1], a1 = key[pos + 2];
    pos += 3;
    x.set_coeff(e, Dual(Fq(k, a0), Fq(k, a1)));
  }
  return x;
}

}  // namespace

Mat2 canonical_rep(const CosetKey& key, const GF& k, int prec) {
  size_t pos = 0;
  int alpha = key[pos++], delta = key[pos++];
  Laurent rho = read_series(key, pos, k, prec);
  Mat2 P = Mat2::zero(k, prec);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) P.at(i, j) = read_series(key, pos, k, prec);
  Mat2 H = Mat2::zero(k, prec);
  H.at(0, 0) = Laurent::t_pow(k, alpha, prec);
  H.at(0, 1) = rho;
  H.at(1, 1) = Laurent::t_pow(k, delta, prec);
  // representative H * (1 + eps*P): only the reduction of P matters under eps
  Mat2 epsP = Mat2::zero(k, prec);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) epsP.at(i, j) = P.at(i, j).mul_scalar(Dual::eps(k));
  return H + H * epsP;
}

std::vector<Mat2> glo_generators(const GF& k, int prec) {
  std::vector<Mat2> gens;
  // F_p-spanning set of the coefficient field: powers of the generator.
  std::vector<fq_t> span;
  {
    fq_t g = k.generator();
    fq_t cur = 1;
    int r = 1;
    // dimension of F_{q} over F_p
    int dim = k.m;
    for (int i = 0; i < dim; ++i) {
      span.push_back(cur);
      cur = k.mul(cur, g);
      (void)r;
    }
  }
  Mat2 w = Mat2::zero(k, prec);
  w.at(0, 1) = Laurent::t_pow(k, 0, prec);
  w.at(1, 0) = Laurent::t_pow(k, 0, prec);
  gens.push_back(w);
  // torus constants
  {
    Laurent g = Laurent::constant(Dual(Fq(k, k.generator())), prec);
    gens.push_back(Mat2::diag(g, Laurent::t_pow(k, 0, prec)));
    gens.push_back(Mat2::diag(Laurent::t_pow(k, 0, prec), g));
  }
  for (int j = 0; j < prec; ++j) {
    for (fq_t b : span) {
      Laurent xb = Laurent::monomial(Dual(Fq(k, b)), j, prec);
      Laurent xe = Laurent::monomial(Dual(Fq(k, 0), Fq(k, b)), j, prec);
      gens.push_back(Mat2::unipotent_upper(xb));
      gens.push_back(Mat2::unipotent_lower(xb));
      gens.push_back(Mat2::unipotent_upper(xe));
      gens.push_back(Mat2::unipotent_lower(xe));
      // torus units 1 + b t^j, 1 + eps b t^j
      if (j > 0) {
        Laurent u = Laurent::t_pow(k, 0, prec) + xb;
        gens.push_back(Mat2::diag(u, Laurent::t_pow(k, 0, prec)));
        gens.push_back(Mat2::diag(Laurent::t_pow(k, 0, prec), u));
      }
      Laurent ue = Laurent::t_pow(k, 0, prec) + xe;
      gens.push_back(Mat2::diag(ue, Laurent::t_pow(k, 0, prec)));
      gens.push_back(Mat2::diag(Laurent::t_pow(k, 0, prec), ue));
    }
  }
  return gens;
}

DoubleCoset DoubleCoset::of(const Mat2& rep) {
  DoubleCoset dc;
  const GF& k = rep.field();
  // Canonical representatives are exact Laurent polynomials, so once the
  // input's key is known (guarded at the input precision) the orbit search
  // can run with head-room above it.
  int prec = rep.prec() + 8;
  auto gens = glo_generators(k, prec);
  Mat2 rep0 = canonical_rep(left_coset_key(rep), k, prec);
  dc.rep_ = rep0;

  std::unordered_map<CosetKey, Mat2, CosetKeyHash> seen;
  std::deque<Mat2> frontier;
  CosetKey k0 = left_coset_key(rep0);
  seen.emplace(k0, rep0);
  frontier.push_back(rep0);
  while (!frontier.empty()) {
    Mat2 cur = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      Mat2 nxt = g * cur;
      CosetKey key = left_coset_key(nxt);
      if (seen.count(key)) continue;
      Mat2 canon = canonical_rep(key, k, prec);
      seen.emplace(key, canon);
      frontier.push_back(canon);
      if (seen.size() > 200000) throw WindowTooLarge("double coset has too many left cosets");
    }
  }
  std::vector<std::pair<CosetKey, Mat2>> items(seen.begin(), seen.end());
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& it : items) {
    dc.keys_.push_back(it.first);
    dc.reps_.push_back(it.second);
  }
  return dc;
}

bool DoubleCoset::contains(const Mat2& g) const {
  CosetKey key = left_coset_key(g);
  return std::binary_search(keys_.begin(), keys_.end(), key);
}

std::vector<Mat2> left_coset_reps(const DoubleCoset& s) { return s.left_reps(); }

HeckeElement HeckeElement::characteristic(const Mat2& rep) {
  HeckeElement h;
  DoubleCoset dc = DoubleCoset::of(rep);
  h.terms.emplace(dc.canonical(), std::make_pair(Rational(1), rep));
  return h;
}

Rational HeckeElement::total_weight() const {
  Rational s = 0;
  for (const auto& kv : terms) s += kv.second.first;
  return s;
}

bool HeckeElement::operator==(const HeckeElement& o) const {
  if (terms.size() != o.terms.size()) return false;
  auto it = terms.begin();
  auto jt = o.terms.begin();
  for (; it != terms.end(); ++it, ++jt) {
    if (it->first != jt->first) return false;
    if (it->second.first != jt->second.first) return false;
  }
  return true;
}

HeckeElement h_of_divisor(const Laurent& f) {
  const GF& k = f.field();
  int prec = f.prec();
  Mat2 rep = Mat2::diag(f.inverse(), Laurent::t_pow(k, 0, prec));
  return HeckeElement::characteristic(rep);
}

HeckeElement convolve(const HeckeElement& a, const HeckeElement& b) {
  HeckeElement out;
  for (const auto& sa : a.terms) {
    DoubleCoset S = DoubleCoset::of(sa.second.second);
    auto xs = S.left_reps();
    for (const auto& sb : b.terms) {
      DoubleCoset T = DoubleCoset::of(sb.second.second);
      auto ys = T.left_reps();
      Rational scale = sa.second.first * sb.second.first /
                       (Rational(xs.size()) * Rational(ys.size()));
      // multiset of product left cosets
      std::unordered_map<CosetKey, std::pair<long long, Mat2>, CosetKeyHash> prod;
      const GF& k = sa.second.second.field();
      int prec = sa.second.second.prec() + 8;
      for (const auto& x : xs)
        for (const auto& y : ys) {
          Mat2 m = x * y;
          CosetKey key = left_coset_key(m);
          auto it = prod.find(key);
          if (it == prod.end())
            prod.emplace(key, std::make_pair(1ll, canonical_rep(key, k, prec)));
          else
            it->second.first += 1;
        }
      // partition into double cosets
      while (!prod.empty()) {
        Mat2 rep = prod.begin()->second.second;
        DoubleCoset dc = DoubleCoset::of(rep);
        long long count = 0;
        for (const auto& key : dc.left_keys()) {
          auto it = prod.find(key);
          if (it == prod.end())
            throw Error("product coset set is not a union of double cosets");
          count += it->second.first;
          prod.erase(it);
        }
        Rational w = scale * Rational(count);
        auto it = out.terms.find(dc.canonical());
        if (it == out.terms.end())
          out.terms.emplace(dc.canonical(), std::make_pair(w, rep));
        else
          it->second.first += w;
      }
    }
  }
  // drop zero terms
  for (auto it = out.terms.begin(); it != out.terms.end();) {
    if (it->second.first == 0)
      it = out.terms.erase(it);
    else
      ++it;
  }
  return out;
}

std::map<CosetKey, long long> product_left_cosets(const DoubleCoset& s, const DoubleCoset& t) {
  std::map<CosetKey, long long> prod;
  for (const auto& x : s.left_reps())
    for (const auto& y : t.left_reps()) prod[left_coset_key(x * y)] += 1;
  return prod;
}

bool verify_theta_invariance(const DoubleCoset& s) {
  DoubleCoset st = DoubleCoset::of(theta(s.representative()));
  return st.canonical() == s.canonical();
}

NonCommutationCertificate noncommutation_witness(const SimpleDivisorLocal& c, int prec) {
  const GF& k = c.f.field();
  if (prec < 6) throw PrecisionExhausted("witness requires truncation N >= 6");
  Laurent f = c.f;
  Laurent one = Laurent::t_pow(k, 0, prec);
  Laurent epsl = Laurent::constant(Dual::eps(k), prec);

  NonCommutationCertificate cert;
  // witness (f 0; eps f^2) = diag(f,1) * (1 0; eps 1) * diag(1, f^2)
  cert.factor1 = Mat2::diag(f, one);
  cert.factor2 = Mat2::identity(k, prec);
  cert.factor2.at(1, 0) = epsl;
  cert.factor3 = Mat2::diag(one, f * f);
  cert.witness = cert.factor1 * cert.factor2 * cert.factor3;

  DoubleCoset A = DoubleCoset::of(Mat2::diag(f, one));            // class of g_c^{-1}
  DoubleCoset B = DoubleCoset::of(Mat2::diag(f * f, one));        // class of g_c^{-2}
  CosetKey wkey = left_coset_key(cert.witness);

  auto in_product = [&](const DoubleCoset& first, const DoubleCoset& second) {
    auto prod = product_left_cosets(first, second);
    return prod.count(wkey) > 0;
  };
  cert.in_first_product = in_product(A, B);
  cert.in_second_product = in_product(B, A);
  return cert;
}

}  // namespace nilhecke
