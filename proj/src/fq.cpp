#include "nilhecke/fq.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace nilhecke {

namespace {

// Defining polynomials (monic, coefficients of x^0..x^{m-1}; leading 1
// implicit).  Conway polynomials for the sizes we ship.
const std::map<std::pair<int, int>, std::vector<int>>& defpolys() {
  static const std::map<std::pair<int, int>, std::vector<int>> t = {
      {{2, 2}, {1, 1}},     // x^2+x+1
      {{2, 3}, {1, 1, 0}},  // x^3+x+1
      {{2, 4}, {1, 1, 0, 0}},
      {{3, 2}, {2, 2}},     // x^2+2x+2
      {{3, 3}, {1, 2, 0}},  // x^3+2x+1
      {{5, 2}, {2, 4}},     // x^2+4x+2
  };
  return t;
}

// Polynomial-basis arithmetic used only while building tables.
std::vector<int> polymulmod(const std::vector<int>& a, const std::vector<int>& b, int p,
                            const std::vector<int>& def) {
  int m = static_cast<int>(def.size());
  std::vector<int> c(2 * m, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  for (int d = 2 * m - 1; d >= m; --d) {
    int top = c[d];
    if (top == 0) continue;
    c[d] = 0;
    for (int i = 0; i < m; ++i) c[d - m + i] = ((c[d - m + i] - top * def[i]) % p + p * p) % p;
  }
  c.resize(m);
  return c;
}

int encode(const std::vector<int>& c, int p) {
  int v = 0, pw = 1;
  for (int x : c) {
    v += x * pw;
    pw *= p;
  }
  return v;
}

std::vector<int> decode(int v, int p, int m) {
  std::vector<int> c(m);
  for (int i = 0; i < m; ++i) {
    c[i] = v % p;
    v /= p;
  }
  return c;
}

}  // namespace

namespace {

// Lex-least monic irreducible of degree m over F_p, for extension fields
// beyond the shipped Conway table (these arise only as internal residue
// fields of higher-degree places).
std::vector<int> find_irreducible(int p, int m) {
  auto reducible = [&](const std::vector<int>& low) {
    // full poly with monic head
    std::vector<int> f = low;
    f.push_back(1);
    // root test
    for (int r = 0; r < p; ++r) {
      long long acc = 0;
      for (int i = m; i >= 0; --i) acc = (acc * r + f[i]) % p;
      if (acc == 0) return true;
    }
    if (m <= 3) return false;  // degree <= 3: no roots means irreducible
    // trial division by all monic polynomials of degree 2..m/2
    for (int d = 2; 2 * d <= m; ++d) {
      long long count = 1;
      for (int i = 0; i < d; ++i) count *= p;
      for (long long code = 0; code < count; ++code) {
        std::vector<int> g(d + 1, 0);
        long long t = code;
        for (int i = 0; i < d; ++i) {
          g[i] = static_cast<int>(t % p);
          t /= p;
        }
        g[d] = 1;
        // remainder of f mod g
        std::vector<int> r = f;
        for (int i = m; i >= d; --i) {
          int c = r[i] % p;
          if (!c) continue;
          for (int j = 0; j <= d; ++j)
            r[i - d + j] = ((r[i - d + j] - c * g[j]) % p + p * p) % p;
        }
        bool zero = true;
        for (int i = 0; i < d; ++i)
          if (r[i] % p) zero = false;
        if (zero) return true;
      }
    }
    return false;
  };
  long long count = 1;
  for (int i = 0; i < m; ++i) count *= p;
  for (long long code = 0; code < count; ++code) {
    std::vector<int> low(m, 0);
    long long t = code;
    for (int i = 0; i < m; ++i) {
      low[i] = static_cast<int>(t % p);
      t /= p;
    }
    if (!reducible(low)) return low;
  }
  throw Error("no irreducible polynomial found");
}

}  // namespace

void GF::build(int pp, int mm) {
  p = pp;
  m = mm;
  q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  if (q > 1024) throw ConfigError("field size beyond supported range");
  defpoly_.assign(m, 0);
  if (m > 1) {
    auto it = defpolys().find({p, m});
    defpoly_ = (it != defpolys().end()) ? it->second : find_irreducible(p, m);
  }

  add_.assign(q * q, 0);
  mul_.assign(q * q, 0);
  neg_.assign(q, 0);
  inv_.assign(q, 0);
  frob_.assign(q, 0);
  trace_.assign(q, 0);

  for (int a = 0; a < q; ++a) {
    auto ca = decode(a, p, m);
    for (int b = 0; b < q; ++b) {
      auto cb = decode(b, p, m);
      std::vector<int> cs(m);
      for (int i = 0; i < m; ++i) cs[i] = (ca[i] + cb[i]) % p;
      add_[a * q + b] = static_cast<fq_t>(encode(cs, p));
      mul_[a * q + b] = static_cast<fq_t>(encode(polymulmod(ca, cb, p, defpoly_), p));
    }
    std::vector<int> cn(m);
    for (int i = 0; i < m; ++i) cn[i] = (p - ca[i]) % p;
    neg_[a] = static_cast<fq_t>(encode(cn, p));
  }
  for (int a = 1; a < q; ++a)
    for (int b = 1; b < q; ++b)
      if (mul_[a * q + b] == 1) inv_[a] = static_cast<fq_t>(b);
  for (int a = 0; a < q; ++a) {
    fq_t r = static_cast<fq_t>(a);
    for (int i = 1; i < p; ++i) r = mul_[r * q + a];  // a^p
    frob_[a] = r;
  }
  for (int a = 0; a < q; ++a) {
    // trace = a + a^p + ... + a^{p^{m-1}}
    fq_t s = static_cast<fq_t>(a), cur = static_cast<fq_t>(a);
    for (int i = 1; i < m; ++i) {
      cur = frob_[cur];
      s = add_[s * q + cur];
    }
    // s lies in the prime field: encoded value equals the integer itself.
    trace_[a] = s;
  }
  // multiplicative generator: smallest element of full order q-1
  for (int a = 2; a < q; ++a) {
    int ord = 1;
    fq_t x = static_cast<fq_t>(a);
    while (x != 1) {
      x = mul_[x * q + a];
      ++ord;
    }
    if (ord == q - 1) {
      gen_ = static_cast<fq_t>(a);
      break;
    }
  }
  if (q == 2) gen_ = 1;
}

class GFRegistry {
 public:
  static GFRegistry& instance() {
    static GFRegistry r;
    return r;
  }
  const GF& get(int p, int m) {
    std::lock_guard<std::mutex> lk(mu_);
    auto key = std::make_pair(p, m);
    auto it = fields_.find(key);
    if (it == fields_.end()) {
      auto f = std::unique_ptr<GF>(new GF());
      f->build(p, m);
      it = fields_.emplace(key, std::move(f)).first;
    }
    return *it->second;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, std::unique_ptr<GF>> fields_;
};

const GF& GF::get_pm(int p, int m) { return GFRegistry::instance().get(p, m); }

const GF& GF::get(int q) {
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23}) {
    int m = 0, t = q;
    while (t % p == 0) {
      t /= p;
      ++m;
    }
    if (t == 1 && m >= 1) return get_pm(p, m);
  }
  throw ConfigError("q = " + std::to_string(q) + " is not a supported prime power");
}

fq_t GF::pow(fq_t a, long long e) const {
  if (e < 0) {
    a = inv(a);
    e = -e;
  }
  fq_t r = 1, b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

int GF::norm_to_prime(fq_t a) const {
  fq_t r = a, cur = a;
  for (int i = 1; i < m; ++i) {
    cur = frob_[cur];
    r = mul(r, cur);
  }
  return r;
}

bool GF::is_square(fq_t a) const {
  if (a == 0 || p == 2) return true;
  return pow(a, (q - 1) / 2) == 1;
}

fq_t GF::sqrt(fq_t a) const {
  for (int x = 0; x < q; ++x)
    if (mul(static_cast<fq_t>(x), static_cast<fq_t>(x)) == a) return static_cast<fq_t>(x);
  throw Error("element is not a square");
}

std::vector<fq_t> GF::embedding_into(const GF& big) const {
  if (big.p != p || big.m % m != 0) throw ConfigError("no embedding between these fields");
  std::vector<fq_t> emb(q, 0);
  if (m == 1) {
    // prime field: 1 -> 1 determines everything
    for (int a = 0; a < q; ++a) emb[a] = static_cast<fq_t>(a % p);
    // multiples of 1 in big field: integers encode as themselves
    for (int a = 0; a < q; ++a) {
      fq_t s = 0;
      for (int i = 0; i < a; ++i) s = big.add(s, 1);
      emb[a] = s;
    }
    return emb;
  }
  // image of the generator class x: least root of the defining polynomial in big.
  int root = -1;
  for (int r = 0; r < big.q; ++r) {
    // evaluate defpoly_ + x^m at r
    fq_t acc = big.pow(static_cast<fq_t>(r), m);
    fq_t pw = 1;
    for (int i = 0; i < m; ++i) {
      fq_t ci = 0;
      for (int t = 0; t < defpoly_[i]; ++t) ci = big.add(ci, 1);
      acc = big.add(acc, big.mul(ci, pw));
      pw = big.mul(pw, static_cast<fq_t>(r));
    }
    if (acc == 0) {
      root = r;
      break;
    }
  }
  if (root < 0) throw Error("embedding root not found");
  for (int a = 0; a < q; ++a) {
    auto c = decode(a, p, m);
    fq_t acc = 0, pw = 1;
    for (int i = 0; i < m; ++i) {
      fq_t ci = 0;
      for (int t = 0; t < c[i]; ++t) ci = big.add(ci, 1);
      acc = big.add(acc, big.mul(ci, pw));
      pw = big.mul(pw, static_cast<fq_t>(root));
    }
    emb[a] = acc;
  }
  return emb;
}

std::string GF::to_string(fq_t a) const { return std::to_string(static_cast<int>(a)); }

}  // namespace nilhecke
