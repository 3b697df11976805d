#include "nilhecke/bundle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace nilhecke {

namespace {

Mat2 identity_local(const GF& rf, int prec) { return Mat2::identity(rf, prec); }

Mat2 fnmat_expand(const Curve& c, const std::array<Fn, 4>& m, int pid, int prec) {
  Mat2 out = Mat2::zero(*c.place(pid).residue, prec);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!m[2 * i + j].is_zero()) out.at(i, j) = c.expand(m[2 * i + j], pid, prec);
  return out;
}

std::array<Fn, 4> fnmat_inverse(const Curve& c, const std::array<Fn, 4>& m) {
  Fn det = c.sub(c.mul(m[0], m[3]), c.mul(m[1], m[2]));
  Fn di = c.inverse(det);
  return {c.mul(m[3], di), c.mul(c.neg(m[1]), di), c.mul(c.neg(m[2]), di), c.mul(m[0], di)};
}

std::string reduction_key(const AdelicMatrix& g) {
  std::ostringstream os;
  for (const auto& [pid, m] : g.local) os << "@" << pid << ":" << m.reduction().to_string();
  return os.str();
}

// 4x4 Kronecker block for vec_by_rows(A X B) = (A (x) B^T) vec(X)
std::vector<Laurent> kron2(const Mat2& a, const Mat2& bt, int prec) {
  std::vector<Laurent> out(16, Laurent::zero(a.field(), prec));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out[(2 * i + k) * 4 + (2 * j + l)] = a.at(i, j) * bt.at(l, k);
  return out;
}

std::vector<int> divisor_support(const Divisor& d) {
  std::vector<int> out;
  for (auto& [pid, m] : d)
    if (m) out.push_back(pid);
  return out;
}

}  // namespace

AdelicMatrix amul(const Curve& c, const AdelicMatrix& a, const AdelicMatrix& b, int prec) {
  AdelicMatrix out;
  std::set<int> support;
  for (const auto& [pid, m] : a.local) support.insert(pid);
  for (const auto& [pid, m] : b.local) support.insert(pid);
  for (int pid : support) {
    const GF& rf = *c.place(pid).residue;
    Mat2 ma = a.at(pid) ? *a.at(pid) : identity_local(rf, prec);
    Mat2 mb = b.at(pid) ? *b.at(pid) : identity_local(rf, prec);
    out.local.emplace(pid, ma * mb);
  }
  return out;
}

AdelicMatrix ainv(const Curve&, const AdelicMatrix& a) {
  AdelicMatrix out;
  for (const auto& [pid, m] : a.local) out.local.emplace(pid, m.inverse());
  return out;
}

AdelicMatrix atranspose_inv(const Curve&, const AdelicMatrix& a) {
  AdelicMatrix out;
  for (const auto& [pid, m] : a.local) out.local.emplace(pid, m.transpose().inverse());
  return out;
}

PicC picc_add(const Curve& c, const PicC& a, const PicC& b) {
  PicC out;
  out.bar = c.pic_add(a.bar, b.bar);
  out.eps = a.eps;
  const GF& k = c.base();
  for (size_t i = 0; i < out.eps.size(); ++i) out.eps[i] = k.add(out.eps[i], b.eps[i]);
  return out;
}

PicC picc_neg(const Curve& c, const PicC& a) {
  PicC out;
  out.bar = c.pic_neg(a.bar);
  out.eps = a.eps;
  const GF& k = c.base();
  for (auto& e : out.eps) e = k.neg(e);
  return out;
}

PicC picc_zero(const Curve& c) {
  PicC out;
  out.bar = PicBar{0, 0};
  out.eps.assign(c.genus(), 0);
  return out;
}

// ---------------------------------------------------------------------------
// Window internals

namespace {

AdelicMatrix diag_rep(Curve& c, const Divisor& d1, const Divisor& d2, int prec) {
  AdelicMatrix out;
  std::set<int> support;
  for (auto& [pid, m] : d1)
    if (m) support.insert(pid);
  for (auto& [pid, m] : d2)
    if (m) support.insert(pid);
  for (int pid : support) {
    const GF& rf = *c.place(pid).residue;
    int n1 = d1.count(pid) ? d1.at(pid) : 0;
    int n2 = d2.count(pid) ? d2.at(pid) : 0;
    out.local.emplace(pid,
                      Mat2::diag(Laurent::t_pow(rf, -n1, prec), Laurent::t_pow(rf, -n2, prec)));
  }
  return out;
}

std::vector<LocalLattice> line_lats(Curve& c, const Divisor& d) {
  std::vector<LocalLattice> lats;
  for (const auto& [pid, m] : d) {
    if (m == 0) continue;
    const GF& rf = *c.place(pid).residue;
    LocalLattice l;
    l.pid = pid;
    l.mat = {Laurent::t_pow(rf, -m, 64)};
    lats.push_back(l);
  }
  return lats;
}

}  // namespace

int Window::fiber_rank() const { return curve_->base().p == 2 ? 4 : 3; }

// coordinates of a local 2x2 matrix in the fiber basis: (H,E,F) for sl2,
// (e11,e12,e21,e22) for gl2
std::vector<Laurent> Window::to_basis(const Mat2& x) const {
  if (fiber_rank() == 3) return {x.at(0, 0), x.at(0, 1), x.at(1, 0)};
  return {x.at(0, 0), x.at(0, 1), x.at(1, 0), x.at(1, 1)};
}

Mat2 Window::from_basis(const std::vector<Laurent>& v) const {
  const GF& rf = v[0].field();
  Mat2 m = Mat2::zero(rf, v[0].prec());
  m.at(0, 0) = v[0];
  m.at(0, 1) = v[1];
  m.at(1, 0) = v[2];
  m.at(1, 1) = fiber_rank() == 3 ? -v[0] : v[3];
  return m;
}

std::shared_ptr<LatticeSystem> Window::build_fiber_system(const Reduction& r,
                                                          const std::set<int>& extra,
                                                          int margin) const {
  int fr = fiber_rank();
  std::vector<LocalLattice> lats;
  std::set<int> sup;
  for (auto& [pid, m] : r.rep.local) sup.insert(pid);
  for (int pid : support_) sup.insert(pid);
  for (int pid : extra) sup.insert(pid);
  for (int pid : sup) {
    const GF& rf = *curve_->place(pid).residue;
    int wp = 64;
    Mat2 g0 = r.rep.at(pid) ? r.rep.at(pid)->truncated(wp) : identity_local(rf, wp);
    Mat2 g0i = g0.inverse();
    LocalLattice l;
    l.pid = pid;
    l.mat.assign(fr * fr, Laurent::zero(rf, wp));
    // columns: coordinates of g0 * basis_j * g0^{-1}
    for (int j = 0; j < fr; ++j) {
      std::vector<Laurent> bas(fr, Laurent::zero(rf, wp));
      bas[j] = Laurent::t_pow(rf, 0, wp);
      Mat2 bm = from_basis(bas);
      Mat2 img = g0 * bm * g0i;
      auto col = to_basis(img);
      for (int i = 0; i < fr; ++i) l.mat[i * fr + j] = col[i];
    }
    lats.push_back(l);
  }
  return std::make_shared<LatticeSystem>(*curve_, fr, lats, margin);
}

Window::Window(Curve& curve, const PicC& det, int gap_bound, int prec)
    : curve_(&curve), det_(det), gap_(gap_bound), prec_(prec) {
  curve_->ensure_places(1);
  support_ = curve_->places_up_to(1);
  h1o_ = std::make_shared<LatticeSystem>(*curve_, 1, std::vector<LocalLattice>{}, 2, support_);
  if (static_cast<int>(det_.eps.size()) != h1o_->h1())
    throw ConfigError("determinant eps-label has wrong dimension");
  build_reductions();
}

std::vector<fq_t> Window::det_eps_coords(const Laurent& loc, int pid) {
  LatticeSystem::AdeleVec v;
  v[pid] = {loc};
  return h1o_->h1_coords(v);
}

void Window::build_reductions() {
  int d = det_.bar.deg;
  if (curve_->genus() == 0) {
    for (int b = (d + 1) / 2; 2 * b - d <= gap_; ++b) {
      int a = d - b;
      reds_.push_back(make_reduction(a == b ? RedType::DiagSame : RedType::Split,
                                     PicBar{a, 0}, PicBar{b, 0}));
    }
    return;
  }
  // genus 1
  auto pic0 = curve_->pic0_elements();
  for (int gap = (d % 2 == 0) ? 0 : -1; gap <= gap_; gap += 2) {
    int dl = (d - gap) / 2;
    if (gap >= 1) {
      for (const auto& l0 : pic0) {
        PicBar sub{dl, l0.pt};
        PicBar quot = curve_->pic_add(det_.bar, curve_->pic_neg(sub));
        reds_.push_back(make_reduction(RedType::Split, sub, quot));
      }
    } else if (gap == 0) {
      std::set<std::pair<PicBar, PicBar>> seen;
      for (const auto& l0 : pic0) {
        PicBar sub{dl, l0.pt};
        PicBar quot = curve_->pic_add(det_.bar, curve_->pic_neg(sub));
        if (sub == quot) {
          reds_.push_back(make_reduction(RedType::DiagSame, sub, quot));
          reds_.push_back(make_reduction(RedType::Atiyah, sub, quot));
        } else {
          auto key = sub < quot ? std::make_pair(sub, quot) : std::make_pair(quot, sub);
          if (seen.count(key)) continue;
          seen.insert(key);
          reds_.push_back(make_reduction(RedType::Split, key.first, key.second));
        }
      }
    } else {
      // gap -1: the unique stable bundle with this determinant
      PicBar sub{dl, 0};
      PicBar quot = curve_->pic_add(det_.bar, curve_->pic_neg(sub));
      reds_.push_back(make_reduction(RedType::StableOdd, sub, quot));
    }
  }
}

Reduction Window::make_reduction(RedType type, const PicBar& sub, const PicBar& quot) {
  Reduction r;
  r.type = type;
  r.sub = sub;
  r.quot = quot;
  r.gap = quot.deg - sub.deg;
  Divisor dsub = curve_->canonical_divisor(sub);
  Divisor dquot = curve_->canonical_divisor(quot);
  switch (type) {
    case RedType::Split:
    case RedType::DiagSame:
      r.rep = diag_rep(*curve_, dsub, dquot, prec_);
      break;
    case RedType::Atiyah: {
      r.rep = diag_rep(*curve_, dsub, dquot, prec_);
      auto repv = h1o_->h1_rep(0);
      for (auto& [pid, vec] : repv) {
        const GF& rf = *curve_->place(pid).residue;
        Mat2 m = r.rep.at(pid) ? *r.rep.at(pid) : identity_local(rf, prec_);
        m.at(0, 1) = m.at(0, 0) * vec[0];
        r.rep.local[pid] = m;
      }
      break;
    }
    case RedType::StableOdd: {
      r.rep = diag_rep(*curve_, dsub, dquot, prec_);
      Divisor tw;
      for (auto& [pid, m] : dsub) tw[pid] += m;
      for (auto& [pid, m] : dquot) tw[pid] -= m;
      LatticeSystem ext(*curve_, 1, line_lats(*curve_, tw), 2, support_);
      if (ext.h1() != 1) throw Error("stable reduction: ext space not 1-dimensional");
      auto repv = ext.h1_rep(0);
      for (auto& [pid, vec] : repv) {
        const GF& rf = *curve_->place(pid).residue;
        Mat2 m = r.rep.at(pid) ? *r.rep.at(pid) : identity_local(rf, prec_);
        Laurent aquot = r.rep.at(pid) ? r.rep.at(pid)->at(1, 1) : Laurent::t_pow(rf, 0, prec_);
        m.at(0, 1) = vec[0] * aquot;
        r.rep.local[pid] = m;
      }
      break;
    }
  }
  finish_reduction(r);
  return r;
}

void Window::finish_reduction(Reduction& r) {
  const GF& k = curve_->base();
  int fr = fiber_rank();
  r.fiber = build_fiber_system(r, {}, 2);
  r.h = r.fiber->h1();
  r.h0_end = r.fiber->h0() + (fr == 3 ? 1 : 0);

  // |Aut(V-bar)| by type
  long long q = k.q;
  switch (r.type) {
    case RedType::Split: {
      int hom = curve_->genus() == 0 ? r.gap + 1
                                     : (r.gap >= 1 ? r.gap : 0);  // h0 of Hom(sub,quot)
      long long pw = 1;
      for (int i = 0; i < hom; ++i) pw *= q;
      r.aut_bar = (q - 1) * (q - 1) * pw;
      break;
    }
    case RedType::DiagSame:
      r.aut_bar = (q * q - 1) * (q * q - q);
      break;
    case RedType::Atiyah:
      r.aut_bar = q * (q - 1);
      break;
    case RedType::StableOdd:
      r.aut_bar = q - 1;
      break;
  }

  // Aut generators as global-function matrices
  std::vector<std::array<Fn, 4>> gens;
  Fn zero = curve_->fn_zero(), one = curve_->fn_one();
  Fn gen = curve_->fn_scalar(k.generator());
  auto diag_gen = [&](bool first) {
    return std::array<Fn, 4>{first ? gen : one, zero, zero, first ? one : gen};
  };
  switch (r.type) {
    case RedType::Split: {
      gens.push_back(diag_gen(true));
      gens.push_back(diag_gen(false));
      // unipotents sub -> quot: sections of Hom(sub, quot)
      Divisor tw;  // quot - sub
      for (auto& [pid, m] : curve_->canonical_divisor(r.quot)) tw[pid] += m;
      for (auto& [pid, m] : curve_->canonical_divisor(r.sub)) tw[pid] -= m;
      LatticeSystem homsys(*curve_, 1, line_lats(*curve_, tw), 0, support_, true);
      for (const auto& s : homsys.h0_basis()) gens.push_back({one, zero, s[0], one});
      break;
    }
    case RedType::DiagSame: {
      gens.push_back(diag_gen(true));
      gens.push_back({zero, one, one, zero});
      gens.push_back({one, one, zero, one});
      gens.push_back({one, zero, one, one});
      break;
    }
    case RedType::Atiyah: {
      // 1 + N with N the nilpotent global endomorphism: solve for it
      auto endsys = r.fiber;  // End0 sections contain N
      for (const auto& s : endsys->h0_basis()) {
        std::array<Fn, 4> n;
        if (fr == 3)
          n = {s[0], s[1], s[2], curve_->neg(s[0])};
        else
          n = {s[0], s[1], s[2], s[3]};
        gens.push_back({curve_->add(one, n[0]), n[1], n[2], curve_->add(one, n[3])});
      }
      break;
    }
    case RedType::StableOdd:
      break;
  }

  // action matrices on the base coordinate frame
  for (const auto& gmat : gens) {
    auto ginv = fnmat_inverse(*curve_, gmat);
    FqMat act(k, r.h, r.h);
    for (int i = 0; i < r.h; ++i) {
      auto rep = r.fiber->h1_rep(i);
      LatticeSystem::AdeleVec img;
      for (auto& [pid, vec] : rep) {
        const GF& rf = *curve_->place(pid).residue;
        int wp = r.fiber->window_high(pid) + 16;
        Mat2 a = fnmat_expand(*curve_, gmat, pid, wp);
        Mat2 ai = fnmat_expand(*curve_, ginv, pid, wp);
        std::vector<Laurent> vv = vec;
        Mat2 x = from_basis(vv);
        Mat2 y = a * x * ai;
        auto coords = to_basis(y);
        for (auto& cc : coords) cc = cc.truncated(r.fiber->window_high(pid));
        img[pid] = coords;
      }
      auto c = r.fiber->h1_coords(img);
      for (int j = 0; j < r.h; ++j) act.at(j, i) = c[j];
    }
    r.aut_action.push_back(act);
  }

  // closed-form orbit model for split fibers: coordinates (A in H^1(O)^g,
  // B in H^1(Hom(quot,sub)))
  if (r.type == RedType::Split && (curve_->genus() == 0 || r.gap >= 1)) {
    std::vector<std::vector<fq_t>> cols;
    // A-directions: z * H at the anchor (genus 1 only)
    if (curve_->genus() == 1 && fr == 3) {
      for (int i = 0; i < h1o_->h1(); ++i) {
        auto zrep = h1o_->h1_rep(i);
        LatticeSystem::AdeleVec v;
        for (auto& [pid, vec] : zrep) {
          std::vector<Laurent> coords(fr, Laurent::zero(*curve_->place(pid).residue,
                                                        r.fiber->window_high(pid)));
          coords[0] = vec[0].truncated(r.fiber->window_high(pid));
          v[pid] = coords;
        }
        cols.push_back(r.fiber->h1_coords(v));
      }
    }
    // B-directions: H^1(Hom(quot,sub)) in the E-slot
    Divisor tw;  // sub - quot
    for (auto& [pid, m] : curve_->canonical_divisor(r.sub)) tw[pid] += m;
    for (auto& [pid, m] : curve_->canonical_divisor(r.quot)) tw[pid] -= m;
    LatticeSystem bsys(*curve_, 1, line_lats(*curve_, tw), 2, support_);
    r.b_dim = bsys.h1();
    for (int i = 0; i < bsys.h1(); ++i) {
      auto brep = bsys.h1_rep(i);
      LatticeSystem::AdeleVec v;
      for (auto& [pid, vec] : brep) {
        std::vector<Laurent> coords(fr, Laurent::zero(*curve_->place(pid).residue,
                                                      r.fiber->window_high(pid)));
        coords[1] = vec[0].truncated(r.fiber->window_high(pid));
        v[pid] = coords;
      }
      cols.push_back(r.fiber->h1_coords(v));
    }
    if (static_cast<int>(cols.size()) == r.h) {
      FqMat toab(k, r.h, r.h);
      for (int j = 0; j < r.h; ++j)
        for (int i = 0; i < r.h; ++i) toab.at(i, j) = cols[j][i];
      try {
        r.from_AB = toab;           // columns: reps; maps AB -> coords
        r.to_AB = toab.inverse();   // coords -> AB
        r.split_model = true;
      } catch (const Error&) {
        r.split_model = false;
      }
    }
  }
}

// lazily built fiber systems on extended supports, with base-frame conversion
LatticeSystem& Window::fiber_ext(int red, const std::set<int>& extra, FqMat** conv) {
  std::vector<int> key(extra.begin(), extra.end());
  auto& slot = ext_fibers_[{red, key}];
  if (!slot.sys) {
    for (int margin = 6; margin <= 18; margin += 6) {
      try {
        slot.sys = build_fiber_system(reds_[red], extra, margin);
        break;
      } catch (const WindowTooSmall&) {
        continue;
      }
    }
    if (!slot.sys) throw WindowTooSmall("fiber system build failed");
    const Reduction& r = reds_[red];
    if (slot.sys->h1() != r.h) throw Error("extended fiber dimension mismatch");
    FqMat m(curve_->base(), r.h, r.h);
    for (int i = 0; i < r.h; ++i) {
      auto rep = r.fiber->h1_rep(i);
      // pad precision through the extended windows
      LatticeSystem::AdeleVec padded;
      for (auto& [pid, vec] : rep) {
        std::vector<Laurent> vv;
        for (auto& x : vec) {
          Laurent y = x;
          int want = slot.sys->window_high(pid);
          if (y.prec() < want) {
            // representative adeles are exact monomial data
            Laurent z = Laurent::zero(y.field(), want);
            for (int e = y.lo(); e < y.prec(); ++e) z.set_coeff(e, y.coeff(e));
            y = z;
          }
          vv.push_back(y);
        }
        padded[pid] = vv;
      }
      auto c = slot.sys->h1_coords(padded);
      for (int j = 0; j < r.h; ++j) m.at(j, i) = c[j];
    }
    slot.conv = m.inverse();  // base = conv * ext-coords
  }
  *conv = &slot.conv;
  return *slot.sys;
}

std::vector<fq_t> Window::orbit_rep(int red, const std::vector<fq_t>& coords) const {
  const Reduction& r = reds_[red];
  const GF& k = curve_->base();
  if (r.h == 0) return {};
  if (r.split_model) {
    // coords -> (A,B); canonical: B=0 keep A; else A=0, B scaled lex-min
    std::vector<fq_t> ab(r.h, 0);
    for (int i = 0; i < r.h; ++i) {
      fq_t acc = 0;
      for (int j = 0; j < r.h; ++j) acc = k.add(acc, k.mul(r.to_AB.at(i, j), coords[j]));
      ab[i] = acc;
    }
    int adim = r.h - r.b_dim;
    bool bzero = true;
    for (int i = adim; i < r.h; ++i)
      if (ab[i]) bzero = false;
    std::vector<fq_t> canon(r.h, 0);
    if (bzero) {
      for (int i = 0; i < adim; ++i) canon[i] = ab[i];
    } else {
      // scale B so its first nonzero coordinate is 1
      fq_t lead = 0;
      for (int i = adim; i < r.h; ++i)
        if (ab[i]) {
          lead = ab[i];
          break;
        }
      fq_t li = k.inv(lead);
      for (int i = adim; i < r.h; ++i) canon[i] = k.mul(ab[i], li);
    }
    // back to system coordinates
    std::vector<fq_t> out(r.h, 0);
    for (int i = 0; i < r.h; ++i) {
      fq_t acc = 0;
      for (int j = 0; j < r.h; ++j) acc = k.add(acc, k.mul(r.from_AB.at(i, j), canon[j]));
      out[i] = acc;
    }
    return out;
  }
  // generic: BFS through generator actions, lex-least visited point
  auto& cache = orbit_cache_[red % 64];
  auto it = cache.find(coords);
  if (it != cache.end()) return it->second;
  std::set<std::vector<fq_t>> seen;
  std::deque<std::vector<fq_t>> frontier;
  seen.insert(coords);
  frontier.push_back(coords);
  std::vector<fq_t> best = coords;
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop_front();
    for (const auto& act : r.aut_action) {
      std::vector<fq_t> nxt(r.h, 0);
      for (int i = 0; i < r.h; ++i) {
        fq_t acc = 0;
        for (int j = 0; j < r.h; ++j) acc = k.add(acc, k.mul(act.at(i, j), cur[j]));
        nxt[i] = acc;
      }
      if (seen.insert(nxt).second) {
        frontier.push_back(nxt);
        if (nxt < best) best = nxt;
        if (seen.size() > 2000000) throw WindowTooLarge("fiber orbit too large");
      }
    }
  }
  for (const auto& v : seen) cache.emplace(v, best);
  return best;
}

long long Window::orbit_size(int red, const std::vector<fq_t>& rep) const {
  const Reduction& r = reds_[red];
  const GF& k = curve_->base();
  if (r.h == 0) return 1;
  std::set<std::vector<fq_t>> seen;
  std::deque<std::vector<fq_t>> frontier;
  seen.insert(rep);
  frontier.push_back(rep);
  while (!frontier.empty()) {
    auto cur = frontier.front();
    frontier.pop_front();
    for (const auto& act : r.aut_action) {
      std::vector<fq_t> nxt(r.h, 0);
      for (int i = 0; i < r.h; ++i) {
        fq_t acc = 0;
        for (int j = 0; j < r.h; ++j) acc = k.add(acc, k.mul(act.at(i, j), cur[j]));
        nxt[i] = acc;
      }
      if (seen.insert(nxt).second) frontier.push_back(nxt);
    }
  }
  return static_cast<long long>(seen.size());
}

const std::vector<BundleClass>& Window::classes() {
  if (classes_built_) return classes_;
  const GF& k = curve_->base();
  for (size_t ri = 0; ri < reds_.size(); ++ri) {
    const Reduction& r = reds_[ri];
    std::vector<std::vector<fq_t>> reps;
    if (r.h == 0) {
      reps.push_back({});
    } else if (r.split_model) {
      int adim = r.h - r.b_dim;
      // (A, 0)
      std::vector<fq_t> ab(r.h, 0);
      long long atotal = 1;
      for (int i = 0; i < adim; ++i) atotal *= k.q;
      for (long long code = 0; code < atotal; ++code) {
        long long t = code;
        for (int i = 0; i < adim; ++i) {
          ab[i] = static_cast<fq_t>(t % k.q);
          t /= k.q;
        }
        for (int i = adim; i < r.h; ++i) ab[i] = 0;
        std::vector<fq_t> coords(r.h, 0);
        for (int i = 0; i < r.h; ++i) {
          fq_t acc = 0;
          for (int j = 0; j < r.h; ++j) acc = k.add(acc, k.mul(r.from_AB.at(i, j), ab[j]));
          coords[i] = acc;
        }
        reps.push_back(orbit_rep(static_cast<int>(ri), coords));
      }
      // (0, B-hat): projective representatives, first nonzero coordinate 1
      std::vector<fq_t> b(r.b_dim, 0);
      std::function<void(int)> rec = [&](int lead) {
        if (lead >= r.b_dim) return;
        // b[lead] = 1, later coordinates free
        std::vector<fq_t> bb(r.b_dim, 0);
        bb[lead] = 1;
        long long total = 1;
        for (int i = lead + 1; i < r.b_dim; ++i) total *= k.q;
        for (long long code = 0; code < total; ++code) {
          long long t = code;
          for (int i = lead + 1; i < r.b_dim; ++i) {
            bb[i] = static_cast<fq_t>(t % k.q);
            t /= k.q;
          }
          std::vector<fq_t> ab2(r.h, 0);
          for (int i = 0; i < r.b_dim; ++i) ab2[adim + i] = bb[i];
          std::vector<fq_t> coords(r.h, 0);
          for (int i = 0; i < r.h; ++i) {
            fq_t acc = 0;
            for (int j = 0; j < r.h; ++j) acc = k.add(acc, k.mul(r.from_AB.at(i, j), ab2[j]));
            coords[i] = acc;
          }
          reps.push_back(orbit_rep(static_cast<int>(ri), coords));
        }
        rec(lead + 1);
      };
      rec(0);
      (void)b;
    } else {
      // full sweep
      long long total = 1;
      for (int i = 0; i < r.h; ++i) {
        total *= k.q;
        if (total > 3000000) throw WindowTooLarge("fiber too large for the sweep");
      }
      std::set<std::vector<fq_t>> seen;
      std::vector<fq_t> v(r.h, 0);
      for (long long code = 0; code < total; ++code) {
        long long t = code;
        for (int i = 0; i < r.h; ++i) {
          v[i] = static_cast<fq_t>(t % k.q);
          t /= k.q;
        }
        auto rep = orbit_rep(static_cast<int>(ri), v);
        seen.insert(rep);
      }
      reps.assign(seen.begin(), seen.end());
    }
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    // mass identity: sum of orbit sizes = q^h (completeness certificate)
    long long mass = 0, expect = 1;
    for (int i = 0; i < r.h; ++i) expect *= k.q;
    for (const auto& rep : reps) mass += orbit_size(static_cast<int>(ri), rep);
    if (mass != expect) throw Error("fiber orbit enumeration incomplete (mass identity)");
    for (auto& rep : reps) {
      BundleClass b{static_cast<int>(ri), rep};
      class_ids_.emplace(b, static_cast<int>(classes_.size()));
      classes_.push_back(b);
    }
  }
  classes_built_ = true;
  return classes_;
}

int Window::class_count() { return static_cast<int>(classes().size()); }

int Window::class_id(const BundleClass& b) {
  classes();
  auto it = class_ids_.find(b);
  if (it == class_ids_.end()) throw Error("class not in window table");
  return it->second;
}

long long Window::stab_order(const BundleClass& b) const {
  const Reduction& r = reds_[b.red];
  return r.aut_bar / orbit_size(b.red, b.fib);
}

long long Window::aut_order(const BundleClass& b) const {
  const GF& k = curve_->base();
  const Reduction& r = reds_[b.red];
  long long pw = 1;
  for (int i = 0; i < r.h0_end; ++i) pw *= k.q;
  return pw * stab_order(b);
}

AdelicMatrix Window::class_rep(const BundleClass& b) const {
  const Reduction& r = reds_[b.red];
  const GF& k = curve_->base();
  AdelicMatrix out = r.rep;
  // assemble eps-part: X0 from fiber coords plus the determinant eps-part
  std::map<int, Mat2> eps;
  auto addeps = [&](int pid, const Mat2& m) {
    auto it = eps.find(pid);
    if (it == eps.end())
      eps.emplace(pid, m);
    else
      it->second = it->second + m;
  };
  for (int i = 0; i < r.h; ++i) {
    if (!b.fib[i]) continue;
    auto rep = r.fiber->h1_rep(i);
    for (auto& [pid, vec] : rep) {
      std::vector<Laurent> scaled;
      for (auto& x : vec) scaled.push_back(x.mul_scalar(Dual(Fq(k, b.fib[i]))));
      addeps(pid, from_basis(scaled));
    }
  }
  if (curve_->genus() >= 1 && fiber_rank() == 3) {
    Fq half = Fq(k, 2 % k.p).inv();
    for (size_t i = 0; i < det_.eps.size(); ++i) {
      if (!det_.eps[i]) continue;
      auto zrep = h1o_->h1_rep(static_cast<int>(i));
      for (auto& [pid, vec] : zrep) {
        const GF& rf = *curve_->place(pid).residue;
        Laurent z = vec[0].mul_scalar(Dual(Fq(rf, rf.m == k.m ? k.mul(det_.eps[i], half.v)
                                                              : 0)));
        Mat2 m = Mat2::zero(rf, z.prec());
        m.at(0, 0) = z;
        m.at(1, 1) = z;
        addeps(pid, m);
      }
    }
  }
  for (auto& [pid, m] : eps) {
    const GF& rf = *curve_->place(pid).residue;
    int wp = m.prec();
    Mat2 u = identity_local(rf, wp);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        u.at(i, j) = u.at(i, j) + m.at(i, j).mul_scalar(Dual::eps(rf));
    Mat2 base = out.at(pid) ? out.at(pid)->truncated(wp) : identity_local(rf, wp);
    out.local[pid] = u * base;
  }
  return out;
}

}  // namespace nilhecke

// ---------------------------------------------------------------------------
// classification, canonicalization and transports

namespace nilhecke {

PicBar det_class_bar(Curve& c, const AdelicMatrix& g) {
  Divisor d;
  for (const auto& [pid, m] : g.local) {
    Laurent det = m.det().reduction();
    if (det.known_zero()) throw NotInvertible("adelic matrix with vanishing determinant");
    int v = det.valuation().v;
    if (v) d[pid] = -v;
  }
  return c.divisor_class(d);
}

std::set<int> Window::fnmat_places(const std::array<Fn, 4>& m) const {
  std::set<int> out;
  out.insert(0);
  // poles: zeros of the denominators; det zeros: zeros of the norm of the
  // determinant numerator
  Fn det = curve_->sub(curve_->mul(m[0], m[3]), curve_->mul(m[1], m[2]));
  std::vector<Poly> polys;
  for (int i = 0; i < 4; ++i)
    if (!m[i].is_zero()) polys.push_back(m[i].c);
  polys.push_back(det.c);
  {
    // norm of the numerator a + b y: a^2 - b^2 f (f = 0 on P1)
    Poly nn = det.a * det.a;
    if (!det.b.is_zero()) {
      // recover f(x) by expanding y^2 at a rational place is overkill;
      // multiply via the curve: norm = (a+by)(a-by) has b-part zero
      Fn conj{det.a, -det.b, Poly::constant(curve_->base(), 1)};
      Fn numfn{det.a, det.b, Poly::constant(curve_->base(), 1)};
      Fn prod = curve_->mul(numfn, conj);
      nn = prod.a;  // denominator is 1
      polys.push_back(prod.c);
    }
    polys.push_back(nn);
  }
  for (int pid = 0; pid < curve_->place_count(); ++pid) {
    const PlaceInfo& pl = curve_->place(pid);
    if (pl.at_infinity) continue;
    for (const Poly& p : polys) {
      if (p.is_zero() || p.deg() < pl.minpoly.deg()) continue;
      if (p.divmod(pl.minpoly).second.is_zero()) {
        out.insert(pid);
        break;
      }
    }
  }
  return out;
}

Window::ClassifyInfo Window::classify(const AdelicMatrix& g) {
  std::string key = reduction_key(g);
  auto cit = classify_cache_.find(key);
  if (cit != classify_cache_.end()) return cit->second;
  ClassifyInfo info;
  const GF& k = curve_->base();
  int d = det_.bar.deg;

  do {
    PicBar detc = det_class_bar(*curve_, g);
    if (!(detc == det_.bar)) break;

    // probe the maximal line subbundle degree
    int gap_top = gap_ - ((gap_ % 2 + 2) % 2 != (std::abs(d) % 2)) ;
    gap_top = gap_;
    while ((gap_top % 2 + 2) % 2 != ((d % 2) + 2) % 2) --gap_top;
    int gap_bot = (d % 2 == 0) ? 0 : -1;
    std::vector<std::pair<PicBar, int>> found;
    int gapc = gap_top;
    for (; gapc >= gap_bot; gapc -= 2) {
      int dl = (d - gapc) / 2;
      std::vector<PicBar> cands;
      if (curve_->genus() == 0)
        cands.push_back(PicBar{dl, 0});
      else
        for (auto& e : curve_->pic0_elements()) cands.push_back(PicBar{dl, e.pt});
      found.clear();
      for (const auto& lc : cands) {
        Divisor dl0 = curve_->canonical_divisor(lc);
        std::vector<LocalLattice> lats;
        std::set<int> sup;
        for (auto& [pid, m] : g.local) sup.insert(pid);
        for (auto& [pid, m] : dl0)
          if (m) sup.insert(pid);
        for (int pid : sup) {
          const GF& rf = *curve_->place(pid).residue;
          int wp = 48;
          Mat2 base = g.at(pid) ? g.at(pid)->reduction().truncated(wp) : identity_local(rf, wp);
          int n = dl0.count(pid) ? dl0.at(pid) : 0;
          LocalLattice l;
          l.pid = pid;
          Laurent tw = Laurent::t_pow(rf, n, wp);
          l.mat = {base.at(0, 0) * tw, base.at(0, 1) * tw, base.at(1, 0) * tw,
                   base.at(1, 1) * tw};
          lats.push_back(l);
        }
        LatticeSystem probe(*curve_, 2, lats, 0, support_, true);
        if (probe.h0() > 0) found.push_back({lc, probe.h0()});
      }
      if (!found.empty()) break;
    }
    if (found.empty()) break;  // more unstable than the window allows

    RedType type;
    PicBar sub, quot;
    if (gapc >= 1) {
      if (found.size() != 1) throw Error("unstable bundle with non-unique destabilizer");
      type = RedType::Split;
      sub = found[0].first;
      quot = curve_->pic_add(det_.bar, curve_->pic_neg(sub));
    } else if (gapc == 0) {
      if (found.size() == 2) {
        type = RedType::Split;
        sub = std::min(found[0].first, found[1].first);
        quot = std::max(found[0].first, found[1].first);
      } else if (found.size() == 1 && found[0].second >= 2) {
        type = RedType::DiagSame;
        sub = quot = found[0].first;
      } else if (found.size() == 1) {
        type = RedType::Atiyah;
        sub = quot = found[0].first;
      } else {
        throw Error("gap-0 bundle with unexpected subbundle structure");
      }
    } else {
      type = RedType::StableOdd;
      sub = PicBar{(d + 1) / 2 - 1, 0};
      sub = PicBar{(d - 1) / 2, 0};
      quot = curve_->pic_add(det_.bar, curve_->pic_neg(sub));
    }
    int target = -1;
    for (size_t i = 0; i < reds_.size(); ++i)
      if (reds_[i].type == type && reds_[i].sub == sub && reds_[i].quot == quot) {
        target = static_cast<int>(i);
        break;
      }
    if (target < 0) break;  // outside the window

    // Hom(V(rep), V(g)) and an invertible element
    const Reduction& r = reds_[target];
    std::vector<LocalLattice> lats;
    std::set<int> sup;
    for (auto& [pid, m] : g.local) sup.insert(pid);
    for (auto& [pid, m] : r.rep.local) sup.insert(pid);
    for (int pid : sup) {
      const GF& rf = *curve_->place(pid).residue;
      int wp = 48;
      Mat2 a = g.at(pid) ? g.at(pid)->reduction().truncated(wp) : identity_local(rf, wp);
      Mat2 repi =
          (r.rep.at(pid) ? r.rep.at(pid)->truncated(wp) : identity_local(rf, wp)).inverse();
      LocalLattice l;
      l.pid = pid;
      l.mat = kron2(a, repi.transpose(), wp);
      lats.push_back(l);
    }
    LatticeSystem hom(*curve_, 4, lats, 0, support_, true);
    const auto& bas = hom.h0_basis();
    int hb = static_cast<int>(bas.size());
    if (hb == 0) throw Error("no homomorphisms onto a classified reduction");

    // determinant proxy: dets and pair-mixes evaluated at the anchor
    auto det_of = [&](const std::vector<Fn>& v) {
      return curve_->sub(curve_->mul(v[0], v[3]), curve_->mul(v[1], v[2]));
    };
    auto mix_of = [&](const std::vector<Fn>& u, const std::vector<Fn>& v) {
      // det(u+v) - det(u) - det(v)
      Fn s1 = curve_->add(curve_->mul(u[0], v[3]), curve_->mul(v[0], u[3]));
      Fn s2 = curve_->add(curve_->mul(u[1], v[2]), curve_->mul(v[1], u[2]));
      return curve_->sub(s1, s2);
    };
    std::vector<Fn> dets;
    std::map<std::pair<int, int>, Fn> mixes;
    for (int i = 0; i < hb; ++i) dets.push_back(det_of(bas[i]));
    for (int i = 0; i < hb; ++i)
      for (int j = i + 1; j < hb; ++j) mixes[{i, j}] = mix_of(bas[i], bas[j]);
    int e0 = 1 << 30;
    auto scan_val = [&](const Fn& f) {
      if (f.is_zero()) return;
      Laurent e = curve_->expand(f, 0, 8);
      if (!e.known_zero()) e0 = std::min(e0, e.valuation().v);
    };
    for (auto& f : dets) scan_val(f);
    for (auto& [ij, f] : mixes) scan_val(f);
    if (e0 == (1 << 30)) throw Error("all candidate determinants vanish");
    std::vector<fq_t> dv(hb, 0);
    std::map<std::pair<int, int>, fq_t> mv;
    for (int i = 0; i < hb; ++i)
      dv[i] = dets[i].is_zero() ? 0 : curve_->expand(dets[i], 0, e0 + 2).coeff(e0).a0.v;
    for (auto& [ij, f] : mixes)
      mv[ij] = f.is_zero() ? 0 : curve_->expand(f, 0, e0 + 2).coeff(e0).a0.v;

    long long total = 1;
    for (int i = 0; i < hb; ++i) {
      total *= k.q;
      if (total > 2000000) throw WindowTooLarge("hom space too large for the iso scan");
    }
    std::vector<fq_t> cvec(hb, 0);
    bool ok = false;
    for (long long code = 1; code < total && !ok; ++code) {
      long long t = code;
      for (int i = 0; i < hb; ++i) {
        cvec[i] = static_cast<fq_t>(t % k.q);
        t /= k.q;
      }
      fq_t lam = 0;
      for (int i = 0; i < hb; ++i)
        if (cvec[i]) lam = k.add(lam, k.mul(k.mul(cvec[i], cvec[i]), dv[i]));
      for (auto& [ij, v] : mv)
        if (cvec[ij.first] && cvec[ij.second])
          lam = k.add(lam, k.mul(k.mul(cvec[ij.first], cvec[ij.second]), v));
      if (lam) ok = true;
    }
    if (!ok) throw Error("no invertible homomorphism found");
    std::array<Fn, 4> phi = {curve_->fn_zero(), curve_->fn_zero(), curve_->fn_zero(),
                             curve_->fn_zero()};
    for (int i = 0; i < hb; ++i) {
      if (!cvec[i]) continue;
      for (int j = 0; j < 4; ++j)
        phi[j] = curve_->add(phi[j], curve_->mul_scalar(bas[i][j], cvec[i]));
    }
    info.gamma = fnmat_inverse(*curve_, phi);
    info.red = target;
    info.oow = false;
  } while (false);

  classify_cache_[key] = info;
  return info;
}

Window::Transport Window::transport(const Reduction* src, const AdelicMatrix& m,
                                    const std::vector<AdelicMatrix>& eps_dirs) {
  const GF& k = curve_->base();
  Transport out;
  ClassifyInfo info = classify(m);
  if (info.oow) return out;
  const Reduction& target = reds_[info.red];

  // place set
  std::set<int> P;
  for (int pid : support_) P.insert(pid);
  for (auto& [pid, mm] : m.local) P.insert(pid);
  for (auto& [pid, mm] : target.rep.local) P.insert(pid);
  for (auto& s : fnmat_places(info.gamma)) P.insert(s);
  for (const auto& d : eps_dirs)
    for (auto& [pid, mm] : d.local) P.insert(pid);
  std::vector<std::pair<int, LatticeSystem::AdeleVec>> src_reps;
  if (src) {
    for (auto& [pid, mm] : src->rep.local) P.insert(pid);
    for (int i = 0; i < src->h; ++i) {
      auto rep = src->fiber->h1_rep(i);
      for (auto& [pid, vec] : rep) P.insert(pid);
      src_reps.push_back({i, rep});
    }
  }
  std::set<int> extra;
  for (int pid : P)
    if (!target.fiber->has_place(pid)) extra.insert(pid);

  FqMat* conv = nullptr;
  LatticeSystem& fib = fiber_ext(info.red, extra, &conv);
  FqMat* oconv = nullptr;
  LatticeSystem* h1oext = nullptr;
  if (fiber_rank() == 3) h1oext = &h1o_ext(extra, &oconv);

  // fixed local data
  int wp = prec_;
  std::map<int, Mat2> gamma_loc, kbar, repred, repredinv;
  for (int pid : P) {
    const GF& rf = *curve_->place(pid).residue;
    Mat2 gl = fnmat_expand(*curve_, info.gamma, pid, wp + 10);
    Mat2 mm = m.at(pid) ? m.at(pid)->reduction().truncated(wp + 10) : identity_local(rf, wp + 10);
    Mat2 rp = target.rep.at(pid) ? target.rep.at(pid)->truncated(wp + 10)
                                 : identity_local(rf, wp + 10);
    Mat2 kb = (gl * mm).inverse() * rp;
    if (!kb.in_glo()) throw Error("transport: transform not integral");
    gamma_loc.emplace(pid, gl);
    kbar.emplace(pid, kb);
    repred.emplace(pid, rp);
    repredinv.emplace(pid, rp.inverse());
  }

  Fq half = (k.p == 2) ? Fq(k, 1) : Fq(k, 2 % k.p).inv();

  // evaluate the class data of (1 + eps N) * m, N given per place
  auto eval = [&](const std::map<int, Mat2>& nloc)
      -> std::pair<std::vector<fq_t>, std::vector<fq_t>> {
    LatticeSystem::AdeleVec xv;
    LatticeSystem::AdeleVec trv;
    for (int pid : P) {
      const GF& rf = *curve_->place(pid).residue;
      Mat2 full = m.at(pid) ? m.at(pid)->truncated(wp + 10) : identity_local(rf, wp + 10);
      auto nit = nloc.find(pid);
      if (nit != nloc.end()) {
        Mat2 u = identity_local(rf, wp + 10);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            u.at(i, j) = u.at(i, j) + nit->second.at(i, j).mul_scalar(Dual::eps(rf));
        full = u * full;
      }
      Mat2 gp = gamma_loc.at(pid) * full * kbar.at(pid);
      if (!gp.reduction().equals(repred.at(pid)))
        throw Error("transport: reduction drifted");
      Mat2 X = gp.eps_part() * repredinv.at(pid).reduction();
      // split off the trace part
      int cut = fib.window_high(pid);
      if (fiber_rank() == 3) {
        Laurent tr = (X.at(0, 0) + X.at(1, 1));
        Laurent htr = tr.mul_scalar(Dual(Fq(rf, rf.m == k.m ? half.v : rf.embedding_into(rf)[0])));
        // half lives in the prime field so its encoding embeds verbatim
        htr = tr.mul_scalar(Dual(Fq(rf, half.v)));
        X.at(0, 0) = X.at(0, 0) - htr;
        X.at(1, 1) = X.at(1, 1) - htr;
        int ocut = h1oext->window_high(pid);
        Laurent trc = tr;
        if (trc.prec() < ocut) throw PrecisionExhausted("transport: trace under-resolved");
        trv[pid] = {trc.truncated(ocut)};
      }
      std::vector<Laurent> coords = to_basis(X);
      for (auto& cc : coords) {
        if (cc.prec() < cut) throw PrecisionExhausted("transport: eps data under-resolved");
        cc = cc.truncated(cut);
      }
      xv[pid] = coords;
    }
    std::vector<fq_t> cr = fib.h1_coords(xv);
    std::vector<fq_t> base_coords(target.h, 0);
    for (int i = 0; i < target.h; ++i) {
      fq_t acc = 0;
      for (int j = 0; j < target.h; ++j) acc = k.add(acc, k.mul(conv->at(i, j), cr[j]));
      base_coords[i] = acc;
    }
    std::vector<fq_t> dete;
    if (fiber_rank() == 3) {
      auto oc = h1oext->h1_coords(trv);
      dete.resize(h1o_->h1());
      for (int i = 0; i < h1o_->h1(); ++i) {
        fq_t acc = 0;
        for (size_t j = 0; j < oc.size(); ++j) acc = k.add(acc, k.mul(oconv->at(i, j), oc[j]));
        dete[i] = acc;
      }
    }
    return {base_coords, dete};
  };

  auto base = eval({});
  if (base.second != det_.eps) return out;  // lands in a different det class

  int nd = static_cast<int>(eps_dirs.size());
  int hs = src ? src->h : 0;
  out.lin = FqMat(k, target.h, hs + nd);
  // source fiber directions
  for (int i = 0; i < hs; ++i) {
    std::map<int, Mat2> nloc;
    for (auto& [pid, vec] : src_reps[i].second) {
      std::vector<Laurent> vv = vec;
      nloc.emplace(pid, from_basis(vv));
    }
    auto val = eval(nloc);
    if (val.second != det_.eps) throw Error("transport: fiber direction moved the determinant");
    for (int r = 0; r < target.h; ++r) out.lin.at(r, i) = k.sub(val.first[r], base.first[r]);
  }
  for (int j = 0; j < nd; ++j) {
    std::map<int, Mat2> nloc;
    for (auto& [pid, mm] : eps_dirs[j].local) nloc.emplace(pid, mm.reduction());
    auto val = eval(nloc);
    if (val.second != det_.eps) throw Error("transport: eps direction moved the determinant");
    for (int r = 0; r < target.h; ++r)
      out.lin.at(r, hs + j) = k.sub(val.first[r], base.first[r]);
  }
  out.base = base.first;
  out.target_red = info.red;
  out.h_src = hs;
  out.oow = false;
  return out;
}

BundleClass Window::apply_transport(const Transport& t, const std::vector<fq_t>& x,
                                    const std::vector<fq_t>& lam) const {
  const GF& k = curve_->base();
  const Reduction& r = reds_[t.target_red];
  std::vector<fq_t> y = t.base;
  for (int j = 0; j < t.h_src; ++j) {
    if (!x[j]) continue;
    for (int i = 0; i < r.h; ++i) y[i] = k.add(y[i], k.mul(t.lin.at(i, j), x[j]));
  }
  for (size_t j = 0; j < lam.size(); ++j) {
    if (!lam[j]) continue;
    for (int i = 0; i < r.h; ++i)
      y[i] = k.add(y[i], k.mul(t.lin.at(i, t.h_src + static_cast<int>(j)), lam[j]));
  }
  return BundleClass{t.target_red, orbit_rep(t.target_red, y)};
}

std::optional<BundleClass> Window::canonicalize(const AdelicMatrix& g) {
  Transport t = transport(nullptr, g, {});
  if (t.oow) return std::nullopt;
  return apply_transport(t, {}, {});
}

AdelicMatrix Window::det_eps_factor() const {
  AdelicMatrix out;
  const GF& k = curve_->base();
  if (fiber_rank() != 3) return out;
  Fq half = Fq(k, 2 % k.p).inv();
  for (size_t i = 0; i < det_.eps.size(); ++i) {
    if (!det_.eps[i]) continue;
    auto zrep = h1o_->h1_rep(static_cast<int>(i));
    for (auto& [pid, vec] : zrep) {
      const GF& rf = *curve_->place(pid).residue;
      Laurent z = vec[0].mul_scalar(Dual(Fq(rf, k.mul(det_.eps[i], half.v))));
      Mat2 u = identity_local(rf, prec_);
      u.at(0, 0) = u.at(0, 0) + z.mul_scalar(Dual::eps(rf));
      u.at(1, 1) = u.at(1, 1) + z.mul_scalar(Dual::eps(rf));
      out.local[pid] = out.at(pid) ? (*out.at(pid)) * u : u;
    }
  }
  return out;
}

LatticeSystem& Window::h1o_ext(const std::set<int>& extra, FqMat** conv) {
  std::vector<int> key(extra.begin(), extra.end());
  auto& slot = ext_h1o_[key];
  if (!slot.sys) {
    std::vector<int> sup = support_;
    for (int pid : extra) sup.push_back(pid);
    slot.sys = std::make_shared<LatticeSystem>(*curve_, 1, std::vector<LocalLattice>{}, 6, sup);
    int h = h1o_->h1();
    if (slot.sys->h1() != h) throw Error("extended H1(O) dimension mismatch");
    FqMat m(curve_->base(), h, h);
    for (int i = 0; i < h; ++i) {
      auto rep = h1o_->h1_rep(i);
      LatticeSystem::AdeleVec padded;
      for (auto& [pid, vec] : rep) {
        std::vector<Laurent> vv;
        for (auto& x : vec) {
          int want = slot.sys->window_high(pid);
          Laurent z = Laurent::zero(x.field(), want);
          for (int e = x.lo(); e < x.prec(); ++e) z.set_coeff(e, x.coeff(e));
          vv.push_back(z);
        }
        padded[pid] = vv;
      }
      auto c = slot.sys->h1_coords(padded);
      for (int j = 0; j < h; ++j) m.at(j, i) = c[j];
    }
    slot.conv = m.inverse();
  }
  *conv = &slot.conv;
  return *slot.sys;
}

CBundleCohomology c_bundle_cohomology(Curve& c, const AdelicMatrix& g, int prec) {
  std::vector<LocalLattice> lats;
  for (const auto& [pid, m] : g.local) {
    const GF& rf = *c.place(pid).residue;
    int wp = 48;
    Mat2 A = m.reduction().truncated(wp);
    Mat2 B = m.eps_part().truncated(wp);
    LocalLattice l;
    l.pid = pid;
    l.mat.assign(16, Laurent::zero(rf, wp));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        l.mat[i * 4 + j] = A.at(i, j);
        l.mat[(i + 2) * 4 + j] = B.at(i, j);
        l.mat[(i + 2) * 4 + (j + 2)] = A.at(i, j);
      }
    lats.push_back(l);
  }
  LatticeSystem sys(c, 4, lats, 2, c.places_up_to(1));
  (void)prec;
  return CBundleCohomology{sys.h0(), sys.h1()};
}

}  // namespace nilhecke
