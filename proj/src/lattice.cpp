#include "nilhecke/lattice.hpp"

#include <algorithm>

namespace nilhecke {

namespace {

int min_entry_val(const std::vector<Laurent>& mat) {
  int v = 0;
  for (const auto& e : mat)
    if (!e.known_zero()) v = std::min(v, e.valuation().v);
  return v;
}

// r x r inverse over the local field by Gaussian elimination on Laurent
// entries (exact at the working precision).
std::vector<Laurent> local_inverse(const GF& rf, int r, const std::vector<Laurent>& mat, int prec) {
  std::vector<Laurent> a = mat;
  std::vector<Laurent> inv(r * r, Laurent::zero(rf, prec));
  for (int i = 0; i < r; ++i) inv[i * r + i] = Laurent::t_pow(rf, 0, prec);
  for (int col = 0; col < r; ++col) {
    int piv = -1, best = 1 << 30;
    for (int i = col; i < r; ++i) {
      if (a[i * r + col].known_zero()) continue;
      int v = a[i * r + col].valuation().v;
      if (v < best) {
        best = v;
        piv = i;
      }
    }
    if (piv < 0) throw NotInvertible("local lattice matrix singular");
    if (piv != col)
      for (int j = 0; j < r; ++j) {
        std::swap(a[piv * r + j], a[col * r + j]);
        std::swap(inv[piv * r + j], inv[col * r + j]);
      }
    Laurent pi = a[col * r + col].inverse();
    for (int j = 0; j < r; ++j) {
      a[col * r + j] = a[col * r + j] * pi;
      inv[col * r + j] = inv[col * r + j] * pi;
    }
    for (int i = 0; i < r; ++i) {
      if (i == col || a[i * r + col].known_zero()) continue;
      Laurent f = a[i * r + col];
      for (int j = 0; j < r; ++j) {
        a[i * r + j] = a[i * r + j] - f * a[col * r + j];
        inv[i * r + j] = inv[i * r + j] - f * inv[col * r + j];
      }
    }
  }
  return inv;
}

Laurent det_laurent(const GF& rf, int r, const std::vector<Laurent>& mat, int prec) {
  if (r == 1) return mat[0];
  if (r == 2) return mat[0] * mat[3] - mat[1] * mat[2];
  // expansion along the first row (r is at most 4 here)
  Laurent acc = Laurent::zero(rf, prec);
  for (int j = 0; j < r; ++j) {
    if (mat[j].known_zero()) continue;
    std::vector<Laurent> minor;
    for (int i = 1; i < r; ++i)
      for (int jj = 0; jj < r; ++jj)
        if (jj != j) minor.push_back(mat[i * r + jj]);
    Laurent term = mat[j] * det_laurent(rf, r - 1, minor, prec);
    if (j % 2) term = -term;
    acc = acc + term;
  }
  return acc;
}

}  // namespace

LatticeSystem::LatticeSystem(Curve& curve, int r, std::vector<LocalLattice> lats, int margin,
                             const std::vector<int>& extra_support, bool h0_only)
    : curve_(&curve), r_(r), lats_(std::move(lats)), margin_(margin), h0_only_(h0_only) {
  for (int pid : extra_support) {
    bool have = false;
    for (const auto& l : lats_)
      if (l.pid == pid) have = true;
    if (have) continue;
    const GF& rf = *curve.place(pid).residue;
    LocalLattice id;
    id.pid = pid;
    id.mat.assign(r_ * r_, Laurent::zero(rf, 64));
    for (int i = 0; i < r_; ++i) id.mat[i * r_ + i] = Laurent::t_pow(rf, 0, 64);
    lats_.push_back(id);
  }
  build();
}

void LatticeSystem::build() {
  const GF& k = curve_->base();
  int g = curve_->genus();

  // anchor must always be present so the dominating divisor can grow there
  bool has_anchor = false;
  for (auto& l : lats_)
    if (l.pid == 0) has_anchor = true;
  if (!has_anchor) {
    LocalLattice id;
    id.pid = 0;
    id.mat.assign(r_ * r_, Laurent::zero(k, 64));
    const GF& rf = *curve_->place(0).residue;
    for (int i = 0; i < r_; ++i) id.mat[i * r_ + i] = Laurent::t_pow(rf, 0, 64);
    lats_.push_back(id);
  }

  // determinant ledger for the Euler characteristic
  chi_ = r_ * (1 - g);
  for (const auto& l : lats_) {
    const GF& rf = *curve_->place(l.pid).residue;
    Laurent det = det_laurent(rf, r_, l.mat, 64);
    chi_ -= det.valuation().v * curve_->place(l.pid).deg;
  }

  for (int attempt = 0; attempt < 5; ++attempt) {
    cells_.clear();
    cell_index_.clear();
    glob_rows_.clear();
    glob_fns_.clear();
    lat_rows_.clear();
    mlow_.clear();
    khigh_.clear();

    int anchor_extra = 2 * (attempt + 1) * (2 * g + 2) + margin_;
    Divisor dom;
    for (const auto& l : lats_) {
      const GF& rf = *curve_->place(l.pid).residue;
      int prec_probe = 48;
      std::vector<Laurent> inv = local_inverse(rf, r_, l.mat, prec_probe);
      int m = std::max(0, -min_entry_val(l.mat));
      int mi = std::max(0, -min_entry_val(inv));
      int kcut = m + mi;  // t^kcut O^r inside the lattice
      mlow_[l.pid] = m + (l.pid == 0 ? anchor_extra : margin_);
      khigh_[l.pid] = kcut;
      dom[l.pid] = mlow_[l.pid];
    }

    // cells
    for (const auto& l : lats_) {
      const GF& rf = *curve_->place(l.pid).residue;
      int d = rf.m / k.m;
      if (!coords_.count(l.pid)) coords_[l.pid] = std::make_shared<SubfieldCoords>(k, rf);
      for (int comp = 0; comp < r_; ++comp)
        for (int e = -mlow_[l.pid]; e < khigh_[l.pid]; ++e)
          for (int sub = 0; sub < d; ++sub) {
            cell_index_[{l.pid, e, comp, sub}] = static_cast<int>(cells_.size());
            cells_.push_back(Cell{l.pid, e, comp, sub});
          }
    }
    int C = static_cast<int>(cells_.size());

    // relation generators: global candidates and lattice monomials
    auto expand_vec = [&](int pid, const std::vector<Laurent>& vec, std::vector<fq_t>& row) {
      const GF& rf = *curve_->place(pid).residue;
      const SubfieldCoords& sc = *coords_.at(pid);
      int d = sc.dim();
      for (int comp = 0; comp < r_; ++comp) {
        const Laurent& x = vec[comp];
        for (int e = std::max(x.lo(), -mlow_[pid]); e < khigh_[pid]; ++e) {
          fq_t val = x.coeff(e).a0.v;
          if (!val) continue;
          fq_t cs[8];
          sc.coords(val, cs);
          for (int sub = 0; sub < d; ++sub) {
            if (!cs[sub]) continue;
            int idx = cell_index_.at({pid, e, comp, sub});
            row[idx] = k.add(row[idx], cs[sub]);
          }
        }
        if (x.lo() < -mlow_[pid] && !x.known_zero())
          throw WindowTooSmall("adelic datum deeper than the window");
      }
    };

    // globals: r copies of the RR space of the dominating divisor
    auto rrb = curve_->rr_basis_cached(dom);
    for (int comp = 0; comp < r_; ++comp)
      for (const Fn& f : rrb) {
        std::vector<fq_t> row(C, 0);
        for (const auto& l : lats_) {
          std::vector<Laurent> vec(r_, Laurent::zero(*curve_->place(l.pid).residue, khigh_[l.pid]));
          vec[comp] = curve_->expand(f, l.pid, khigh_[l.pid]);
          expand_vec(l.pid, vec, row);
        }
        glob_rows_.push_back(row);
        std::vector<Fn> vf(r_, curve_->fn_zero());
        vf[comp] = f;
        glob_fns_.push_back(vf);
      }
    // lattice monomials: A_p * (t^j * beta * e_i)
    for (const auto& l : lats_) {
      const GF& rf = *curve_->place(l.pid).residue;
      const SubfieldCoords& sc = *coords_.at(l.pid);
      int m = mlow_[l.pid], kcut = khigh_[l.pid];
      for (int comp = 0; comp < r_; ++comp)
        for (int j = 0; j < kcut + m; ++j)
          for (int sub = 0; sub < sc.dim(); ++sub) {
            Fq beta(rf, 1);
            fq_t be = 1;
            for (int s = 0; s < sub; ++s) be = rf.mul(be, rf.generator());
            beta = Fq(rf, be);
            std::vector<Laurent> vec(r_, Laurent::zero(rf, kcut));
            for (int i = 0; i < r_; ++i)
              vec[i] = l.mat[i * r_ + comp].shift(j).mul_scalar(Dual(beta)).truncated(kcut);
            std::vector<fq_t> row(C, 0);
            expand_vec(l.pid, vec, row);
            bool nz = false;
            for (fq_t v : row)
              if (v) nz = true;
            if (nz) lat_rows_.push_back(row);
          }
    }

    if (h0_only_) {
      h1_dim_ = -1;
    }
    int R = h0_only_ ? 0 : static_cast<int>(glob_rows_.size() + lat_rows_.size());
    FqMat rel(k, R, C);
    if (!h0_only_) {
      for (size_t i = 0; i < glob_rows_.size(); ++i)
        for (int j = 0; j < C; ++j) rel.at(static_cast<int>(i), j) = glob_rows_[i][j];
      for (size_t i = 0; i < lat_rows_.size(); ++i)
        for (int j = 0; j < C; ++j)
          rel.at(static_cast<int>(i + glob_rows_.size()), j) = lat_rows_[i][j];
    }
    if (!h0_only_) {
      rel_rref_ = rel;
      rel_pivots_ = rel_rref_.rref();
      h1_dim_ = C - static_cast<int>(rel_pivots_.size());
      nonpivot_cols_.clear();
      std::vector<bool> isp(C, false);
      for (int p : rel_pivots_) isp[p] = true;
      for (int j = 0; j < C; ++j)
        if (!isp[j]) nonpivot_cols_.push_back(j);
    }

    // H^0: kernel of the integrality conditions on the candidate space
    {
      // conditions: for each place, A_p^{-1} f integral
      int ncand = static_cast<int>(rrb.size());
      std::vector<std::vector<fq_t>> rows;
      for (const auto& l : lats_) {
        const GF& rf = *curve_->place(l.pid).residue;
        const SubfieldCoords& sc = *coords_.at(l.pid);
        int probe = khigh_[l.pid] + mlow_[l.pid] + 4;
        std::vector<Laurent> inv = local_inverse(rf, r_, l.mat, probe + 16);
        // expansions of candidates
        std::vector<Laurent> cand_exp;
        for (const Fn& f : rrb) cand_exp.push_back(curve_->expand(f, l.pid, probe));
        int depth = mlow_[l.pid] + std::max(0, -min_entry_val(inv));
        for (int i = 0; i < r_; ++i)
          for (int e = -depth; e < 0; ++e)
            for (int sub = 0; sub < sc.dim(); ++sub) {
              std::vector<fq_t> row(r_ * ncand, 0);
              bool nz = false;
              for (int comp = 0; comp < r_; ++comp)
                for (int ci = 0; ci < ncand; ++ci) {
                  // coefficient of t^e in (A^{-1})_{i,comp} * cand_ci
                  Laurent prod = inv[i * r_ + comp] * cand_exp[ci];
                  if (prod.prec() < 0)
                    throw PrecisionExhausted("lattice H0 conditions under-resolved");
                  fq_t val = prod.coeff(e).a0.v;
                  if (!val) continue;
                  fq_t cs[8];
                  sc.coords(val, cs);
                  if (cs[sub]) {
                    row[comp * ncand + ci] = cs[sub];
                    nz = true;
                  }
                }
              if (nz) rows.push_back(row);
            }
      }
      FqMat cond(k, static_cast<int>(rows.size()), r_ * ncand);
      for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < r_ * ncand; ++j) cond.at(static_cast<int>(i), j) = rows[i][j];
      FqMat ker = cond.kernel();
      h0_basis_.clear();
      for (int i = 0; i < ker.rows(); ++i) {
        std::vector<Fn> vf(r_, curve_->fn_zero());
        for (int comp = 0; comp < r_; ++comp)
          for (int ci = 0; ci < ncand; ++ci) {
            fq_t c = ker.at(i, comp * ncand + ci);
            if (c) vf[comp] = curve_->add(vf[comp], curve_->mul_scalar(rrb[ci], c));
          }
        h0_basis_.push_back(vf);
      }
    }

    if (h0_only_) return;  // candidate spaces always dominate the sections
    if (h0() - h1() == chi_) return;
    // dominating divisor too small: enlarge and retry
  }
  throw WindowTooSmall("lattice system: Euler characteristic did not stabilize");
}

std::vector<fq_t> LatticeSystem::embed(const AdeleVec& v) const {
  const GF& k = curve_->base();
  std::vector<fq_t> row(cells_.size(), 0);
  for (const auto& [pid, vec] : v) {
    if (!mlow_.count(pid)) throw Error("adele supported outside the lattice system");
    const GF& rf = *curve_->place(pid).residue;
    const SubfieldCoords& sc = *coords_.at(pid);
    for (int comp = 0; comp < r_; ++comp) {
      const Laurent& x = vec[comp];
      if (x.known_zero()) continue;
      if (x.lo() < -mlow_.at(pid)) throw WindowTooSmall("adele deeper than window");
      for (int e = x.lo(); e < std::min(x.prec(), khigh_.at(pid)); ++e) {
        fq_t val = x.coeff(e).a0.v;
        if (!val) continue;
        fq_t cs[8];
        sc.coords(val, cs);
        for (int sub = 0; sub < sc.dim(); ++sub)
          if (cs[sub]) {
            int idx = cell_index_.at({pid, e, comp, sub});
            row[idx] = k.add(row[idx], cs[sub]);
          }
      }
      if (x.prec() < khigh_.at(pid))
        throw PrecisionExhausted("adele datum not known through the window");
    }
  }
  return row;
}

std::vector<fq_t> LatticeSystem::h1_coords(const AdeleVec& v) const {
  const GF& k = curve_->base();
  std::vector<fq_t> row = embed(v);
  // reduce against the rref rows
  for (size_t i = 0; i < rel_pivots_.size(); ++i) {
    int pc = rel_pivots_[i];
    fq_t c = row[pc];
    if (!c) continue;
    for (size_t j = 0; j < row.size(); ++j)
      row[j] = k.sub(row[j], k.mul(c, rel_rref_.at(static_cast<int>(i), static_cast<int>(j))));
  }
  std::vector<fq_t> out(nonpivot_cols_.size());
  for (size_t i = 0; i < nonpivot_cols_.size(); ++i) out[i] = row[nonpivot_cols_[i]];
  return out;
}

LatticeSystem::AdeleVec LatticeSystem::h1_rep(int i) const {
  const Cell& c = cells_.at(nonpivot_cols_.at(i));
  const GF& rf = *curve_->place(c.pid).residue;
  fq_t be = 1;
  for (int s = 0; s < c.sub; ++s) be = rf.mul(be, rf.generator());
  AdeleVec v;
  std::vector<Laurent> vec(r_, Laurent::zero(rf, khigh_.at(c.pid)));
  vec[c.comp] = Laurent::monomial(Dual(Fq(rf, be)), c.expo, khigh_.at(c.pid));
  v[c.pid] = vec;
  return v;
}

std::optional<std::vector<Fn>> LatticeSystem::global_witness(const AdeleVec& v) const {
  const GF& k = curve_->base();
  std::vector<fq_t> target = embed(v);
  int C = static_cast<int>(cells_.size());
  int G = static_cast<int>(glob_rows_.size());
  int L = static_cast<int>(lat_rows_.size());
  FqMat sys(k, C, G + L);
  for (int j = 0; j < G; ++j)
    for (int i = 0; i < C; ++i) sys.at(i, j) = glob_rows_[j][i];
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < C; ++i) sys.at(i, G + j) = lat_rows_[j][i];
  auto sol = sys.solve(target);
  if (!sol) return std::nullopt;
  std::vector<Fn> out(r_, curve_->fn_zero());
  for (int j = 0; j < G; ++j) {
    fq_t c = (*sol)[j];
    if (!c) continue;
    for (int comp = 0; comp < r_; ++comp)
      if (!glob_fns_[j][comp].is_zero())
        out[comp] = curve_->add(out[comp], curve_->mul_scalar(glob_fns_[j][comp], c));
  }
  return out;
}

LatticeSystem line_bundle_system(Curve& c, const Divisor& d, int margin,
                                 const std::vector<int>& extra_support) {
  std::vector<LocalLattice> lats;
  for (const auto& [pid, m] : d) {
    if (m == 0) continue;
    const GF& rf = *c.place(pid).residue;
    LocalLattice l;
    l.pid = pid;
    l.mat = {Laurent::t_pow(rf, -m, 64)};
    lats.push_back(l);
  }
  return LatticeSystem(c, 1, std::move(lats), margin, extra_support);
}

}  // namespace nilhecke
