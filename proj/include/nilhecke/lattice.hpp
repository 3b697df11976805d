#pragma once

#include <map>
#include <optional>

#include "nilhecke/curve.hpp"
#include "nilhecke/fqmat.hpp"

namespace nilhecke {

// A rank-r lattice family over the reduced curve: at each support place the
// local lattice is A_p * O_p^r (A_p over the residue field), the standard
// lattice elsewhere.  Computes exact H^0 and H^1 with explicit bases,
// coordinates of adelic classes, and kernel witnesses, all by F_q linear
// algebra on windowed principal parts against Riemann-Roch candidate spaces.
struct LocalLattice {
  int pid = 0;
  std::vector<Laurent> mat;  // r x r row-major, eps-free
};

class LatticeSystem {
 public:
  // pid -> local r-vector with bounded poles
  using AdeleVec = std::map<int, std::vector<Laurent>>;

  LatticeSystem(Curve& curve, int r, std::vector<LocalLattice> lats, int margin = 0,
                const std::vector<int>& extra_support = {}, bool h0_only = false);

  int rank() const { return r_; }
  int h0() const { return static_cast<int>(h0_basis_.size()); }
  int h1() const { return h1_dim_; }
  const std::vector<std::vector<Fn>>& h0_basis() const { return h0_basis_; }

  std::vector<fq_t> h1_coords(const AdeleVec& v) const;
  // representative adele for each H^1 coordinate vector e_i
  AdeleVec h1_rep(int i) const;
  // if the class of v is zero, produce the global r-vector witnessing it
  std::optional<std::vector<Fn>> global_witness(const AdeleVec& v) const;

  // expected Euler characteristic from the determinant ledger (consistency)
  int expected_chi() const { return chi_; }
  int window_high(int pid) const { return khigh_.at(pid); }
  int window_low(int pid) const { return mlow_.at(pid); }
  bool has_place(int pid) const { return khigh_.count(pid) > 0; }

 private:
  struct Cell {  // one F_q coordinate of the window at a place
    int pid;
    int expo;
    int comp;   // which of the r coordinates
    int sub;    // residue-field coordinate index
  };
  std::vector<fq_t> embed(const AdeleVec& v) const;
  void build();

  Curve* curve_;
  int r_;
  std::vector<LocalLattice> lats_;
  int margin_;
  bool h0_only_ = false;
  std::map<int, int> mlow_, khigh_;  // per place: window [-mlow, khigh)
  std::vector<Cell> cells_;
  std::map<std::tuple<int, int, int, int>, int> cell_index_;
  std::vector<std::vector<Fn>> h0_basis_;
  int h1_dim_ = 0;
  int chi_ = 0;
  FqMat rel_rref_;               // rref of the relation space (globals + lattice)
  std::vector<int> rel_pivots_;
  std::vector<int> nonpivot_cols_;
  // relation generators kept for witness extraction
  std::vector<std::vector<fq_t>> glob_rows_;
  std::vector<std::vector<Fn>> glob_fns_;
  std::vector<std::vector<fq_t>> lat_rows_;
  std::map<int, std::shared_ptr<SubfieldCoords>> coords_;
};

// Convenience: line-bundle lattice family for O(D)-type twists given by an
// idele (valuation data): lattice at p is t^{-n_p} O_p.
LatticeSystem line_bundle_system(Curve& c, const Divisor& d, int margin = 0,
                                 const std::vector<int>& extra_support = {});

}  // namespace nilhecke
