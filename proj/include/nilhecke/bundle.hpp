#pragma once

#include <functional>
#include <set>
#include <unordered_map>

#include "nilhecke/lattice.hpp"
#include "nilhecke/mat2.hpp"

namespace nilhecke {

// Finite-support adelic 2x2 matrix over C = C-bar x Spec(k[eps]/eps^2);
// identity off the support.
struct AdelicMatrix {
  std::map<int, Mat2> local;  // pid -> local matrix over the residue field

  static AdelicMatrix identity() { return {}; }
  const Mat2* at(int pid) const {
    auto it = local.find(pid);
    return it == local.end() ? nullptr : &it->second;
  }
};

AdelicMatrix amul(const Curve& c, const AdelicMatrix& a, const AdelicMatrix& b, int prec);
AdelicMatrix ainv(const Curve& c, const AdelicMatrix& a);
AdelicMatrix atranspose_inv(const Curve& c, const AdelicMatrix& a);

// Determinant class in Pic(C) = Pic(C-bar) x H^1(O).
struct PicC {
  PicBar bar;
  std::vector<fq_t> eps;
  bool operator==(const PicC& o) const { return bar == o.bar && eps == o.eps; }
  bool operator<(const PicC& o) const { return std::tie(bar, eps) < std::tie(o.bar, o.eps); }
};

struct BundleClass {
  int red = -1;
  std::vector<fq_t> fib;
  bool operator==(const BundleClass& o) const { return red == o.red && fib == o.fib; }
  bool operator<(const BundleClass& o) const { return std::tie(red, fib) < std::tie(o.red, o.fib); }
};

enum class RedType { Split, DiagSame, Atiyah, StableOdd };

struct Reduction {
  RedType type = RedType::Split;
  PicBar sub, quot;
  int gap = 0;
  AdelicMatrix rep;
  std::shared_ptr<LatticeSystem> fiber;
  int h = 0;
  std::vector<FqMat> aut_action;
  long long aut_bar = 1;
  int h0_end = 0;
  bool split_model = false;
  int b_dim = 0;
  FqMat to_AB, from_AB;
};

class Window {
 public:
  Window(Curve& curve, const PicC& det, int gap_bound, int prec = 24);

  Curve& curve() const { return *curve_; }
  const PicC& det() const { return det_; }
  int gap_bound() const { return gap_; }
  int prec() const { return prec_; }

  const std::vector<Reduction>& reductions() const { return reds_; }
  int class_count();
  const std::vector<BundleClass>& classes();
  int class_id(const BundleClass& b);

  std::vector<fq_t> orbit_rep(int red, const std::vector<fq_t>& coords) const;
  long long orbit_size(int red, const std::vector<fq_t>& rep) const;
  long long stab_order(const BundleClass& b) const;
  long long aut_order(const BundleClass& b) const;
  AdelicMatrix class_rep(const BundleClass& b) const;
  // the central eps-factor realizing this window's determinant eps-label
  AdelicMatrix det_eps_factor() const;

  std::optional<BundleClass> canonicalize(const AdelicMatrix& g);

  // Affine transport of eps-data through a fixed reduction-level product:
  // X (fiber of src) and lambda (coefficients of eps_dirs) map to the class
  // of (1 + eps*(X + sum lam_j D_j)) * M in this window.
  struct Transport {
    bool oow = true;
    int target_red = -1;
    FqMat lin;
    std::vector<fq_t> base;
    int h_src = 0;
  };
  Transport transport(const Reduction* src, const AdelicMatrix& m,
                      const std::vector<AdelicMatrix>& eps_dirs);
  BundleClass apply_transport(const Transport& t, const std::vector<fq_t>& x,
                              const std::vector<fq_t>& lam) const;

  LatticeSystem& h1o() { return *h1o_; }
  std::vector<fq_t> det_eps_coords(const Laurent& loc, int pid);
  const std::vector<int>& support() const { return support_; }
  int fiber_rank() const;

 private:
  struct FiberExt {
    std::shared_ptr<LatticeSystem> sys;
    FqMat conv;  // base coords = conv * ext coords
  };
  struct ClassifyInfo {
    bool oow = true;
    int red = -1;
    std::array<Fn, 4> gamma;  // iso transform, applied on the left
  };

  void build_reductions();
  Reduction make_reduction(RedType type, const PicBar& sub, const PicBar& quot);
  void finish_reduction(Reduction& r);
  std::shared_ptr<LatticeSystem> build_fiber_system(const Reduction& r, const std::set<int>& extra,
                                                    int margin) const;
  LatticeSystem& fiber_ext(int red, const std::set<int>& extra, FqMat** conv);
  LatticeSystem& h1o_ext(const std::set<int>& extra, FqMat** conv);
  ClassifyInfo classify(const AdelicMatrix& g);
  std::vector<Laurent> to_basis(const Mat2& x) const;
  Mat2 from_basis(const std::vector<Laurent>& v) const;
  std::set<int> fnmat_places(const std::array<Fn, 4>& m) const;

  Curve* curve_;
  PicC det_;
  int gap_, prec_;
  std::vector<int> support_;
  std::vector<Reduction> reds_;
  std::shared_ptr<LatticeSystem> h1o_;
  std::vector<BundleClass> classes_;
  std::map<BundleClass, int> class_ids_;
  bool classes_built_ = false;
  mutable std::map<std::vector<fq_t>, std::vector<fq_t>> orbit_cache_[64];
  std::map<std::pair<int, std::vector<int>>, FiberExt> ext_fibers_;
  std::map<std::vector<int>, FiberExt> ext_h1o_;
  std::map<std::string, ClassifyInfo> classify_cache_;
};

struct CBundleCohomology {
  int h0 = 0, h1 = 0;
};
CBundleCohomology c_bundle_cohomology(Curve& c, const AdelicMatrix& g, int prec = 24);

PicC picc_add(const Curve& c, const PicC& a, const PicC& b);
PicC picc_neg(const Curve& c, const PicC& a);
PicC picc_zero(const Curve& c);

// determinant divisor class of the reduction of g
PicBar det_class_bar(Curve& c, const AdelicMatrix& g);

}  // namespace nilhecke
