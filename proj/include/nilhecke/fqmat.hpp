#pragma once

#include <vector>

#include "nilhecke/fq.hpp"

namespace nilhecke {

// Dense matrix over a tabled finite field with the elimination routines the
// solvers need.  Row-major.
class FqMat {
 public:
  FqMat() = default;
  FqMat(const GF& k, int rows, int cols) : k_(&k), r_(rows), c_(cols), d_(rows * cols, 0) {}

  const GF& field() const { return *k_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  fq_t at(int i, int j) const { return d_[i * c_ + j]; }
  fq_t& at(int i, int j) { return d_[i * c_ + j]; }

  FqMat operator*(const FqMat& o) const {
    FqMat out(*k_, r_, o.c_);
    for (int i = 0; i < r_; ++i)
      for (int l = 0; l < c_; ++l) {
        fq_t v = at(i, l);
        if (!v) continue;
        for (int j = 0; j < o.c_; ++j)
          out.at(i, j) = k_->add(out.at(i, j), k_->mul(v, o.at(l, j)));
      }
    return out;
  }

  // In-place reduced row echelon form; returns pivot columns.
  std::vector<int> rref() {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < c_ && row < r_; ++col) {
      int piv = -1;
      for (int i = row; i < r_; ++i)
        if (at(i, col)) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      if (piv != row)
        for (int j = 0; j < c_; ++j) std::swap(at(piv, j), at(row, j));
      fq_t inv = k_->inv(at(row, col));
      for (int j = 0; j < c_; ++j) at(row, j) = k_->mul(at(row, j), inv);
      for (int i = 0; i < r_; ++i) {
        if (i == row) continue;
        fq_t f = at(i, col);
        if (!f) continue;
        for (int j = 0; j < c_; ++j) at(i, j) = k_->sub(at(i, j), k_->mul(f, at(row, j)));
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  int rank() const {
    FqMat m = *this;
    return static_cast<int>(m.rref().size());
  }

  // Basis of the right kernel, one vector per row of the result.
  FqMat kernel() const {
    FqMat m = *this;
    std::vector<int> piv = m.rref();
    std::vector<bool> is_piv(c_, false);
    for (int p : piv) is_piv[p] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < c_; ++j)
      if (!is_piv[j]) free_cols.push_back(j);
    FqMat ker(*k_, static_cast<int>(free_cols.size()), c_);
    for (size_t fi = 0; fi < free_cols.size(); ++fi) {
      int fc = free_cols[fi];
      ker.at(static_cast<int>(fi), fc) = 1;
      for (size_t pi = 0; pi < piv.size(); ++pi)
        ker.at(static_cast<int>(fi), piv[pi]) = k_->neg(m.at(static_cast<int>(pi), fc));
    }
    return ker;
  }

  FqMat inverse() const {
    if (r_ != c_) throw Error("inverse of non-square matrix");
    FqMat aug(*k_, r_, 2 * c_);
    for (int i = 0; i < r_; ++i) {
      for (int j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
      aug.at(i, c_ + i) = 1;
    }
    auto piv = aug.rref();
    for (int i = 0; i < r_; ++i)
      if (i >= static_cast<int>(piv.size()) || piv[i] != i) throw Error("singular matrix");
    FqMat out(*k_, r_, c_);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) out.at(i, j) = aug.at(i, c_ + j);
    return out;
  }

  // Solve A x = b (A = *this); returns empty optional if inconsistent.
  std::optional<std::vector<fq_t>> solve(const std::vector<fq_t>& b) const {
    FqMat aug(*k_, r_, c_ + 1);
    for (int i = 0; i < r_; ++i) {
      for (int j = 0; j < c_; ++j) aug.at(i, j) = at(i, j);
      aug.at(i, c_) = b[i];
    }
    std::vector<int> piv = aug.rref();
    for (int p : piv)
      if (p == c_) return std::nullopt;
    std::vector<fq_t> x(c_, 0);
    for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug.at(static_cast<int>(i), c_);
    return x;
  }

 private:
  const GF* k_ = nullptr;
  int r_ = 0, c_ = 0;
  std::vector<fq_t> d_;
};

// Coordinates of elements of F_{q^d} over F_q in the basis {G^j} (G the
// multiplicative generator of the big field).  Built once per field pair.
class SubfieldCoords {
 public:
  SubfieldCoords(const GF& small, const GF& big);
  int dim() const { return d_; }
  // coords of a big-field element as d small-field elements
  void coords(fq_t big_el, fq_t* out) const;
  fq_t lift(const fq_t* small_els) const;  // inverse map

 private:
  const GF *small_, *big_;
  int d_;
  std::vector<fq_t> coord_table_;  // big.q * d
  std::vector<fq_t> basis_;        // G^j
  std::vector<fq_t> emb_;
};

}  // namespace nilhecke
