#include "nilhecke/mat2.hpp"

#include <sstream>

namespace nilhecke {

Mat2 Mat2::identity(const GF& k, int prec) {
  Laurent one = Laurent::t_pow(k, 0, prec), zero = Laurent::zero(k, prec);
  return Mat2(one, zero, zero, one);
}

Mat2 Mat2::zero(const GF& k, int prec) {
  Laurent z = Laurent::zero(k, prec);
  return Mat2(z, z, z, z);
}

Mat2 Mat2::diag(const Laurent& a, const Laurent& d) {
  Laurent z = Laurent::zero(a.field(), std::min(a.prec(), d.prec()));
  return Mat2(a, z, z, d);
}

Mat2 Mat2::unipotent_lower_eps(const Laurent& x) {
  const GF& k = x.field();
  Mat2 m = identity(k, x.prec());
  Laurent ex = x.mul_scalar(Dual::eps(k));
  m.at(1, 0) = ex;
  return m;
}

Mat2 Mat2::unipotent_upper(const Laurent& x) {
  Mat2 m = identity(x.field(), x.prec());
  m.at(0, 1) = x;
  return m;
}

Mat2 Mat2::unipotent_lower(const Laurent& x) {
  Mat2 m = identity(x.field(), x.prec());
  m.at(1, 0) = x;
  return m;
}

int Mat2::prec() const {
  int p = e_[0].prec();
  for (int i = 1; i < 4; ++i) p = std::min(p, e_[i].prec());
  return p;
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.at(i, j) = at(i, 0) * o.at(0, j) + at(i, 1) * o.at(1, j);
  return r;
}

Mat2 Mat2::operator+(const Mat2& o) const {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

Mat2 Mat2::operator-(const Mat2& o) const {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

Mat2 Mat2::mul_scalar(const Laurent& s) const {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e_[i] = e_[i] * s;
  return r;
}

Laurent Mat2::det() const { return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0); }

Mat2 Mat2::inverse() const {
  Laurent d = det();
  Laurent di;
  try {
    di = d.inverse();
  } catch (const NotAUnit&) {
    throw NotInvertible();
  } catch (const PrecisionExhausted&) {
    throw NotInvertible("determinant vanishes to working precision");
  }
  Mat2 adj(at(1, 1), -at(0, 1), -at(1, 0), at(0, 0));
  return adj.mul_scalar(di);
}

Mat2 Mat2::transpose() const { return Mat2(at(0, 0), at(1, 0), at(0, 1), at(1, 1)); }

Mat2 Mat2::reduction() const {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e_[i] = e_[i].reduction();
  return r;
}

Mat2 Mat2::eps_part() const {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e_[i] = e_[i].eps_part();
  return r;
}

Mat2 Mat2::truncated(int np) const {
  Mat2 r;
  for (int i = 0; i < 4; ++i) r.e_[i] = e_[i].truncated(np);
  return r;
}

bool Mat2::is_integral() const {
  for (int i = 0; i < 4; ++i)
    if (!e_[i].is_integral()) return false;
  return true;
}

bool Mat2::in_glo() const {
  if (!is_integral()) return false;
  Laurent d = det();
  return d.is_unit_integral();
}

bool Mat2::is_upper_triangular() const { return at(1, 0).known_zero(); }

bool Mat2::equals(const Mat2& o) const {
  for (int i = 0; i < 4; ++i)
    if (!e_[i].equals(o.e_[i])) return false;
  return true;
}

std::string Mat2::to_string() const {
  std::ostringstream os;
  os << "[[" << at(0, 0).to_string() << "," << at(0, 1).to_string() << "],[" << at(1, 0).to_string()
     << "," << at(1, 1).to_string() << "]]";
  return os.str();
}

Mat2 Mat2::parse(const GF& k, const std::string& text, int default_prec) {
  // format [[a,b],[c,d]] with entries in the ring grammar
  std::vector<std::string> cells;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '[') {
      ++depth;
      continue;
    }
    if (ch == ']') {
      --depth;
      if (!cur.empty()) {
        cells.push_back(cur);
        cur.clear();
      }
      continue;
    }
    if (ch == ',' && depth <= 1) continue;
    if (ch == ',' && depth == 2) {
      cells.push_back(cur);
      cur.clear();
      continue;
    }
    cur.push_back(ch);
  }
  if (cells.size() != 4) throw ConfigError("matrix text must have 4 entries: " + text);
  return Mat2(Laurent::parse(k, cells[0], default_prec), Laurent::parse(k, cells[1], default_prec),
              Laurent::parse(k, cells[2], default_prec), Laurent::parse(k, cells[3], default_prec));
}

Mat2 iwasawa_stratum_rep(const GF& k, int n, int prec) {
  Mat2 m = Mat2::identity(k, prec);
  m.at(1, 0) = Laurent::monomial(Dual::eps(k), -n, prec);
  return m;
}

IwasawaDatum iwasawa_decompose(const Mat2& g) {
  const GF& k = g.field();
  int prec = g.prec();

  Laurent dg = g.det();
  if (dg.known_zero()) throw NotInvertible("zero determinant at working precision");
  {
    auto v = dg.valuation();
    if (v.eps_torsion) throw NotInvertible("determinant is eps-torsion");
  }

  // Step 1: column-reduce the reduction to upper triangular form,
  // accumulating the inverse of the applied column operations.
  Mat2 red = g.reduction();
  Mat2 E = Mat2::identity(k, prec);  // g * E upper triangular mod eps
  Laurent c = red.at(1, 0), d = red.at(1, 1);
  auto val_or_inf = [&](const Laurent& x) {
    if (x.known_zero()) return x.prec();
    auto v = x.valuation();
    return v.v;
  };
  if (!c.known_zero()) {
    if (val_or_inf(d) > val_or_inf(c)) {
      // swap columns
      Mat2 w = Mat2::zero(k, prec);
      w.at(0, 1) = Laurent::t_pow(k, 0, prec);
      w.at(1, 0) = Laurent::t_pow(k, 0, prec);
      E = E * w;
      red = red * w;
      std::swap(c, d);
    }
    // col1 -= (c/d) col2, with c/d integral
    Laurent ratio = c * d.inverse();
    if (!ratio.is_integral()) throw PrecisionExhausted("iwasawa: non-integral elimination ratio");
    Mat2 elim = Mat2::identity(k, prec);
    elim.at(1, 0) = -ratio;
    E = E * elim;
  }
  Mat2 h = g * E;
  if (!h.reduction().at(1, 0).known_zero())
    throw PrecisionExhausted("iwasawa: reduction not triangulated at working precision");

  // Step 2: peel the eps-part of the (2,1) entry.
  // h = b1 (1 + eps Z) with b1 the upper-triangular part of h.
  Mat2 b1 = h;
  b1.at(1, 0) = Laurent::zero(k, h.at(1, 0).prec());
  Laurent x = h.at(1, 0).eps_part();  // h21 = eps * x
  Laurent h11 = h.at(0, 0).reduction(), h12 = h.at(0, 1).reduction(),
          h22 = h.at(1, 1).reduction();
  // Z = b1^{-1} x E21: Z11 = -x h12/(h11 h22), Z21 = x/h22.
  Laurent z21 = x * h22.inverse();
  Laurent z11 = -(x * h12) * (h11 * h22).inverse();

  // Split z21 into principal and integral parts.
  Laurent z_neg = Laurent::zero(k, z21.prec()), z_int = Laurent::zero(k, z21.prec());
  for (int e = z21.lo(); e < z21.prec(); ++e) {
    Dual ce = z21.coeff(e);
    if (ce.is_zero()) continue;
    if (e < 0)
      z_neg.set_coeff(e, ce);
    else
      z_int.set_coeff(e, ce);
  }

  Mat2 Yfac = Mat2::identity(k, prec);  // 1 + eps*(upper part of Z)
  Yfac.at(0, 0) = Laurent::t_pow(k, 0, prec) + z11.mul_scalar(Dual::eps(k));

  IwasawaDatum out;
  if (z_neg.known_zero()) {
    out.n = 0;
    out.b = b1 * Yfac;
    Mat2 kk = Mat2::identity(k, prec);
    kk.at(1, 0) = z_int.mul_scalar(Dual::eps(k));
    // the n = 0 representative 1 + eps*E21 lies in GL2(O); cancel it in k
    Mat2 undo = Mat2::identity(k, prec);
    undo.at(1, 0) = Laurent::constant(-Dual::eps(k), prec);
    out.k = undo * kk * E.inverse();
  } else {
    int n = -z_neg.valuation().v;
    out.n = n;
    Laurent u = z_neg.shift(n);  // unit of O-bar with u * t^{-n} = z_neg
    Mat2 du = Mat2::diag(Laurent::t_pow(k, 0, prec), u);
    out.b = b1 * Yfac * du;
    Mat2 kk = Mat2::identity(k, prec);
    kk.at(1, 0) = z_int.mul_scalar(Dual::eps(k));
    out.k = Mat2::diag(Laurent::t_pow(k, 0, prec), u.inverse()) * kk * E.inverse();
  }

  if (!out.b.is_upper_triangular()) throw PrecisionExhausted("iwasawa: b not triangular");
  if (!out.k.in_glo()) throw PrecisionExhausted("iwasawa: k not in GL2(O) at working precision");
  Mat2 recomposed = out.b * iwasawa_stratum_rep(k, out.n, prec) * out.k;
  if (!recomposed.equals(g.truncated(recomposed.prec())))
    throw PrecisionExhausted("iwasawa: recomposition mismatch at working precision");
  return out;
}

}  // namespace nilhecke
