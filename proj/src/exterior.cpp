#include "singlab/exterior.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

void enumerate_sets(int d, int l, IndexSet& cur, int next, std::vector<IndexSet>& out) {
  if (static_cast<int>(cur.size()) == l) {
    out.push_back(cur);
    return;
  }
  int need = l - static_cast<int>(cur.size());
  for (int i = next; i + need - 1 <= d; ++i) {
    cur.push_back(i);
    enumerate_sets(d, l, cur, i + 1, out);
    cur.pop_back();
  }
}

double minor_det(const Eigen::MatrixXd& M, const IndexSet& rows, const IndexSet& cols) {
  int l = static_cast<int>(rows.size());
  if (l == 1) return M(rows[0] - 1, cols[0] - 1);
  Eigen::MatrixXd sub(l, l);
  for (int r = 0; r < l; ++r)
    for (int c = 0; c < l; ++c) sub(r, c) = M(rows[r] - 1, cols[c] - 1);
  if (l == 2) return sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0);
  if (l == 3) return sub.determinant();
  return Eigen::PartialPivLU<Eigen::MatrixXd>(sub).determinant();
}

}  // namespace

const std::vector<IndexSet>& index_sets(int d, int l) {
  if (d < 1 || d > kMaxDim) fail(Errc::DimensionMismatch, "ambient dimension out of range");
  if (l < 0 || l > d) fail(Errc::GradeOutOfRange, "grade out of range");
  static std::map<std::pair<int, int>, std::vector<IndexSet>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(d, l);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<IndexSet> sets;
  IndexSet cur;
  if (l == 0) {
    sets.push_back({});
  } else {
    enumerate_sets(d, l, cur, 1, sets);
  }
  return cache.emplace(key, std::move(sets)).first->second;
}

int index_set_position(int d, const IndexSet& I) {
  const auto& sets = index_sets(d, static_cast<int>(I.size()));
  auto it = std::lower_bound(sets.begin(), sets.end(), I);
  if (it == sets.end() || *it != I) fail(Errc::IndexOutOfRange, "index set not found");
  return static_cast<int>(it - sets.begin());
}

bool in_plus_family(const IndexSet& I, int m, int l) {
  int count = 0;
  for (int i : I)
    if (i <= m) ++count;
  return count == std::min(l, m);
}

WedgeVector::WedgeVector(int d, int l) : d_(d), l_(l) {
  if (d < 1 || d > kMaxDim) fail(Errc::DimensionMismatch, "ambient dimension out of range");
  if (l < 1 || l > d) fail(Errc::GradeOutOfRange, "grade out of range");
  coords_.assign(index_sets(d, l).size(), 0.0);
}

WedgeVector WedgeVector::basis(int d, const IndexSet& I) {
  WedgeVector v(d, static_cast<int>(I.size()));
  v.set_coord(I, 1.0);
  return v;
}

double WedgeVector::coord(const IndexSet& I) const { return coords_[index_set_position(d_, I)]; }

void WedgeVector::set_coord(const IndexSet& I, double v) {
  coords_[index_set_position(d_, I)] = v;
}

double WedgeVector::sup_norm() const {
  double best = 0;
  for (double c : coords_) best = std::max(best, std::abs(c));
  return best;
}

WedgeVector& WedgeVector::operator+=(const WedgeVector& o) {
  if (o.d_ != d_ || o.l_ != l_) fail(Errc::DimensionMismatch, "wedge vector shape mismatch");
  for (size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

WedgeVector& WedgeVector::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

WedgeVector wedge_action(const Eigen::MatrixXd& M, const WedgeVector& v) {
  if (M.rows() != v.dim() || M.cols() != v.dim())
    fail(Errc::DimensionMismatch, "matrix does not act on this wedge vector");
  const auto& sets = index_sets(v.dim(), v.grade());
  WedgeVector out(v.dim(), v.grade());
  for (size_t ip = 0; ip < sets.size(); ++ip) {
    double acc = 0;
    for (size_t jp = 0; jp < sets.size(); ++jp) {
      double c = v[static_cast<int>(jp)];
      if (c == 0.0) continue;
      acc += minor_det(M, sets[ip], sets[jp]) * c;
    }
    out[static_cast<int>(ip)] = acc;
  }
  return out;
}

WedgeVector wedge_of_columns(const Eigen::MatrixXd& cols) {
  int d = static_cast<int>(cols.rows());
  int l = static_cast<int>(cols.cols());
  if (l < 1 || l > d) fail(Errc::GradeOutOfRange, "column count out of range");
  const auto& sets = index_sets(d, l);
  WedgeVector out(d, l);
  IndexSet all_cols(l);
  for (int c = 0; c < l; ++c) all_cols[c] = c + 1;
  for (size_t ip = 0; ip < sets.size(); ++ip) {
    out[static_cast<int>(ip)] = minor_det(cols, sets[ip], all_cols);
  }
  return out;
}

WedgeVector project_plus(const WedgeVector& v, int m) {
  int l = v.grade();
  if (l < 1 || l > v.dim() - 1) fail(Errc::GradeOutOfRange, "projection grade");
  const auto& sets = index_sets(v.dim(), l);
  WedgeVector out(v.dim(), l);
  for (size_t i = 0; i < sets.size(); ++i)
    if (in_plus_family(sets[i], m, l)) out[static_cast<int>(i)] = v[static_cast<int>(i)];
  return out;
}

WedgeVector project_minus(const WedgeVector& v, int m) {
  int l = v.grade();
  if (l < 1 || l > v.dim() - 1) fail(Errc::GradeOutOfRange, "projection grade");
  const auto& sets = index_sets(v.dim(), l);
  WedgeVector out(v.dim(), l);
  for (size_t i = 0; i < sets.size(); ++i)
    if (!in_plus_family(sets[i], m, l)) out[static_cast<int>(i)] = v[static_cast<int>(i)];
  return out;
}

double gt_wedge_exponent(const Weights& W, const IndexSet& I) {
  double e = 0;
  for (int i : I) {
    if (i < 1 || i > W.d()) fail(Errc::IndexOutOfRange, "index set entry");
    if (i <= W.m())
      e += W.a(i);
    else
      e -= W.b(i - W.m());
  }
  return e;
}

Rat gt_wedge_exponent_rat(const Weights& W, const IndexSet& I) {
  Rat e(0);
  for (int i : I) {
    if (i < 1 || i > W.d()) fail(Errc::IndexOutOfRange, "index set entry");
    if (i <= W.m())
      e += W.a_rat(i);
    else
      e -= W.b_rat(i - W.m());
  }
  return e;
}

double min_plus_exponent(const Weights& W, int l) {
  if (l < 1 || l > W.d() - 1) fail(Errc::IndexOutOfRange, "grade");
  double best = 0;
  bool first = true;
  for (const IndexSet& I : index_sets(W.d(), l)) {
    if (!in_plus_family(I, W.m(), l)) continue;
    double e = gt_wedge_exponent(W, I);
    if (first || e < best) {
      best = e;
      first = false;
    }
  }
  return best;
}

Rat min_plus_exponent_rat(const Weights& W, int l) {
  if (l < 1 || l > W.d() - 1) fail(Errc::IndexOutOfRange, "grade");
  Rat best(0);
  bool first = true;
  for (const IndexSet& I : index_sets(W.d(), l)) {
    if (!in_plus_family(I, W.m(), l)) continue;
    Rat e = gt_wedge_exponent_rat(W, I);
    if (first || e < best) {
      best = e;
      first = false;
    }
  }
  return best;
}

double wedge_operator_norm(const Eigen::MatrixXd& M, int lmax) {
  int d = static_cast<int>(M.rows());
  if (M.cols() != d) fail(Errc::DimensionMismatch, "operator norm needs a square matrix");
  double norm = 0;
  for (int l = 1; l <= lmax; ++l) {
    const auto& sets = index_sets(d, l);
    for (const IndexSet& I : sets) {
      double row = 0;
      for (const IndexSet& J : sets) row += std::abs(minor_det(M, I, J));
      norm = std::max(norm, row);
    }
  }
  return norm;
}

Eigen::MatrixXd u_theta(const Eigen::MatrixXd& theta) {
  int m = static_cast<int>(theta.rows());
  int n = static_cast<int>(theta.cols());
  Eigen::MatrixXd u = Eigen::MatrixXd::Identity(m + n, m + n);
  u.block(0, m, m, n) = theta;
  return u;
}

Eigen::MatrixXd g_t(const Weights& W, double t) {
  if (!(t > 0)) fail(Errc::IndexOutOfRange, "flow time must be positive");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(W.d(), W.d());
  for (int i = 1; i <= W.m(); ++i) g(i - 1, i - 1) = std::pow(t, W.a(i));
  for (int j = 1; j <= W.n(); ++j) g(W.m() + j - 1, W.m() + j - 1) = std::pow(t, -W.b(j));
  return g;
}

}  // namespace singlab
