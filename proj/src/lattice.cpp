#include "singlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

constexpr double kLllDelta = 0.99;

struct Gso {
  Eigen::MatrixXd mu;        // mu(i, j), j < i
  Eigen::VectorXd bstar_sq;  // squared norms of the orthogonalized columns
};

Gso compute_gso(const Eigen::MatrixXd& B) {
  int d = static_cast<int>(B.cols());
  Gso g;
  g.mu = Eigen::MatrixXd::Zero(d, d);
  g.bstar_sq = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd bstar = B;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      double denom = g.bstar_sq(j);
      if (!(denom > 0)) fail(Errc::NumericalInstability, "degenerate Gram-Schmidt norm");
      g.mu(i, j) = B.col(i).dot(bstar.col(j)) / denom;
      bstar.col(i) -= g.mu(i, j) * bstar.col(j);
    }
    g.bstar_sq(i) = bstar.col(i).squaredNorm();
    if (!std::isfinite(g.bstar_sq(i)) || !(g.bstar_sq(i) > 0))
      fail(Errc::NumericalInstability, "basis is numerically singular");
  }
  return g;
}

// Euclidean LLL on columns; U tracks the integer change of basis so that
// B_out = B_in * U.
void lll_reduce(Eigen::MatrixXd& B, Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& U) {
  int d = static_cast<int>(B.cols());
  U.setIdentity(d, d);
  if (d == 1) return;
  Gso g = compute_gso(B);
  int k = 1;
  int iters = 0;
  while (k < d) {
    if (++iters > 1000000) fail(Errc::NumericalInstability, "LLL failed to converge");
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(g.mu(k, j));
      if (q != 0) {
        B.col(k) -= q * B.col(j);
        U.col(k) -= static_cast<long long>(q) * U.col(j);
        g = compute_gso(B);
      }
    }
    if (g.bstar_sq(k) >= (kLllDelta - g.mu(k, k - 1) * g.mu(k, k - 1)) * g.bstar_sq(k - 1)) {
      ++k;
    } else {
      B.col(k).swap(B.col(k - 1));
      U.col(k).swap(U.col(k - 1));
      g = compute_gso(B);
      k = std::max(k - 1, 1);
    }
  }
}

// all x != 0 with ||B x||_2^2 <= e_sq, one per +/- pair (highest-index nonzero
// coordinate kept nonnegative)
void enumerate_ball(const Eigen::MatrixXd& B, double e_sq, uint64_t budget,
                    std::vector<Eigen::VectorXi>& out) {
  int d = static_cast<int>(B.cols());
  Gso g = compute_gso(B);
  Eigen::VectorXi x = Eigen::VectorXi::Zero(d);
  std::vector<double> centers(d, 0.0), partial(d + 1, 0.0);

  struct Frame {
    int hi = 0, cur = 0;
  };
  std::vector<Frame> stack(d);
  int level = d - 1;
  bool descend = true;
  while (level < d) {
    if (level < 0) {
      bool nonzero = false;
      for (int i = 0; i < d; ++i)
        if (x(i) != 0) nonzero = true;
      if (nonzero) {
        out.push_back(x);
        if (out.size() > budget) fail(Errc::BudgetExceeded, "enumeration budget exceeded");
      }
      level = 0;
      ++stack[0].cur;
      descend = false;
    }
    if (descend) {
      double c = 0;
      for (int j = level + 1; j < d; ++j) c += g.mu(j, level) * x(j);
      centers[level] = c;
      double room = e_sq - partial[level + 1];
      if (room < 0) room = 0;
      double half = std::sqrt(room / g.bstar_sq(level));
      int lo = static_cast<int>(std::ceil(-c - half - 1e-12));
      int hi = static_cast<int>(std::floor(-c + half + 1e-12));
      bool all_later_zero = true;
      for (int j = level + 1; j < d; ++j)
        if (x(j) != 0) all_later_zero = false;
      if (all_later_zero && lo < 0) lo = 0;  // sign canonicalization
      stack[level] = {hi, lo};
    }
    Frame& f = stack[level];
    if (f.cur > f.hi) {
      x(level) = 0;
      ++level;
      if (level < d) ++stack[level].cur;
      descend = false;
      continue;
    }
    x(level) = f.cur;
    double term = x(level) + centers[level];
    partial[level] = partial[level + 1] + g.bstar_sq(level) * term * term;
    if (partial[level] > e_sq * (1 + 1e-12)) {
      ++f.cur;
      descend = false;
      continue;
    }
    --level;
    descend = true;
  }
}

BigInt gcd_big(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// exact determinant of an l x l integer matrix (fraction-free elimination)
BigInt int_det(std::vector<BigInt> m, int l) {
  if (l == 1) return m[0];
  BigInt denom = 1;
  int sign = 1;
  for (int k = 0; k < l - 1; ++k) {
    int piv = -1;
    for (int r = k; r < l; ++r)
      if (m[static_cast<size_t>(r) * l + k] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return BigInt(0);
    if (piv != k) {
      for (int c = 0; c < l; ++c)
        std::swap(m[static_cast<size_t>(piv) * l + c], m[static_cast<size_t>(k) * l + c]);
      sign = -sign;
    }
    for (int r = k + 1; r < l; ++r) {
      for (int c = k + 1; c < l; ++c) {
        m[static_cast<size_t>(r) * l + c] =
            (m[static_cast<size_t>(r) * l + c] * m[static_cast<size_t>(k) * l + k] -
             m[static_cast<size_t>(r) * l + k] * m[static_cast<size_t>(k) * l + c]) /
            denom;
      }
      m[static_cast<size_t>(r) * l + k] = 0;
    }
    denom = m[static_cast<size_t>(k) * l + k];
  }
  return BigInt(sign) * m[static_cast<size_t>(l - 1) * l + (l - 1)];
}

bool same_parent(const Sublattice& A, const Sublattice& B) {
  return &A.parent() == &B.parent() || A.parent().basis().isApprox(B.parent().basis());
}

}  // namespace

Lattice::Lattice(Eigen::MatrixXd basis, bool exact_rational)
    : basis_(std::move(basis)), exact_rational_(exact_rational) {
  if (basis_.rows() != basis_.cols() || basis_.rows() < 1 || basis_.rows() > kMaxDim)
    fail(Errc::DimensionMismatch, "lattice basis must be square, dimension 1..8");
  double det = basis_.determinant();
  if (!std::isfinite(det) || det == 0)
    fail(Errc::NumericalInstability, "lattice basis is singular");
  det_log_ = std::log(std::abs(det));
  if (std::abs(std::abs(det) - 1.0) > 1e-9)
    fail(Errc::NumericalInstability, "lattice is not unimodular");
}

Lattice Lattice::standard(int d) { return Lattice(Eigen::MatrixXd::Identity(d, d), true); }

Eigen::VectorXd Lattice::vec(const Eigen::VectorXi& coords) const {
  return basis_ * coords.cast<double>();
}

LatticePoint shortest_vector(const Lattice& L) {
  int d = L.dim();
  Eigen::MatrixXd B = L.basis();
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> U;
  lll_reduce(B, U);
  double r0 = std::numeric_limits<double>::infinity();
  for (int c = 0; c < d; ++c) r0 = std::min(r0, B.col(c).lpNorm<Eigen::Infinity>());
  std::vector<Eigen::VectorXi> xs;
  enumerate_ball(B, static_cast<double>(d) * r0 * r0 * (1 + 1e-9), 4000000, xs);
  LatticePoint best;
  best.sup_norm = std::numeric_limits<double>::infinity();
  for (const auto& x : xs) {
    Eigen::VectorXd v = B * x.cast<double>();
    double s = v.lpNorm<Eigen::Infinity>();
    if (s < best.sup_norm) {
      best.sup_norm = s;
      best.vec = v;
      Eigen::VectorXi orig(d);
      for (int i = 0; i < d; ++i) {
        long long acc = 0;
        for (int j = 0; j < d; ++j) acc += U(i, j) * static_cast<long long>(x(j));
        orig(i) = static_cast<int>(acc);
      }
      best.coords = orig;
    }
  }
  if (!std::isfinite(best.sup_norm)) fail(Errc::NumericalInstability, "no shortest vector found");
  return best;
}

std::vector<LatticePoint> sup_ball(const Lattice& L, double R, uint64_t budget) {
  int d = L.dim();
  Eigen::MatrixXd B = L.basis();
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> U;
  lll_reduce(B, U);
  std::vector<Eigen::VectorXi> xs;
  enumerate_ball(B, static_cast<double>(d) * R * R * (1 + 1e-9), budget, xs);
  std::vector<LatticePoint> out;
  for (const auto& x : xs) {
    Eigen::VectorXd v = B * x.cast<double>();
    double s = v.lpNorm<Eigen::Infinity>();
    if (s > R * (1 + 1e-12)) continue;
    Eigen::VectorXi orig(d);
    long long g = 0;
    for (int i = 0; i < d; ++i) {
      long long acc = 0;
      for (int j = 0; j < d; ++j) acc += U(i, j) * static_cast<long long>(x(j));
      orig(i) = static_cast<int>(acc);
      g = std::gcd(g, std::abs(acc));
    }
    if (g != 1) continue;  // non-primitive coordinate vectors never enlarge a span
    out.push_back({orig, v, s});
  }
  return out;
}

Sublattice::Sublattice(const Lattice& parent, IntMat coords)
    : parent_(&parent), coords_(std::move(coords)) {
  if (coords_.rows() != parent.dim())
    fail(Errc::DimensionMismatch, "sublattice coordinates have wrong height");
  if (coords_.cols() > parent.dim()) fail(Errc::RankDeficient, "rank exceeds dimension");
  if (coords_.cols() > 0 && integer_rank(coords_) != coords_.cols())
    fail(Errc::RankDeficient, "sublattice coordinates are not independent");
}

Eigen::MatrixXd Sublattice::real_basis() const {
  Eigen::MatrixXd C(coords_.rows(), coords_.cols());
  for (int r = 0; r < coords_.rows(); ++r)
    for (int c = 0; c < coords_.cols(); ++c) C(r, c) = coords_.at(r, c).convert_to<double>();
  return parent_->basis() * C;
}

bool Sublattice::primitive() const {
  if (rank() == 0) return true;
  return is_primitive(coords_);
}

Sublattice Sublattice::saturation() const {
  if (rank() == 0) return *this;
  return Sublattice(*parent_, saturate_columns(coords_));
}

double sublattice_norm(const Sublattice& S) {
  if (S.rank() == 0) return 1.0;
  return wedge_of_columns(S.real_basis()).sup_norm();
}

double sublattice_norm_euclidean(const Sublattice& S) {
  if (S.rank() == 0) return 1.0;
  Eigen::MatrixXd G = S.real_basis();
  Eigen::MatrixXd gram = G.transpose() * G;
  double det = gram.determinant();
  if (det < 0) det = 0;
  return std::sqrt(det);
}

Sublattice intersect(const Sublattice& A, const Sublattice& B) {
  if (!same_parent(A, B)) fail(Errc::DimensionMismatch, "sublattices of different parents");
  if (A.rank() == 0 || B.rank() == 0) return Sublattice(A.parent(), IntMat(A.coords().rows(), 0));
  IntMat negB = B.coords();
  for (int r = 0; r < negB.rows(); ++r)
    for (int c = 0; c < negB.cols(); ++c) negB.at(r, c) = -negB.at(r, c);
  IntMat M = A.coords().hstack(negB);
  IntMat K = integer_kernel(M);
  IntMat xpart(A.coords().cols(), K.cols());
  for (int r = 0; r < xpart.rows(); ++r)
    for (int c = 0; c < K.cols(); ++c) xpart.at(r, c) = K.at(r, c);
  IntMat meet = A.coords().mul(xpart);
  return Sublattice(A.parent(), column_span_basis(meet));
}

Sublattice subgroup_sum(const Sublattice& A, const Sublattice& B, bool saturate) {
  if (!same_parent(A, B)) fail(Errc::DimensionMismatch, "sublattices of different parents");
  IntMat C = A.coords().hstack(B.coords());
  IntMat basis = column_span_basis(C);
  if (saturate && basis.cols() > 0) basis = saturate_columns(basis);
  return Sublattice(A.parent(), basis);
}

EmmDefect emm_defect(const Sublattice& A, const Sublattice& B, bool saturate_sum) {
  if (!A.primitive() || !B.primitive()) fail(Errc::NotPrimitive, "emm_defect inputs");
  Sublattice meet = intersect(A, B);
  Sublattice join = subgroup_sum(A, B, saturate_sum);
  EmmDefect d;
  d.rank_meet = meet.rank();
  d.rank_join = join.rank();
  d.sup = sublattice_norm(meet) * sublattice_norm(join) / (sublattice_norm(A) * sublattice_norm(B));
  d.euclidean = sublattice_norm_euclidean(meet) * sublattice_norm_euclidean(join) /
                (sublattice_norm_euclidean(A) * sublattice_norm_euclidean(B));
  return d;
}

double phi_l(const Lattice& L, int l, const PhiPolicy& policy) {
  int d = L.dim();
  if (l < 0 || l > d) fail(Errc::IndexOutOfRange, "phi grade");
  if (l == 0 || l == d) return 1.0;

  LatticePoint sv = shortest_vector(L);
  double lam1 = sv.sup_norm;

  // grade-l minors of the real basis; integer wedge coordinates of a
  // coordinate subset map through this to the real wedge of the sublattice
  const auto& sets = index_sets(d, l);
  int nsets = static_cast<int>(sets.size());
  Eigen::MatrixXd Wl(nsets, nsets);
  for (int ip = 0; ip < nsets; ++ip)
    for (int jp = 0; jp < nsets; ++jp) {
      Eigen::MatrixXd sub(l, l);
      for (int r = 0; r < l; ++r)
        for (int c = 0; c < l; ++c) sub(r, c) = L.basis()(sets[ip][r] - 1, sets[jp][c] - 1);
      Wl(ip, jp) = l == 1 ? sub(0, 0) : sub.determinant();
    }

  double R = policy.initial_radius > 0 ? policy.initial_radius : lam1;
  std::optional<double> prev;
  while (true) {
    auto pts = sup_ball(L, R, policy.vector_budget);
    std::optional<double> cur;
    size_t npts = pts.size();
    if (npts >= static_cast<size_t>(l)) {
      double logc = 0;
      for (int i = 0; i < l; ++i)
        logc += std::log(static_cast<double>(npts - i) / static_cast<double>(i + 1));
      if (logc > std::log(static_cast<double>(policy.subset_budget)))
        fail(Errc::BudgetExceeded, "phi_l subset budget exceeded");

      std::vector<int> idx(l);
      for (int i = 0; i < l; ++i) idx[i] = i;
      std::vector<BigInt> wint(nsets);
      std::vector<BigInt> minor(static_cast<size_t>(l) * l);
      while (true) {
        bool nonzero = false;
        for (int ip = 0; ip < nsets; ++ip) {
          for (int r = 0; r < l; ++r)
            for (int c = 0; c < l; ++c)
              minor[static_cast<size_t>(r) * l + c] = BigInt(pts[idx[c]].coords(sets[ip][r] - 1));
          wint[ip] = int_det(minor, l);
          if (wint[ip] != 0) nonzero = true;
        }
        if (nonzero) {
          // dividing the integer wedge by the gcd of its coordinates yields the
          // wedge of the primitive closure
          BigInt g = 0;
          for (const BigInt& w : wint) g = gcd_big(g, w);
          double norm = 0;
          for (int ip = 0; ip < nsets; ++ip) {
            double acc = 0;
            for (int jp = 0; jp < nsets; ++jp) {
              if (wint[jp] == 0) continue;
              acc += Wl(ip, jp) * Rat(wint[jp], g).convert_to<double>();
            }
            norm = std::max(norm, std::abs(acc));
          }
          if (norm > 0) {
            double cand = 1.0 / norm;
            if (!cur || cand > *cur) cur = cand;
          }
        }
        int pos = l - 1;
        while (pos >= 0 && idx[pos] == static_cast<int>(npts) - l + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int p = pos + 1; p < l; ++p) idx[p] = idx[p - 1] + 1;
      }
    }
    if (prev && cur && std::abs(*prev - *cur) <= 1e-12 * std::max(1.0, std::abs(*cur)))
      return *cur;
    prev = cur;
    R *= 2;
    if (R > policy.radius_cap_factor * lam1)
      fail(Errc::RadiusOverflow, "phi_l radius cap reached without stabilizing");
  }
}

Lattice random_unimodular_lattice(int d, RngStream& rng) {
  for (int tries = 0; tries < 64; ++tries) {
    Eigen::MatrixXd G(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) G(r, c) = rng.next_gaussian();
    double det = G.determinant();
    if (std::abs(det) < 1e-6) continue;
    G /= std::pow(std::abs(det), 1.0 / d);
    if (G.determinant() < 0) G.col(0) *= -1.0;
    return Lattice(G);
  }
  fail(Errc::NumericalInstability, "could not draw a nonsingular matrix");
}

Sublattice random_primitive_sublattice(const Lattice& L, int rank, RngStream& rng) {
  if (rank < 1 || rank > L.dim()) fail(Errc::RankDeficient, "requested rank");
  for (int tries = 0; tries < 256; ++tries) {
    IntMat C(L.dim(), rank);
    for (int r = 0; r < C.rows(); ++r)
      for (int c = 0; c < rank; ++c)
        C.at(r, c) = BigInt(static_cast<long long>(rng.next_below(7)) - 3);
    if (integer_rank(C) != rank) continue;
    return Sublattice(L, saturate_columns(C));
  }
  fail(Errc::NumericalInstability, "could not draw an independent coordinate matrix");
}

}  // namespace singlab
