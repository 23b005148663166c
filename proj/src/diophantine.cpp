#include "singlab/diophantine.hpp"

#include <cmath>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

// candidate values per coordinate in order 0, 1, -1, 2, -2, ...
long long rank_to_value(uint64_t r) {
  if (r == 0) return 0;
  if (r % 2 == 1) return static_cast<long long>((r + 1) / 2);
  return -static_cast<long long>(r / 2);
}

struct QBox {
  std::vector<long long> limit;  // |q_j| <= limit_j
  uint64_t total = 1;
};

QBox q_box(const Weights& W, double T, const SearchBudget& budget) {
  QBox box;
  box.limit.resize(W.n());
  for (int j = 1; j <= W.n(); ++j) {
    double cap = std::pow(T, W.b(j));
    if (cap > 4e18) fail(Errc::BoxTooLarge, "q box side exceeds integer range");
    box.limit[j - 1] = static_cast<long long>(std::floor(cap * (1 + 1e-12)));
    uint64_t side = static_cast<uint64_t>(2 * box.limit[j - 1] + 1);
    if (box.total > budget.max_candidates / side)
      fail(Errc::BoxTooLarge, "q enumeration budget exceeded");
    box.total *= side;
  }
  return box;
}

struct Candidate {
  Eigen::VectorXi p, q;
  double residual_a = 0, qnorm_b = 0;
};

// visit all q != 0 in the deterministic order; fn returns true to stop
template <typename Fn>
void for_each_q(const QBox& box, Fn&& fn) {
  int n = static_cast<int>(box.limit.size());
  std::vector<uint64_t> rank(n, 0);
  std::vector<uint64_t> rank_max(n);
  for (int j = 0; j < n; ++j) rank_max[j] = static_cast<uint64_t>(2 * box.limit[j]);
  Eigen::VectorXi q(n);
  while (true) {
    bool zero = true;
    for (int j = 0; j < n; ++j) {
      q(j) = static_cast<int>(rank_to_value(rank[j]));
      if (q(j) != 0) zero = false;
    }
    if (!zero && fn(q)) return;
    int pos = 0;  // q_1 varies fastest
    while (pos < n && rank[pos] == rank_max[pos]) rank[pos++] = 0;
    if (pos == n) return;
    ++rank[pos];
  }
}

Candidate make_candidate(const Eigen::MatrixXd& theta, const Weights& W,
                         const Eigen::VectorXi& q) {
  Candidate c;
  c.q = q;
  Eigen::VectorXd tq = theta * q.cast<double>();
  c.p.resize(W.m());
  Eigen::VectorXd x(W.m());
  for (int i = 0; i < W.m(); ++i) {
    c.p(i) = static_cast<int>(std::llround(-tq(i)));
    x(i) = c.p(i) + tq(i);
  }
  std::vector<double> aw(W.m()), bw(W.n());
  for (int i = 1; i <= W.m(); ++i) aw[i - 1] = W.a(i);
  for (int j = 1; j <= W.n(); ++j) bw[j - 1] = W.b(j);
  std::vector<double> xs(x.data(), x.data() + x.size());
  std::vector<double> qs(q.size());
  for (int j = 0; j < q.size(); ++j) qs[j] = q(j);
  c.residual_a = quasi_norm(xs, aw);
  c.qnorm_b = quasi_norm(qs, bw);
  return c;
}

// smallest residual over the whole box (used by the exponent estimator)
double best_residual(const Eigen::MatrixXd& theta, const Weights& W, double T,
                     const SearchBudget& budget) {
  QBox box = q_box(W, T, budget);
  double best = std::numeric_limits<double>::infinity();
  for_each_q(box, [&](const Eigen::VectorXi& q) {
    Candidate c = make_candidate(theta, W, q);
    if (c.qnorm_b <= T * (1 + 1e-12)) best = std::min(best, c.residual_a);
    return false;
  });
  return best;
}

}  // namespace

std::optional<DirichletWitness> dirichlet_test(const Eigen::MatrixXd& theta, const Weights& W,
                                               double T, double eps, const SearchBudget& budget) {
  if (theta.rows() != W.m() || theta.cols() != W.n())
    fail(Errc::DimensionMismatch, "theta shape does not match the weights");
  if (!(T >= 1)) fail(Errc::IndexOutOfRange, "dirichlet_test needs T >= 1");
  if (!(eps > 0)) fail(Errc::IndexOutOfRange, "dirichlet_test needs eps > 0");
  QBox box = q_box(W, T, budget);
  double bound = eps / T;
  std::optional<DirichletWitness> found;
  for_each_q(box, [&](const Eigen::VectorXi& q) {
    Candidate c = make_candidate(theta, W, q);
    if (c.qnorm_b <= T * (1 + 1e-12) && c.residual_a <= bound * (1 + 1e-12)) {
      found = DirichletWitness{c.p, c.q, T, eps, c.residual_a, c.qnorm_b};
      return true;
    }
    return false;
  });
  return found;
}

bool witness_valid_exact(const DirichletWitness& w, const std::vector<std::vector<Rat>>& theta,
                         const Weights& W, const Rat& T, const Rat& eps) {
  if (!W.exact()) fail(Errc::NumericalInstability, "exact check needs exact weights");
  if (static_cast<int>(theta.size()) != W.m()) fail(Errc::DimensionMismatch, "theta rows");
  std::vector<Rat> x(W.m()), aw(W.m()), qs(W.n()), bw(W.n());
  bool qzero = true;
  for (int j = 0; j < W.n(); ++j) {
    qs[j] = Rat(w.q(j));
    if (w.q(j) != 0) qzero = false;
    bw[j] = W.b_rat(j + 1);
  }
  if (qzero) return false;
  for (int i = 0; i < W.m(); ++i) {
    if (static_cast<int>(theta[i].size()) != W.n()) fail(Errc::DimensionMismatch, "theta cols");
    Rat acc(w.p(i));
    for (int j = 0; j < W.n(); ++j) acc += theta[i][j] * Rat(w.q(j));
    x[i] = acc;
    aw[i] = W.a_rat(i + 1);
  }
  return quasi_norm_leq(x, aw, eps / T) && quasi_norm_leq(qs, bw, T);
}

double omega_estimate(const Eigen::MatrixXd& theta, const Weights& W,
                      std::span<const double> T_grid, const OmegaOptions& opts) {
  if (T_grid.size() < 2) fail(Errc::GridMismatch, "omega estimate needs >= 2 grid points");
  for (size_t i = 1; i < T_grid.size(); ++i)
    if (!(T_grid[i] > T_grid[i - 1])) fail(Errc::GridMismatch, "T grid must increase");

  std::vector<double> per_T;
  for (double T : T_grid) {
    double rho = best_residual(theta, W, T, opts.budget);
    // bisect the supremal omega with rho <= T^{-(1+omega)}
    auto pred = [&](double om) { return rho <= std::pow(T, -(1.0 + om)) * (1 + 1e-12); };
    double omega;
    if (rho == 0 || pred(opts.cap)) {
      omega = opts.cap;
    } else if (!pred(0.0)) {
      omega = 0.0;
    } else {
      double lo = 0.0, hi = opts.cap;
      while (hi - lo > opts.tol) {
        double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
      }
      omega = lo;
    }
    per_T.push_back(omega);
  }
  size_t tail_start = T_grid.size() / 2;
  double est = per_T[tail_start];
  for (size_t i = tail_start; i < per_T.size(); ++i) est = std::min(est, per_T[i]);
  return est;
}

Lattice flow_lattice(const Eigen::MatrixXd& theta, const Weights& W, const Lattice& x0,
                     double t) {
  if (theta.rows() != W.m() || theta.cols() != W.n())
    fail(Errc::DimensionMismatch, "theta shape does not match the weights");
  if (x0.dim() != W.d()) fail(Errc::DimensionMismatch, "lattice dimension");
  return Lattice(g_t(W, t) * u_theta(theta) * x0.basis());
}

TrajectoryStats trajectory(const Eigen::MatrixXd& theta, const Weights& W, const Lattice& x0,
                           std::span<const double> times, std::span<const int> phi_grades) {
  TrajectoryStats stats;
  stats.phi_grades.assign(phi_grades.begin(), phi_grades.end());
  stats.phi.resize(phi_grades.size());
  double prev = 1.0;
  for (double t : times) {
    if (!(t > prev)) fail(Errc::GridMismatch, "times must be increasing and > 1");
    prev = t;
    Lattice L = flow_lattice(theta, W, x0, t);
    stats.times.push_back(t);
    stats.lambda1.push_back(shortest_vector(L).sup_norm);
    for (size_t k = 0; k < phi_grades.size(); ++k)
      stats.phi[k].push_back(phi_l(L, phi_grades[k]));
  }
  for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
    size_t hits = 0;
    for (double l1 : stats.lambda1)
      if (l1 <= eps) ++hits;
    if (!stats.lambda1.empty())
      stats.escape_fraction[eps] =
          static_cast<double>(hits) / static_cast<double>(stats.lambda1.size());
  }
  return stats;
}

double escape_average(const TrajectoryStats& stats, double eps, double delta) {
  if (stats.times.empty()) fail(Errc::GridMismatch, "empty trajectory window");
  if (!(delta > 0)) fail(Errc::GridMismatch, "grid spacing must be positive");
  for (size_t i = 1; i < stats.times.size(); ++i) {
    double ratio = std::log(stats.times[i] / stats.times[i - 1]);
    if (std::abs(ratio - delta) > 1e-9 * std::max(1.0, delta))
      fail(Errc::GridMismatch, "trajectory grid is not geometric with the stated spacing");
  }
  size_t hits = 0;
  for (double l1 : stats.lambda1)
    if (l1 <= eps) ++hits;
  return static_cast<double>(hits) / static_cast<double>(stats.lambda1.size());
}

RescaleReport dani_rescale_check(const DirichletWitness& w, const Eigen::MatrixXd& theta,
                                 const Weights& W, const Lattice& x0,
                                 std::optional<double> omega) {
  if (w.q.size() != W.n() || w.p.size() != W.m()) fail(Errc::InvalidWitness, "witness shape");
  if (w.q.isZero()) fail(Errc::InvalidWitness, "witness q must be nonzero");
  if (!(w.residual_a <= (w.eps / w.T) * (1 + 1e-9)) || !(w.qnorm_b <= w.T * (1 + 1e-9)))
    fail(Errc::InvalidWitness, "witness fails its defining inequalities");

  double am = W.a_min(), bn = W.b_min();
  RescaleReport rep;
  rep.tau = std::pow(w.eps, -am / (am + bn)) * w.T;
  rep.threshold = std::pow(w.eps, -am * bn / (am + bn));
  rep.phi1 = phi_l(flow_lattice(theta, W, x0, rep.tau), 1);
  rep.holds = rep.phi1 >= rep.threshold * (1 - 1e-9);

  if (omega) {
    if (!(w.residual_a <= std::pow(w.T, -(1.0 + *omega)) * (1 + 1e-9)))
      fail(Errc::InvalidWitness, "witness does not reach the requested exponent");
    rep.omega = *omega;
    rep.tau_omega = std::pow(w.T, 1.0 + am * *omega / (am + bn));
    rep.threshold_omega =
        std::pow(rep.tau_omega, am * bn * *omega / (am + bn + am * *omega));
    rep.phi1_omega = phi_l(flow_lattice(theta, W, x0, rep.tau_omega), 1);
    rep.holds_omega = rep.phi1_omega >= rep.threshold_omega * (1 - 1e-9);
  }
  return rep;
}

}  // namespace singlab
