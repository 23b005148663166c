#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "singlab/lattice.hpp"
#include "singlab/weights.hpp"

namespace singlab {

struct DirichletWitness {
  Eigen::VectorXi p;  // integer m-vector
  Eigen::VectorXi q;  // nonzero integer n-vector
  double T = 0;
  double eps = 0;
  double residual_a = 0;  // ||p + theta q||_a
  double qnorm_b = 0;     // ||q||_b
};

struct SearchBudget {
  uint64_t max_candidates = 10000000;
};

// Exhaustive search over q != 0 with |q_j| <= T^{b_j}; p is the coordinatewise
// nearest integer to -theta q. Returns the first witness in the deterministic
// candidate order (per coordinate 0, 1, -1, 2, -2, ...; q_1 varies fastest).
std::optional<DirichletWitness> dirichlet_test(const Eigen::MatrixXd& theta, const Weights& W,
                                               double T, double eps,
                                               const SearchBudget& budget = {});

// exact check of both witness inequalities for rational theta
bool witness_valid_exact(const DirichletWitness& w, const std::vector<std::vector<Rat>>& theta,
                         const Weights& W, const Rat& T, const Rat& eps);

struct OmegaOptions {
  SearchBudget budget;
  double cap = 16.0;
  double tol = 1e-3;
};

// Lower estimate of the uniform irrationality exponent: per grid point the
// supremal admissible exponent (by bisection), then the min over the tail
// half of the grid.
double omega_estimate(const Eigen::MatrixXd& theta, const Weights& W,
                      std::span<const double> T_grid, const OmegaOptions& opts = {});

// g_t u(theta) x0
Lattice flow_lattice(const Eigen::MatrixXd& theta, const Weights& W, const Lattice& x0, double t);

struct TrajectoryStats {
  std::vector<double> times;
  std::vector<double> lambda1;
  std::vector<int> phi_grades;
  std::vector<std::vector<double>> phi;  // phi[k][i] = phi_{grades[k]} at times[i]
  std::map<double, double> escape_fraction;  // filled for a default threshold ladder
};

TrajectoryStats trajectory(const Eigen::MatrixXd& theta, const Weights& W, const Lattice& x0,
                           std::span<const double> times, std::span<const int> phi_grades = {});

// fraction of grid times with lambda_1 <= eps; the grid must be geometric
// with spacing delta in log scale
double escape_average(const TrajectoryStats& stats, double eps, double delta);

struct RescaleReport {
  double tau = 0;
  double phi1 = 0;
  double threshold = 0;
  bool holds = false;
  std::optional<double> omega;
  double tau_omega = 0;
  double phi1_omega = 0;
  double threshold_omega = 0;
  bool holds_omega = false;
};

// Rescaling consequences of a witness: at tau = eps^{-a_m/(a_m+b_n)} T the
// height phi_1 must reach eps^{-a_m b_n/(a_m+b_n)}; with an omega-witness the
// variant at tau = T^{1+a_m omega/(a_m+b_n)} applies.
RescaleReport dani_rescale_check(const DirichletWitness& w, const Eigen::MatrixXd& theta,
                                 const Weights& W, const Lattice& x0,
                                 std::optional<double> omega = std::nullopt);

}  // namespace singlab
