#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singlab/exterior.hpp"
#include "singlab/fractal.hpp"

namespace singlab {

struct McIntegral {
  double mean = 0;
  double std_error = 0;
  double winsorized_mean = 0;  // 99.9% winsorization
  bool divergence_flag = false;
  uint64_t count = 0;
};

// Monte Carlo moment of the plus-projection: mean over mu^(r) draws of
// ||pi_{l+}(u(theta) v)||^{-gamma}. v should be decomposable with ||v|| = 1.
McIntegral mc_projection_integral(const WedgeVector& v, double gamma, const ProductFractal& K,
                                  const Eigen::MatrixXd& r, uint64_t count, uint64_t seed,
                                  int threads = 1);

struct ZetaEstimate {
  int l = 0;
  double gamma_certified = 0;  // 0.9 * slope_min
  std::string method;          // tail_slope | closed_form | mc_integral
  double slope_min = 0;        // infimum over sampled v of the fitted tail slope
  double fit_residual_max = 0;
  int capped_vectors = 0;  // jump-type mass profiles, reported at the cap
  uint64_t samples = 0;
  std::vector<double> worst_v;  // coordinates of the slope-minimizing vector
};

inline constexpr double kTailSlopeCap = 64.0;

// Tail-slope estimation of the grade-l critical exponent: for random
// decomposable unit vectors fit log mass{||pi_{l+}(u(theta)v)|| <= eps}
// against log eps and take the worst slope.
ZetaEstimate tail_slope(int l, const ProductFractal& K, const Eigen::MatrixXd& r, int num_vectors,
                        std::span<const double> eps_grid, uint64_t count, uint64_t seed,
                        int threads = 1);

// same estimator over caller-supplied test vectors
ZetaEstimate tail_slope_vectors(int l, const ProductFractal& K, const Eigen::MatrixXd& r,
                                std::span<const WedgeVector> vectors,
                                std::span<const double> eps_grid, uint64_t count, uint64_t seed,
                                int threads = 1);

// moment bound 1 + L * rho / (1 - rho) for the (rho gamma)-moment implied by a
// tail estimate mass(eps) <= L eps^gamma; certifies zeta_l >= rho gamma
double certify_layer_cake(double gamma, double rho, double L);

struct ZetaClosedForm {
  std::string case_tag;  // full_box | n1 | m1 | none
  std::vector<double> zeta;
  std::vector<Rat> zeta_rat;  // populated when exact
  bool exact = false;
};

ZetaClosedForm zeta_closed_form(const ProductFractal& K, const Weights& W);

// Feasible exponent profile: eta_l > 0 and the harmonic midpoint constraints
// 1/eta_{i-j} + 1/eta_{i+j} <= 2/eta_i with 1/eta_0 = 1/eta_d = 0.
class EtaProfile {
public:
  EtaProfile(std::vector<double> eta, const Weights& W, bool strict, std::string provenance);
  EtaProfile(std::vector<Rat> eta, const Weights& W, bool strict, std::string provenance);

  int d() const { return static_cast<int>(eta_.size()) + 1; }
  double eta(int l) const;  // 1-based, l in [1, d-1]
  const std::vector<double>& etas() const { return eta_; }
  double eta_min_combo() const { return combo_; }  // min_l w_l eta_l
  bool strict() const { return strict_; }
  const std::string& provenance() const { return provenance_; }

  bool exact() const { return !eta_rat_.empty(); }
  const Rat& eta_rat(int l) const;
  Rat eta_min_combo_rat(const Weights& W) const;

private:
  void validate(const Weights& W);
  std::vector<double> eta_;
  std::vector<Rat> eta_rat_;
  double combo_ = 0;
  bool strict_ = false;
  std::string provenance_;
};

// Maximize min_l w_l eta_l over profiles with eta_l <= zeta_l, by bisection on
// the objective with a concave-envelope feasibility check in x_l = 1/eta_l.
// strict = true shrinks into the strict-inequality interior.
EtaProfile eta_optimize(std::span<const double> zeta_bounds, const Weights& W,
                        bool strict = false);

// the explicitly known profiles (full box, single-column, single-row)
EtaProfile closed_form_profile(const ProductFractal& K, const Weights& W);

}  // namespace singlab
