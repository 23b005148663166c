#pragma once

#include <span>
#include <vector>

#include "singlab/diophantine.hpp"
#include "singlab/exponents.hpp"
#include "singlab/lattice.hpp"

namespace singlab {

// min over i, j of 1 - (eta_i / 2)(1/eta_{i-j} + 1/eta_{i+j}); positive only
// for strictly feasible profiles
double alpha_eta(const EtaProfile& profile);

// epsilon^{-1} + sum_l phi_l(L)^{eta_l}
double height_f(const Lattice& L, double epsilon, const EtaProfile& profile,
                const PhiPolicy& policy = {});

// sup over the union of rescaled supports of ||g_t u(theta)|| on the wedge
// grades 1..d-1; the norm is coordinatewise multi-affine in theta, so the
// box maximum sits at a corner
double xi_prime(double t, const ProductFractal& K, const Weights& W);

// xi(t) = max_i (D * xi'(t))^{eta_i}
double xi_from_prime(double xi_prime_val, const EtaProfile& profile, double D);

struct EpsilonB {
  double epsilon = 0;
  double b = 0;
};

// epsilon^alpha = C_hat t^-eta / ((d-1) xi(t)) and b = eps^-1 (1 - C_hat t^-eta)
EpsilonB epsilon_b_constants(double t, const EtaProfile& profile, double C_hat, double xi_t,
                             int d);

struct HeightConfig {
  EtaProfile profile;
  double C_hat = 0;
  double D = 0;
  double t = 0;
  double xi_t = 0;
  double alpha = 0;
  double epsilon = 0;
  double b = 0;
};

HeightConfig make_height_config(double t, const ProductFractal& K, const Weights& W,
                                const EtaProfile& profile, double C_hat, double D);

struct GradeDecay {
  int l = 0;
  double slope = 0;
  double slope_stderr = 0;
  double reference = 0;  // -0.9 * eta
  bool ok = false;
};

struct ContractionReport {
  double t = 0;
  double f_L = 0;
  double mc_mean = 0;
  double mc_stderr = 0;
  double rhs = 0;  // 2 C_hat t^-eta f(L) + b
  double margin = 0;
  bool holds = false;
  std::vector<GradeDecay> decay;
};

// Monte Carlo audit of the averaged height inequality at cfg.t plus, when a
// t grid is supplied, winsorized decay regressions of the per-grade moments.
ContractionReport contraction_check(const Lattice& L, const ProductFractal& K, const Weights& W,
                                    const HeightConfig& cfg, const Eigen::MatrixXd& r,
                                    uint64_t count, uint64_t seed,
                                    std::span<const double> t_grid = {});

// winsorized moment bound over grades and corner rescalings, times 1.5
double measure_C_hat(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                     int num_vectors, uint64_t count, uint64_t seed);

// 2 x the max sup-norm defect over random primitive pairs
double measure_emm_D(int d, int trials, uint64_t seed);

// max over sampled lattices and support-box corners of |log f(u(x)L) - log f(L)|
double measure_log_lipschitz(const ProductFractal& K, const Weights& W,
                             const EtaProfile& profile, double epsilon, int samples,
                             uint64_t seed);

}  // namespace singlab
