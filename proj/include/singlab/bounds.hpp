#pragma once

#include <optional>
#include <string>
#include <vector>

#include "singlab/exponents.hpp"
#include "singlab/fractal.hpp"

namespace singlab {

struct BoundValue {
  double value = 0;
  std::optional<Rat> exact;
  std::string str() const;
};

// exact-core formulas (require exact weights and an exactly stored profile)
Rat min_eta_w_rat(const Weights& W, const EtaProfile& profile);
Rat bound_sing_rat(const Rat& s, const Weights& W, const EtaProfile& profile);
Rat bound_sing_omega_rat(const Rat& s, const Weights& W, const EtaProfile& profile,
                         const Rat& omega);
Rat bound_divergent_rat(const Rat& s, const Weights& W, const EtaProfile& profile, const Rat& p);
Rat bound_gamma_rat(const Rat& s, const Weights& W, const EtaProfile& profile, const Rat& gamma);

// floating versions of the same formulas
double bound_sing(double s, const Weights& W, const EtaProfile& profile);
double bound_sing_omega(double s, const Weights& W, const EtaProfile& profile, double omega);
double bound_divergent(double s, const Weights& W, const EtaProfile& profile, double p);
double bound_gamma(double s, const Weights& W, const EtaProfile& profile, double gamma);

// fractal-facing wrappers; exact when the dimension, weights and profile are
BoundValue bound_sing(const ProductFractal& K, const Weights& W, const EtaProfile& profile);
BoundValue bound_sing_omega(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                            double omega);
BoundValue bound_divergent(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                           double p);
BoundValue bound_gamma(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                       double gamma);

struct BoundReport {
  BoundValue s;
  BoundValue bound;
  std::string kind;  // sing | sing_omega | divergent | gamma
  std::optional<double> param;
  std::vector<double> eta;
  std::string eta_provenance;
  bool empirically_certified = false;  // zeta came from Monte Carlo, not a formula
};

BoundReport make_bound_report(const ProductFractal& K, const Weights& W,
                              const EtaProfile& profile, const std::string& kind,
                              std::optional<double> param);

}  // namespace singlab
