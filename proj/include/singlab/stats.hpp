#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace singlab {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_stderr = 0;
  double residual_rms = 0;
  int points = 0;
};

// least squares y = slope * x + intercept; needs >= 2 points
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct MeanStats {
  double mean = 0;
  double std_error = 0;
  uint64_t count = 0;
};

MeanStats mean_stats(std::span<const double> xs);

// Mean with the top (1 - level) fraction clipped to the level-quantile value.
double winsorized_mean(std::vector<double> xs, double level = 0.999);

}  // namespace singlab
