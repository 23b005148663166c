#include "singlab/stats.hpp"

#include <algorithm>
#include <cmath>

namespace singlab {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  LinearFit f;
  f.points = static_cast<int>(std::min(x.size(), y.size()));
  if (f.points < 2) return f;
  double mx = 0, my = 0;
  for (int i = 0; i < f.points; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= f.points;
  my /= f.points;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < f.points; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (int i = 0; i < f.points; ++i) {
    double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
  }
  f.residual_rms = std::sqrt(ss_res / f.points);
  if (f.points > 2) f.slope_stderr = std::sqrt(ss_res / (f.points - 2) / sxx);
  return f;
}

MeanStats mean_stats(std::span<const double> xs) {
  MeanStats s;
  s.count = xs.size();
  if (s.count == 0) return s;
  double sum = 0;
  for (double v : xs) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0;
    for (double v : xs) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / (static_cast<double>(s.count) - 1) / static_cast<double>(s.count));
  }
  return s;
}

double winsorized_mean(std::vector<double> xs, double level) {
  if (xs.empty()) return 0;
  size_t clip = static_cast<size_t>(std::floor((1.0 - level) * static_cast<double>(xs.size())));
  if (clip == 0) {
    double sum = 0;
    for (double v : xs) sum += v;
    return sum / static_cast<double>(xs.size());
  }
  std::sort(xs.begin(), xs.end());
  double q = xs[xs.size() - clip - 1];
  double sum = 0;
  for (size_t i = 0; i < xs.size(); ++i) sum += std::min(xs[i], q);
  return sum / static_cast<double>(xs.size());
}

}  // namespace singlab
