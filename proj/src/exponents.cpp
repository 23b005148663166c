#include "singlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "singlab/errors.hpp"
#include "singlab/stats.hpp"

namespace singlab {

namespace {

std::vector<double> projection_values(const WedgeVector& v, const ProductFractal& K,
                                      const std::vector<Eigen::MatrixXd>& thetas, int threads) {
  int m = K.m();
  std::vector<double> values(thetas.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      WedgeVector uv = wedge_action(u_theta(thetas[i]), v);
      values[i] = project_plus(uv, m).sup_norm();
    }
  };
  if (threads <= 1 || thetas.size() < 1024) {
    work(0, thetas.size());
  } else {
    size_t nthreads = std::min<size_t>(threads, 16);
    std::vector<std::thread> pool;
    size_t chunk = (thetas.size() + nthreads - 1) / nthreads;
    for (size_t t = 0; t < nthreads; ++t) {
      size_t b = t * chunk, e = std::min(thetas.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return values;
}

}  // namespace

McIntegral mc_projection_integral(const WedgeVector& v, double gamma, const ProductFractal& K,
                                  const Eigen::MatrixXd& r, uint64_t count, uint64_t seed,
                                  int threads) {
  if (!(gamma > 0)) fail(Errc::GammaOutOfRange, "moment order must be positive");
  auto thetas = K.sample_mu_r(r, static_cast<int>(count), seed);
  std::vector<double> proj = projection_values(v, K, thetas, threads);
  std::vector<double> integrand(proj.size());
  for (size_t i = 0; i < proj.size(); ++i) {
    double p = std::max(proj[i], 1e-300);
    integrand[i] = std::pow(p, -gamma);
  }
  McIntegral out;
  out.count = count;
  MeanStats ms = mean_stats(integrand);
  out.mean = ms.mean;
  out.std_error = ms.std_error;
  out.winsorized_mean = winsorized_mean(integrand);
  // divergent moments never stabilize: the half-sample mean drifts from the
  // full mean as the count doubles, and the top 0.1% carries the bulk
  if (integrand.size() >= 64) {
    std::span<const double> half(integrand.data(), integrand.size() / 2);
    double half_mean = mean_stats(half).mean;
    double drift = half_mean > 0 ? out.mean / half_mean : 1.0;
    double concentration = out.winsorized_mean > 0 ? out.mean / out.winsorized_mean : 1.0;
    out.divergence_flag = drift > 2.5 || drift < 0.4 || concentration > 20.0;
  }
  return out;
}

ZetaEstimate tail_slope(int l, const ProductFractal& K, const Eigen::MatrixXd& r, int num_vectors,
                        std::span<const double> eps_grid, uint64_t count, uint64_t seed,
                        int threads) {
  int d = K.m() + K.n();
  if (l < 1 || l > d - 1) fail(Errc::GradeOutOfRange, "tail slope grade");
  std::vector<WedgeVector> vectors;
  for (int k = 0; k < num_vectors; ++k) {
    // decomposable test vector: wedge of l Gaussian columns, sup-normalized
    RngStream rng(seed, "tail_v", static_cast<uint64_t>(k));
    WedgeVector v(d, l);
    double norm = 0;
    do {
      Eigen::MatrixXd cols(d, l);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < l; ++b) cols(a, b) = rng.next_gaussian();
      v = wedge_of_columns(cols);
      norm = v.sup_norm();
    } while (norm < 1e-9);
    v *= 1.0 / norm;
    vectors.push_back(std::move(v));
  }
  return tail_slope_vectors(l, K, r, vectors, eps_grid, count, seed, threads);
}

ZetaEstimate tail_slope_vectors(int l, const ProductFractal& K, const Eigen::MatrixXd& r,
                                std::span<const WedgeVector> vectors,
                                std::span<const double> eps_grid, uint64_t count, uint64_t seed,
                                int threads) {
  if (eps_grid.size() < 4) fail(Errc::GridMismatch, "eps grid needs >= 4 points");
  for (size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] > eps_grid[i - 1])) fail(Errc::GridMismatch, "eps grid must increase");
  int d = K.m() + K.n();
  if (l < 1 || l > d - 1) fail(Errc::GradeOutOfRange, "tail slope grade");

  auto thetas = K.sample_mu_r(r, static_cast<int>(count), seed);

  ZetaEstimate est;
  est.l = l;
  est.method = "tail_slope";
  est.samples = count;
  est.slope_min = kTailSlopeCap;
  bool any_mass = false;

  // For a single column and grade 1 the sublevel set is a product of per-row
  // intervals in theta; clipping at the support hull steps each factor by up
  // to 2 across the window, which biases the fitted slope low. Normalizing by
  // the in-hull overlap per row removes that artifact.
  bool row_intervals = K.n() == 1 && l == 1;
  int m = K.m();

  for (const WedgeVector& v : vectors) {
    std::vector<double> values = projection_values(v, K, thetas, threads);
    std::sort(values.begin(), values.end());

    double tail_coeff = row_intervals ? v.coord({m + 1}) : 0.0;

    std::vector<double> lx, ly;
    for (double eps : eps_grid) {
      size_t hit = std::upper_bound(values.begin(), values.end(), eps) - values.begin();
      double mass = static_cast<double>(hit) / static_cast<double>(values.size());
      if (mass > 0) any_mass = true;
      if (row_intervals && std::abs(tail_coeff) > 1e-12 && mass > 0) {
        double half = eps / std::abs(tail_coeff);
        for (int i = 1; i <= m; ++i) {
          double center = -v.coord({i}) / tail_coeff;
          double hull = r(i - 1, 0) * K.entry(i, 1).diameter();
          double overlap = std::min(hull, center + half) - std::max(0.0, center - half);
          if (overlap > 0) mass *= std::clamp(2.0 * half / overlap, 1.0, 2.0);
        }
      }
      if (mass > 0 && mass <= 0.5) {
        lx.push_back(std::log(eps));
        ly.push_back(std::log(mass));
      }
    }
    double slope;
    if (lx.size() < 2) {
      slope = kTailSlopeCap;  // Dirac-type jump: no usable tail window
      ++est.capped_vectors;
    } else {
      LinearFit fit = linear_fit(lx, ly);
      slope = fit.slope;
      est.fit_residual_max = std::max(est.fit_residual_max, fit.residual_rms);
    }
    if (slope < est.slope_min) {
      est.slope_min = slope;
      est.worst_v.assign(v.raw().begin(), v.raw().end());
    }
  }
  if (!any_mass) fail(Errc::InsufficientMass, "all tail masses vanish at this grid resolution");
  est.gamma_certified = 0.9 * std::max(est.slope_min, 0.0);
  return est;
}

double certify_layer_cake(double gamma, double rho, double L) {
  if (!(rho > 0 && rho < 1)) fail(Errc::RhoOutOfRange, "rho must lie in (0, 1)");
  if (!(gamma > 0)) fail(Errc::GammaOutOfRange, "gamma must be positive");
  if (!(L > 0)) fail(Errc::IndexOutOfRange, "tail constant must be positive");
  return 1.0 + L * rho / (1.0 - rho);
}

ZetaClosedForm zeta_closed_form(const ProductFractal& K, const Weights& W) {
  if (K.m() != W.m() || K.n() != W.n()) fail(Errc::DimensionMismatch, "grid/weight shape");
  int m = W.m(), n = W.n(), d = W.d();
  ZetaClosedForm out;
  if (K.is_full_box()) {
    out.case_tag = "full_box";
    out.exact = true;
    for (int l = 1; l <= d - 1; ++l) {
      Rat z = l <= m ? Rat(m, l) : Rat(n, m + n - l);
      out.zeta_rat.push_back(z);
      out.zeta.push_back(to_double(z));
    }
    return out;
  }
  if (n == 1 || m == 1) {
    out.case_tag = n == 1 ? "n1" : "m1";
    std::vector<double> dims;
    std::vector<std::optional<Rat>> dims_rat;
    if (n == 1) {
      for (int i = 1; i <= m; ++i) {
        dims.push_back(K.entry(i, 1).dimension());
        dims_rat.push_back(K.entry(i, 1).dimension_rat());
      }
    } else {
      for (int j = 1; j <= n; ++j) {
        dims.push_back(K.entry(1, j).dimension());
        dims_rat.push_back(K.entry(1, j).dimension_rat());
      }
    }
    std::vector<size_t> order(dims.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t x, size_t y) { return dims[x] < dims[y]; });
    out.exact = true;
    for (const auto& dr : dims_rat)
      if (!dr) out.exact = false;
    for (int l = 1; l <= d - 1; ++l) {
      // single-column case: min over index sets of size d-l of the dim sum;
      // single-row case: size l. Either way the minimum picks the smallest dims.
      size_t take = n == 1 ? static_cast<size_t>(d - l) : static_cast<size_t>(l);
      double z = 0;
      Rat zr(0);
      for (size_t i = 0; i < take; ++i) {
        z += dims[order[i]];
        if (out.exact) zr += *dims_rat[order[i]];
      }
      out.zeta.push_back(z);
      if (out.exact) out.zeta_rat.push_back(zr);
    }
    if (!out.exact) out.zeta_rat.clear();
    return out;
  }
  out.case_tag = "none";
  out.exact = false;
  return out;
}

void EtaProfile::validate(const Weights& W) {
  int dd = d();
  if (dd != W.d()) fail(Errc::DimensionMismatch, "profile length must be d - 1");
  for (double e : eta_)
    if (!(e > 0)) fail(Errc::InfeasibleProfile, "profile entries must be positive");
  auto inv = [&](int l) { return (l == 0 || l == dd) ? 0.0 : 1.0 / eta_[l - 1]; };
  for (int i = 1; i <= dd - 1; ++i)
    for (int j = 1; j <= std::min(i, dd - i); ++j) {
      double slack = 2.0 * inv(i) - inv(i - j) - inv(i + j);
      if (slack < -1e-12) fail(Errc::InfeasibleProfile, "harmonic midpoint constraint violated");
    }
  combo_ = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= dd - 1; ++l) combo_ = std::min(combo_, W.expansion_exponent(l) * eta_[l - 1]);
}

EtaProfile::EtaProfile(std::vector<double> eta, const Weights& W, bool strict,
                       std::string provenance)
    : eta_(std::move(eta)), strict_(strict), provenance_(std::move(provenance)) {
  validate(W);
}

EtaProfile::EtaProfile(std::vector<Rat> eta, const Weights& W, bool strict,
                       std::string provenance)
    : eta_rat_(std::move(eta)), strict_(strict), provenance_(std::move(provenance)) {
  for (const Rat& e : eta_rat_) eta_.push_back(to_double(e));
  validate(W);
}

double EtaProfile::eta(int l) const {
  if (l < 1 || l > d() - 1) fail(Errc::IndexOutOfRange, "profile grade");
  return eta_[l - 1];
}

const Rat& EtaProfile::eta_rat(int l) const {
  if (eta_rat_.empty()) fail(Errc::NumericalInstability, "profile is not stored exactly");
  if (l < 1 || l > d() - 1) fail(Errc::IndexOutOfRange, "profile grade");
  return eta_rat_[l - 1];
}

Rat EtaProfile::eta_min_combo_rat(const Weights& W) const {
  if (eta_rat_.empty()) fail(Errc::NumericalInstability, "profile is not stored exactly");
  Rat best;
  bool first = true;
  for (int l = 1; l <= d() - 1; ++l) {
    Rat v = W.expansion_exponent_rat(l) * eta_rat_[l - 1];
    if (first || v < best) {
      best = v;
      first = false;
    }
  }
  return best;
}

namespace {

// least concave majorant of the points (0,0), (l, lo_l), (d,0), evaluated at
// the integers 1..d-1 (upper convex hull, piecewise linear)
std::vector<double> concave_envelope(const std::vector<double>& lo) {
  int d = static_cast<int>(lo.size()) + 1;
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  for (int l = 1; l <= d - 1; ++l) pts.emplace_back(l, lo[l - 1]);
  pts.emplace_back(d, 0.0);
  std::vector<std::pair<double, double>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      double cross = (b.first - a.first) * (p.second - a.second) -
                     (p.first - a.first) * (b.second - a.second);
      if (cross >= 0)
        hull.pop_back();  // b below the chord a-p: not on the upper hull
      else
        break;
    }
    hull.push_back(p);
  }
  std::vector<double> env(d - 1);
  size_t seg = 0;
  for (int l = 1; l <= d - 1; ++l) {
    while (seg + 1 < hull.size() && hull[seg + 1].first < l) ++seg;
    const auto& a = hull[seg];
    const auto& b = hull[seg + 1];
    double tfrac = (l - a.first) / (b.first - a.first);
    env[l - 1] = a.second + tfrac * (b.second - a.second);
  }
  return env;
}

}  // namespace

EtaProfile eta_optimize(std::span<const double> zeta_bounds, const Weights& W, bool strict) {
  int d = W.d();
  if (static_cast<int>(zeta_bounds.size()) != d - 1)
    fail(Errc::DimensionMismatch, "zeta bound list must have d - 1 entries");
  for (double z : zeta_bounds)
    if (!(z > 0)) fail(Errc::InfeasibleZeta, "zeta bounds must be positive");

  std::vector<double> lo(d - 1);
  for (int l = 1; l <= d - 1; ++l) lo[l - 1] = 1.0 / zeta_bounds[l - 1];
  std::vector<double> x = concave_envelope(lo);  // pointwise-minimal feasible 1/eta

  std::vector<double> w(d - 1);
  for (int l = 1; l <= d - 1; ++l) w[l - 1] = W.expansion_exponent(l);

  auto feasible = [&](double target) {
    for (int l = 0; l < d - 1; ++l)
      if (x[l] > w[l] / target) return false;
    return true;
  };
  double hi = 1.0;
  while (feasible(hi) && hi < 1e12) hi *= 2;
  double lo_t = 0.0;
  while (hi - lo_t > 1e-10 * std::max(1.0, hi)) {
    double mid = 0.5 * (lo_t + hi);
    (feasible(mid) ? lo_t : hi) = mid;
  }

  if (strict) {
    // push into the strict interior along a strictly concave direction;
    // q_l = l (d - l) has 2 q_i - q_{i-j} - q_{i+j} = 2 j^2 > 0
    double scale = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= d - 1; ++l)
      scale = std::min(scale, x[l - 1] / (static_cast<double>(l) * (d - l)));
    double delta = 1e-9 * scale;
    for (int l = 1; l <= d - 1; ++l) x[l - 1] += delta * static_cast<double>(l) * (d - l);
  }

  std::vector<double> eta(d - 1);
  for (int l = 0; l < d - 1; ++l) eta[l] = 1.0 / x[l];
  return EtaProfile(std::move(eta), W, strict, strict ? "optimizer_strict" : "optimizer");
}

EtaProfile closed_form_profile(const ProductFractal& K, const Weights& W) {
  int m = W.m(), n = W.n(), d = W.d();
  if (K.is_full_box()) {
    std::vector<Rat> eta;
    for (int l = 1; l <= d - 1; ++l) eta.push_back(l <= m ? Rat(m, l) : Rat(n, m + n - l));
    return EtaProfile(std::move(eta), W, false, "closed_form:full_box");
  }
  if (n == 1 || m == 1) {
    double sA = std::numeric_limits<double>::infinity();
    std::optional<Rat> sA_rat;
    bool exact = true;
    int count = n == 1 ? m : n;
    for (int i = 1; i <= count; ++i) {
      const Ifs& f = n == 1 ? K.entry(i, 1) : K.entry(1, i);
      if (f.dimension() < sA) {
        sA = f.dimension();
        sA_rat = f.dimension_rat();
      }
      if (!f.dimension_rat()) exact = false;
    }
    if (exact && sA_rat) {
      std::vector<Rat> eta;
      for (int l = 1; l <= d - 1; ++l) {
        Rat factor = n == 1 ? Rat(m, l) : Rat(n, n + 1 - l);
        eta.push_back(factor * *sA_rat);
      }
      return EtaProfile(std::move(eta), W, false,
                        n == 1 ? "closed_form:n1" : "closed_form:m1");
    }
    std::vector<double> eta;
    for (int l = 1; l <= d - 1; ++l) {
      double factor = n == 1 ? static_cast<double>(m) / l : static_cast<double>(n) / (n + 1 - l);
      eta.push_back(factor * sA);
    }
    return EtaProfile(std::move(eta), W, false, n == 1 ? "closed_form:n1" : "closed_form:m1");
  }
  fail(Errc::InfeasibleProfile, "no closed-form profile for this grid shape");
}

}  // namespace singlab
