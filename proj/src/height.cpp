#include "singlab/height.hpp"

#include <cmath>

#include "singlab/errors.hpp"
#include "singlab/stats.hpp"

namespace singlab {

namespace {

// corners of the union of rescaled supports: entrywise {0, diam / c}
std::vector<Eigen::MatrixXd> support_corners(const ProductFractal& K) {
  int m = K.m(), n = K.n();
  Eigen::MatrixXd hi(m, n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j)
      hi(i - 1, j - 1) = K.entry(i, j).diameter() / K.entry(i, j).contraction();
  int cells = m * n;
  if (cells > 16) fail(Errc::DimensionMismatch, "corner enumeration limit");
  std::vector<Eigen::MatrixXd> corners;
  for (int mask = 0; mask < (1 << cells); ++mask) {
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(m, n);
    for (int c = 0; c < cells; ++c)
      if (mask & (1 << c)) theta(c / n, c % n) = hi(c / n, c % n);
    corners.push_back(std::move(theta));
  }
  return corners;
}

}  // namespace

double alpha_eta(const EtaProfile& profile) {
  int d = profile.d();
  auto inv = [&](int l) { return (l == 0 || l == d) ? 0.0 : 1.0 / profile.eta(l); };
  double alpha = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= d - 1; ++i)
    for (int j = 1; j <= std::min(i, d - i); ++j) {
      double term = 1.0 - 0.5 * profile.eta(i) * (inv(i - j) + inv(i + j));
      alpha = std::min(alpha, term);
    }
  return alpha;
}

double height_f(const Lattice& L, double epsilon, const EtaProfile& profile,
                const PhiPolicy& policy) {
  if (!(epsilon > 0 && epsilon < 1)) fail(Errc::IndexOutOfRange, "epsilon must be in (0, 1)");
  if (profile.d() != L.dim()) fail(Errc::DimensionMismatch, "profile/lattice dimension");
  double f = 1.0 / epsilon;
  for (int l = 1; l <= L.dim() - 1; ++l)
    f += std::pow(phi_l(L, l, policy), profile.eta(l));
  return f;
}

double xi_prime(double t, const ProductFractal& K, const Weights& W) {
  if (!(t > 1)) fail(Errc::TTooSmall, "xi needs t > 1");
  if (K.m() != W.m() || K.n() != W.n()) fail(Errc::DimensionMismatch, "grid/weight shape");
  Eigen::MatrixXd gt = g_t(W, t);
  double best = 0;
  for (const Eigen::MatrixXd& theta : support_corners(K)) {
    Eigen::MatrixXd g = gt * u_theta(theta);
    best = std::max(best, wedge_operator_norm(g, W.d() - 1));
  }
  return best;
}

double xi_from_prime(double xi_prime_val, const EtaProfile& profile, double D) {
  double xi = 0;
  for (int l = 1; l <= profile.d() - 1; ++l)
    xi = std::max(xi, std::pow(D * xi_prime_val, profile.eta(l)));
  return std::max(xi, 1.0);
}

EpsilonB epsilon_b_constants(double t, const EtaProfile& profile, double C_hat, double xi_t,
                             int d) {
  double alpha = alpha_eta(profile);
  if (!(alpha > 0)) fail(Errc::AlphaNonPositive, "profile is not strictly feasible");
  double eta = profile.eta_min_combo();
  double ct = C_hat * std::pow(t, -eta);
  if (!(ct < 1)) fail(Errc::TTooSmall, "need C_hat t^-eta < 1");
  double ratio = ct / ((d - 1) * xi_t);
  if (!(ratio < 1)) fail(Errc::TTooSmall, "epsilon formula leaves (0, 1)");
  EpsilonB out;
  out.epsilon = std::pow(ratio, 1.0 / alpha);
  if (!(out.epsilon > 0 && out.epsilon < 1)) fail(Errc::TTooSmall, "epsilon out of (0, 1)");
  out.b = (1.0 - ct) / out.epsilon;
  return out;
}

HeightConfig make_height_config(double t, const ProductFractal& K, const Weights& W,
                                const EtaProfile& profile, double C_hat, double D) {
  HeightConfig cfg{profile, C_hat, D, t, 0, 0, 0, 0};
  cfg.alpha = alpha_eta(profile);
  cfg.xi_t = xi_from_prime(xi_prime(t, K, W), profile, D);
  EpsilonB eb = epsilon_b_constants(t, profile, C_hat, cfg.xi_t, W.d());
  cfg.epsilon = eb.epsilon;
  cfg.b = eb.b;
  return cfg;
}

ContractionReport contraction_check(const Lattice& L, const ProductFractal& K, const Weights& W,
                                    const HeightConfig& cfg, const Eigen::MatrixXd& r,
                                    uint64_t count, uint64_t seed,
                                    std::span<const double> t_grid) {
  if (!K.r_in_xi(r)) fail(Errc::ROutOfXi, "rescaling matrix is outside Xi");
  int d = L.dim();
  ContractionReport rep;
  rep.t = cfg.t;
  rep.f_L = height_f(L, cfg.epsilon, cfg.profile);

  auto thetas = K.sample_mu_r(r, static_cast<int>(count), seed);
  std::vector<double> fs(thetas.size());
  for (size_t i = 0; i < thetas.size(); ++i) {
    Lattice Lt = flow_lattice(thetas[i], W, L, cfg.t);
    fs[i] = height_f(Lt, cfg.epsilon, cfg.profile);
  }
  MeanStats ms = mean_stats(fs);
  rep.mc_mean = ms.mean;
  rep.mc_stderr = ms.std_error;
  double eta = cfg.profile.eta_min_combo();
  rep.rhs = 2.0 * cfg.C_hat * std::pow(cfg.t, -eta) * rep.f_L + cfg.b;
  rep.margin = rep.rhs - rep.mc_mean;
  rep.holds = rep.mc_mean <= rep.rhs + 3.0 * rep.mc_stderr;

  // per-grade decay of the moment along the flow, most contracted coordinate
  // wedge as the probe vector
  for (int l = 1; l <= d - 1 && t_grid.size() >= 3; ++l) {
    IndexSet I;
    for (int i = d - l + 1; i <= d; ++i) I.push_back(i);
    WedgeVector v = WedgeVector::basis(d, I);
    std::vector<double> lx, ly;
    for (double tau : t_grid) {
      Eigen::MatrixXd gt = g_t(W, tau);
      std::vector<double> vals(thetas.size());
      for (size_t i = 0; i < thetas.size(); ++i) {
        WedgeVector moved = wedge_action(gt * u_theta(thetas[i]), v);
        vals[i] = std::pow(std::max(moved.sup_norm(), 1e-300), -cfg.profile.eta(l));
      }
      lx.push_back(std::log(tau));
      ly.push_back(std::log(std::max(winsorized_mean(vals), 1e-300)));
    }
    LinearFit fit = linear_fit(lx, ly);
    GradeDecay gd;
    gd.l = l;
    gd.slope = fit.slope;
    gd.slope_stderr = fit.slope_stderr;
    gd.reference = -0.9 * eta;
    gd.ok = fit.slope <= gd.reference;
    rep.decay.push_back(gd);
  }
  return rep;
}

double measure_C_hat(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                     int num_vectors, uint64_t count, uint64_t seed) {
  int d = W.d();
  double worst = 0;
  std::vector<Eigen::MatrixXd> rs;
  rs.push_back(K.xi_ones());
  Eigen::MatrixXd rlo(K.m(), K.n()), rhi(K.m(), K.n());
  for (int i = 1; i <= K.m(); ++i)
    for (int j = 1; j <= K.n(); ++j) {
      rlo(i - 1, j - 1) = K.entry(i, j).contraction();
      rhi(i - 1, j - 1) = 1.0 / K.entry(i, j).contraction();
    }
  rs.push_back(rlo);
  rs.push_back(rhi);
  for (int l = 1; l <= d - 1; ++l) {
    for (int k = 0; k < num_vectors; ++k) {
      RngStream rng(seed, "chat_v", static_cast<uint64_t>(l) * 1000 + k);
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
      for (const auto& r : rs) {
        McIntegral mc = mc_projection_integral(v, profile.eta(l), K, r, count,
                                               seed + 7919 * static_cast<uint64_t>(l) + k);
        worst = std::max(worst, mc.winsorized_mean);
      }
    }
  }
  return 1.5 * worst;
}

double measure_emm_D(int d, int trials, uint64_t seed) {
  RngStream rng(seed, "emm_d");
  double worst = 0;
  for (int k = 0; k < trials; ++k) {
    Lattice L = random_unimodular_lattice(d, rng);
    int r1 = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(d - 1)));
    int r2 = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(d - 1)));
    Sublattice A = random_primitive_sublattice(L, r1, rng);
    Sublattice B = random_primitive_sublattice(L, r2, rng);
    worst = std::max(worst, emm_defect(A, B).sup);
  }
  return 2.0 * worst;
}

double measure_log_lipschitz(const ProductFractal& K, const Weights& W,
                             const EtaProfile& profile, double epsilon, int samples,
                             uint64_t seed) {
  RngStream rng(seed, "loglip");
  auto corners = support_corners(K);
  // O doubles the support box
  for (auto& c : corners) c *= 2.0;
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    Lattice L = random_unimodular_lattice(W.d(), rng);
    double f0 = height_f(L, epsilon, profile);
    for (const auto& theta : corners) {
      Lattice moved(u_theta(theta) * L.basis());
      double f1 = height_f(moved, epsilon, profile);
      worst = std::max(worst, std::abs(std::log(f1) - std::log(f0)));
    }
  }
  return worst;
}

}  // namespace singlab
