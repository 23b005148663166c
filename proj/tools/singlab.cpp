#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "singlab/errors.hpp"
#include "singlab/json_io.hpp"
#include "singlab/stats.hpp"

namespace {

using singlab::Json;

struct GlobalOpts {
  uint64_t seed = 20250810;
  int threads = 1;
  std::string precision = "double";
  uint64_t budget = 10000000;
};

// inline JSON if it looks like one, else file contents
Json load_json_arg(const std::string& arg) {
  std::string text = arg;
  if (!arg.empty() && arg[0] != '{' && arg[0] != '[' && arg[0] != '"') {
    std::ifstream in(arg);
    if (!in) singlab::fail(singlab::Errc::ParseError, "cannot open file: " + arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    singlab::fail(singlab::Errc::ParseError, std::string("bad JSON: ") + e.what());
  }
}

Json load_fractal_arg(const std::string& arg, bool* was_preset = nullptr) {
  if (arg == "unit_interval" || arg == "cantor3" || arg == "cantor5") {
    if (was_preset) *was_preset = true;
    Json j;
    j["preset"] = arg;
    return j;
  }
  return load_json_arg(arg);
}

Json config_echo(const GlobalOpts& g, const std::string& command, const Json& extra) {
  Json cfg;
  cfg["command"] = command;
  cfg["seed"] = g.seed;
  cfg["threads"] = g.threads;
  cfg["precision"] = g.precision;
  cfg["budget"] = g.budget;
  for (auto it = extra.begin(); it != extra.end(); ++it) cfg[it.key()] = it.value();
  return cfg;
}

void emit(const Json& out, const std::string& path) {
  if (path.empty()) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream f(path);
    f << out.dump(2) << "\n";
  }
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(path);
    f << text;
  }
}

singlab::EtaProfile resolve_profile(const std::string& eta_arg, const singlab::ProductFractal& K,
                                    const singlab::Weights& W, uint64_t seed, uint64_t budget,
                                    int threads = 1) {
  if (eta_arg == "closed") return singlab::closed_form_profile(K, W);
  if (eta_arg == "auto") {
    singlab::ZetaClosedForm zcf = singlab::zeta_closed_form(K, W);
    if (zcf.case_tag != "none") {
      if (!zcf.zeta_rat.empty() && W.exact())
        return singlab::closed_form_profile(K, W);
      return singlab::eta_optimize(zcf.zeta, W);
    }
    // no formula for this shape: fall back to measured tail slopes
    std::vector<double> zeta;
    std::vector<double> grid;
    for (int k = 1; k <= 8; ++k) grid.push_back(std::pow(2.0, -9 + k));
    uint64_t samples = std::min<uint64_t>(budget / (W.d() - 1), 20000);
    for (int l = 1; l <= W.d() - 1; ++l) {
      singlab::ZetaEstimate est =
          singlab::tail_slope(l, K, K.xi_ones(), 20, grid, samples, seed + l, threads);
      zeta.push_back(std::max(est.gamma_certified, 1e-3));
    }
    return singlab::eta_optimize(zeta, W);
  }
  return singlab::profile_from_json(load_json_arg(eta_arg), W);
}

int run(int argc, char** argv) {
  CLI::App app{"weighted flows, product fractals, and dimension-bound calculators"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--seed", g.seed, "master RNG seed");
  app.add_option("--threads", g.threads, "worker threads for Monte Carlo loops");
  app.add_option("--precision", g.precision, "double | extended")
      ->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--budget", g.budget, "enumeration / sampling budget");

  std::string weights_arg, fractal_arg = "unit_interval", lattice_arg, theta_arg;
  std::string eta_arg = "auto", out_path, zeta_path;
  double T = 10, eps = 0.5, p_param = -1, omega_param = -1, gamma_param = -1;
  double tmax = 1024, delta = std::log(2.0), t_base = 2;
  int l_grade = 1, Mmax = 6, Mmin = 1;
  uint64_t samples = 20000;
  int vectors = 40;
  bool csv = false;
  std::string predicate = "dirichlet";
  std::string t_grid_arg;

  auto* bound = app.add_subcommand("bound", "dimension-bound report");
  bound->add_option("--weights", weights_arg)->required();
  bound->add_option("--fractal", fractal_arg);
  bound->add_option("--eta", eta_arg, "auto | closed | <file or inline JSON>");
  bound->add_option("--p", p_param, "time-fraction parameter");
  bound->add_option("--omega", omega_param, "uniform exponent parameter");
  bound->add_option("--gamma", gamma_param, "decay exponent parameter");
  bound->add_flag("--csv", csv, "emit a flat CSV row");
  bound->add_option("--out", out_path);

  auto* zeta = app.add_subcommand("zeta", "tail-slope critical exponent estimate");
  zeta->add_option("--weights", weights_arg)->required();
  zeta->add_option("--fractal", fractal_arg);
  zeta->add_option("--l", l_grade)->required();
  zeta->add_option("--samples", samples);
  zeta->add_option("--vectors", vectors);
  zeta->add_option("--out", out_path);

  auto* eta = app.add_subcommand("eta", "feasible profile from zeta bounds");
  eta->add_option("--weights", weights_arg)->required();
  eta->add_option("--fractal", fractal_arg);
  eta->add_option("--from-zeta", zeta_path, "closed-form | <file with zeta list>");
  eta->add_option("--out", out_path);

  auto* traj = app.add_subcommand("trajectory", "flow statistics along a time ladder");
  traj->add_option("--theta", theta_arg)->required();
  traj->add_option("--weights", weights_arg)->required();
  traj->add_option("--lattice", lattice_arg);
  traj->add_option("--tmax", tmax);
  traj->add_option("--delta", delta, "log spacing of the geometric grid");
  traj->add_option("--out", out_path);

  auto* diri = app.add_subcommand("dirichlet", "single witness search");
  diri->add_option("--theta", theta_arg)->required();
  diri->add_option("--weights", weights_arg)->required();
  diri->add_option("--T", T)->required();
  diri->add_option("--eps", eps)->required();
  diri->add_option("--out", out_path);

  auto* contr = app.add_subcommand("contraction", "averaged height inequality audit");
  contr->add_option("--weights", weights_arg)->required();
  contr->add_option("--fractal", fractal_arg);
  contr->add_option("--lattice", lattice_arg);
  contr->add_option("--t-grid", t_grid_arg, "comma-separated times, first entry is the audit t");
  contr->add_option("--eta", eta_arg);
  contr->add_option("--samples", samples);
  contr->add_option("--out", out_path);

  auto* boxc = app.add_subcommand("boxcount", "surviving-cell counts along a ladder");
  boxc->add_option("--weights", weights_arg)->required();
  boxc->add_option("--fractal", fractal_arg);
  boxc->add_option("--predicate", predicate)
      ->check(CLI::IsMember({"always", "dirichlet", "phi1_growth"}));
  boxc->add_option("--eps", eps);
  boxc->add_option("--gamma", gamma_param);
  boxc->add_option("--t", t_base);
  boxc->add_option("--Mmin", Mmin);
  boxc->add_option("--Mmax", Mmax);
  boxc->add_option("--out", out_path);

  auto* self = app.add_subcommand("selftest", "quick golden checks");

  CLI11_PARSE(app, argc, argv);

  if (bound->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Json fj = load_fractal_arg(fractal_arg);
    singlab::ProductFractal K = singlab::fractal_from_json(fj, W.m(), W.n());
    singlab::EtaProfile profile = resolve_profile(eta_arg, K, W, g.seed, g.budget, g.threads);
    std::string kind = "sing";
    std::optional<double> param;
    int chosen = (p_param >= 0) + (omega_param >= 0) + (gamma_param >= 0);
    if (chosen > 1) singlab::fail(singlab::Errc::ParseError, "choose one of --p, --omega, --gamma");
    if (p_param >= 0) {
      kind = "divergent";
      param = p_param;
    } else if (omega_param >= 0) {
      kind = "sing_omega";
      param = omega_param;
    } else if (gamma_param >= 0) {
      kind = "gamma";
      param = gamma_param;
    }
    singlab::BoundReport rep = singlab::make_bound_report(K, W, profile, kind, param);
    if (csv) {
      std::ostringstream row;
      row.precision(17);
      row << kind << "," << (param ? *param : 0.0) << "," << rep.s.value << ","
          << rep.bound.value << "," << rep.eta_provenance << "\n";
      emit_text("kind,param,s,bound,eta_provenance\n" + row.str(), out_path);
      return 0;
    }
    Json out;
    out["schema"] = "singlab/1";
    Json extra;
    extra["weights"] = singlab::weights_to_json(W);
    extra["fractal"] = fj;
    extra["eta"] = eta_arg;
    out["config"] = config_echo(g, "bound", extra);
    out["report"] = singlab::bound_report_to_json(rep);
    out["profile"] = singlab::profile_to_json(profile, W);
    emit(out, out_path);
    return 0;
  }

  if (zeta->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Json fj = load_fractal_arg(fractal_arg);
    singlab::ProductFractal K = singlab::fractal_from_json(fj, W.m(), W.n());
    if (samples * static_cast<uint64_t>(vectors) > g.budget)
      singlab::fail(singlab::Errc::BudgetExceeded, "samples x vectors exceeds --budget");
    std::vector<double> grid;
    for (int k = 1; k <= 8; ++k) grid.push_back(std::pow(2.0, -9 + k));
    singlab::ZetaEstimate est =
        singlab::tail_slope(l_grade, K, K.xi_ones(), vectors, grid, samples, g.seed, g.threads);
    Json out;
    out["schema"] = "singlab/1";
    Json extra;
    extra["weights"] = singlab::weights_to_json(W);
    extra["fractal"] = fj;
    extra["l"] = l_grade;
    extra["samples"] = samples;
    extra["vectors"] = vectors;
    out["config"] = config_echo(g, "zeta", extra);
    out["estimate"] = singlab::zeta_to_json(est);
    emit(out, out_path);
    return 0;
  }

  if (eta->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Json fj = load_fractal_arg(fractal_arg);
    singlab::ProductFractal K = singlab::fractal_from_json(fj, W.m(), W.n());
    singlab::EtaProfile profile =
        zeta_path.empty() || zeta_path == "closed-form"
            ? singlab::closed_form_profile(K, W)
            : [&] {
                Json zj = load_json_arg(zeta_path);
                std::vector<double> zeta_list;
                for (const Json& v : zj.at("zeta")) zeta_list.push_back(v.get<double>());
                return singlab::eta_optimize(zeta_list, W, zj.value("strict", false));
              }();
    Json out;
    out["schema"] = "singlab/1";
    Json extra;
    extra["weights"] = singlab::weights_to_json(W);
    extra["fractal"] = fj;
    extra["from_zeta"] = zeta_path.empty() ? "closed-form" : zeta_path;
    out["config"] = config_echo(g, "eta", extra);
    out["profile"] = singlab::profile_to_json(profile, W);
    emit(out, out_path);
    return 0;
  }

  if (traj->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Eigen::MatrixXd theta = singlab::matrix_from_json(load_json_arg(theta_arg));
    singlab::Lattice x0 =
        lattice_arg.empty() ? singlab::Lattice::standard(W.d())
                            : singlab::lattice_from_json(load_json_arg(lattice_arg), W.d());
    double base = std::exp(delta);
    if (std::abs(base - std::round(base)) > 1e-9)
      std::cerr << "{\"warning\":\"flow base exp(delta) is not an integer; times are "
                   "rounded per step\"}\n";
    std::vector<double> times;
    for (double t = base; t <= tmax * (1 + 1e-12); t *= base) times.push_back(t);
    std::vector<int> grades;
    for (int l = 1; l <= W.d() - 1; ++l) grades.push_back(l);
    singlab::TrajectoryStats stats = singlab::trajectory(theta, W, x0, times, grades);
    std::ostringstream csvs;
    csvs.precision(17);
    csvs << "time,lambda1";
    for (int l : grades) csvs << ",phi_" << l;
    csvs << "\n";
    for (size_t i = 0; i < stats.times.size(); ++i) {
      csvs << stats.times[i] << "," << stats.lambda1[i];
      for (size_t k = 0; k < grades.size(); ++k) csvs << "," << stats.phi[k][i];
      csvs << "\n";
    }
    emit_text(csvs.str(), out_path);
    return 0;
  }

  if (diri->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Eigen::MatrixXd theta = singlab::matrix_from_json(load_json_arg(theta_arg));
    auto witness = singlab::dirichlet_test(theta, W, T, eps, {g.budget});
    Json out;
    out["schema"] = "singlab/1";
    Json extra;
    extra["weights"] = singlab::weights_to_json(W);
    extra["T"] = T;
    extra["eps"] = eps;
    out["config"] = config_echo(g, "dirichlet", extra);
    out["witness"] = witness ? singlab::witness_to_json(*witness) : Json(nullptr);
    emit(out, out_path);
    return 0;
  }

  if (contr->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Json fj = load_fractal_arg(fractal_arg);
    singlab::ProductFractal K = singlab::fractal_from_json(fj, W.m(), W.n());
    singlab::Lattice L =
        lattice_arg.empty() ? singlab::Lattice::standard(W.d())
                            : singlab::lattice_from_json(load_json_arg(lattice_arg), W.d());
    std::vector<double> t_grid;
    if (!t_grid_arg.empty()) {
      std::stringstream ss(t_grid_arg);
      std::string tok;
      while (std::getline(ss, tok, ',')) t_grid.push_back(std::stod(tok));
    } else {
      for (int k = 1; k <= 8; ++k) t_grid.push_back(std::pow(2.0, k));
    }
    singlab::EtaProfile base = resolve_profile(eta_arg, K, W, g.seed, g.budget);
    // the averaged inequality needs a strictly feasible profile
    std::vector<double> zeta(base.etas());
    singlab::EtaProfile profile = singlab::eta_optimize(zeta, W, true);
    double C_hat = singlab::measure_C_hat(K, W, profile, 10, std::min<uint64_t>(samples, 20000),
                                          g.seed);
    double D = singlab::measure_emm_D(W.d(), 200, g.seed);
    double t_audit = t_grid.front();
    // the epsilon formula needs C_hat t^-eta < 1: walk up the grid if needed
    singlab::HeightConfig cfg{profile, 0, 0, 0, 0, 0, 0, 0};
    bool configured = false;
    for (double t : t_grid) {
      try {
        cfg = singlab::make_height_config(t, K, W, profile, C_hat, D);
        t_audit = t;
        configured = true;
        break;
      } catch (const singlab::Error& e) {
        if (e.code() != singlab::Errc::TTooSmall) throw;
      }
    }
    if (!configured)
      singlab::fail(singlab::Errc::TTooSmall, "no grid time admits the height constants");
    singlab::ContractionReport rep = singlab::contraction_check(
        L, K, W, cfg, K.xi_ones(), samples, g.seed, t_grid);
    Json out;
    out["schema"] = "singlab/1";
    Json extra;
    extra["weights"] = singlab::weights_to_json(W);
    extra["fractal"] = fj;
    extra["t_audit"] = t_audit;
    extra["samples"] = samples;
    extra["C_hat"] = C_hat;
    extra["D"] = D;
    out["config"] = config_echo(g, "contraction", extra);
    out["report"] = singlab::contraction_report_to_json(rep);
    out["profile"] = singlab::profile_to_json(profile, W);
    emit(out, out_path);
    return 0;
  }

  if (boxc->parsed()) {
    singlab::Weights W = singlab::weights_from_json(load_json_arg(weights_arg));
    Json fj = load_fractal_arg(fractal_arg);
    singlab::ProductFractal K = singlab::fractal_from_json(fj, W.m(), W.n());
    singlab::Lattice x0 = singlab::Lattice::standard(W.d());
    singlab::CellPredicate pred;
    pred.kind = predicate;
    pred.eps = eps;
    pred.gamma = gamma_param > 0 ? gamma_param : 0.1;
    singlab::CoverExperiment e =
        singlab::run_cover_experiment(K, W, t_base, Mmin, Mmax, pred, x0, g.budget);
    std::ostringstream csvs;
    csvs << "M,count\n";
    for (size_t i = 0; i < e.counts.size(); ++i)
      csvs << (e.M_min + static_cast<int>(i)) << "," << e.counts[i].str() << "\n";
    Json summary;
    summary["schema"] = "singlab/1";
    Json extra;
    extra["weights"] = singlab::weights_to_json(W);
    extra["fractal"] = fj;
    extra["predicate"] = predicate;
    extra["eps"] = eps;
    extra["t"] = t_base;
    extra["Mmin"] = Mmin;
    extra["Mmax"] = Mmax;
    summary["config"] = config_echo(g, "boxcount", extra);
    summary["s"] = e.s;
    try {
      singlab::SlopeFit fit = singlab::fit_slope(e);
      summary["slope"] = fit.slope;
      summary["slope_ci95"] = fit.ci95;
    } catch (const singlab::Error&) {
      summary["slope"] = nullptr;
    }
    emit_text(csvs.str(), out_path.empty() ? "" : out_path + ".csv");
    emit(summary, out_path);
    return 0;
  }

  if (self->parsed()) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok) {
      std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
      if (!ok) ++failures;
    };
    {
      singlab::Weights W = singlab::Weights::validate(
          std::vector<singlab::Rat>{singlab::Rat(1, 2), singlab::Rat(1, 2)},
          std::vector<singlab::Rat>{singlab::Rat(1)});
      singlab::ProductFractal K =
          singlab::ProductFractal::uniform(2, 1, singlab::Ifs::preset("unit_interval"));
      singlab::EtaProfile profile = singlab::closed_form_profile(K, W);
      singlab::BoundValue v = singlab::bound_sing(K, W, profile);
      check("golden_bound_4_3", v.exact && *v.exact == singlab::Rat(4, 3));
    }
    {
      singlab::Lattice Z2 = singlab::Lattice::standard(2);
      check("lambda1_Z2", std::abs(singlab::shortest_vector(Z2).sup_norm - 1.0) < 1e-12);
    }
    {
      singlab::Ifs c3 = singlab::Ifs::preset("cantor3");
      std::vector<int> word{1, 0};
      check("cantor_coding", std::abs(c3.coding_map(word) - 2.0 / 3.0) < 1e-15);
    }
    return failures > 0 ? 1 : 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const singlab::Error& e) {
    Json err;
    err["error"]["code"] = singlab::errc_name(e.code());
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return e.is_budget() ? 3 : 2;
  } catch (const std::exception& e) {
    Json err;
    err["error"]["code"] = "Unhandled";
    err["error"]["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  }
}
