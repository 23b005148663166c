#include "singlab/bounds.hpp"

#include <cmath>
#include <sstream>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

double min_eta_w(const Weights& W, const EtaProfile& profile) {
  if (profile.d() != W.d()) fail(Errc::DimensionMismatch, "profile/weight dimension");
  return profile.eta_min_combo();
}

double gamma_cap(double s, const Weights& W, const EtaProfile& profile) {
  return (W.a1_plus_b1() * s - min_eta_w(W, profile)) / profile.eta(1);
}

}  // namespace

std::string BoundValue::str() const {
  if (exact) return rat_str(*exact);
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

Rat min_eta_w_rat(const Weights& W, const EtaProfile& profile) {
  if (profile.d() != W.d()) fail(Errc::DimensionMismatch, "profile/weight dimension");
  return profile.eta_min_combo_rat(W);
}

Rat bound_sing_rat(const Rat& s, const Weights& W, const EtaProfile& profile) {
  return s - min_eta_w_rat(W, profile) / W.a1_plus_b1_rat();
}

Rat bound_sing_omega_rat(const Rat& s, const Weights& W, const EtaProfile& profile,
                         const Rat& omega) {
  if (omega < 0) fail(Errc::NegativeOmega, "omega must be nonnegative");
  Rat am = W.a_rat(W.m()), bn = W.b_rat(W.n());
  Rat extra = profile.eta_rat(1) * am * bn * omega / (am + bn + am * omega);
  return s - (min_eta_w_rat(W, profile) + extra) / W.a1_plus_b1_rat();
}

Rat bound_divergent_rat(const Rat& s, const Weights& W, const EtaProfile& profile, const Rat& p) {
  if (!(p > 0 && p <= 1)) fail(Errc::POutOfRange, "p must lie in (0, 1]");
  return s - p * min_eta_w_rat(W, profile) / W.a1_plus_b1_rat();
}

Rat bound_gamma_rat(const Rat& s, const Weights& W, const EtaProfile& profile, const Rat& gamma) {
  if (gamma < 0) fail(Errc::GammaOutOfRange, "gamma must be nonnegative");
  Rat cap = (W.a1_plus_b1_rat() * s - min_eta_w_rat(W, profile)) / profile.eta_rat(1);
  if (gamma > cap) fail(Errc::GammaOutOfRange, "gamma exceeds the admissible cap");
  return s - (min_eta_w_rat(W, profile) + profile.eta_rat(1) * gamma) / W.a1_plus_b1_rat();
}

double bound_sing(double s, const Weights& W, const EtaProfile& profile) {
  return s - min_eta_w(W, profile) / W.a1_plus_b1();
}

double bound_sing_omega(double s, const Weights& W, const EtaProfile& profile, double omega) {
  if (omega < 0) fail(Errc::NegativeOmega, "omega must be nonnegative");
  double am = W.a_min(), bn = W.b_min();
  double extra = profile.eta(1) * am * bn * omega / (am + bn + am * omega);
  return s - (min_eta_w(W, profile) + extra) / W.a1_plus_b1();
}

double bound_divergent(double s, const Weights& W, const EtaProfile& profile, double p) {
  if (!(p > 0 && p <= 1)) fail(Errc::POutOfRange, "p must lie in (0, 1]");
  return s - p * min_eta_w(W, profile) / W.a1_plus_b1();
}

double bound_gamma(double s, const Weights& W, const EtaProfile& profile, double gamma) {
  if (gamma < 0) fail(Errc::GammaOutOfRange, "gamma must be nonnegative");
  if (gamma > gamma_cap(s, W, profile) * (1 + 1e-12))
    fail(Errc::GammaOutOfRange, "gamma exceeds the admissible cap");
  return s - (min_eta_w(W, profile) + profile.eta(1) * gamma) / W.a1_plus_b1();
}

namespace {

bool exact_ready(const ProductFractal& K, const Weights& W, const EtaProfile& profile) {
  return W.exact() && profile.exact() && K.dim_total_rat().has_value();
}

BoundValue wrap(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                const std::string& kind, double param) {
  BoundValue out;
  double s = K.dim_total();
  if (kind == "sing")
    out.value = bound_sing(s, W, profile);
  else if (kind == "sing_omega")
    out.value = bound_sing_omega(s, W, profile, param);
  else if (kind == "divergent")
    out.value = bound_divergent(s, W, profile, param);
  else if (kind == "gamma")
    out.value = bound_gamma(s, W, profile, param);
  else
    fail(Errc::ParseError, "unknown bound kind: " + kind);
  if (exact_ready(K, W, profile)) {
    Rat sr = *K.dim_total_rat();
    std::optional<Rat> pr =
        kind == "sing" ? std::optional<Rat>(Rat(0)) : rational_from_double(param);
    if (pr) {
      if (kind == "sing")
        out.exact = bound_sing_rat(sr, W, profile);
      else if (kind == "sing_omega")
        out.exact = bound_sing_omega_rat(sr, W, profile, *pr);
      else if (kind == "divergent")
        out.exact = bound_divergent_rat(sr, W, profile, *pr);
      else
        out.exact = bound_gamma_rat(sr, W, profile, *pr);
      out.value = to_double(*out.exact);
    }
  }
  return out;
}

}  // namespace

BoundValue bound_sing(const ProductFractal& K, const Weights& W, const EtaProfile& profile) {
  return wrap(K, W, profile, "sing", 0);
}

BoundValue bound_sing_omega(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                            double omega) {
  return wrap(K, W, profile, "sing_omega", omega);
}

BoundValue bound_divergent(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                           double p) {
  return wrap(K, W, profile, "divergent", p);
}

BoundValue bound_gamma(const ProductFractal& K, const Weights& W, const EtaProfile& profile,
                       double gamma) {
  return wrap(K, W, profile, "gamma", gamma);
}

BoundReport make_bound_report(const ProductFractal& K, const Weights& W,
                              const EtaProfile& profile, const std::string& kind,
                              std::optional<double> param) {
  BoundReport rep;
  rep.kind = kind;
  rep.param = param;
  rep.s.value = K.dim_total();
  if (auto sr = K.dim_total_rat()) rep.s.exact = *sr;
  rep.bound = wrap(K, W, profile, kind, param.value_or(0.0));
  rep.eta = profile.etas();
  rep.eta_provenance = profile.provenance();
  rep.empirically_certified = profile.provenance().rfind("closed_form", 0) != 0;
  if (rep.bound.value > rep.s.value + 1e-12)
    fail(Errc::InfeasibleProfile, "bound exceeds the ambient dimension");
  return rep;
}

}  // namespace singlab
