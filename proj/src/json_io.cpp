#include "singlab/json_io.hpp"

#include "singlab/errors.hpp"

namespace singlab {

namespace {

std::optional<Rat> rat_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(BigInt(j.get<long long>()));
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  return std::nullopt;
}

}  // namespace

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    auto r = parse_rational(j.get<std::string>());
    if (!r) fail(Errc::ParseError, "not a number or rational: " + j.get<std::string>());
    return to_double(*r);
  }
  fail(Errc::ParseError, "expected a number");
}

Weights weights_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b"))
    fail(Errc::ParseError, "weights need fields a and b");
  std::vector<Rat> ar, br;
  bool exact = true;
  for (const Json& v : j.at("a")) {
    auto r = rat_from_json(v);
    if (!r) exact = false;
    if (r) ar.push_back(*r);
  }
  for (const Json& v : j.at("b")) {
    auto r = rat_from_json(v);
    if (!r) exact = false;
    if (r) br.push_back(*r);
  }
  if (exact && ar.size() == j.at("a").size() && br.size() == j.at("b").size())
    return Weights::validate(ar, br);
  std::vector<double> ad, bd;
  for (const Json& v : j.at("a")) ad.push_back(number_from_json(v));
  for (const Json& v : j.at("b")) bd.push_back(number_from_json(v));
  return Weights::validate(ad, bd);
}

Json weights_to_json(const Weights& w) {
  Json j;
  Json a = Json::array(), b = Json::array();
  for (int i = 1; i <= w.m(); ++i)
    a.push_back(w.exact() ? Json(rat_str(w.a_rat(i))) : Json(w.a(i)));
  for (int i = 1; i <= w.n(); ++i)
    b.push_back(w.exact() ? Json(rat_str(w.b_rat(i))) : Json(w.b(i)));
  j["a"] = a;
  j["b"] = b;
  return j;
}

Ifs ifs_from_json(const Json& j) {
  if (j.is_string()) return Ifs::preset(j.get<std::string>());
  if (!j.is_object()) fail(Errc::ParseError, "fractal entry must be an object or preset name");
  if (j.contains("preset")) return Ifs::preset(j.at("preset").get<std::string>());
  if (!j.contains("c") || !j.contains("w"))
    fail(Errc::ParseError, "fractal entry needs fields c and w");
  auto c = rat_from_json(j.at("c"));
  if (!c) fail(Errc::ParseError, "contraction ratio must be rational");
  std::vector<Rat> w;
  for (const Json& v : j.at("w")) {
    auto r = rat_from_json(v);
    if (!r) fail(Errc::ParseError, "translations must be rational");
    w.push_back(*r);
  }
  return Ifs(*c, std::move(w));
}

ProductFractal fractal_from_json(const Json& j, int m, int n) {
  if (j.is_string() || (j.is_object() && j.contains("preset")))
    return ProductFractal::uniform(m, n, ifs_from_json(j));
  if (j.is_object() && j.contains("grid")) {
    const Json& grid = j.at("grid");
    if (static_cast<int>(grid.size()) != m) fail(Errc::ParseError, "grid must have m rows");
    std::vector<Ifs> entries;
    for (const Json& row : grid) {
      if (static_cast<int>(row.size()) != n) fail(Errc::ParseError, "grid rows must have n entries");
      for (const Json& e : row) entries.push_back(ifs_from_json(e));
    }
    return ProductFractal(m, n, std::move(entries));
  }
  fail(Errc::ParseError, "fractal must be a preset or a grid object");
}

Json fractal_to_json(const ProductFractal& K) {
  Json grid = Json::array();
  for (int i = 1; i <= K.m(); ++i) {
    Json row = Json::array();
    for (int j = 1; j <= K.n(); ++j) {
      const Ifs& f = K.entry(i, j);
      Json e;
      e["c"] = rat_str(f.contraction_rat());
      Json w = Json::array();
      for (int s = 0; s < f.alphabet_size(); ++s) w.push_back(rat_str(f.translation_rat(s)));
      e["w"] = w;
      e["dimension"] = f.dimension();
      row.push_back(e);
    }
    grid.push_back(row);
  }
  Json j;
  j["grid"] = grid;
  j["dim_total"] = K.dim_total();
  return j;
}

Lattice lattice_from_json(const Json& j, int d) {
  if (j.is_null()) return Lattice::standard(d);
  if (j.is_string() && j.get<std::string>() == "standard") return Lattice::standard(d);
  if (!j.is_object() || !j.contains("basis")) fail(Errc::ParseError, "lattice needs a basis");
  Eigen::MatrixXd B = matrix_from_json(j.at("basis"));
  if (B.rows() != d || B.cols() != d) fail(Errc::ParseError, "lattice basis must be d x d");
  bool exact = true;
  for (const Json& row : j.at("basis"))
    for (const Json& v : row)
      if (!v.is_string() && !v.is_number_integer()) exact = false;
  return Lattice(B, exact);
}

Json lattice_to_json(const Lattice& L) {
  Json j;
  j["basis"] = matrix_to_json(L.basis());
  return j;
}

EtaProfile profile_from_json(const Json& j, const Weights& W) {
  if (!j.is_object() || !j.contains("eta")) fail(Errc::ParseError, "profile needs an eta list");
  bool strict = j.value("strict", false);
  std::string prov = j.value("provenance", "file");
  std::vector<Rat> er;
  bool exact = true;
  for (const Json& v : j.at("eta")) {
    auto r = rat_from_json(v);
    if (!r) {
      exact = false;
      break;
    }
    er.push_back(*r);
  }
  if (exact && W.exact()) return EtaProfile(std::move(er), W, strict, prov);
  std::vector<double> ed;
  for (const Json& v : j.at("eta")) ed.push_back(number_from_json(v));
  return EtaProfile(std::move(ed), W, strict, prov);
}

Json profile_to_json(const EtaProfile& p, const Weights& W) {
  Json j;
  Json eta = Json::array();
  for (int l = 1; l <= p.d() - 1; ++l)
    eta.push_back(p.exact() ? Json(rat_str(p.eta_rat(l))) : Json(p.eta(l)));
  j["eta"] = eta;
  j["eta_min_combo"] = p.eta_min_combo();
  if (p.exact() && W.exact()) j["eta_min_combo_exact"] = rat_str(p.eta_min_combo_rat(W));
  j["strict"] = p.strict();
  j["provenance"] = p.provenance();
  return j;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) fail(Errc::ParseError, "matrix must be a nonempty array");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd M(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(r).size()) != cols) fail(Errc::ParseError, "ragged matrix rows");
    for (int c = 0; c < cols; ++c) M(r, c) = number_from_json(j.at(r).at(c));
  }
  return M;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

Json witness_to_json(const DirichletWitness& w) {
  Json j;
  Json p = Json::array(), q = Json::array();
  for (int i = 0; i < w.p.size(); ++i) p.push_back(w.p(i));
  for (int i = 0; i < w.q.size(); ++i) q.push_back(w.q(i));
  j["p"] = p;
  j["q"] = q;
  j["T"] = w.T;
  j["eps"] = w.eps;
  j["residual_a"] = w.residual_a;
  j["qnorm_b"] = w.qnorm_b;
  return j;
}

Json zeta_to_json(const ZetaEstimate& z) {
  Json j;
  j["l"] = z.l;
  j["gamma_certified"] = z.gamma_certified;
  j["method"] = z.method;
  j["slope_min"] = z.slope_min;
  j["fit_residual_max"] = z.fit_residual_max;
  j["capped_vectors"] = z.capped_vectors;
  j["samples"] = z.samples;
  j["worst_v"] = z.worst_v;
  return j;
}

ZetaEstimate zeta_from_json(const Json& j) {
  ZetaEstimate z;
  z.l = j.at("l").get<int>();
  z.gamma_certified = j.at("gamma_certified").get<double>();
  z.method = j.value("method", "file");
  z.slope_min = j.value("slope_min", 0.0);
  z.samples = j.value("samples", uint64_t{0});
  return z;
}

Json bound_report_to_json(const BoundReport& rep) {
  Json j;
  j["kind"] = rep.kind;
  if (rep.param) j["param"] = *rep.param;
  j["s"] = rep.s.value;
  if (rep.s.exact) j["s_exact"] = rat_str(*rep.s.exact);
  j["bound"] = rep.bound.value;
  if (rep.bound.exact) j["bound_exact"] = rat_str(*rep.bound.exact);
  j["eta"] = rep.eta;
  j["eta_provenance"] = rep.eta_provenance;
  j["empirically_certified"] = rep.empirically_certified;
  return j;
}

Json contraction_report_to_json(const ContractionReport& rep) {
  Json j;
  j["t"] = rep.t;
  j["f_L"] = rep.f_L;
  j["mc_mean"] = rep.mc_mean;
  j["mc_stderr"] = rep.mc_stderr;
  j["rhs"] = rep.rhs;
  j["margin"] = rep.margin;
  j["holds"] = rep.holds;
  Json decay = Json::array();
  for (const GradeDecay& g : rep.decay) {
    Json d;
    d["l"] = g.l;
    d["slope"] = g.slope;
    d["slope_stderr"] = g.slope_stderr;
    d["reference"] = g.reference;
    d["ok"] = g.ok;
    decay.push_back(d);
  }
  j["decay"] = decay;
  return j;
}

}  // namespace singlab
