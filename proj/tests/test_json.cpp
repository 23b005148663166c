#include <doctest.h>

#include "singlab/errors.hpp"
#include "singlab/json_io.hpp"

using namespace singlab;

TEST_CASE("weights round-trip with exact rationals") {
  Json j = Json::parse(R"({"a":["1/2","1/2"],"b":["1"]})");
  Weights w = weights_from_json(j);
  CHECK(w.exact());
  CHECK(w.a_rat(2) == Rat(1, 2));
  Json back = weights_to_json(w);
  Weights again = weights_from_json(back);
  CHECK(again.exact());
  CHECK(again.a_rat(1) == w.a_rat(1));
}

TEST_CASE("weights accept plain numbers and decimal strings") {
  Json j = Json::parse(R"({"a":[0.7,"0.3"],"b":[1]})");
  Weights w = weights_from_json(j);
  CHECK(w.exact());  // 7/10 and 3/10 reconstruct
  CHECK(w.a_rat(1) == Rat(7, 10));
  CHECK_THROWS_AS(weights_from_json(Json::parse(R"({"a":[1]})")), Error);
}

TEST_CASE("fractal grids parse entrywise") {
  Json j = Json::parse(
      R"({"grid":[[{"preset":"cantor3"}],[{"c":"1/5","w":["0","4/5"]}]]})");
  ProductFractal K = fractal_from_json(j, 2, 1);
  CHECK(K.entry(1, 1).contraction_rat() == Rat(1, 3));
  CHECK(K.entry(2, 1).contraction_rat() == Rat(1, 5));
  CHECK_THROWS_AS(fractal_from_json(j, 3, 1), Error);
  Json round = fractal_to_json(K);
  ProductFractal K2 = fractal_from_json(round, 2, 1);
  CHECK(K2.entry(2, 1).alphabet_size() == 2);
}

TEST_CASE("lattice bases parse from strings and doubles") {
  Json j = Json::parse(R"({"basis":[["1","1/2"],["0","1"]]})");
  Lattice L = lattice_from_json(j, 2);
  CHECK(L.basis()(0, 1) == doctest::Approx(0.5));
  CHECK(L.exact_rational());
  CHECK(lattice_from_json(Json(nullptr), 3).dim() == 3);
  CHECK_THROWS_AS(lattice_from_json(j, 3), Error);
}

TEST_CASE("profiles round-trip with combo metadata") {
  Weights W = Weights::equal(2, 1);
  Json j = Json::parse(R"({"eta":["2","1"],"strict":false,"provenance":"closed_form:full_box"})");
  EtaProfile p = profile_from_json(j, W);
  CHECK(p.exact());
  CHECK(p.eta_min_combo() == doctest::Approx(1.0));
  Json out = profile_to_json(p, W);
  CHECK(out.at("eta_min_combo_exact").get<std::string>() == "1");
  EtaProfile p2 = profile_from_json(out, W);
  CHECK(p2.eta_rat(1) == Rat(2));
}

TEST_CASE("matrices accept rational entries") {
  Eigen::MatrixXd m = matrix_from_json(Json::parse(R"([["1/4",2],[3,"0.5"]])"));
  CHECK(m(0, 0) == doctest::Approx(0.25));
  CHECK(m(1, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(matrix_from_json(Json::parse(R"([[1],[2,3]])")), Error);
}
