#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "singlab/errors.hpp"
#include "singlab/exterior.hpp"
#include "singlab/rng.hpp"

using namespace singlab;

namespace {

// independent minor oracle: determinant by full permutation expansion
double leibniz_det(const Eigen::MatrixXd& M, const IndexSet& rows, const IndexSet& cols) {
  int l = static_cast<int>(rows.size());
  std::vector<int> perm(l);
  for (int i = 0; i < l; ++i) perm[i] = i;
  double det = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double prod = inversions % 2 == 0 ? 1.0 : -1.0;
    for (int i = 0; i < l; ++i) prod *= M(rows[i] - 1, cols[perm[i]] - 1);
    det += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

WedgeVector oracle_action(const Eigen::MatrixXd& M, const WedgeVector& v) {
  const auto& sets = index_sets(v.dim(), v.grade());
  WedgeVector out(v.dim(), v.grade());
  for (size_t i = 0; i < sets.size(); ++i) {
    double acc = 0;
    for (size_t j = 0; j < sets.size(); ++j)
      acc += leibniz_det(M, sets[i], sets[j]) * v[static_cast<int>(j)];
    out[static_cast<int>(i)] = acc;
  }
  return out;
}

Eigen::MatrixXd random_matrix(int d, RngStream& rng) {
  Eigen::MatrixXd M(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) M(r, c) = rng.next_gaussian();
  return M;
}

WedgeVector random_wedge(int d, int l, RngStream& rng) {
  WedgeVector v(d, l);
  for (int i = 0; i < v.size(); ++i) v[i] = rng.next_gaussian();
  return v;
}

}  // namespace

TEST_CASE("identity acts trivially") {
  RngStream rng(11, "id");
  WedgeVector v = random_wedge(4, 2, rng);
  WedgeVector out = wedge_action(Eigen::MatrixXd::Identity(4, 4), v);
  for (int i = 0; i < v.size(); ++i) CHECK(out[i] == doctest::Approx(v[i]));
}

TEST_CASE("top wedge is the determinant") {
  Eigen::MatrixXd M(2, 2);
  M << 2, 3, 1, 2;  // det 1
  WedgeVector e12 = WedgeVector::basis(2, {1, 2});
  WedgeVector out = wedge_action(M, e12);
  CHECK(out.coord({1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("u(theta) on e_13 places the minor at e_12") {
  Eigen::MatrixXd theta(2, 1);
  theta << 0.3, 0.8;  // theta_21 = 0.8
  Eigen::MatrixXd u = u_theta(theta);
  WedgeVector e13 = WedgeVector::basis(3, {1, 3});
  WedgeVector moved = wedge_action(u, e13);
  // sorted-index minor convention; cross-checked against the oracle
  WedgeVector oracle = oracle_action(u, e13);
  CHECK(moved.coord({1, 2}) == doctest::Approx(oracle.coord({1, 2})));
  CHECK(std::abs(moved.coord({1, 2})) == doctest::Approx(0.8));
  CHECK(moved.coord({1, 3}) == doctest::Approx(1.0));
}

TEST_CASE("wedge action agrees with the permutation oracle") {
  RngStream rng(13, "oracle");
  for (int trial = 0; trial < 10; ++trial) {
    int d = 3 + static_cast<int>(rng.next_below(2));
    int l = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(d - 1)));
    Eigen::MatrixXd M = random_matrix(d, rng);
    WedgeVector v = random_wedge(d, l, rng);
    WedgeVector got = wedge_action(M, v);
    WedgeVector want = oracle_action(M, v);
    for (int i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
  }
}

TEST_CASE("projections split the plus and minus families") {
  WedgeVector v(3, 1);
  v.set_coord({1}, 1.0);
  v.set_coord({2}, 2.0);
  v.set_coord({3}, 3.0);
  WedgeVector plus = project_plus(v, 2), minus = project_minus(v, 2);
  CHECK(plus.coord({1}) == 1.0);
  CHECK(plus.coord({2}) == 2.0);
  CHECK(plus.coord({3}) == 0.0);
  CHECK(minus.coord({3}) == 3.0);
  CHECK(minus.coord({1}) == 0.0);

  // grade 2, m = 2: only {1,2} has full intersection with {1, 2}
  WedgeVector w(3, 2);
  w.set_coord({1, 2}, 1.0);
  w.set_coord({1, 3}, 1.0);
  w.set_coord({2, 3}, 1.0);
  WedgeVector wp = project_plus(w, 2);
  CHECK(wp.coord({1, 2}) == 1.0);
  CHECK(wp.coord({1, 3}) == 0.0);
  CHECK(wp.coord({2, 3}) == 0.0);
}

TEST_CASE("plus and minus projections sum to the identity") {
  RngStream rng(17, "split");
  WedgeVector v = random_wedge(4, 2, rng);
  WedgeVector p = project_plus(v, 2), m = project_minus(v, 2);
  p += m;
  for (int i = 0; i < v.size(); ++i) CHECK(p[i] == doctest::Approx(v[i]));
  WedgeVector pp = project_plus(project_plus(v, 2), 2);
  WedgeVector orig_p = project_plus(v, 2);
  for (int i = 0; i < v.size(); ++i) CHECK(pp[i] == orig_p[i]);
}

TEST_CASE("flow exponents of basis wedges") {
  Weights w = Weights::equal(2, 1);
  CHECK(gt_wedge_exponent(w, {1, 2}) == doctest::Approx(1.0));
  CHECK(gt_wedge_exponent(w, {3}) == doctest::Approx(-1.0));
  CHECK(gt_wedge_exponent(w, {2, 3}) == doctest::Approx(-0.5));
  CHECK(gt_wedge_exponent_rat(w, {2, 3}) == Rat(-1, 2));
}

TEST_CASE("minimal plus exponent equals the expansion exponent exactly") {
  Weights w21 = Weights::equal(2, 1);
  CHECK(min_plus_exponent_rat(w21, 1) == w21.expansion_exponent_rat(1));
  CHECK(min_plus_exponent_rat(w21, 2) == w21.expansion_exponent_rat(2));
  CHECK(min_plus_exponent(w21, 1) == doctest::Approx(0.5));
  CHECK(min_plus_exponent(w21, 2) == doctest::Approx(1.0));

  std::vector<Rat> a{Rat(1)}, b{Rat(3, 5), Rat(2, 5)};
  Weights w12 = Weights::validate(a, b);
  CHECK(min_plus_exponent_rat(w12, 2) == Rat(2, 5));
  for (int l = 1; l <= 2; ++l)
    CHECK(min_plus_exponent_rat(w12, l) == w12.expansion_exponent_rat(l));

  // random rational weights, all grades
  std::vector<Rat> ra{Rat(5, 8), Rat(2, 8), Rat(1, 8)}, rb{Rat(7, 10), Rat(3, 10)};
  Weights w32 = Weights::validate(ra, rb);
  for (int l = 1; l <= 4; ++l)
    CHECK(min_plus_exponent_rat(w32, l) == w32.expansion_exponent_rat(l));
}

TEST_CASE("u(theta) is the identity on the plus family") {
  RngStream rng(19, "uplus");
  for (int trial = 0; trial < 20; ++trial) {
    int m = 1 + static_cast<int>(rng.next_below(2));
    int n = 1 + static_cast<int>(rng.next_below(2));
    int d = m + n;
    Eigen::MatrixXd theta(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) theta(i, j) = rng.next_gaussian();
    for (int l = 1; l <= d - 1; ++l) {
      WedgeVector v = project_plus(random_wedge(d, l, rng), m);
      WedgeVector moved = project_plus(wedge_action(u_theta(theta), v), m);
      for (int i = 0; i < v.size(); ++i) CHECK(moved[i] == doctest::Approx(v[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("wedge action is multiplicative") {
  RngStream rng(23, "mult");
  for (int d : {3, 4}) {
    Eigen::MatrixXd A = random_matrix(d, rng), B = random_matrix(d, rng);
    for (int l = 1; l <= d - 1; ++l) {
      WedgeVector v = random_wedge(d, l, rng);
      WedgeVector lhs = wedge_action(A * B, v);
      WedgeVector rhs = wedge_action(A, wedge_action(B, v));
      for (int i = 0; i < v.size(); ++i) CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("operator norm dominates the action") {
  RngStream rng(29, "opnorm");
  for (int trial = 0; trial < 10; ++trial) {
    int d = 3;
    Eigen::MatrixXd M = random_matrix(d, rng);
    double norm = wedge_operator_norm(M, d);
    for (int l = 1; l <= d; ++l) {
      WedgeVector v = random_wedge(d, l, rng);
      CHECK(wedge_action(M, v).sup_norm() <= norm * v.sup_norm() * (1 + 1e-12));
    }
  }
}

TEST_CASE("grade and dimension guards") {
  CHECK_THROWS_AS(WedgeVector(3, 0), Error);
  CHECK_THROWS_AS(WedgeVector(9, 1), Error);
  WedgeVector v(3, 3);
  CHECK_THROWS_AS(project_plus(v, 2), Error);  // grade d has no split
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(4, 4);
  WedgeVector u(3, 1);
  CHECK_THROWS_AS(wedge_action(M, u), Error);
}

TEST_CASE("g_t matrix matches the weight exponents") {
  Weights w = Weights::equal(2, 1);
  Eigen::MatrixXd g = g_t(w, 9.0);
  CHECK(g(0, 0) == doctest::Approx(3.0));
  CHECK(g(1, 1) == doctest::Approx(3.0));
  CHECK(g(2, 2) == doctest::Approx(1.0 / 9.0));
}
