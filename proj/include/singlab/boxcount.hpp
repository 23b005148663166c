#pragma once

#include <string>
#include <vector>

#include "singlab/diophantine.hpp"
#include "singlab/fractal.hpp"

namespace singlab {

struct CellPredicate {
  std::string kind;  // always | dirichlet | phi1_growth
  double eps = 0;    // dirichlet threshold
  double gamma = 0;  // phi1 growth exponent
};

// one product cell: per-entry words (first symbol coarsest) plus the anchor,
// the image of 0 under the word composition
struct ProductCell {
  std::vector<std::vector<int>> words;  // row-major over grid entries
  Eigen::MatrixXd anchor;
};

// count of product cells at the given per-entry levels whose anchor passes the
// predicate at every ladder time t^1..t^ladder
BigInt surviving_cells_at_level(const ProductFractal& K, const Weights& W, double t,
                                const Eigen::MatrixXi& levels, int ladder,
                                const CellPredicate& pred, const Lattice& x0,
                                uint64_t budget = 4000000);

// cells at the covering level of step M, ladder of length M
BigInt surviving_cells(const ProductFractal& K, const Weights& W, double t, int M,
                       const CellPredicate& pred, const Lattice& x0, uint64_t budget = 4000000);

struct CoverExperiment {
  double t = 0;
  int M_min = 0, M_max = 0;
  CellPredicate predicate;
  double a1b1 = 0;
  double s = 0;
  std::vector<BigInt> counts;  // indexed by M - M_min
};

CoverExperiment run_cover_experiment(const ProductFractal& K, const Weights& W, double t,
                                     int M_min, int M_max, const CellPredicate& pred,
                                     const Lattice& x0, uint64_t budget = 4000000);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double ci95 = 0;
  int points = 0;
};

// least squares of log(count) against M (a_1 + b_1) log t; needs >= 3 levels
// with nonzero counts
SlopeFit fit_slope(const CoverExperiment& e);

double log_big(const BigInt& x);

}  // namespace singlab
