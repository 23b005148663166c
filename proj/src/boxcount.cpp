#include "singlab/boxcount.hpp"

#include <cmath>

#include "singlab/errors.hpp"
#include "singlab/stats.hpp"

namespace singlab {

namespace {

bool cell_passes(const ProductCell& cell, const Weights& W, double t, int ladder,
                 const CellPredicate& pred, const Lattice& x0) {
  for (int k = 1; k <= ladder; ++k) {
    double tk = std::pow(t, k);
    if (pred.kind == "dirichlet") {
      if (!dirichlet_test(cell.anchor, W, tk, pred.eps)) return false;
    } else if (pred.kind == "phi1_growth") {
      double phi1 = phi_l(flow_lattice(cell.anchor, W, x0, tk), 1);
      if (phi1 < std::pow(tk, pred.gamma)) return false;
    } else {
      fail(Errc::ParseError, "unknown predicate kind: " + pred.kind);
    }
  }
  return true;
}

}  // namespace

BigInt surviving_cells_at_level(const ProductFractal& K, const Weights& W, double t,
                                const Eigen::MatrixXi& levels, int ladder,
                                const CellPredicate& pred, const Lattice& x0, uint64_t budget) {
  if (pred.kind == "always") return cell_count(K, levels);
  BigInt total = cell_count(K, levels);
  if (total > BigInt(budget)) fail(Errc::BudgetExceeded, "cell enumeration budget exceeded");

  int m = K.m(), n = K.n();
  ProductCell cell;
  cell.words.resize(static_cast<size_t>(m) * n);
  cell.anchor.resize(m, n);
  std::vector<int> alphabet(static_cast<size_t>(m) * n);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= n; ++j) {
      size_t idx = static_cast<size_t>(i - 1) * n + (j - 1);
      cell.words[idx].assign(std::max(levels(i - 1, j - 1), 0), 0);
      alphabet[idx] = K.entry(i, j).alphabet_size();
    }

  BigInt survivors = 0;
  while (true) {
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= n; ++j) {
        size_t idx = static_cast<size_t>(i - 1) * n + (j - 1);
        cell.anchor(i - 1, j - 1) = K.entry(i, j).coding_map(cell.words[idx]);
      }
    if (cell_passes(cell, W, t, ladder, pred, x0)) ++survivors;

    // advance the product counter across entries and word positions
    size_t entry = 0;
    while (entry < cell.words.size()) {
      auto& word = cell.words[entry];
      size_t pos = 0;
      while (pos < word.size() && word[pos] == alphabet[entry] - 1) word[pos++] = 0;
      if (pos < word.size()) {
        ++word[pos];
        break;
      }
      ++entry;  // this entry wrapped around
    }
    if (entry == cell.words.size()) break;
  }
  return survivors;
}

BigInt surviving_cells(const ProductFractal& K, const Weights& W, double t, int M,
                       const CellPredicate& pred, const Lattice& x0, uint64_t budget) {
  Eigen::MatrixXi P = covering_levels(K, W, t, M);
  return surviving_cells_at_level(K, W, t, P, M, pred, x0, budget);
}

CoverExperiment run_cover_experiment(const ProductFractal& K, const Weights& W, double t,
                                     int M_min, int M_max, const CellPredicate& pred,
                                     const Lattice& x0, uint64_t budget) {
  if (M_min < 1 || M_max < M_min) fail(Errc::IndexOutOfRange, "M range");
  CoverExperiment e;
  e.t = t;
  e.M_min = M_min;
  e.M_max = M_max;
  e.predicate = pred;
  e.a1b1 = W.a1_plus_b1();
  e.s = K.dim_total();
  for (int M = M_min; M <= M_max; ++M)
    e.counts.push_back(surviving_cells(K, W, t, M, pred, x0, budget));
  return e;
}

double log_big(const BigInt& x) {
  if (x <= 0) fail(Errc::DegenerateCounts, "log of a nonpositive count");
  size_t bits = boost::multiprecision::msb(x) + 1;
  if (bits <= 63) return std::log(static_cast<double>(x.convert_to<unsigned long long>()));
  BigInt top = x >> (bits - 52);
  return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::log(2.0);
}

SlopeFit fit_slope(const CoverExperiment& e) {
  std::vector<double> xs, ys;
  for (size_t i = 0; i < e.counts.size(); ++i) {
    if (e.counts[i] <= 0) continue;
    int M = e.M_min + static_cast<int>(i);
    xs.push_back(M * e.a1b1 * std::log(e.t));
    ys.push_back(log_big(e.counts[i]));
  }
  if (xs.size() < 3) fail(Errc::DegenerateCounts, "need >= 3 levels with nonzero counts");
  LinearFit fit = linear_fit(xs, ys);
  SlopeFit out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.ci95 = 1.96 * fit.slope_stderr;
  out.points = fit.points;
  return out;
}

}  // namespace singlab
