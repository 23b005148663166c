#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "singlab/rational.hpp"
#include "singlab/rng.hpp"
#include "singlab/weights.hpp"

namespace singlab {

// Equal-ratio similarity system x -> c x + w_e on the line. Construction
// shifts the translations so the attractor has min 0, then verifies the open
// set condition exactly: the images of the attractor hull must be pairwise
// disjoint open subintervals.
class Ifs {
public:
  Ifs(const Rat& c, std::vector<Rat> translations);
  static Ifs preset(const std::string& name);  // unit_interval | cantor3 | cantor5

  int alphabet_size() const { return static_cast<int>(w_.size()); }
  double contraction() const { return c_d_; }
  const Rat& contraction_rat() const { return c_; }
  double translation(int e) const;
  const Rat& translation_rat(int e) const;

  double dimension() const { return s_; }  // log p / log(1/c), in (0, 1]
  const std::optional<Rat>& dimension_rat() const { return s_rat_; }

  double diameter() const { return diam_d_; }  // attractor is inside [0, diameter]
  const Rat& diameter_rat() const { return diam_; }

  // value of the L-fold composition at 0; first symbol is the coarsest
  double coding_map(std::span<const int> word) const;
  Rat coding_map_rat(std::span<const int> word) const;

  int sampling_depth(double tol = 1e-12) const;
  double sample_point(RngStream& rng, int depth) const;

  // certified-by-testing Holder constant: mass of [x-y, x+y] <= lambda * y^s
  double holder_constant() const;

private:
  Rat c_;
  std::vector<Rat> w_;  // sorted ascending after normalization
  Rat diam_;
  double c_d_ = 0, diam_d_ = 0, s_ = 0;
  std::optional<Rat> s_rat_;
};

class ProductFractal {
public:
  ProductFractal(int m, int n, std::vector<Ifs> entries);  // row-major grid
  static ProductFractal uniform(int m, int n, const Ifs& entry);

  int m() const { return m_; }
  int n() const { return n_; }
  const Ifs& entry(int i, int j) const;  // 1-based

  double dim_total() const;
  std::optional<Rat> dim_total_rat() const;
  bool is_full_box() const;  // every entry attractor equals [0, 1]

  bool r_in_xi(const Eigen::MatrixXd& r) const;
  Eigen::MatrixXd xi_ones() const;
  Eigen::MatrixXd support_sup() const;  // entrywise attractor diameters

  std::vector<Eigen::MatrixXd> sample_mu(int count, uint64_t seed, int depth = 0) const;
  std::vector<Eigen::MatrixXd> sample_mu_r(const Eigen::MatrixXd& r, int count, uint64_t seed,
                                           int depth = 0) const;

private:
  int m_, n_;
  std::vector<Ifs> grid_;
};

struct SubdivisionLevels {
  Eigen::MatrixXi N;
  Eigen::MatrixXd r;  // in [1, 1/c) entrywise
  Eigen::MatrixXd s;  // c^N entrywise
};

// per-entry level N with c^(N+1) < t^(-k (a_i + b_j)) <= c^N
SubdivisionLevels subdivision_levels(const ProductFractal& K, const Weights& W, double t, int k);

// per-entry level P with c^P <= t^(-(a_1 + b_1) l) < c^(P-1); P >= N element-wise
Eigen::MatrixXi covering_levels(const ProductFractal& K, const Weights& W, double t, int l);

// exact number of product cells at the given levels
BigInt cell_count(const ProductFractal& K, const Eigen::MatrixXi& levels);

// comparison value (1 / prod c_ij) * t^(s (a_1 + b_1) M)
double cell_count_bound(const ProductFractal& K, const Weights& W, double t, int M);

}  // namespace singlab
