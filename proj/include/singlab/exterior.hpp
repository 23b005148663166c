#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "singlab/weights.hpp"

namespace singlab {

// Index sets I = {i_1 < ... < i_l} within {1..d}; the e_I with |I| = l give the
// coordinate basis of the grade-l exterior power, ordered lexicographically.
using IndexSet = std::vector<int>;

const std::vector<IndexSet>& index_sets(int d, int l);
int index_set_position(int d, const IndexSet& I);
bool in_plus_family(const IndexSet& I, int m, int l);

class WedgeVector {
public:
  WedgeVector(int d, int l);
  static WedgeVector basis(int d, const IndexSet& I);

  int dim() const { return d_; }
  int grade() const { return l_; }
  int size() const { return static_cast<int>(coords_.size()); }

  double operator[](int pos) const { return coords_[pos]; }
  double& operator[](int pos) { return coords_[pos]; }
  double coord(const IndexSet& I) const;
  void set_coord(const IndexSet& I, double v);

  double sup_norm() const;
  WedgeVector& operator+=(const WedgeVector& o);
  WedgeVector& operator*=(double s);

  std::span<const double> raw() const { return coords_; }

private:
  int d_, l_;
  std::vector<double> coords_;
};

// coordinates are l x l minors: (Mv)_I = sum_J det(M[I, J]) v_J
WedgeVector wedge_action(const Eigen::MatrixXd& M, const WedgeVector& v);

// v_1 ^ ... ^ v_l for the columns of a d x l matrix
WedgeVector wedge_of_columns(const Eigen::MatrixXd& cols);

WedgeVector project_plus(const WedgeVector& v, int m);
WedgeVector project_minus(const WedgeVector& v, int m);

// diagonal-flow exponent of e_I: sum of a_i over I on the a side minus
// sum of b_{j-m} over I on the b side; g_t scales e_I by t^exponent
double gt_wedge_exponent(const Weights& W, const IndexSet& I);
Rat gt_wedge_exponent_rat(const Weights& W, const IndexSet& I);

double min_plus_exponent(const Weights& W, int l);
Rat min_plus_exponent_rat(const Weights& W, int l);

// operator norm of the direct sum of the grade-1..lmax wedge actions under the
// max-coordinate norm: max over I of sum_J |det(M[I, J])|
double wedge_operator_norm(const Eigen::MatrixXd& M, int lmax);

Eigen::MatrixXd u_theta(const Eigen::MatrixXd& theta);
Eigen::MatrixXd g_t(const Weights& W, double t);

}  // namespace singlab
