#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "singlab/exterior.hpp"
#include "singlab/intmat.hpp"
#include "singlab/rng.hpp"

namespace singlab {

// Unimodular lattice spanned by the columns of `basis`; |det| must be 1
// within 1e-9 of log scale.
class Lattice {
public:
  explicit Lattice(Eigen::MatrixXd basis, bool exact_rational = false);
  static Lattice standard(int d);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  double det_log() const { return det_log_; }
  bool exact_rational() const { return exact_rational_; }

  Eigen::VectorXd vec(const Eigen::VectorXi& coords) const;

private:
  Eigen::MatrixXd basis_;
  double det_log_ = 0;
  bool exact_rational_ = false;
};

struct LatticePoint {
  Eigen::VectorXi coords;  // in the lattice basis
  Eigen::VectorXd vec;
  double sup_norm = 0;
};

// sup-norm shortest nonzero vector: LLL preprocessing plus exhaustive
// enumeration of the covering Euclidean ball
LatticePoint shortest_vector(const Lattice& L);

// all nonzero vectors with ||v||_inf <= R, one representative per +/- pair,
// restricted to gcd-primitive coordinate vectors
std::vector<LatticePoint> sup_ball(const Lattice& L, double R, uint64_t budget = 200000);

// Integer-coordinate subgroup of the parent lattice; columns of `coords` are
// the generators written in the parent basis. Rank 0 is allowed.
class Sublattice {
public:
  Sublattice(const Lattice& parent, IntMat coords);

  int rank() const { return coords_.cols(); }
  const IntMat& coords() const { return coords_; }
  const Lattice& parent() const { return *parent_; }
  Eigen::MatrixXd real_basis() const;

  bool primitive() const;
  Sublattice saturation() const;

private:
  const Lattice* parent_;
  IntMat coords_;
};

// sup norm of the wedge of the real-embedded basis (1 for rank 0)
double sublattice_norm(const Sublattice& S);
// Euclidean-induced wedge norm: sqrt(det Gram)
double sublattice_norm_euclidean(const Sublattice& S);

Sublattice intersect(const Sublattice& A, const Sublattice& B);
Sublattice subgroup_sum(const Sublattice& A, const Sublattice& B, bool saturate);

struct EmmDefect {
  double sup = 0;
  double euclidean = 0;
  int rank_meet = 0, rank_join = 0;
};
// (||A ∩ B|| * ||A + B||) / (||A|| * ||B||); requires primitive inputs.
// The raw subgroup sum is used unless saturate_sum is set.
EmmDefect emm_defect(const Sublattice& A, const Sublattice& B, bool saturate_sum = false);

struct PhiPolicy {
  double initial_radius = 0;        // 0: start at lambda_1
  double radius_cap_factor = 1048576.0;
  uint64_t vector_budget = 200000;
  uint64_t subset_budget = 20000000;
};

// max over primitive rank-l sublattices of 1 / ||Lambda_l||, via radius-doubled
// enumeration; phi_0 = phi_d = 1
double phi_l(const Lattice& L, int l, const PhiPolicy& policy = {});

Lattice random_unimodular_lattice(int d, RngStream& rng);
Sublattice random_primitive_sublattice(const Lattice& L, int rank, RngStream& rng);

}  // namespace singlab
