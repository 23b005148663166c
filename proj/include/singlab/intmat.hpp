#pragma once

#include <vector>

#include "singlab/rational.hpp"

namespace singlab {

// Dense arbitrary-precision integer matrix, row major. Sized for lattice
// coordinate work (dimensions <= 8), not for bulk numerics.
class IntMat {
public:
  IntMat() = default;
  IntMat(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols) {}
  static IntMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  BigInt& at(int r, int c) { return v_[static_cast<size_t>(r) * cols_ + c]; }
  const BigInt& at(int r, int c) const { return v_[static_cast<size_t>(r) * cols_ + c]; }

  IntMat mul(const IntMat& o) const;
  IntMat cols_subset(const std::vector<int>& idx) const;
  IntMat hstack(const IntMat& o) const;
  bool operator==(const IntMat& o) const = default;

private:
  int rows_ = 0, cols_ = 0;
  std::vector<BigInt> v_;
};

// U * A * V = S with U, V unimodular and S diagonal (no divisibility chain;
// rank and |prod diag| are what downstream uses). Uinv tracks U^-1 exactly.
struct SmithResult {
  IntMat U, Uinv, S, V;
  int rank = 0;
};
SmithResult smith_normal_form(const IntMat& A);

// basis of ker(A) intersected with Z^cols, as columns
IntMat integer_kernel(const IntMat& A);

// basis (columns) of the subgroup generated by the columns of A
IntMat column_span_basis(const IntMat& A);

// primitive closure of the column span: basis of span_R(cols) ∩ Z^rows
IntMat saturate_columns(const IntMat& A);

// full column rank and index 1 in its saturation
bool is_primitive(const IntMat& A);

int integer_rank(const IntMat& A);

}  // namespace singlab
