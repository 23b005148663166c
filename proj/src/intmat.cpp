#include "singlab/intmat.hpp"

#include <algorithm>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

BigInt abs_big(const BigInt& x) { return x < 0 ? BigInt(-x) : x; }

void swap_rows(IntMat& A, int r1, int r2) {
  for (int c = 0; c < A.cols(); ++c) std::swap(A.at(r1, c), A.at(r2, c));
}

void swap_cols(IntMat& A, int c1, int c2) {
  for (int r = 0; r < A.rows(); ++r) std::swap(A.at(r, c1), A.at(r, c2));
}

// row r1 += f * row r2
void add_row(IntMat& A, int r1, int r2, const BigInt& f) {
  for (int c = 0; c < A.cols(); ++c) A.at(r1, c) += f * A.at(r2, c);
}

void add_col(IntMat& A, int c1, int c2, const BigInt& f) {
  for (int r = 0; r < A.rows(); ++r) A.at(r, c1) += f * A.at(r, c2);
}

}  // namespace

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMat IntMat::mul(const IntMat& o) const {
  if (cols_ != o.rows()) fail(Errc::DimensionMismatch, "integer matrix product shape");
  IntMat out(rows_, o.cols());
  for (int r = 0; r < rows_; ++r)
    for (int k = 0; k < cols_; ++k) {
      const BigInt& x = at(r, k);
      if (x == 0) continue;
      for (int c = 0; c < o.cols(); ++c) out.at(r, c) += x * o.at(k, c);
    }
  return out;
}

IntMat IntMat::cols_subset(const std::vector<int>& idx) const {
  IntMat out(rows_, static_cast<int>(idx.size()));
  for (size_t j = 0; j < idx.size(); ++j)
    for (int r = 0; r < rows_; ++r) out.at(r, static_cast<int>(j)) = at(r, idx[j]);
  return out;
}

IntMat IntMat::hstack(const IntMat& o) const {
  if (rows_ != o.rows()) fail(Errc::DimensionMismatch, "hstack row mismatch");
  IntMat out(rows_, cols_ + o.cols());
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.at(r, c) = at(r, c);
    for (int c = 0; c < o.cols(); ++c) out.at(r, cols_ + c) = o.at(r, c);
  }
  return out;
}

SmithResult smith_normal_form(const IntMat& A) {
  SmithResult res;
  res.S = A;
  res.U = IntMat::identity(A.rows());
  res.Uinv = IntMat::identity(A.rows());
  res.V = IntMat::identity(A.cols());
  IntMat& S = res.S;
  int t = 0;
  int limit = std::min(A.rows(), A.cols());
  while (t < limit) {
    int pr = -1, pc = -1;
    BigInt best = 0;
    for (int r = t; r < S.rows(); ++r)
      for (int c = t; c < S.cols(); ++c) {
        if (S.at(r, c) == 0) continue;
        BigInt a = abs_big(S.at(r, c));
        if (pr < 0 || a < best) {
          best = a;
          pr = r;
          pc = c;
        }
      }
    if (pr < 0) break;  // remaining block is zero
    if (pr != t) {
      swap_rows(S, pr, t);
      swap_rows(res.U, pr, t);
      swap_cols(res.Uinv, pr, t);
    }
    if (pc != t) {
      swap_cols(S, pc, t);
      swap_cols(res.V, pc, t);
    }
    bool clean = true;
    for (int r = t + 1; r < S.rows(); ++r) {
      if (S.at(r, t) == 0) continue;
      BigInt f = S.at(r, t) / S.at(t, t);
      if (f != 0) {
        add_row(S, r, t, -f);
        add_row(res.U, r, t, -f);
        // (row r += f * row t) on U means col t -= f * col r on U^-1
        add_col(res.Uinv, t, r, f);
      }
      if (S.at(r, t) != 0) clean = false;
    }
    for (int c = t + 1; c < S.cols(); ++c) {
      if (S.at(t, c) == 0) continue;
      BigInt f = S.at(t, c) / S.at(t, t);
      if (f != 0) {
        add_col(S, c, t, -f);
        add_col(res.V, c, t, -f);
      }
      if (S.at(t, c) != 0) clean = false;
    }
    if (clean) ++t;  // pivot cleared; otherwise loop re-picks a smaller pivot
  }
  res.rank = 0;
  for (int i = 0; i < limit; ++i)
    if (S.at(i, i) != 0) ++res.rank;
  return res;
}

IntMat integer_kernel(const IntMat& A) {
  SmithResult snf = smith_normal_form(A);
  // A V = U^-1 S, so the kernel is spanned by the V-columns facing zero in S
  std::vector<int> zero_cols;
  for (int c = 0; c < A.cols(); ++c) {
    bool zero = c >= std::min(A.rows(), A.cols()) || snf.S.at(c, c) == 0;
    if (zero) zero_cols.push_back(c);
  }
  return snf.V.cols_subset(zero_cols);
}

IntMat column_span_basis(const IntMat& A) {
  SmithResult snf = smith_normal_form(A);
  IntMat av = A.mul(snf.V);
  std::vector<int> keep;
  for (int c = 0; c < av.cols(); ++c) {
    bool nonzero = false;
    for (int r = 0; r < av.rows(); ++r)
      if (av.at(r, c) != 0) nonzero = true;
    if (nonzero) keep.push_back(c);
  }
  return av.cols_subset(keep);
}

IntMat saturate_columns(const IntMat& A) {
  SmithResult snf = smith_normal_form(A);
  // span_R(A) ∩ Z^rows is generated by the first `rank` columns of U^-1
  std::vector<int> keep;
  for (int c = 0; c < snf.rank; ++c) keep.push_back(c);
  return snf.Uinv.cols_subset(keep);
}

bool is_primitive(const IntMat& A) {
  SmithResult snf = smith_normal_form(A);
  if (snf.rank != A.cols()) return false;
  BigInt prod = 1;
  for (int i = 0; i < snf.rank; ++i) prod *= abs_big(snf.S.at(i, i));
  return prod == 1;
}

int integer_rank(const IntMat& A) { return smith_normal_form(A).rank; }

}  // namespace singlab
