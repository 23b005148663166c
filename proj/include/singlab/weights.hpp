#pragma once

#include <span>
#include <vector>

#include "singlab/rational.hpp"

namespace singlab {

inline constexpr int kMaxDim = 8;
inline constexpr double kWeightSumTol = 1e-12;

// Weight pair (a, b): each side nonincreasing, positive, summing to 1.
// Entries that reconstruct as p/q with q <= 10^6 are kept as exact rationals;
// otherwise the pair lives in doubles and `exact()` is false.
class Weights {
public:
  static Weights validate(std::span<const double> a, std::span<const double> b);
  static Weights validate(const std::vector<Rat>& a, const std::vector<Rat>& b);
  static Weights equal(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  int d() const { return m_ + n_; }
  bool exact() const { return exact_; }

  double a(int i) const;  // 1-based
  double b(int j) const;
  const Rat& a_rat(int i) const;
  const Rat& b_rat(int j) const;

  // w_l = a_m + ... + a_{m+1-l} for l <= m, else 1 - (b_1 + ... + b_{l-m})
  double expansion_exponent(int l) const;
  Rat expansion_exponent_rat(int l) const;

  double a1_plus_b1() const { return a(1) + b(1); }
  Rat a1_plus_b1_rat() const;
  double a_min() const { return a(m_); }
  double b_min() const { return b(n_); }

private:
  Weights() = default;
  int m_ = 0, n_ = 0;
  bool exact_ = false;
  std::vector<double> a_, b_;
  std::vector<Rat> a_rat_, b_rat_;
};

// max_i |x_i|^{1/w_i}; zero exactly when x = 0
double quasi_norm(std::span<const double> x, std::span<const double> w);

// exact predicate max_i |x_i|^{1/w_i} <= z for rational data; w_i = num/den
// compares |x_i|^den <= z^num per coordinate
bool quasi_norm_leq(const std::vector<Rat>& x, const std::vector<Rat>& w, const Rat& z);

}  // namespace singlab
