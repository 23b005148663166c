#include "singlab/weights.hpp"

#include <cmath>

#include "singlab/errors.hpp"

namespace singlab {

namespace {

void check_side(std::span<const double> w, const char* side) {
  if (w.empty()) fail(Errc::LengthMismatch, std::string(side) + " is empty");
  double sum = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0)) fail(Errc::NonPositiveEntry, std::string(side) + " has a non-positive entry");
    if (i > 0 && w[i] > w[i - 1])
      fail(Errc::NotSorted, std::string(side) + " is not nonincreasing");
    sum += w[i];
  }
  if (std::abs(sum - 1.0) > kWeightSumTol)
    fail(Errc::NotNormalized, std::string(side) + " does not sum to 1");
}

}  // namespace

Weights Weights::validate(std::span<const double> a, std::span<const double> b) {
  check_side(a, "a");
  check_side(b, "b");
  if (static_cast<int>(a.size() + b.size()) > kMaxDim)
    fail(Errc::DimensionMismatch, "m + n exceeds the supported dimension cap");
  Weights w;
  w.m_ = static_cast<int>(a.size());
  w.n_ = static_cast<int>(b.size());
  w.a_.assign(a.begin(), a.end());
  w.b_.assign(b.begin(), b.end());
  // exact storage when every entry reconstructs and both sides sum to exactly 1
  w.exact_ = true;
  Rat sa(0), sb(0);
  for (double x : w.a_) {
    auto r = rational_from_double(x);
    if (!r) {
      w.exact_ = false;
      break;
    }
    w.a_rat_.push_back(*r);
    sa += *r;
  }
  if (w.exact_) {
    for (double x : w.b_) {
      auto r = rational_from_double(x);
      if (!r) {
        w.exact_ = false;
        break;
      }
      w.b_rat_.push_back(*r);
      sb += *r;
    }
  }
  if (w.exact_ && (sa != 1 || sb != 1)) w.exact_ = false;
  if (!w.exact_) {
    w.a_rat_.clear();
    w.b_rat_.clear();
  }
  return w;
}

Weights Weights::validate(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  std::vector<double> ad, bd;
  for (const Rat& r : a) ad.push_back(to_double(r));
  for (const Rat& r : b) bd.push_back(to_double(r));
  check_side(ad, "a");
  check_side(bd, "b");
  if (static_cast<int>(a.size() + b.size()) > kMaxDim)
    fail(Errc::DimensionMismatch, "m + n exceeds the supported dimension cap");
  Weights w;
  w.m_ = static_cast<int>(a.size());
  w.n_ = static_cast<int>(b.size());
  w.a_ = std::move(ad);
  w.b_ = std::move(bd);
  Rat sa(0), sb(0);
  for (const Rat& r : a) sa += r;
  for (const Rat& r : b) sb += r;
  if (sa == 1 && sb == 1) {
    w.exact_ = true;
    w.a_rat_ = a;
    w.b_rat_ = b;
  }
  return w;
}

Weights Weights::equal(int m, int n) {
  std::vector<Rat> a(m, Rat(1, m)), b(n, Rat(1, n));
  return validate(a, b);
}

double Weights::a(int i) const {
  if (i < 1 || i > m_) fail(Errc::IndexOutOfRange, "a index");
  return a_[i - 1];
}

double Weights::b(int j) const {
  if (j < 1 || j > n_) fail(Errc::IndexOutOfRange, "b index");
  return b_[j - 1];
}

const Rat& Weights::a_rat(int i) const {
  if (!exact_) fail(Errc::NumericalInstability, "weights are not stored exactly");
  if (i < 1 || i > m_) fail(Errc::IndexOutOfRange, "a index");
  return a_rat_[i - 1];
}

const Rat& Weights::b_rat(int j) const {
  if (!exact_) fail(Errc::NumericalInstability, "weights are not stored exactly");
  if (j < 1 || j > n_) fail(Errc::IndexOutOfRange, "b index");
  return b_rat_[j - 1];
}

double Weights::expansion_exponent(int l) const {
  if (l < 1 || l > d() - 1) fail(Errc::IndexOutOfRange, "expansion exponent grade");
  double w = 0;
  if (l <= m_) {
    for (int i = m_ - l + 1; i <= m_; ++i) w += a(i);
  } else {
    w = 1.0;
    for (int j = 1; j <= l - m_; ++j) w -= b(j);
  }
  return w;
}

Rat Weights::expansion_exponent_rat(int l) const {
  if (l < 1 || l > d() - 1) fail(Errc::IndexOutOfRange, "expansion exponent grade");
  Rat w(0);
  if (l <= m_) {
    for (int i = m_ - l + 1; i <= m_; ++i) w += a_rat(i);
  } else {
    w = 1;
    for (int j = 1; j <= l - m_; ++j) w -= b_rat(j);
  }
  return w;
}

Rat Weights::a1_plus_b1_rat() const { return a_rat(1) + b_rat(1); }

double quasi_norm(std::span<const double> x, std::span<const double> w) {
  if (x.size() != w.size()) fail(Errc::LengthMismatch, "quasi_norm arity");
  double best = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(w[i] > 0)) fail(Errc::NonPositiveEntry, "quasi_norm weight");
    double v = std::pow(std::abs(x[i]), 1.0 / w[i]);
    best = std::max(best, v);
  }
  return best;
}

bool quasi_norm_leq(const std::vector<Rat>& x, const std::vector<Rat>& w, const Rat& z) {
  if (x.size() != w.size()) fail(Errc::LengthMismatch, "quasi_norm arity");
  if (z < 0) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    // |x_i|^{1/w_i} <= z  <=>  |x_i|^den <= z^num  with w_i = num/den
    BigInt num = numerator(w[i]), den = denominator(w[i]);
    if (num <= 0) fail(Errc::NonPositiveEntry, "quasi_norm weight");
    Rat ax = x[i] < 0 ? -x[i] : x[i];
    long e_den = den.convert_to<long>();
    long e_num = num.convert_to<long>();
    if (rat_pow(ax, e_den) > rat_pow(z, e_num)) return false;
  }
  return true;
}

}  // namespace singlab
