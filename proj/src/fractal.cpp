#include "singlab/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "singlab/errors.hpp"

namespace singlab {

Ifs::Ifs(const Rat& c, std::vector<Rat> translations) : c_(c), w_(std::move(translations)) {
  if (!(c_ > 0 && c_ < 1)) fail(Errc::ParseError, "contraction ratio must be in (0, 1)");
  if (w_.size() < 2) fail(Errc::ParseError, "dimension must be positive: need at least 2 maps");
  std::sort(w_.begin(), w_.end());
  // shift so that min of the attractor is 0: min K = min w / (1 - c)
  Rat shift = w_.front();
  for (Rat& w : w_) w -= shift;
  Rat one_minus_c = Rat(1) - c_;
  diam_ = w_.back() / one_minus_c;

  // open set condition on U = interior of the attractor hull [0, diam]:
  // images [c*0 + w, c*diam + w] must be pairwise disjoint open intervals
  for (size_t e = 0; e + 1 < w_.size(); ++e) {
    if (w_[e] == w_[e + 1]) fail(Errc::ParseError, "duplicate translation");
    Rat hi = c_ * diam_ + w_[e];
    Rat lo = w_[e + 1];
    if (hi > lo) fail(Errc::ParseError, "open set condition fails: images overlap");
  }

  c_d_ = to_double(c_);
  diam_d_ = to_double(diam_);
  s_ = std::log(static_cast<double>(w_.size())) / -std::log(c_d_);
  s_rat_ = rational_log_ratio(BigInt(w_.size()), c_);
  if (s_ <= 0 || s_ > 1 + 1e-12) fail(Errc::ParseError, "dimension out of (0, 1]");
}

Ifs Ifs::preset(const std::string& name) {
  if (name == "unit_interval") return Ifs(Rat(1, 2), {Rat(0), Rat(1, 2)});
  if (name == "cantor3") return Ifs(Rat(1, 3), {Rat(0), Rat(2, 3)});
  if (name == "cantor5") return Ifs(Rat(1, 5), {Rat(0), Rat(4, 5)});
  fail(Errc::ParseError, "unknown fractal preset: " + name);
}

double Ifs::translation(int e) const {
  if (e < 0 || e >= alphabet_size()) fail(Errc::BadSymbol, "alphabet index");
  return to_double(w_[e]);
}

const Rat& Ifs::translation_rat(int e) const {
  if (e < 0 || e >= alphabet_size()) fail(Errc::BadSymbol, "alphabet index");
  return w_[e];
}

double Ifs::coding_map(std::span<const int> word) const {
  double x = 0, scale = 1;
  for (int sym : word) {
    if (sym < 0 || sym >= alphabet_size()) fail(Errc::BadSymbol, "word symbol");
    x += scale * to_double(w_[sym]);
    scale *= c_d_;
  }
  return x;
}

Rat Ifs::coding_map_rat(std::span<const int> word) const {
  Rat x(0), scale(1);
  for (int sym : word) {
    if (sym < 0 || sym >= alphabet_size()) fail(Errc::BadSymbol, "word symbol");
    x += scale * w_[sym];
    scale *= c_;
  }
  return x;
}

int Ifs::sampling_depth(double tol) const {
  if (diam_d_ == 0) return 1;
  int depth = 1;
  double err = c_d_ * diam_d_;
  while (err >= tol && depth < 4096) {
    err *= c_d_;
    ++depth;
  }
  return depth;
}

double Ifs::sample_point(RngStream& rng, int depth) const {
  double x = 0, scale = 1;
  for (int k = 0; k < depth; ++k) {
    int sym = static_cast<int>(rng.next_below(static_cast<uint64_t>(alphabet_size())));
    x += scale * to_double(w_[sym]);
    scale *= c_d_;
  }
  return x;
}

double Ifs::holder_constant() const {
  // cell-counting certificate: at the level where cells have diameter >= y,
  // a window of length 2y meets at most max_window cells, each of mass p^-L
  int p = alphabet_size();
  double best = 1.0;
  int max_level = 1;
  double cells = p;
  while (cells * p <= (1 << 18)) {
    cells *= p;
    ++max_level;
  }
  for (int L = 1; L <= max_level; ++L) {
    // enumerate all level-L cell anchors
    std::vector<double> anchors;
    anchors.reserve(static_cast<size_t>(std::pow(p, L)));
    std::vector<int> word(L, 0);
    while (true) {
      anchors.push_back(coding_map(word));
      int pos = L - 1;
      while (pos >= 0 && word[pos] == p - 1) word[pos--] = 0;
      if (pos < 0) break;
      ++word[pos];
    }
    std::sort(anchors.begin(), anchors.end());
    double cell_diam = std::pow(c_d_, L) * diam_d_;
    double y = cell_diam;  // smallest y with cell diameter >= y at this level
    // a window [x-y, x+y] meets cell [a, a+cell_diam] iff a lies within a
    // stretch of length 2y + cell_diam = 3y; slide that over the anchors
    size_t worst = 1;
    for (size_t i = 0; i < anchors.size(); ++i) {
      size_t j = i;
      while (j + 1 < anchors.size() && anchors[j + 1] <= anchors[i] + 3 * y) ++j;
      worst = std::max(worst, j - i + 1);
    }
    double mass = static_cast<double>(worst) * std::pow(1.0 / p, L);
    double lam = mass / std::pow(y, s_);
    best = std::max(best, lam);
  }
  return 2.0 * best;  // safety factor
}

ProductFractal::ProductFractal(int m, int n, std::vector<Ifs> entries)
    : m_(m), n_(n), grid_(std::move(entries)) {
  if (m < 1 || n < 1 || m + n > kMaxDim)
    fail(Errc::DimensionMismatch, "grid shape out of range");
  if (grid_.size() != static_cast<size_t>(m) * n)
    fail(Errc::DimensionMismatch, "grid entry count mismatch");
}

ProductFractal ProductFractal::uniform(int m, int n, const Ifs& entry) {
  std::vector<Ifs> grid(static_cast<size_t>(m) * n, entry);
  return ProductFractal(m, n, std::move(grid));
}

const Ifs& ProductFractal::entry(int i, int j) const {
  if (i < 1 || i > m_ || j < 1 || j > n_) fail(Errc::IndexOutOfRange, "grid entry");
  return grid_[static_cast<size_t>(i - 1) * n_ + (j - 1)];
}

double ProductFractal::dim_total() const {
  double s = 0;
  for (const Ifs& f : grid_) s += f.dimension();
  return s;
}

std::optional<Rat> ProductFractal::dim_total_rat() const {
  Rat s(0);
  for (const Ifs& f : grid_) {
    if (!f.dimension_rat()) return std::nullopt;
    s += *f.dimension_rat();
  }
  return s;
}

bool ProductFractal::is_full_box() const {
  for (const Ifs& f : grid_) {
    // attractor [0, 1] exactly: diameter 1 and maps tile it (p c == 1)
    if (f.diameter_rat() != 1) return false;
    if (Rat(f.alphabet_size()) * f.contraction_rat() != 1) return false;
  }
  return true;
}

bool ProductFractal::r_in_xi(const Eigen::MatrixXd& r) const {
  if (r.rows() != m_ || r.cols() != n_) return false;
  for (int i = 1; i <= m_; ++i)
    for (int j = 1; j <= n_; ++j) {
      double c = entry(i, j).contraction();
      double v = r(i - 1, j - 1);
      if (v < c * (1 - 1e-12) || v > (1 / c) * (1 + 1e-12)) return false;
    }
  return true;
}

Eigen::MatrixXd ProductFractal::xi_ones() const { return Eigen::MatrixXd::Ones(m_, n_); }

Eigen::MatrixXd ProductFractal::support_sup() const {
  Eigen::MatrixXd d(m_, n_);
  for (int i = 1; i <= m_; ++i)
    for (int j = 1; j <= n_; ++j) d(i - 1, j - 1) = entry(i, j).diameter();
  return d;
}

std::vector<Eigen::MatrixXd> ProductFractal::sample_mu(int count, uint64_t seed, int depth) const {
  return sample_mu_r(xi_ones(), count, seed, depth);
}

std::vector<Eigen::MatrixXd> ProductFractal::sample_mu_r(const Eigen::MatrixXd& r, int count,
                                                         uint64_t seed, int depth) const {
  if (!r_in_xi(r)) fail(Errc::ROutOfXi, "rescaling matrix is outside Xi");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(std::max(count, 0));
  for (int k = 0; k < count; ++k) {
    RngStream rng(seed, "mu", static_cast<uint64_t>(k));
    Eigen::MatrixXd theta(m_, n_);
    for (int i = 1; i <= m_; ++i)
      for (int j = 1; j <= n_; ++j) {
        const Ifs& f = entry(i, j);
        int dep = depth > 0 ? depth : f.sampling_depth();
        theta(i - 1, j - 1) = r(i - 1, j - 1) * f.sample_point(rng, dep);
      }
    out.push_back(std::move(theta));
  }
  return out;
}

namespace {

// exponent of x in base c, snapped to the nearest integer when the inputs sit
// on an exact power (rounding noise otherwise flips the level by one)
std::optional<long long> snapped_level(double c, double x) {
  long double L = std::log(static_cast<long double>(x)) / std::log(static_cast<long double>(c));
  long double nearest = std::floor(L + 0.5L);
  if (std::fabs(static_cast<double>(L - nearest)) < 1e-9 * std::max<long double>(1.0L, std::fabs(nearest)))
    return static_cast<long long>(nearest);
  return std::nullopt;
}

// unique integer N with c^(N+1) < x <= c^N for x in (0, 1]; extended
// precision plus an exact-direction fixup
int level_for(double c, double x) {
  if (auto snap = snapped_level(c, x)) return static_cast<int>(*snap);
  long double lc = std::log(static_cast<long double>(c));
  long double lx = std::log(static_cast<long double>(x));
  long long N = static_cast<long long>(std::floor(static_cast<double>(lx / lc)));
  auto ok = [&](long long k) {
    long double ck = std::pow(static_cast<long double>(c), static_cast<long double>(k));
    long double ck1 = ck * static_cast<long double>(c);
    return ck1 < static_cast<long double>(x) && static_cast<long double>(x) <= ck;
  };
  for (int fix = 0; fix < 4; ++fix) {
    if (ok(N)) return static_cast<int>(N);
    if (ok(N + 1)) return static_cast<int>(N + 1);
    if (ok(N - 1)) return static_cast<int>(N - 1);
    ++N;
  }
  fail(Errc::NumericalInstability, "level search failed");
}

// unique integer P with c^P <= x < c^(P-1)
int level_for_upper(double c, double x) {
  if (auto snap = snapped_level(c, x)) return static_cast<int>(*snap);
  long double lc = std::log(static_cast<long double>(c));
  long double lx = std::log(static_cast<long double>(x));
  long long P = static_cast<long long>(std::ceil(static_cast<double>(lx / lc)));
  auto ok = [&](long long k) {
    long double ck = std::pow(static_cast<long double>(c), static_cast<long double>(k));
    long double ckm = ck / static_cast<long double>(c);
    return ck <= static_cast<long double>(x) && static_cast<long double>(x) < ckm;
  };
  for (int fix = 0; fix < 4; ++fix) {
    if (ok(P)) return static_cast<int>(P);
    if (ok(P - 1)) return static_cast<int>(P - 1);
    if (ok(P + 1)) return static_cast<int>(P + 1);
    ++P;
  }
  fail(Errc::NumericalInstability, "level search failed");
}

}  // namespace

SubdivisionLevels subdivision_levels(const ProductFractal& K, const Weights& W, double t, int k) {
  if (!(t > 1)) fail(Errc::IndexOutOfRange, "subdivision needs t > 1");
  if (k < 1) fail(Errc::IndexOutOfRange, "subdivision needs k >= 1");
  if (K.m() != W.m() || K.n() != W.n()) fail(Errc::DimensionMismatch, "grid/weight shape");
  SubdivisionLevels out;
  out.N.resize(K.m(), K.n());
  out.r.resize(K.m(), K.n());
  out.s.resize(K.m(), K.n());
  for (int i = 1; i <= K.m(); ++i)
    for (int j = 1; j <= K.n(); ++j) {
      double c = K.entry(i, j).contraction();
      double x = std::pow(t, -static_cast<double>(k) * (W.a(i) + W.b(j)));
      int N = level_for(c, x);
      out.N(i - 1, j - 1) = N;
      double cN = std::pow(c, N);
      double r = cN / x;  // t^{k(a_i+b_j)} c^N
      if (std::abs(r - 1.0) < 1e-9) r = 1.0;  // exact alignment
      out.r(i - 1, j - 1) = r;
      out.s(i - 1, j - 1) = cN;
      if (r < 1 - 1e-9 || r >= 1 / c + 1e-9)
        fail(Errc::NumericalInstability, "subdivision ratio out of [1, 1/c)");
    }
  return out;
}

Eigen::MatrixXi covering_levels(const ProductFractal& K, const Weights& W, double t, int l) {
  if (!(t > 1)) fail(Errc::IndexOutOfRange, "covering needs t > 1");
  if (l < 1) fail(Errc::IndexOutOfRange, "covering needs l >= 1");
  SubdivisionLevels sub = subdivision_levels(K, W, t, l);
  Eigen::MatrixXi P(K.m(), K.n());
  double x = std::pow(t, -static_cast<double>(l) * W.a1_plus_b1());
  for (int i = 1; i <= K.m(); ++i)
    for (int j = 1; j <= K.n(); ++j) {
      int p = level_for_upper(K.entry(i, j).contraction(), x);
      if (p < sub.N(i - 1, j - 1))
        fail(Errc::NumericalInstability, "covering level below subdivision level");
      P(i - 1, j - 1) = p;
    }
  return P;
}

BigInt cell_count(const ProductFractal& K, const Eigen::MatrixXi& levels) {
  if (levels.rows() != K.m() || levels.cols() != K.n())
    fail(Errc::DimensionMismatch, "level matrix shape");
  BigInt total = 1;
  for (int i = 1; i <= K.m(); ++i)
    for (int j = 1; j <= K.n(); ++j) {
      int P = levels(i - 1, j - 1);
      if (P < 0) fail(Errc::IndexOutOfRange, "negative level");
      BigInt p(K.entry(i, j).alphabet_size());
      for (int k = 0; k < P; ++k) total *= p;
    }
  return total;
}

double cell_count_bound(const ProductFractal& K, const Weights& W, double t, int M) {
  double prod_c = 1;
  for (int i = 1; i <= K.m(); ++i)
    for (int j = 1; j <= K.n(); ++j) prod_c *= K.entry(i, j).contraction();
  return std::pow(t, K.dim_total() * W.a1_plus_b1() * M) / prod_c;
}

}  // namespace singlab
