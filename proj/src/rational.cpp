#include "singlab/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace singlab {

double to_double(const Rat& r) { return r.convert_to<double>(); }

Rat rat_pow(const Rat& base, long e) {
  if (e == 0) return Rat(1);
  Rat b = base;
  bool inv = e < 0;
  unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  Rat acc(1);
  while (k) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  if (inv) acc = Rat(1) / acc;
  return acc;
}

std::string rat_str(const Rat& r) {
  BigInt num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::optional<Rat> parse_rational(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash));
      BigInt den(s.substr(slash + 1));
      if (den == 0) return std::nullopt;
      return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) {
      return Rat(BigInt(s));
    }
    std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
    if (tail.empty()) return std::nullopt;
    for (char c : tail)
      if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = neg ? "-0" : "0";
    BigInt scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    BigInt whole(head);
    BigInt frac(tail);
    BigInt num = whole * scale + (neg ? -frac : frac);
    return Rat(num, scale);
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<Rat> rational_from_double(double x, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == std::floor(x) && std::abs(x) < 9e15) {
    return Rat(BigInt(static_cast<long long>(x)));
  }
  // continued-fraction convergents
  const double ax = std::abs(x);
  double y = ax;
  long long p_prev = 0, q_prev = 1, p = 1, q = 0;
  for (int iter = 0; iter < 64; ++iter) {
    double fl = std::floor(y);
    if (fl > 9e17) break;
    long long a = static_cast<long long>(fl);
    long long p_new = a * p + p_prev;
    long long q_new = a * q + q_prev;
    if (q_new > max_den || p_new < 0 || q_new < 0) break;
    p_prev = p;
    q_prev = q;
    p = p_new;
    q = q_new;
    if (q > 0 && static_cast<double>(p) / static_cast<double>(q) == ax) {
      Rat r(BigInt(x < 0 ? -p : p), BigInt(q));
      if (to_double(r) == x) return r;
      break;
    }
    double rem = y - fl;
    if (rem <= 0) break;
    y = 1.0 / rem;
  }
  return std::nullopt;
}

std::optional<Rat> rational_log_ratio(const BigInt& p, const Rat& c, int max_exp) {
  if (p < 2) return std::nullopt;
  if (c <= 0 || c >= 1) return std::nullopt;
  BigInt cn = numerator(c), cd = denominator(c);
  // want p^y * cn^x == cd^x, i.e. log p / log(cd/cn) = x/y
  for (int y = 1; y <= max_exp; ++y) {
    BigInt py = 1;
    for (int i = 0; i < y; ++i) py *= p;
    BigInt cnx = 1, cdx = 1;
    for (int x = 1; x <= max_exp; ++x) {
      cnx *= cn;
      cdx *= cd;
      if (py * cnx == cdx) {
        return Rat(BigInt(x), BigInt(y));
      }
      if (cdx > py * cnx) break;  // (cd/cn)^x grows past p^y, stop this row
    }
  }
  return std::nullopt;
}

}  // namespace singlab
