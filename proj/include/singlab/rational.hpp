#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace singlab {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

double to_double(const Rat& r);

// base^e with integer e (negative allowed; base must be nonzero then)
Rat rat_pow(const Rat& base, long e);

// canonical "p/q" or "p" form
std::string rat_str(const Rat& r);

// Accepts "p/q", integers, and plain decimal strings ("0.25", "-3e-2" is not
// supported). Returns nullopt on anything else.
std::optional<Rat> parse_rational(const std::string& s);

// Reconstructs x as p/q with q <= max_den via continued fractions; accepted
// only when p/q converts back to exactly the same double.
std::optional<Rat> rational_from_double(double x, long max_den = 1000000);

// Writes log(p) / log(1/c) as x/y when p^y == (1/c)^x has a solution with
// 1 <= x, y <= max_exp. This is the exact-dimension detector for cell systems.
std::optional<Rat> rational_log_ratio(const BigInt& p, const Rat& c, int max_exp = 48);

}  // namespace singlab
