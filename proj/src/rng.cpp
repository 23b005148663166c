#include "singlab/rng.hpp"

#include <cmath>

namespace singlab {

namespace {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t seed, std::string_view name, uint64_t shard) {
  key_ = splitmix64(seed ^ splitmix64(fnv1a(name) + splitmix64(shard)));
}

uint64_t RngStream::next_u64() { return splitmix64(key_ + 0x632be59bd9b4e019ull * ++ctr_); }

double RngStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t RngStream::next_below(uint64_t n) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
}

double RngStream::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_gauss_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = next_unit();
  double u2 = next_unit();
  double r = std::sqrt(-2.0 * std::log(u1));
  double c = std::cos(2.0 * M_PI * u2), s = std::sin(2.0 * M_PI * u2);
  spare_gauss_ = r * s;
  has_spare_ = true;
  return r * c;
}

}  // namespace singlab
