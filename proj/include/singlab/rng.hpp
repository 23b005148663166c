#pragma once

#include <cstdint>
#include <string_view>

namespace singlab {

// Counter-based stream: the k-th value depends only on (seed, name, shard, k),
// so draws are reproducible across runs and across worker counts.
class RngStream {
public:
  RngStream(uint64_t seed, std::string_view name, uint64_t shard = 0);

  uint64_t next_u64();
  double next_unit();               // [0, 1)
  uint64_t next_below(uint64_t n);  // uniform in [0, n)
  double next_gaussian();

private:
  uint64_t key_;
  uint64_t ctr_ = 0;
  double spare_gauss_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace singlab
