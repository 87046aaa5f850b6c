#pragma once

#include <cstdint>
#include <random>

namespace khopnet::detail {

// Distribution mapping is spelled out here so generated values do not depend
// on the standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

}  // namespace khopnet::detail
