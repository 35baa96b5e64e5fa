#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dexnet {

/// Uniform draw from [0, n) by rejection, so results depend only on the
/// generator's output sequence. std::uniform_int_distribution is free to
/// vary between standard libraries, which would break cross-build
/// reproducibility of seeded runs.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) {
    return 0;
  }
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) {
      return v % n;
    }
  }
}

/// Uniform double in [0, 1) using the top 53 bits of one draw.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Fisher-Yates shuffle driven by uniform_below, for the same
/// reproducibility reason.
template <typename T>
void shuffle_in_place(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace dexnet
