#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace rsimle {

// SplitMix64 step (Steele, Lea & Flood).  Used to derive decorrelated
// sub-seeds from one user seed so that e.g. network init and prior draws
// come from independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Sub-seed `stream` of the given base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t state = base;
  std::uint64_t out = 0;
  for (std::uint64_t i = 0; i <= stream; ++i) out = splitmix64(state);
  return out;
}

// Uniform in [0, 1) with 53 random bits.  Pinned here (instead of
// std::uniform_real_distribution) so streams are identical across
// standard library implementations.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via the Marsaglia polar method.  Stateless: the second
// variate of each pair is discarded, which keeps call sites simple and the
// stream a pure function of the generator state.
inline double standard_normal(std::mt19937_64& rng) {
  for (;;) {
    const double u = 2.0 * uniform_unit(rng) - 1.0;
    const double v = 2.0 * uniform_unit(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

// Unbiased integer in [0, n) by masked rejection; pinned for the same
// portability reason as uniform_unit.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  std::uint64_t mask = n - 1;
  mask |= mask >> 1;
  mask |= mask >> 2;
  mask |= mask >> 4;
  mask |= mask >> 8;
  mask |= mask >> 16;
  mask |= mask >> 32;
  for (;;) {
    const std::uint64_t v = rng() & mask;
    if (v < n) return v;
  }
}

// In-place Fisher-Yates shuffle with a pinned draw sequence.
template <typename T>
void shuffle_indices(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

}  // namespace rsimle
