#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace graphpae {

using Rng = std::mt19937_64;

/// Independent random streams used within one training epoch.
enum class Stream : std::uint64_t {
  kMaskSelection = 1,
  kPositionNoise = 2,
  kDropoutFeaturePass = 3,
  kDropoutPositionPass = 4,
  kBatchOrder = 5,
  kInit = 6,
  kProbe = 7,
  kSynthetic = 8,
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed for (run seed, epoch, step, stream). Distinct tuples give
/// statistically independent generators; identical tuples give identical
/// streams, which is what makes resumed runs bit-exact.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t epoch, std::uint64_t step,
                          Stream stream);

Rng make_rng(std::uint64_t seed, std::uint64_t epoch, std::uint64_t step, Stream stream);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform01(Rng& rng);

/// Uniform double in the open interval (lo, hi) for lo < hi.
double uniform_open(Rng& rng, double lo, double hi);

}  // namespace graphpae

namespace graphpae {

/// Standard normal draw (Box-Muller on uniform01), identical across standard
/// library implementations.
double standard_normal(Rng& rng);

/// Fisher-Yates shuffle driven by uniform01; portable across standard libraries.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng);

/// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = uniform_index(rng, i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace graphpae
