#include "graphpae/rng.hpp"

namespace graphpae {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t epoch, std::uint64_t step,
                          Stream stream) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ epoch);
  h = mix64(h ^ (step * 0x632be59bd9b4e019ULL));
  return mix64(h ^ static_cast<std::uint64_t>(stream));
}

Rng make_rng(std::uint64_t seed, std::uint64_t epoch, std::uint64_t step, Stream stream) {
  return Rng(derive_seed(seed, epoch, step, stream));
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform_open(Rng& rng, double lo, double hi) {
  double u = 0.0;
  do {
    u = uniform01(rng);
  } while (u == 0.0);
  return lo + (hi - lo) * u;
}

}  // namespace graphpae

#include <cmath>
#include <numbers>

namespace graphpae {

double standard_normal(Rng& rng) {
  const double u1 = uniform_open(rng, 0.0, 1.0);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace graphpae
