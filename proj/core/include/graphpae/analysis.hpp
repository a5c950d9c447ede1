#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphpae/graph.hpp"
#include "graphpae/spectral.hpp"

namespace graphpae {

enum class SpectralCorruption { kFeature, kEdge, kOffset };

std::string to_string(SpectralCorruption kind);
SpectralCorruption parse_spectral_corruption(const std::string& text);

struct BandComparison {
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> original;
  std::optional<double> corrupted;
  /// |corrupted - original|; empty when either side is.
  std::optional<double> abs_diff() const;
};

/// Frequency magnitudes of the clean and corrupted graph over the full
/// spectrum (K = N):
///   feature: `ratio` of the nodes get all-zero features;
///   edge:    `ratio` of the undirected edges are removed and the basis is
///            recomputed from the thinned graph;
///   offset:  `ratio` of the nodes get eigenvector rows offset by uniform
///            noise in (-noise_scale, noise_scale).
/// Bands must lie within [0, 2].
std::vector<BandComparison> compare_spectra(const Graph& g, SpectralCorruption kind, double ratio,
                                            double noise_scale,
                                            std::span<const std::pair<double, double>> bands,
                                            std::uint64_t seed);

/// Mean |diff| over the bands contained in [lo, hi] (bands without data skipped).
double mean_abs_diff(std::span<const BandComparison> rows, double lo, double hi);

/// CSV `band_lo,band_hi,orig_magnitude,corrupt_magnitude,abs_diff`; an empty
/// band is written as NA.
void write_band_csv(const std::filesystem::path& path, std::span<const BandComparison> rows);

}  // namespace graphpae
