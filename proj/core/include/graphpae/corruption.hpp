#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphpae/autodiff.hpp"
#include "graphpae/graph.hpp"
#include "graphpae/rng.hpp"
#include "graphpae/spectral.hpp"

namespace graphpae {

enum class CorruptionMode { kFeature, kPosition };

/// Nodes selected for corruption in one epoch. The same node set feeds both
/// reconstruction passes; `mode` says which input a pass may corrupt.
struct CorruptionPlan {
  /// In sampling order (noise for position offsets is drawn in this order).
  std::vector<std::uint32_t> masked_nodes;
  /// membership[i] != 0 iff node i is masked.
  std::vector<std::uint8_t> membership;
  double mask_ratio = 0.0;
  CorruptionMode mode = CorruptionMode::kFeature;
  double noise_scale = 0.0;
  std::uint64_t epoch_seed = 0;

  bool is_masked(std::size_t node) const { return membership[node] != 0; }
  CorruptionPlan with_mode(CorruptionMode m) const;
};

/// Uniform sample of round(r * N) nodes without replacement.
CorruptionPlan sample_plan(std::size_t num_nodes, double mask_ratio, CorruptionMode mode,
                           double noise_scale, Rng& rng);
CorruptionPlan sample_plan(const Graph& g, double mask_ratio, CorruptionMode mode,
                           double noise_scale, Rng& rng);

/// Plan for a relabeled graph: node i becomes perm[i]; sampling order is kept.
CorruptionPlan map_plan(const CorruptionPlan& plan, std::span<const std::uint32_t> perm);

/// Masked rows of `features` replaced by the single-row `token`. The result is
/// on the tape, so the token receives gradient.
Var mask_features(Var features, const CorruptionPlan& plan, Var token);

/// Distances recomputed from positions whose masked rows were offset by
/// uniform noise in (-noise_scale, noise_scale).
DistanceMap corrupt_distances(const SpectralBasis& basis, const Graph& g,
                              const CorruptionPlan& plan, Rng& rng);

}  // namespace graphpae
