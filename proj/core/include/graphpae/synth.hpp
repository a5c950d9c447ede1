#pragma once

#include <cstdint>
#include <vector>

#include "graphpae/graph.hpp"

namespace graphpae {

enum class FeatureMode { kSmooth, kBlockOneHot };

struct SbmOptions {
  /// Feature columns in smooth mode.
  std::size_t feature_dim = 16;
  /// Lowest Laplacian eigenvectors mixed into smooth features.
  std::size_t smooth_components = 5;
  double noise_stddev = 0.01;
  /// Node split fractions; the remainder goes to test.
  double train_fraction = 0.2;
  double valid_fraction = 0.2;
};

/// Stochastic block model. Each unordered pair {i, j}, i < j, is an edge with
/// probability p_in inside a block and p_out across blocks. Labels are block
/// ids (one column); a random train/valid/test split is attached. Smooth
/// features are random non-negative combinations of the lowest Laplacian
/// eigenvectors plus Gaussian noise. Deterministic in `seed`.
Graph make_sbm(const std::vector<std::int64_t>& block_sizes, double p_in, double p_out,
               std::uint64_t seed, FeatureMode mode, SbmOptions options = {});

/// Erdos-Renyi G(n, p) with standard-normal features of width `feature_dim`.
Graph make_random_graph(std::size_t n, double p, std::uint64_t seed, std::size_t feature_dim = 4);

/// Path 0-1-...-(n-1) and complete graph K_n, with all-ones features.
Graph make_path(std::size_t n, std::size_t feature_dim = 1);
Graph make_complete(std::size_t n, std::size_t feature_dim = 1);

/// Small molecule-like graphs (chains with an optional closing ring bond),
/// one-hot atom-type features, categorical bond ids in [0, 3). Classification
/// label: 1 if the graph has a ring. Regression label: count of type-0 atoms
/// scaled by 0.1. A random split is attached.
GraphCollection make_toy_molecules(std::size_t count, std::uint64_t seed, TaskKind task,
                                   std::size_t min_atoms = 5, std::size_t max_atoms = 14);

/// Random train/valid/test split of `count` ids.
Split random_split(std::size_t count, double train_fraction, double valid_fraction,
                   std::uint64_t seed);

}  // namespace graphpae
