#include "graphpae/synth.hpp"

#include <algorithm>
#include <numeric>

#include "graphpae/errors.hpp"
#include "graphpae/rng.hpp"
#include "graphpae/spectral.hpp"

namespace graphpae {

Split random_split(std::size_t count, double train_fraction, double valid_fraction,
                   std::uint64_t seed) {
  if (train_fraction < 0 || valid_fraction < 0 || train_fraction + valid_fraction > 1.0) {
    throw ArgumentError("split fractions must be non-negative and sum to at most 1");
  }
  std::vector<std::uint32_t> ids(count);
  std::iota(ids.begin(), ids.end(), 0u);
  Rng rng = make_rng(seed, 0, 0, Stream::kSynthetic);
  shuffle(ids, rng);
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(count)));
  const auto n_valid = std::min(count - n_train, static_cast<std::size_t>(std::llround(
                                                     valid_fraction * static_cast<double>(count))));
  Split s;
  s.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.valid.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                 ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid));
  s.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_valid), ids.end());
  for (auto* set : {&s.train, &s.valid, &s.test}) std::sort(set->begin(), set->end());
  return s;
}

Graph make_sbm(const std::vector<std::int64_t>& block_sizes, double p_in, double p_out,
               std::uint64_t seed, FeatureMode mode, SbmOptions options) {
  if (block_sizes.empty()) throw ArgumentError("make_sbm: no blocks");
  if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1) {
    throw ArgumentError("make_sbm: probabilities must lie in [0, 1]");
  }
  std::size_t n = 0;
  std::vector<std::uint32_t> block;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    if (block_sizes[b] < 0) throw ArgumentError("make_sbm: negative block size");
    n += static_cast<std::size_t>(block_sizes[b]);
    block.insert(block.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<std::uint32_t>(b));
  }
  Rng rng = make_rng(seed, 0, 1, Stream::kSynthetic);
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = block[i] == block[j] ? p_in : p_out;
      if (uniform01(rng) < p) {
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), std::nullopt});
      }
    }

  Tensor labels(n, 1);
  for (std::size_t i = 0; i < n; ++i) labels(i, 0) = block[i];

  Tensor features;
  if (mode == FeatureMode::kBlockOneHot) {
    features = Tensor(n, block_sizes.size());
    for (std::size_t i = 0; i < n; ++i) features(i, block[i]) = 1.0;
    Graph g = Graph::from_edges(n, edges, std::move(features));
    return g.with_labels(std::move(labels))
        .with_split(random_split(n, options.train_fraction, options.valid_fraction, seed));
  }

  Graph structure = Graph::from_edges(n, edges, Tensor(n, 0));
  const std::size_t k = std::min(options.smooth_components, n);
  Tensor smooth(n, options.feature_dim);
  if (k > 0) {
    const SpectralBasis basis =
        topk_eigenpairs(normalized_laplacian(structure), k, seed, EigenOptions{});
    Rng frng = make_rng(seed, 0, 2, Stream::kSynthetic);
    Tensor mix(k, options.feature_dim);
    for (double& v : mix.data()) v = uniform01(frng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t f = 0; f < options.feature_dim; ++f) {
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += basis.eigenvectors(i, c) * mix(c, f);
        smooth(i, f) = s + options.noise_stddev * standard_normal(frng);
      }
  }
  return structure.with_features(std::move(smooth))
      .with_labels(std::move(labels))
      .with_split(random_split(n, options.train_fraction, options.valid_fraction, seed));
}

Graph make_random_graph(std::size_t n, double p, std::uint64_t seed, std::size_t feature_dim) {
  Rng rng = make_rng(seed, 0, 3, Stream::kSynthetic);
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < p)
        edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), std::nullopt});
  Tensor features(n, feature_dim);
  for (double& v : features.data()) v = standard_normal(rng);
  return Graph::from_edges(n, edges, std::move(features));
}

Graph make_path(std::size_t n, std::size_t feature_dim) {
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i + 1 < n; ++i)
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1), std::nullopt});
  return Graph::from_edges(n, edges, Tensor(n, feature_dim, 1.0));
}

Graph make_complete(std::size_t n, std::size_t feature_dim) {
  std::vector<EdgeInput> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), std::nullopt});
  return Graph::from_edges(n, edges, Tensor(n, feature_dim, 1.0));
}

GraphCollection make_toy_molecules(std::size_t count, std::uint64_t seed, TaskKind task,
                                   std::size_t min_atoms, std::size_t max_atoms) {
  if (min_atoms < 3 || max_atoms < min_atoms) throw ArgumentError("make_toy_molecules: bad atom range");
  constexpr std::size_t kAtomTypes = 4;
  Rng rng = make_rng(seed, 0, 4, Stream::kSynthetic);
  GraphCollection c;
  c.task = task;
  for (std::size_t m = 0; m < count; ++m) {
    const std::size_t n = min_atoms + uniform_index(rng, max_atoms - min_atoms + 1);
    // Random tree (mostly a chain with branches); the ring label adds one closing edge.
    std::vector<EdgeInput> edges;
    std::vector<std::uint32_t> parent(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
      parent[i] = uniform01(rng) < 0.7 ? static_cast<std::uint32_t>(i - 1)
                                        : static_cast<std::uint32_t>(uniform_index(rng, i));
      edges.push_back({parent[i], static_cast<std::uint32_t>(i),
                       static_cast<std::int32_t>(uniform_index(rng, 3))});
    }
    const bool ring = uniform01(rng) < 0.5;
    if (ring) {
      const std::uint32_t last = static_cast<std::uint32_t>(n - 1);
      edges.push_back({parent[last] == 0 ? 1u : 0u, last, 1});
    }
    Tensor features(n, kAtomTypes);
    std::size_t type0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto t = uniform_index(rng, kAtomTypes);
      features(i, t) = 1.0;
      type0 += t == 0;
    }
    Graph g = Graph::from_edges(n, edges, std::move(features));
    const double label = task == TaskKind::kGraphRegression ? 0.1 * static_cast<double>(type0)
                                                            : (ring ? 1.0 : 0.0);
    c.graphs.push_back(g.with_labels(Tensor(1, 1, label)));
  }
  c.split = random_split(count, 0.6, 0.2, seed);
  c.validate();
  return c;
}

}  // namespace graphpae
