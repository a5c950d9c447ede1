#include "graphpae/corruption.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "graphpae/errors.hpp"

namespace graphpae {

CorruptionPlan CorruptionPlan::with_mode(CorruptionMode m) const {
  CorruptionPlan out = *this;
  out.mode = m;
  return out;
}

CorruptionPlan sample_plan(std::size_t num_nodes, double mask_ratio, CorruptionMode mode,
                           double noise_scale, Rng& rng) {
  if (!(mask_ratio >= 0.0 && mask_ratio <= 1.0)) {
    throw ArgumentError("mask ratio must lie in [0, 1], got " + std::to_string(mask_ratio));
  }
  if (!(noise_scale >= 0.0)) throw ArgumentError("noise scale must be non-negative");
  const auto count = static_cast<std::size_t>(std::llround(mask_ratio * static_cast<double>(num_nodes)));
  std::vector<std::uint32_t> ids(num_nodes);
  std::iota(ids.begin(), ids.end(), 0u);
  // Partial Fisher-Yates: the first `count` slots are the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(rng, num_nodes - i);
    std::swap(ids[i], ids[j]);
  }
  CorruptionPlan plan;
  plan.masked_nodes.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(count));
  plan.membership.assign(num_nodes, 0);
  for (auto v : plan.masked_nodes) plan.membership[v] = 1;
  plan.mask_ratio = mask_ratio;
  plan.mode = mode;
  plan.noise_scale = noise_scale;
  return plan;
}

CorruptionPlan sample_plan(const Graph& g, double mask_ratio, CorruptionMode mode,
                           double noise_scale, Rng& rng) {
  return sample_plan(g.num_nodes(), mask_ratio, mode, noise_scale, rng);
}

CorruptionPlan map_plan(const CorruptionPlan& plan, std::span<const std::uint32_t> perm) {
  if (perm.size() != plan.membership.size()) throw ArgumentError("map_plan: permutation size mismatch");
  CorruptionPlan out = plan;
  for (auto& v : out.masked_nodes) v = perm[v];
  out.membership.assign(perm.size(), 0);
  for (auto v : out.masked_nodes) out.membership[v] = 1;
  return out;
}

Var mask_features(Var features, const CorruptionPlan& plan, Var token) {
  if (plan.mode != CorruptionMode::kFeature) {
    throw ContractError("mask_features called with a position-path plan");
  }
  if (features.rows() != plan.membership.size()) {
    throw ShapeError("mask_features: plan covers " + std::to_string(plan.membership.size()) +
                     " nodes, features have " + std::to_string(features.rows()) + " rows");
  }
  return ad::replace_rows(features, plan.masked_nodes, token);
}

DistanceMap corrupt_distances(const SpectralBasis& basis, const Graph& g,
                              const CorruptionPlan& plan, Rng& rng) {
  if (plan.mode != CorruptionMode::kPosition) {
    throw ContractError("corrupt_distances called with a feature-path plan");
  }
  const SpectralBasis noisy = offset_positions(basis, plan.masked_nodes, plan.noise_scale, rng);
  return relative_distances(noisy, g);
}

}  // namespace graphpae
