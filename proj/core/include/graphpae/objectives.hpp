#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "graphpae/autodiff.hpp"
#include "graphpae/corruption.hpp"
#include "graphpae/encoder.hpp"
#include "graphpae/rng.hpp"

namespace graphpae {

/// Registers "dec_x.*" (hidden -> hidden -> feature_dim) and "dec_p.*"
/// (coef_dim -> hidden -> 1) two-layer perceptrons.
void init_decoder_parameters(ParameterStore& params, std::size_t hidden, std::size_t coef_dim,
                             std::size_t feature_dim, Rng& rng);

/// ReLU perceptron mapping node representations back to feature space.
Var decode_features(Tape& tape, Var nodes);

/// Distance prediction for the given edge rows of `positions`, softplus output.
Var decode_positions(Tape& tape, Var positions, std::span<const std::uint32_t> edge_ids);

/// Mean over masked rows of clamp(1 - cos(target, recon), 0)^gamma. The
/// cosine denominator is floored at 1e-12, so a zero row yields cos = 0 (and
/// a warning). An empty mask gives 0.
Var sce_loss(Tape& tape, Var target, Var recon, std::span<const std::uint32_t> masked,
             double gamma);

/// Stored edges (i, j) with i masked and i != j, in edge-id order.
std::vector<std::uint32_t> position_loss_edges(const EdgeIndex& edges, const CorruptionPlan& plan);

/// Mean Huber loss (unit threshold) between predictions (M x 1) and targets.
/// An empty edge set gives 0 with a warning.
Var huber_pos_loss(Tape& tape, Var predicted, std::span<const double> target);

/// feature + alpha * position.
Var total_loss(Var feature_loss, Var position_loss, double alpha);

}  // namespace graphpae
