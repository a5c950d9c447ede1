#pragma once

#include <cstdint>

#include "graphpae/autodiff.hpp"
#include "graphpae/corruption.hpp"
#include "graphpae/encoder.hpp"
#include "graphpae/graph.hpp"
#include "graphpae/spectral.hpp"

namespace graphpae {

struct ModelConfig {
  EncoderConfig encoder;
  std::size_t feature_dim = 0;
  double sce_gamma = 2.0;
  double loss_alpha = 0.1;
};

/// Encoder, both decoders and the zero-initialized mask token ("mask_token").
ParameterStore init_model(const ModelConfig& cfg, std::uint64_t seed);

/// Everything the model reads from one graph (or one batch union).
struct PreparedGraph {
  Graph graph;
  SpectralBasis basis;
  DistanceMap distances;
  EdgeIndex edges;

  static PreparedGraph from_basis(Graph graph, SpectralBasis basis);
};

/// Computes the top-k basis (k clamped to N with a warning) and distances.
PreparedGraph prepare_graph(Graph graph, std::size_t k, std::uint64_t seed);

struct LossTerms {
  Var feature;
  Var position;
  Var total;
};

/// Random streams for one optimization step.
struct StepRandomness {
  Rng* position_noise = nullptr;
  ForwardContext feature_pass;
  ForwardContext position_pass;
};

/// Both reconstruction passes on a shared node set. The feature pass sees
/// masked features with clean distances; the position pass sees clean
/// features with offset distances.
LossTerms pae_loss(Tape& tape, const ModelConfig& cfg, const PreparedGraph& data,
                   const CorruptionPlan& plan, const StepRandomness& randomness);

}  // namespace graphpae
