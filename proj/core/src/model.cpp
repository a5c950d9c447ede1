#include "graphpae/model.hpp"

#include <algorithm>
#include <string>

#include "graphpae/errors.hpp"
#include "graphpae/log.hpp"
#include "graphpae/objectives.hpp"

namespace graphpae {

ParameterStore init_model(const ModelConfig& cfg, std::uint64_t seed) {
  if (cfg.feature_dim == 0) throw ArgumentError("model feature dimension must be positive");
  Rng rng = make_rng(seed, 0, 0, Stream::kInit);
  ParameterStore params;
  init_encoder_parameters(params, cfg.encoder, cfg.feature_dim, rng);
  init_decoder_parameters(params, cfg.encoder.hidden, cfg.encoder.coef_dim(), cfg.feature_dim, rng);
  params.add("mask_token", Tensor(1, cfg.feature_dim));
  return params;
}

PreparedGraph PreparedGraph::from_basis(Graph graph, SpectralBasis basis) {
  if (basis.num_nodes() != graph.num_nodes()) {
    throw ShapeError("basis has " + std::to_string(basis.num_nodes()) + " rows, graph has " +
                     std::to_string(graph.num_nodes()) + " nodes");
  }
  PreparedGraph p;
  p.distances = relative_distances(basis, graph);
  p.edges = EdgeIndex::from_graph(graph);
  p.basis = std::move(basis);
  p.graph = std::move(graph);
  return p;
}

PreparedGraph prepare_graph(Graph graph, std::size_t k, std::uint64_t seed) {
  if (graph.num_nodes() == 0) throw DataError("cannot prepare an empty graph");
  std::size_t kk = k;
  if (kk > graph.num_nodes()) {
    kk = graph.num_nodes();
    warn("K=" + std::to_string(k) + " exceeds N=" + std::to_string(graph.num_nodes()) +
         "; using K=" + std::to_string(kk));
  }
  SpectralBasis basis = topk_eigenpairs(normalized_laplacian(graph), kk, seed);
  return PreparedGraph::from_basis(std::move(graph), std::move(basis));
}

LossTerms pae_loss(Tape& tape, const ModelConfig& cfg, const PreparedGraph& data,
                   const CorruptionPlan& plan, const StepRandomness& randomness) {
  if (data.graph.feature_dim() != cfg.feature_dim) {
    throw ShapeError("model expects feature dimension " + std::to_string(cfg.feature_dim) +
                     ", graph has " + std::to_string(data.graph.feature_dim()));
  }
  Var clean = tape.constant(data.graph.features());

  // Feature pass: masked features, clean distances.
  const CorruptionPlan feature_plan = plan.with_mode(CorruptionMode::kFeature);
  Var masked = mask_features(clean, feature_plan, tape.param("mask_token"));
  EncoderOutput a = encoder_forward(tape, masked, data.distances, data.edges, cfg.encoder,
                                    randomness.feature_pass);
  Var recon = decode_features(tape, a.nodes);
  Var feature = sce_loss(tape, clean, recon, plan.masked_nodes, cfg.sce_gamma);

  // Position pass: clean features, offset distances.
  const CorruptionPlan position_plan = plan.with_mode(CorruptionMode::kPosition);
  Rng fallback = make_rng(plan.epoch_seed, 0, 0, Stream::kPositionNoise);
  Rng& noise = randomness.position_noise ? *randomness.position_noise : fallback;
  const DistanceMap noisy = corrupt_distances(data.basis, data.graph, position_plan, noise);
  EncoderOutput b = encoder_forward(tape, clean, noisy, data.edges, cfg.encoder,
                                    randomness.position_pass);
  const std::vector<std::uint32_t> loss_edges = position_loss_edges(data.edges, plan);
  std::vector<double> target(loss_edges.size());
  std::transform(loss_edges.begin(), loss_edges.end(), target.begin(),
                 [&](std::uint32_t e) { return data.distances.values[e]; });
  Var position = loss_edges.empty()
                     ? huber_pos_loss(tape, tape.constant(Tensor(0, 1)), target)
                     : huber_pos_loss(tape, decode_positions(tape, b.positions, loss_edges), target);

  return {feature, position, total_loss(feature, position, cfg.loss_alpha)};
}

}  // namespace graphpae
