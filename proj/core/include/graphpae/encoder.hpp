#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphpae/autodiff.hpp"
#include "graphpae/graph.hpp"
#include "graphpae/rng.hpp"
#include "graphpae/spectral.hpp"

namespace graphpae {

enum class AttentionKind { kGat, kGatedGcn };

std::string to_string(AttentionKind kind);
AttentionKind parse_attention_kind(const std::string& text);

struct EncoderConfig {
  std::size_t layers = 2;
  std::size_t hidden = 64;
  AttentionKind attention = AttentionKind::kGat;
  /// GAT only; attention coefficients and position channels are per head.
  std::size_t heads = 4;
  std::size_t rbf_count = 128;
  /// Gaussian width and centers; when unset, centers are evenly spaced on
  /// [0, 2] and the width is their spacing.
  std::optional<double> rbf_sigma;
  std::vector<double> rbf_centers;
  double node_dropout = 0.0;
  double edge_dropout = 0.0;
  /// Categorical edge-feature vocabulary; 0 disables edge embeddings.
  std::size_t edge_vocab = 0;
  /// ReLU on node representations between layers (not after the last).
  bool inter_layer_relu = true;

  /// Width of attention coefficients and position channels.
  std::size_t coef_dim() const { return attention == AttentionKind::kGat ? heads : hidden; }
  std::vector<double> centers() const;
  double sigma() const;
  /// Throws ArgumentError on an invalid combination.
  void validate() const;
};

/// Registers encoder parameters (names prefixed "enc.") with Xavier-uniform
/// weights and zero biases.
void init_encoder_parameters(ParameterStore& params, const EncoderConfig& cfg,
                             std::size_t feature_dim, Rng& rng);

/// Xavier-uniform [fan_in, fan_out] matrix.
Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

/// Graph structure as consumed by the encoder: segment ids and gather indices
/// for every stored edge, plus 1/deg per edge for degree normalization.
struct EdgeIndex {
  std::size_t num_nodes = 0;
  std::vector<std::uint32_t> rows;
  std::vector<std::uint32_t> cols;
  std::vector<std::int32_t> feature_ids;
  Tensor inv_degree;  // E x 1, 1/deg(row)

  static EdgeIndex from_graph(const Graph& g);
  std::size_t num_edges() const { return rows.size(); }
};

/// Gaussian RBF features exp(-(p - mu_k)^2 / (2 sigma^2)) per edge: E x rbf_count.
Tensor rbf_features(const DistanceMap& distances, const EncoderConfig& cfg);

/// Dropout state for one forward pass. Without an rng, or outside training,
/// dropout is the identity.
struct ForwardContext {
  bool training = false;
  Rng* rng = nullptr;
};

struct EncoderOutput {
  Var nodes;      // N x hidden
  Var positions;  // E x coef_dim
};

/// RBF features through the distance perceptron: E x coef_dim.
Var rbf_lift(Tape& tape, const DistanceMap& distances, const EncoderConfig& cfg);
/// Input projection: N x hidden.
Var feature_lift(Tape& tape, Var features);

/// Raw (pre-normalization) attention scores per edge and layer: E x coef_dim.
Var attention_gat(Tape& tape, Var nodes, const EdgeIndex& edges, const EncoderConfig& cfg,
                  std::size_t layer);
Var attention_gatedgcn(Tape& tape, Var nodes, const EdgeIndex& edges, std::size_t layer);

EncoderOutput encoder_forward(Tape& tape, Var features, const DistanceMap& distances,
                              const EdgeIndex& edges, const EncoderConfig& cfg,
                              const ForwardContext& ctx = {});

}  // namespace graphpae
