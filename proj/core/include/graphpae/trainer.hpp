#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphpae/adam.hpp"
#include "graphpae/autodiff.hpp"
#include "graphpae/checkpoint.hpp"
#include "graphpae/encoder.hpp"
#include "graphpae/graph.hpp"
#include "graphpae/model.hpp"

namespace graphpae {

enum class Pooling { kMean, kSum, kMax };

std::string to_string(Pooling pooling);
Pooling parse_pooling(const std::string& text);

/// Input files. A node-level dataset uses edges/features (+ labels, split);
/// a graph collection uses a manifest (+ labels, split).
struct DatasetPaths {
  std::string edges;
  std::string features;
  std::string labels;
  std::string split;
  std::string manifest;
};

struct RunConfig {
  std::size_t epochs = 200;
  double mask_ratio = 0.25;
  double noise_scale = 0.01;
  double loss_alpha = 0.1;
  double sce_gamma = 2.0;
  /// Eigenvectors used as node positions.
  std::size_t k = 16;
  EncoderConfig encoder;
  double lr = 0.001;
  double weight_decay = 0.0;
  std::uint64_t seed = 0;
  /// Graphs per mini-batch in collection mode.
  std::size_t batch_size = 32;
  Pooling pooling = Pooling::kMean;
  TaskKind task = TaskKind::kNodeClassification;
  /// Keep self-loops present in the input edge list.
  bool keep_self_loops = true;
  /// Write a checkpoint every this many epochs (0: only at the end).
  std::size_t checkpoint_every = 0;
  DatasetPaths data;

  void validate() const;
  ModelConfig model_config(std::size_t feature_dim) const;
};

/// Hyperparameters of the named benchmark dataset (learning rate, weight
/// decay, mask ratio, loss weight, dropout rates, K; pooling and epochs for
/// graph datasets). Throws ArgumentError for an unknown name.
RunConfig preset(const std::string& name);
std::vector<std::string> preset_names();

struct EpochRecord {
  std::size_t epoch = 0;
  double loss_feat = 0.0;
  double loss_pos = 0.0;
  double loss_total = 0.0;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> records;
  std::vector<std::filesystem::path> checkpoints;

  /// CSV `epoch,loss_feat,loss_pos,loss_total,seconds`, losses printed with
  /// round-trip precision.
  void write_csv(const std::filesystem::path& path) const;
  static TrainLog read_csv(const std::filesystem::path& path);
  /// Equal epochs and bit-identical losses (wall time ignored).
  bool same_losses(const TrainLog& other) const;
};

struct TrainState {
  ParameterStore params;
  AdamState adam;
  std::size_t epochs_done = 0;
};

/// Parameters, Adam moments ("adam.m.<name>", "adam.v.<name>"), step count
/// and epoch in one PAEW file.
void save_train_state(const std::filesystem::path& path, const TrainState& state);
TrainState load_train_state(const std::filesystem::path& path, const AdamOptions& options);

struct TrainOptions {
  /// Checkpoints go here; created if missing, IoError if unusable.
  std::optional<std::filesystem::path> checkpoint_dir;
  /// Continue from a saved state instead of a fresh initialization.
  std::optional<std::filesystem::path> resume_from;
  std::function<void(const EpochRecord&)> on_epoch;
};

struct TrainResult {
  TrainState state;
  TrainLog log;
  ModelConfig model;
};

/// Full-graph pretraining: each epoch samples one node set, runs both
/// reconstruction passes on one tape and takes one Adam step.
TrainResult pretrain(const Graph& graph, const RunConfig& cfg, const TrainOptions& options = {});

/// Same on precomputed inputs (basis already attached).
TrainResult pretrain(const PreparedGraph& data, const RunConfig& cfg,
                     const TrainOptions& options = {});

/// Mini-batches of whole graphs; each batch is the disjoint union of its
/// graphs with per-graph bases stacked, one Adam step per batch.
TrainResult pretrain(const GraphCollection& collection, const RunConfig& cfg,
                     const TrainOptions& options = {});

/// Per-graph top-k bases, k clamped to each graph's size.
std::vector<SpectralBasis> collection_bases(const GraphCollection& collection, std::size_t k,
                                            std::uint64_t seed);

/// Union of the listed graphs with their bases stacked to k columns.
PreparedGraph prepare_batch(const GraphCollection& collection,
                            const std::vector<SpectralBasis>& bases,
                            std::span<const std::uint32_t> members, std::size_t k);

}  // namespace graphpae
