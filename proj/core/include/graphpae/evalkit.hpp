#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "graphpae/autodiff.hpp"
#include "graphpae/encoder.hpp"
#include "graphpae/graph.hpp"
#include "graphpae/model.hpp"
#include "graphpae/trainer.hpp"

namespace graphpae {

enum class ProbeKind { kLogistic, kLinearRegression };
enum class Metric { kAccuracy, kRocAuc, kRmse, kMae };

std::string to_string(ProbeKind kind);
ProbeKind parse_probe_kind(const std::string& text);
std::string to_string(Metric metric);
Metric parse_metric(const std::string& text);
bool higher_is_better(Metric metric);

/// Linear probe on frozen embeddings. Training is full-batch Adam on
/// standardized inputs; the parameters with the best validation metric are
/// kept, stopping after `patience` epochs without improvement.
struct ProbeConfig {
  ProbeKind kind = ProbeKind::kLogistic;
  Metric metric = Metric::kAccuracy;
  double lr = 0.01;
  std::size_t epochs = 300;
  double weight_decay = 0.0;
  std::size_t patience = 50;
  bool standardize = true;
  /// Runs reported by the CLI.
  std::size_t seeds = 10;

  void validate() const;
};

/// Final-layer node representations of the clean graph, dropout off.
Tensor embed_nodes(const ParameterStore& params, const EncoderConfig& cfg, const PreparedGraph& data);

/// Mean, sum or max over rows. Throws DataError for zero rows.
Tensor readout(const Tensor& nodes, Pooling pooling);

/// One pooled row per graph; each graph is encoded on its own basis.
Tensor embed_graphs(const ParameterStore& params, const EncoderConfig& cfg,
                    const GraphCollection& collection, const std::vector<SpectralBasis>& bases,
                    Pooling pooling);

/// Accuracy: predictions are per-class scores (argmax) or, with one column,
/// class ids; targets are class ids. ROC-AUC: per-column scores against 0/1
/// targets (NaN targets skipped), averaged over columns where both classes
/// occur; a two-column score matrix against one-column targets scores
/// column 1. RMSE/MAE: over all entries. MetricError when undefined.
double metric_suite(const Tensor& predictions, const Tensor& targets, Metric metric);

/// Rank-statistic AUC with mid-rank ties. MetricError unless both classes occur.
double roc_auc(std::span<const double> scores, std::span<const double> labels);

struct ProbeSet {
  Tensor features;
  Tensor labels;
};

struct ProbeResult {
  double metric = 0.0;
  /// Best validation metric (NaN without a validation set).
  double valid_metric = 0.0;
  std::size_t best_epoch = 0;
  Tensor predictions;
};

/// Trains on `train`, early-stops on `valid` (may be empty), scores `eval`.
ProbeResult linear_probe(const ProbeSet& train, const ProbeSet& valid, const ProbeSet& eval,
                         const ProbeConfig& cfg, std::uint64_t seed);

/// Without a validation set: trains for the full epoch budget.
double linear_probe(const Tensor& train_features, const Tensor& train_labels,
                    const Tensor& eval_features, const Tensor& eval_labels, const ProbeConfig& cfg,
                    std::uint64_t seed);

/// Rows of `m` listed in `ids`.
Tensor select_rows(const Tensor& m, std::span<const std::uint32_t> ids);

struct MeanStd {
  double mean = 0.0;
  /// Population standard deviation.
  double stddev = 0.0;
};

MeanStd mean_std(std::span<const double> values);
/// "0.8051±0.0125" with `digits` decimals.
std::string format_mean_std(const MeanStd& ms, int digits = 4);

/// `dataset,seed,metric,value` rows plus a `dataset,summary,metric,mean±std` row.
void write_results_csv(const std::filesystem::path& path, const std::string& dataset, Metric metric,
                       std::span<const std::pair<std::uint64_t, double>> rows);

/// Encoder plus a two-layer head trained jointly on labeled graphs (train
/// split), scored on the test split: MAE for regression, ROC-AUC otherwise.
struct FinetuneConfig {
  double lr = 0.001;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  double dropout = 0.1;
  Pooling pooling = Pooling::kMean;
};

struct FinetuneResult {
  Metric metric = Metric::kMae;
  double test_metric = 0.0;
  std::vector<double> train_loss;
};

FinetuneResult finetune(const GraphCollection& collection, const ParameterStore& pretrained,
                        EncoderConfig encoder, std::size_t k, const FinetuneConfig& cfg,
                        std::uint64_t seed);

}  // namespace graphpae
