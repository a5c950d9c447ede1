#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "graphpae/errors.hpp"
#include "graphpae/evalkit.hpp"
#include "graphpae/model.hpp"
#include "graphpae/synth.hpp"
#include "graphpae/trainer.hpp"
#include "oracles.hpp"

using namespace graphpae;

namespace {

EncoderConfig small_encoder() {
  EncoderConfig cfg;
  cfg.hidden = 8;
  cfg.heads = 2;
  cfg.rbf_count = 16;
  return cfg;
}

Tensor column(std::vector<double> v) { return Tensor::column(v); }

}  // namespace

TEST(EmbedNodes, DeterministicEquivariantAndSignInvariant) {
  const Graph g = make_sbm({8, 8}, 0.5, 0.1, 3, FeatureMode::kSmooth);
  ModelConfig model;
  model.encoder = small_encoder();
  model.feature_dim = g.feature_dim();
  const ParameterStore params = init_model(model, 4);
  const auto data = prepare_graph(g, 6, 0);
  const Tensor h = embed_nodes(params, model.encoder, data);
  EXPECT_TRUE(bitwise_equal(h, embed_nodes(params, model.encoder, data)));

  SpectralBasis flipped = data.basis;
  for (std::size_t i = 0; i < g.num_nodes(); ++i) flipped.eigenvectors(i, 1) = -flipped.eigenvectors(i, 1);
  EXPECT_TRUE(bitwise_equal(h, embed_nodes(params, model.encoder, PreparedGraph::from_basis(g, flipped))));

  std::vector<std::uint32_t> perm(g.num_nodes());
  std::iota(perm.rbegin(), perm.rend(), 0u);
  SpectralBasis pb = data.basis;
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    for (std::size_t k = 0; k < pb.k(); ++k) pb.eigenvectors(perm[i], k) = data.basis.eigenvectors(i, k);
  const Tensor hp = embed_nodes(params, model.encoder, PreparedGraph::from_basis(permute_graph(g, perm), pb));
  for (std::size_t i = 0; i < g.num_nodes(); ++i)
    for (std::size_t c = 0; c < h.cols(); ++c) EXPECT_EQ(h(i, c), hp(perm[i], c));
}

TEST(Readout, Examples) {
  const Tensor same = Tensor::from_rows({{1, -2}, {1, -2}, {1, -2}});
  const Tensor mean = readout(same, Pooling::kMean);
  EXPECT_EQ(mean(0, 0), 1.0);
  EXPECT_EQ(mean(0, 1), -2.0);
  const Tensor one = Tensor::from_rows({{3, 4}});
  EXPECT_TRUE(readout(one, Pooling::kSum) == one);
  const Tensor mixed = Tensor::from_rows({{1, 5}, {3, -1}});
  EXPECT_EQ(readout(mixed, Pooling::kMax)(0, 1), 5.0);
  EXPECT_THROW(readout(Tensor(0, 2), Pooling::kMean), DataError);
}

TEST(Readout, PermutationInvariantExactly) {
  Rng rng(2);
  Tensor h(40, 3);
  for (auto& v : h.data()) v = (uniform01(rng) - 0.5) * std::pow(10.0, static_cast<int>(uniform_index(rng, 8)) - 4);
  std::vector<std::uint32_t> perm(40);
  std::iota(perm.begin(), perm.end(), 0u);
  shuffle(perm, rng);
  const Tensor p = select_rows(h, perm);
  for (auto pool : {Pooling::kMean, Pooling::kSum, Pooling::kMax})
    EXPECT_TRUE(bitwise_equal(readout(h, pool), readout(p, pool)));
}

TEST(Metrics, AucExamples) {
  const std::vector<double> labels{0, 0, 1, 1};
  EXPECT_EQ(roc_auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, labels), 1.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, labels), 0.0);
  EXPECT_EQ(roc_auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, labels), 0.5);
  EXPECT_THROW(roc_auc(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 1}), MetricError);
}

TEST(Metrics, AucMonteCarloNull) {
  Rng rng(7);
  const std::size_t n = 10000;
  std::vector<double> s(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = uniform01(rng);
    y[i] = static_cast<double>(i % 2);
  }
  EXPECT_NEAR(roc_auc(s, y), 0.5, 0.02);
}

TEST(Metrics, MultiLabelAucSkipsSingleClassColumnsAndNan) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const Tensor scores = Tensor::from_rows({{0.1, 0.9, 0.3}, {0.8, 0.2, 0.4}, {0.3, 0.7, 0.5}});
  const Tensor targets = Tensor::from_rows({{0, 1, 1}, {1, 0, 1}, {nan, 1, 1}});
  // Column 0: perfect over two labeled rows; column 1: perfect; column 2: single class.
  EXPECT_EQ(metric_suite(scores, targets, Metric::kRocAuc), 1.0);
}

TEST(Metrics, AccuracyRmseMae) {
  const Tensor scores = Tensor::from_rows({{0.9, 0.1}, {0.2, 0.8}, {0.6, 0.4}});
  EXPECT_NEAR(metric_suite(scores, column({0, 1, 1}), Metric::kAccuracy), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(metric_suite(column({1, 2, 3}), column({1, 2, 5}), Metric::kMae), 2.0 / 3.0);
  EXPECT_NEAR(metric_suite(column({1, 2, 3}), column({1, 2, 5}), Metric::kRmse), std::sqrt(4.0 / 3.0), 1e-15);
}

TEST(Metrics, ConstantMeanPredictorRmseIsStddev) {
  Rng rng(9);
  std::vector<double> y(500);
  for (auto& v : y) v = standard_normal(rng) * 3.0 + 1.0;
  const MeanStd ms = mean_std(y);
  const Tensor pred(500, 1, ms.mean);
  EXPECT_NEAR(metric_suite(pred, Tensor::column(y), Metric::kRmse), ms.stddev, 1e-12);
}

TEST(Probe, SeparableClustersReachFullAccuracy) {
  Rng rng(1);
  auto make = [&](std::size_t n) {
    ProbeSet s{Tensor(n, 2), Tensor(n, 1)};
    for (std::size_t i = 0; i < n; ++i) {
      const double label = static_cast<double>(i % 2);
      s.labels(i, 0) = label;
      s.features(i, 0) = (label == 0 ? -3.0 : 3.0) + 0.3 * standard_normal(rng);
      s.features(i, 1) = standard_normal(rng);
    }
    return s;
  };
  const auto train = make(100), valid = make(50), test = make(100);
  const auto r = linear_probe(train, valid, test, ProbeConfig{}, 0);
  EXPECT_EQ(r.metric, 1.0);
}

TEST(Probe, IndependentLabelsGiveChanceAccuracy) {
  Rng rng(2);
  auto make = [&](std::size_t n) {
    Tensor x(n, 8), y(n, 1);
    for (auto& v : x.data()) v = standard_normal(rng);
    for (std::size_t i = 0; i < n; ++i) y(i, 0) = static_cast<double>(uniform_index(rng, 2));
    return std::pair{x, y};
  };
  const auto [xt, yt] = make(2000);
  const auto [xe, ye] = make(4000);
  EXPECT_NEAR(linear_probe(xt, yt, xe, ye, ProbeConfig{}, 0), 0.5, 0.05);
}

TEST(Probe, RegressionRecoversLinearTarget) {
  Rng rng(3);
  Tensor x(200, 3), y(200, 1);
  for (std::size_t i = 0; i < 200; ++i) {
    for (std::size_t c = 0; c < 3; ++c) x(i, c) = standard_normal(rng);
    y(i, 0) = 2.0 * x(i, 0) - x(i, 2) + 0.5;
  }
  ProbeConfig cfg;
  cfg.kind = ProbeKind::kLinearRegression;
  cfg.metric = Metric::kRmse;
  cfg.epochs = 2000;
  cfg.lr = 0.05;
  EXPECT_LT(linear_probe(x, y, x, y, cfg, 0), 0.05);
}

TEST(Probe, DeterministicUnderSeed) {
  Rng rng(4);
  Tensor x(60, 4), y(60, 1);
  for (auto& v : x.data()) v = standard_normal(rng);
  for (std::size_t i = 0; i < 60; ++i) y(i, 0) = static_cast<double>(i % 3);
  const auto a = linear_probe(x, y, x, y, ProbeConfig{}, 5);
  const auto b = linear_probe(x, y, x, y, ProbeConfig{}, 5);
  EXPECT_EQ(a, b);
}

TEST(Probe, RocAucOnSingleClassTrainingLabelsIsMetricError) {
  Tensor x(10, 2, 1.0), y(10, 1, 1.0);
  ProbeConfig cfg;
  cfg.metric = Metric::kRocAuc;
  EXPECT_THROW(linear_probe(x, y, x, y, cfg, 0), MetricError);
}

TEST(Probe, FrozenEncoderUnchanged) {
  const Graph g = make_sbm({10, 10}, 0.4, 0.05, 1, FeatureMode::kSmooth);
  ModelConfig model;
  model.encoder = small_encoder();
  model.feature_dim = g.feature_dim();
  const ParameterStore params = init_model(model, 2);
  const ParameterStore before = params;
  const Tensor h = embed_nodes(params, model.encoder, prepare_graph(g, 5, 0));
  linear_probe(h, *g.labels(), h, *g.labels(), ProbeConfig{}, 0);
  for (std::size_t i = 0; i < params.size(); ++i)
    EXPECT_TRUE(bitwise_equal(params[i].value, before[i].value)) << params[i].name;
}

TEST(Probe, ConfigValidationRejectsIncompatibleMetric) {
  ProbeConfig cfg;
  cfg.kind = ProbeKind::kLinearRegression;
  cfg.metric = Metric::kAccuracy;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(Results, MeanStdAndCsv) {
  const std::vector<double> v{0.8, 0.82, 0.78};
  const MeanStd ms = mean_std(v);
  EXPECT_NEAR(ms.mean, 0.8, 1e-15);
  EXPECT_NEAR(ms.stddev, std::sqrt((0.0004 + 0.0004) / 3.0), 1e-15);
  EXPECT_EQ(format_mean_std({0.80512, 0.01249}), "0.8051±0.0125");
  oracle::TempDir dir;
  std::vector<std::pair<std::uint64_t, double>> rows;
  for (std::uint64_t s = 0; s < 10; ++s) rows.emplace_back(s, 0.5 + 0.01 * s);
  write_results_csv(dir / "r.csv", "sbm", Metric::kAccuracy, rows);
  std::istringstream in(oracle::read_file(dir / "r.csv"));
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines[0], "dataset,seed,metric,value");
  EXPECT_EQ(lines[1].rfind("sbm,0,accuracy,", 0), 0u);
  EXPECT_EQ(lines[11].rfind("sbm,summary,accuracy,", 0), 0u);
}

TEST(Finetune, ToyMoleculesRun) {
  const auto mols = make_toy_molecules(24, 3, TaskKind::kGraphRegression);
  EncoderConfig enc;
  enc.attention = AttentionKind::kGatedGcn;
  enc.hidden = 8;
  enc.rbf_count = 8;
  enc.edge_vocab = 3;
  ModelConfig model;
  model.encoder = enc;
  model.feature_dim = 4;
  const auto params = init_model(model, 1);
  FinetuneConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  const auto r = finetune(mols, params, enc, 4, cfg, 0);
  EXPECT_EQ(r.metric, Metric::kMae);
  EXPECT_TRUE(std::isfinite(r.test_metric));
  EXPECT_EQ(r.train_loss.size(), 3u);
}

TEST(EmbedGraphs, OneRowPerGraph) {
  const auto mols = make_toy_molecules(6, 4, TaskKind::kGraphClassification);
  EncoderConfig enc = small_encoder();
  enc.edge_vocab = 3;
  ModelConfig model;
  model.encoder = enc;
  model.feature_dim = 4;
  const auto params = init_model(model, 1);
  const auto bases = collection_bases(mols, 4, 0);
  const Tensor h = embed_graphs(params, enc, mols, bases, Pooling::kMean);
  EXPECT_EQ(h.rows(), 6u);
  EXPECT_EQ(h.cols(), 8u);
}
