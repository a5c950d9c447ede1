#include <gtest/gtest.h>

#include <algorithm>

#include "graphpae/objectives.hpp"
#include "graphpae/errors.hpp"
#include "graphpae/model.hpp"
#include "graphpae/trainer.hpp"
#include "graphpae/synth.hpp"
#include "oracles.hpp"

using namespace graphpae;

namespace {

RunConfig tiny_config(std::size_t epochs) {
  RunConfig cfg;
  cfg.epochs = epochs;
  cfg.k = 6;
  cfg.encoder.hidden = 8;
  cfg.encoder.heads = 2;
  cfg.encoder.rbf_count = 16;
  cfg.lr = 0.01;
  cfg.seed = 3;
  return cfg;
}

Graph tiny_graph() { return make_sbm({10, 10}, 0.4, 0.05, 1, FeatureMode::kSmooth); }

bool params_bitwise_equal(const ParameterStore& a, const ParameterStore& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !bitwise_equal(a[i].value, b[i].value)) return false;
  return true;
}

}  // namespace

TEST(Pretrain, AlphaZeroMatchesFeatureOnlyStep) {
  RunConfig cfg = tiny_config(1);
  cfg.loss_alpha = 0.0;
  const Graph g = tiny_graph();
  const TrainResult trained = pretrain(g, cfg);

  const ModelConfig model = cfg.model_config(g.feature_dim());
  ParameterStore params = init_model(model, cfg.seed);
  const ParameterStore initial = params;
  AdamState adam(params, {cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});
  const PreparedGraph data = prepare_graph(g, cfg.k, cfg.seed);
  Rng mask_rng = make_rng(cfg.seed, 1, 0, Stream::kMaskSelection);
  const auto plan = sample_plan(g, cfg.mask_ratio, CorruptionMode::kFeature, cfg.noise_scale, mask_rng);
  {
    Tape tape(params);
    Var clean = tape.constant(g.features());
    Var masked = mask_features(clean, plan, tape.param("mask_token"));
    auto enc = encoder_forward(tape, masked, data.distances, data.edges, model.encoder);
    Var loss = sce_loss(tape, clean, decode_features(tape, enc.nodes), plan.masked_nodes, cfg.sce_gamma);
    tape.backward(loss);
    EXPECT_EQ(loss.value().item(), trained.log.records[0].loss_feat);
  }
  adam.step(params);
  EXPECT_TRUE(params_bitwise_equal(params, trained.state.params));
  for (const char* name : {"dec_p.l1.w", "dec_p.l2.b"})
    EXPECT_TRUE(bitwise_equal(trained.state.params.at(name).value, initial.at(name).value));
}

TEST(Pretrain, EncoderGetsGradientFromBothPasses) {
  RunConfig cfg = tiny_config(1);
  const Graph g = tiny_graph();
  const ModelConfig model = cfg.model_config(g.feature_dim());
  const PreparedGraph data = prepare_graph(g, cfg.k, cfg.seed);
  Rng mask_rng(1);
  const auto plan = sample_plan(g, 0.3, CorruptionMode::kFeature, 0.01, mask_rng);
  auto grad_of = [&](bool feature) {
    ParameterStore params = init_model(model, 1);
    Rng noise(2);
    Tape tape(params);
    auto terms = pae_loss(tape, model, data, plan, {&noise, {}, {}});
    tape.backward(feature ? terms.feature : terms.position);
    return params.at("enc.l0.msg.w").grad;
  };
  double fa = 0.0, pa = 0.0;
  for (double v : grad_of(true).values()) fa += std::abs(v);
  for (double v : grad_of(false).values()) pa += std::abs(v);
  EXPECT_GT(fa, 0.0);
  EXPECT_GT(pa, 0.0);
}

TEST(Pretrain, SameSeedSameLog) {
  const RunConfig cfg = tiny_config(5);
  const auto a = pretrain(tiny_graph(), cfg);
  const auto b = pretrain(tiny_graph(), cfg);
  EXPECT_TRUE(a.log.same_losses(b.log));
  EXPECT_TRUE(params_bitwise_equal(a.state.params, b.state.params));
  EXPECT_EQ(a.log.records.size(), 5u);
}

TEST(Pretrain, ResumeEqualsStraightRun) {
  oracle::TempDir dir;
  RunConfig cfg = tiny_config(6);
  cfg.encoder.node_dropout = 0.2;
  cfg.encoder.edge_dropout = 0.1;
  const auto straight = pretrain(tiny_graph(), cfg);

  RunConfig half = cfg;
  half.epochs = 3;
  TrainOptions first;
  first.checkpoint_dir = dir.path();
  const auto a = pretrain(tiny_graph(), half, first);
  ASSERT_FALSE(a.log.checkpoints.empty());
  TrainOptions second;
  second.resume_from = a.log.checkpoints.back();
  const auto b = pretrain(tiny_graph(), cfg, second);
  ASSERT_EQ(b.log.records.size(), 3u);
  EXPECT_EQ(b.log.records.front().epoch, 4u);
  EXPECT_TRUE(params_bitwise_equal(b.state.params, straight.state.params));
  TrainLog joined = a.log;
  joined.records.insert(joined.records.end(), b.log.records.begin(), b.log.records.end());
  EXPECT_TRUE(joined.same_losses(straight.log));
}

TEST(Pretrain, PeriodicCheckpoints) {
  oracle::TempDir dir;
  RunConfig cfg = tiny_config(4);
  cfg.checkpoint_every = 2;
  TrainOptions opts;
  opts.checkpoint_dir = dir.path();
  const auto r = pretrain(tiny_graph(), cfg, opts);
  EXPECT_TRUE(std::filesystem::exists(dir / "checkpoint_epoch2.paew"));
  EXPECT_TRUE(std::filesystem::exists(dir / "checkpoint.paew"));
  const auto state = load_train_state(dir / "checkpoint.paew", {});
  EXPECT_EQ(state.epochs_done, 4u);
  EXPECT_TRUE(params_bitwise_equal(state.params, r.state.params));
}

TEST(Pretrain, UnusableCheckpointDirFailsBeforeTraining) {
  oracle::TempDir dir;
  oracle::write_file(dir / "file", "x");
  TrainOptions opts;
  opts.checkpoint_dir = dir / "file" / "sub";
  bool ran = false;
  opts.on_epoch = [&](const EpochRecord&) { ran = true; };
  EXPECT_THROW(pretrain(tiny_graph(), tiny_config(2), opts), IoError);
  EXPECT_FALSE(ran);
}

TEST(Pretrain, NonFiniteLossNamesEpochAndComponent) {
  Graph g = tiny_graph();
  Tensor huge = g.features();
  for (auto& v : huge.data()) v = (v >= 0 ? 1.0 : -1.0) * 1e305;
  g = g.with_features(huge);
  try {
    pretrain(g, tiny_config(2));
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    const std::string m = e.what();
    EXPECT_NE(m.find("epoch 1"), std::string::npos) << m;
  }
}

TEST(Pretrain, ZeroMaskRatioGivesZeroFeatureLoss) {
  RunConfig cfg = tiny_config(1);
  cfg.mask_ratio = 0.0;
  oracle::WarningCapture quiet;
  const auto r = pretrain(tiny_graph(), cfg);
  EXPECT_EQ(r.log.records[0].loss_feat, 0.0);
  EXPECT_EQ(r.log.records[0].loss_total, cfg.loss_alpha * r.log.records[0].loss_pos);
}

TEST(Pretrain, CollectionModeRunsAndIsDeterministic) {
  RunConfig cfg = tiny_config(3);
  cfg.encoder.attention = AttentionKind::kGatedGcn;
  cfg.encoder.edge_vocab = 3;
  cfg.batch_size = 8;
  cfg.k = 4;
  cfg.task = TaskKind::kGraphClassification;
  const auto mols = make_toy_molecules(20, 2, TaskKind::kGraphClassification);
  const auto a = pretrain(mols, cfg);
  const auto b = pretrain(mols, cfg);
  EXPECT_TRUE(a.log.same_losses(b.log));
  for (const auto& r : a.log.records) EXPECT_TRUE(std::isfinite(r.loss_total));
}

TEST(TrainState, SaveLoadBitwise) {
  oracle::TempDir dir;
  const auto r = pretrain(tiny_graph(), tiny_config(2));
  save_train_state(dir / "s.paew", r.state);
  const auto back = load_train_state(dir / "s.paew", {});
  EXPECT_TRUE(params_bitwise_equal(back.params, r.state.params));
  EXPECT_EQ(back.adam.step_count(), r.state.adam.step_count());
  EXPECT_EQ(back.epochs_done, 2u);
  for (std::size_t i = 0; i < back.params.size(); ++i) {
    EXPECT_TRUE(bitwise_equal(back.adam.first_moments()[i], r.state.adam.first_moments()[i]));
    EXPECT_TRUE(bitwise_equal(back.adam.second_moments()[i], r.state.adam.second_moments()[i]));
  }
}

TEST(TrainLog, CsvRoundTripPreservesLossesBitwise) {
  oracle::TempDir dir;
  TrainLog log;
  log.records.push_back({1, 0.1 + 0.2, 1.0 / 3.0, 0.30000000000000004 + 0.1 / 3.0, 0.5});
  log.records.push_back({2, 1e-300, 12345.678901234567, 2.0, 0.25});
  log.write_csv(dir / "log.csv");
  EXPECT_EQ(oracle::read_file(dir / "log.csv").substr(0, 41), "epoch,loss_feat,loss_pos,loss_total,secon");
  EXPECT_TRUE(TrainLog::read_csv(dir / "log.csv").same_losses(log));
}

TEST(RunConfig, PresetsAndValidation) {
  const auto blog = preset("blogcatalog");
  EXPECT_EQ(blog.lr, 0.001);
  EXPECT_EQ(blog.mask_ratio, 0.25);
  EXPECT_EQ(blog.loss_alpha, 0.1);
  EXPECT_EQ(blog.k, 50u);
  const auto cham = preset("chameleon");
  EXPECT_EQ(cham.loss_alpha, 0.01);
  EXPECT_THROW(preset("cora"), ArgumentError);
  EXPECT_FALSE(preset_names().empty());
  RunConfig bad;
  bad.epochs = 0;
  EXPECT_THROW(bad.validate(), ArgumentError);
  bad = {};
  bad.mask_ratio = 1.2;
  EXPECT_THROW(bad.validate(), ArgumentError);
  bad = {};
  bad.sce_gamma = 0.5;
  EXPECT_THROW(bad.validate(), ArgumentError);
  EXPECT_EQ(parse_pooling("max"), Pooling::kMax);
}
