#include <gtest/gtest.h>

#include "graphpae/config.hpp"
#include "graphpae/errors.hpp"
#include "oracles.hpp"

using namespace graphpae;

TEST(ConfigText, ParsesKeysCommentsAndBlankLines) {
  const auto kv = parse_config_text("# run\nepochs = 5\n\nencoder.layers=3  # deep\n", "t");
  EXPECT_EQ(kv.at("epochs"), "5");
  EXPECT_EQ(kv.at("encoder.layers"), "3");
}

TEST(ConfigText, Errors) {
  EXPECT_THROW(parse_config_text("epochs 5\n", "t"), ParseError);
  EXPECT_THROW(parse_config_text("bogus=1\n", "t"), ArgumentError);
  EXPECT_THROW(parse_config_text("epochs=1\nepochs=2\n", "t"), ArgumentError);
}

TEST(ApplyConfig, TypedValues) {
  FullConfig cfg;
  apply_config(cfg, {{"epochs", "7"},
                     {"mask_ratio", "0.5"},
                     {"encoder.attention", "gatedgcn"},
                     {"encoder.rbf_centers", "0,0.5,1"},
                     {"keep_self_loops", "false"},
                     {"probe.metric", "roc-auc"},
                     {"pooling", "sum"}});
  EXPECT_EQ(cfg.run.epochs, 7u);
  EXPECT_EQ(cfg.run.mask_ratio, 0.5);
  EXPECT_EQ(cfg.run.encoder.attention, AttentionKind::kGatedGcn);
  EXPECT_EQ(cfg.run.encoder.rbf_centers, (std::vector<double>{0, 0.5, 1}));
  EXPECT_FALSE(cfg.run.keep_self_loops);
  EXPECT_EQ(cfg.probe.metric, Metric::kRocAuc);
  EXPECT_EQ(cfg.run.pooling, Pooling::kSum);
  EXPECT_THROW(apply_config(cfg, {{"epochs", "many"}}), ArgumentError);
  EXPECT_THROW(apply_config(cfg, {{"nope", "1"}}), ArgumentError);
}

TEST(EnvOverrides, MapsNamesAndRejectsUnknown) {
  const std::vector<std::string> env{"HOME=/root", "PAE_EPOCHS=9", "PAE_ENCODER_HIDDEN=32"};
  const auto kv = env_overrides(env);
  EXPECT_EQ(kv.at("epochs"), "9");
  EXPECT_EQ(kv.at("encoder.hidden"), "32");
  EXPECT_EQ(kv.size(), 2u);
  const std::vector<std::string> bad{"PAE_NOT_A_KEY=1"};
  EXPECT_THROW(env_overrides(bad), ArgumentError);
}

TEST(ResolveConfig, PrecedenceFileFlagsEnv) {
  oracle::TempDir dir;
  oracle::write_file(dir / "c.txt", "epochs=3\nlr=0.5\nk=4\n");
  const std::vector<std::string> env{"PAE_LR=0.25"};
  const auto cfg = resolve_config(dir / "c.txt", {{"epochs", "4"}, {"lr", "0.1"}}, env);
  EXPECT_EQ(cfg.run.k, 4u);
  EXPECT_EQ(cfg.run.epochs, 4u);
  EXPECT_EQ(cfg.run.lr, 0.25);
}

TEST(ResolveConfig, PresetIsBaseAndKeysOverride) {
  const auto cfg = resolve_config(std::nullopt, {{"preset", "chameleon"}, {"k", "20"}}, {});
  EXPECT_EQ(cfg.preset, "chameleon");
  EXPECT_EQ(cfg.run.loss_alpha, 0.01);
  EXPECT_EQ(cfg.run.k, 20u);
}

TEST(RenderConfig, RoundTripsThroughParser) {
  FullConfig cfg;
  apply_config(cfg, {{"epochs", "11"}, {"noise_scale", "0.001"}, {"encoder.heads", "2"}, {"encoder.hidden", "16"}});
  const std::string text = render_config(cfg);
  FullConfig back;
  apply_config(back, parse_config_text(text, "rendered"));
  EXPECT_EQ(render_config(back), text);
  EXPECT_EQ(back.run.epochs, 11u);
  EXPECT_EQ(back.run.noise_scale, 0.001);
  for (const auto& key : config_keys()) EXPECT_NE(text.find(key + "="), std::string::npos) << key;
}
