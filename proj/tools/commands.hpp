#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "graphpae/config.hpp"

namespace graphpae::cli {

struct SynthOptions {
  std::string kind = "sbm";
  std::string out_dir;
  std::vector<std::int64_t> blocks{50, 50};
  double p_in = 0.2;
  double p_out = 0.02;
  std::uint64_t seed = 0;
  std::string features = "smooth";
  std::size_t count = 100;
  std::string task = "graph-classification";
  double train_fraction = 0.2;
  double valid_fraction = 0.2;
};

struct SpectralOptions {
  std::string edges;
  std::string features;
  std::string graph;
  std::string mask_kind = "feature";
  double ratio = 0.2;
  double noise_scale = 0.01;
  std::string bands;
  double band_width = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

struct PretrainOptions {
  std::optional<std::string> config;
  KeyValues flags;
  std::string run_dir;
  bool resume = false;
};

struct ProbeOptions {
  std::string run_dir;
  KeyValues flags;
  bool untrained = false;
  std::string out;
  std::string dataset_name;
};

void make_synth(const SynthOptions& opts, std::ostream& log);
void spectral_analysis(const SpectralOptions& opts, std::ostream& log);
void pretrain(const PretrainOptions& opts, std::ostream& log);
void probe(const ProbeOptions& opts, std::ostream& log);

/// "key=value" to a (key, value) pair; ArgumentError otherwise.
std::pair<std::string, std::string> split_assignment(const std::string& text);

}  // namespace graphpae::cli
