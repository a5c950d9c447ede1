#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"
#include "graphpae/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kArgument = 2, kData = 3, kNumerical = 4 };

// Shortcut flags that map onto config keys.
struct Shortcut {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr Shortcut kShortcuts[] = {
    {"--preset", "preset", "Start from a benchmark preset"},
    {"--epochs", "epochs", "Training epochs"},
    {"--mask-ratio", "mask_ratio", "Fraction of nodes corrupted per epoch"},
    {"--noise-scale", "noise_scale", "Position offset scale"},
    {"--loss-alpha", "loss_alpha", "Weight of the position loss"},
    {"--k", "k", "Eigenvectors used as positions"},
    {"--lr", "lr", "Adam learning rate"},
    {"--seed", "seed", "Run seed"},
    {"--edges", "data.edges", "Edge list"},
    {"--features", "data.features", "Node feature CSV"},
    {"--labels", "data.labels", "Label CSV"},
    {"--split", "data.split", "Split file"},
    {"--manifest", "data.manifest", "Graph collection manifest"},
    {"--task", "task", "node-classification | graph-classification | graph-regression"},
};

struct ConfigFlags {
  std::vector<std::string> assignments;
  std::vector<std::string> values = std::vector<std::string>(std::size(kShortcuts));
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--set", flags.assignments, "Config override key=value (repeatable)");
  for (std::size_t i = 0; i < std::size(kShortcuts); ++i) {
    cmd->add_option(kShortcuts[i].flag, flags.values[i], kShortcuts[i].help);
  }
}

graphpae::KeyValues collect(const ConfigFlags& flags) {
  graphpae::KeyValues out;
  for (const auto& a : flags.assignments) {
    auto [k, v] = graphpae::cli::split_assignment(a);
    out[k] = v;
  }
  for (std::size_t i = 0; i < std::size(kShortcuts); ++i) {
    if (!flags.values[i].empty()) out[kShortcuts[i].key] = flags.values[i];
  }
  return out;
}

int exit_code_for(const std::exception& e) {
  using namespace graphpae;
  if (dynamic_cast<const ArgumentError*>(&e)) return kArgument;
  if (dynamic_cast<const NumericalError*>(&e)) return kNumerical;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const RangeError*>(&e) ||
      dynamic_cast<const DataError*>(&e) || dynamic_cast<const FormatError*>(&e) ||
      dynamic_cast<const IoError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
      dynamic_cast<const MetricError*>(&e)) {
    return kData;
  }
  return kInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GraphPAE: positional autoencoder pretraining for graphs"};
  app.require_subcommand(1);

  graphpae::cli::SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("make-synth", "Write a synthetic dataset");
  synth_cmd->add_option("--kind", synth.kind, "sbm | molecules")->capture_default_str();
  synth_cmd->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  synth_cmd->add_option("--blocks", synth.blocks, "SBM block sizes")->delimiter(',')->capture_default_str();
  synth_cmd->add_option("--p-in", synth.p_in, "Within-block edge probability")->capture_default_str();
  synth_cmd->add_option("--p-out", synth.p_out, "Across-block edge probability")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--features", synth.features, "smooth | onehot")->capture_default_str();
  synth_cmd->add_option("--count", synth.count, "Number of molecules")->capture_default_str();
  synth_cmd->add_option("--task", synth.task, "Molecule label kind")->capture_default_str();
  synth_cmd->add_option("--train-fraction", synth.train_fraction, "SBM train split fraction")->capture_default_str();
  synth_cmd->add_option("--valid-fraction", synth.valid_fraction, "SBM valid split fraction")->capture_default_str();

  graphpae::cli::SpectralOptions spectral;
  auto* spectral_cmd = app.add_subcommand("spectral-analysis", "Band-wise frequency magnitudes before and after corruption");
  spectral_cmd->add_option("--edges", spectral.edges, "Edge list");
  spectral_cmd->add_option("--features", spectral.features, "Node feature CSV");
  spectral_cmd->add_option("--graph", spectral.graph, "Binary graph file (instead of --edges/--features)");
  spectral_cmd->add_option("--mask-kind", spectral.mask_kind, "feature | edge | offset")->capture_default_str();
  spectral_cmd->add_option("--ratio", spectral.ratio, "Corrupted fraction")->capture_default_str();
  spectral_cmd->add_option("--noise-scale", spectral.noise_scale, "Offset scale (offset kind)")->capture_default_str();
  spectral_cmd->add_option("--bands", spectral.bands, "Comma-separated lo:hi bands (default: uniform)");
  spectral_cmd->add_option("--band-width", spectral.band_width, "Width of default bands over [0, 2]")->capture_default_str();
  spectral_cmd->add_option("--seed", spectral.seed, "Corruption seed")->capture_default_str();
  spectral_cmd->add_option("--out", spectral.out, "Output CSV")->required();

  graphpae::cli::PretrainOptions pre;
  ConfigFlags pre_flags;
  std::string pre_config;
  auto* pre_cmd = app.add_subcommand("pretrain", "Self-supervised pretraining into a run directory");
  pre_cmd->add_option("--config", pre_config, "key=value config file");
  pre_cmd->add_option("--run-dir", pre.run_dir, "Run directory")->required();
  pre_cmd->add_flag("--resume", pre.resume, "Continue from the run directory's checkpoint");
  add_config_flags(pre_cmd, pre_flags);

  graphpae::cli::ProbeOptions probe;
  ConfigFlags probe_flags;
  std::string probe_seeds;
  auto* probe_cmd = app.add_subcommand("probe", "Linear probe on frozen embeddings");
  probe_cmd->add_option("--run-dir", probe.run_dir, "Run directory from pretrain")->required();
  probe_cmd->add_flag("--untrained", probe.untrained, "Probe a randomly initialized encoder instead");
  probe_cmd->add_option("--seeds", probe_seeds, "Number of probe seeds");
  probe_cmd->add_option("--out", probe.out, "Results CSV (default: in the run directory)");
  probe_cmd->add_option("--dataset-name", probe.dataset_name, "Name written to the results");
  add_config_flags(probe_cmd, probe_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kArgument;
  }

  try {
    if (*synth_cmd) graphpae::cli::make_synth(synth, std::cout);
    if (*spectral_cmd) graphpae::cli::spectral_analysis(spectral, std::cout);
    if (*pre_cmd) {
      if (!pre_config.empty()) pre.config = pre_config;
      pre.flags = collect(pre_flags);
      graphpae::cli::pretrain(pre, std::cout);
    }
    if (*probe_cmd) {
      probe.flags = collect(probe_flags);
      if (!probe_seeds.empty()) probe.flags["probe.seeds"] = probe_seeds;
      graphpae::cli::probe(probe, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kOk;
}
