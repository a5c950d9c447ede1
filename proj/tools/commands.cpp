#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "content_hash.hpp"
#include "graphpae/analysis.hpp"
#include "graphpae/checkpoint.hpp"
#include "graphpae/errors.hpp"
#include "graphpae/evalkit.hpp"
#include "graphpae/graph_io.hpp"
#include "graphpae/synth.hpp"
#include "graphpae/trainer.hpp"

namespace fs = std::filesystem;

namespace graphpae::cli {
namespace {

constexpr const char* kConfigFile = "config.txt";
constexpr const char* kCheckpointFile = "checkpoint.paew";
constexpr const char* kLogFile = "train_log.csv";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out || !(out << text)) throw IoError("failed writing '" + path.string() + "'");
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ArgumentError(std::string("no ") + what + " given");
  if (!fs::is_regular_file(path)) throw IoError(std::string(what) + " '" + path + "' does not exist");
}

std::optional<fs::path> optional_path(const std::string& p) {
  if (p.empty()) return std::nullopt;
  require_file(p, "input file");
  return fs::path(p);
}

struct Dataset {
  std::optional<Graph> graph;
  std::optional<GraphCollection> collection;
  std::vector<fs::path> inputs;
  std::string name;
  std::size_t feature_dim() const {
    return graph ? graph->feature_dim() : collection->graphs.front().feature_dim();
  }
};

// Checks every path before reading any of them.
Dataset load_dataset(const RunConfig& cfg) {
  Dataset d;
  const GraphBuildOptions build{cfg.keep_self_loops};
  const auto& p = cfg.data;
  if (!p.manifest.empty()) {
    if (cfg.task == TaskKind::kNodeClassification) {
      throw ArgumentError("data.manifest needs task graph-classification or graph-regression");
    }
    require_file(p.manifest, "manifest");
    const auto labels = optional_path(p.labels);
    const auto split = optional_path(p.split);
    d.collection = load_collection(p.manifest, labels, split, cfg.task, build);
    if (d.collection->graphs.empty()) throw DataError("manifest '" + p.manifest + "' lists no graphs");
    d.inputs.emplace_back(p.manifest);
    d.name = fs::path(p.manifest).stem().string();
  } else {
    require_file(p.edges, "edge list (data.edges)");
    require_file(p.features, "feature file (data.features)");
    const auto labels = optional_path(p.labels);
    const auto split = optional_path(p.split);
    d.graph = load_graph(p.edges, p.features, labels, split, build);
    d.inputs.emplace_back(p.edges);
    d.inputs.emplace_back(p.features);
    d.name = fs::path(p.features).parent_path().filename().string();
    if (d.name.empty()) d.name = fs::path(p.features).stem().string();
  }
  for (const auto* extra : {&p.labels, &p.split})
    if (!extra->empty()) d.inputs.emplace_back(*extra);
  return d;
}

std::vector<std::pair<double, double>> parse_bands(const std::string& text, double width) {
  if (text.empty()) return uniform_bands(0.0, 2.0, width);
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ArgumentError("band '" + item + "' is not lo:hi");
    try {
      const double lo = std::stod(item.substr(0, colon));
      const double hi = std::stod(item.substr(colon + 1));
      if (lo > hi) throw ArgumentError("band '" + item + "' has lo > hi");
      out.emplace_back(lo, hi);
    } catch (const std::logic_error&) {
      throw ArgumentError("band '" + item + "' is not lo:hi");
    }
  }
  return out;
}

std::string versions_text() {
  std::ostringstream out;
  out << "graphpae=0.1.0\n"
      << "checkpoint_format=" << kCheckpointVersion << "\n"
      << "graph_format=" << kGraphFormatVersion << "\n"
      << "basis_format=" << kBasisFormatVersion << "\n"
      << "compiler=" << __VERSION__ << "\n";
  return out.str();
}

void write_inputs_hash(const fs::path& path, const std::vector<fs::path>& inputs) {
  std::string text;
  for (const auto& in : inputs) text += git_blob_id(in) + "  " + in.string() + "\n";
  write_text(path, text);
}

}  // namespace

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ArgumentError("expected key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

void make_synth(const SynthOptions& opts, std::ostream& log) {
  if (opts.out_dir.empty()) throw ArgumentError("--out-dir is required");
  fs::create_directories(opts.out_dir);
  const fs::path dir(opts.out_dir);
  if (opts.kind == "sbm") {
    SbmOptions so;
    so.train_fraction = opts.train_fraction;
    so.valid_fraction = opts.valid_fraction;
    FeatureMode mode;
    if (opts.features == "smooth") {
      mode = FeatureMode::kSmooth;
    } else if (opts.features == "onehot") {
      mode = FeatureMode::kBlockOneHot;
    } else {
      throw ArgumentError("--features must be smooth or onehot");
    }
    const Graph g = make_sbm(opts.blocks, opts.p_in, opts.p_out, opts.seed, mode, so);
    write_edge_list(dir / "edges.txt", g);
    write_csv_matrix(dir / "features.csv", g.features());
    write_csv_matrix(dir / "labels.csv", *g.labels());
    write_split(dir / "split.txt", *g.split());
    save_graph(dir / "graph.paeg", g);
    log << "wrote SBM with " << g.num_nodes() << " nodes, " << g.num_edges() / 2
        << " undirected edges to " << dir.string() << "\n";
  } else if (opts.kind == "molecules") {
    const GraphCollection c = make_toy_molecules(opts.count, opts.seed, parse_task_kind(opts.task));
    std::string manifest;
    Tensor labels(c.graphs.size(), 1);
    for (std::size_t k = 0; k < c.graphs.size(); ++k) {
      char stem[32];
      std::snprintf(stem, sizeof(stem), "mol_%04zu", k);
      write_edge_list(dir / (std::string(stem) + ".edges"), c.graphs[k]);
      write_csv_matrix(dir / (std::string(stem) + ".csv"), c.graphs[k].features());
      manifest += std::string(stem) + ".edges " + stem + ".csv\n";
      labels(k, 0) = c.graphs[k].labels()->item();
    }
    write_text(dir / "manifest.txt", manifest);
    write_csv_matrix(dir / "labels.csv", labels);
    write_split(dir / "split.txt", *c.split);
    log << "wrote " << c.graphs.size() << " molecules to " << dir.string() << "\n";
  } else {
    throw ArgumentError("--kind must be sbm or molecules");
  }
}

void spectral_analysis(const SpectralOptions& opts, std::ostream& log) {
  if (opts.out.empty()) throw ArgumentError("--out is required");
  const auto bands = parse_bands(opts.bands, opts.band_width);
  const auto kind = parse_spectral_corruption(opts.mask_kind);
  Graph g;
  if (!opts.graph.empty()) {
    require_file(opts.graph, "graph file");
    g = load_graph_binary(opts.graph);
  } else {
    require_file(opts.edges, "edge list");
    require_file(opts.features, "feature file");
    g = load_graph(opts.edges, opts.features);
  }
  const auto rows = compare_spectra(g, kind, opts.ratio, opts.noise_scale, bands, opts.seed);
  write_band_csv(opts.out, rows);
  log << "wrote " << rows.size() << " bands (" << to_string(kind) << " corruption, ratio "
      << opts.ratio << ") to " << opts.out << "\n";
}

void pretrain(const PretrainOptions& opts, std::ostream& log) {
  if (opts.run_dir.empty()) throw ArgumentError("--run-dir is required");
  std::optional<fs::path> config_file;
  if (opts.config) {
    require_file(*opts.config, "config file");
    config_file = *opts.config;
  } else if (opts.resume && fs::exists(fs::path(opts.run_dir) / kConfigFile)) {
    config_file = fs::path(opts.run_dir) / kConfigFile;
  }
  const FullConfig cfg = resolve_config(config_file, opts.flags, current_environment());
  cfg.run.validate();
  const Dataset data = load_dataset(cfg.run);

  const fs::path dir(opts.run_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create run directory '" + dir.string() + "'");
  write_text(dir / kConfigFile, render_config(cfg));
  write_text(dir / "seed.txt", std::to_string(cfg.run.seed) + "\n");
  write_text(dir / "versions.txt", versions_text());
  write_inputs_hash(dir / "inputs.sha1", data.inputs);

  TrainOptions topts;
  topts.checkpoint_dir = dir;
  TrainLog previous;
  if (opts.resume) {
    const fs::path ckpt = dir / kCheckpointFile;
    require_file(ckpt.string(), "checkpoint");
    topts.resume_from = ckpt;
    if (fs::exists(dir / kLogFile)) previous = TrainLog::read_csv(dir / kLogFile);
  }
  const std::size_t every = std::max<std::size_t>(1, cfg.run.epochs / 10);
  topts.on_epoch = [&](const EpochRecord& r) {
    if (r.epoch % every == 0 || r.epoch == 1) {
      log << "epoch " << r.epoch << " loss_feat=" << r.loss_feat << " loss_pos=" << r.loss_pos
          << " loss=" << r.loss_total << "\n";
    }
  };
  TrainResult result = data.graph ? graphpae::pretrain(*data.graph, cfg.run, topts)
                                  : graphpae::pretrain(*data.collection, cfg.run, topts);
  TrainLog full;
  const std::size_t first_new =
      result.log.records.empty() ? result.state.epochs_done + 1 : result.log.records.front().epoch;
  for (const auto& r : previous.records)
    if (r.epoch < first_new) full.records.push_back(r);
  full.records.insert(full.records.end(), result.log.records.begin(), result.log.records.end());
  full.write_csv(dir / kLogFile);
  log << "trained " << result.state.epochs_done << " epochs; run directory " << dir.string() << "\n";
}

void probe(const ProbeOptions& opts, std::ostream& log) {
  if (opts.run_dir.empty()) throw ArgumentError("--run-dir is required");
  const fs::path dir(opts.run_dir);
  require_file((dir / kConfigFile).string(), "run config");
  FullConfig cfg = resolve_config(dir / kConfigFile, opts.flags, current_environment());
  if (cfg.run.task == TaskKind::kGraphRegression && cfg.probe.kind == ProbeKind::kLogistic) {
    cfg.probe.kind = ProbeKind::kLinearRegression;
    if (higher_is_better(cfg.probe.metric)) cfg.probe.metric = Metric::kRmse;
  }
  cfg.run.validate();
  cfg.probe.validate();
  const Dataset data = load_dataset(cfg.run);

  std::optional<ParameterStore> trained;
  if (!opts.untrained) {
    const fs::path ckpt = dir / kCheckpointFile;
    require_file(ckpt.string(), "checkpoint");
    trained = load_train_state(ckpt, AdamOptions{}).params;
    const Parameter* lift = trained->find("enc.in.w");
    if (!lift) throw FormatError("checkpoint '" + ckpt.string() + "' has no encoder input layer");
    if (lift->value.rows() != data.feature_dim()) {
      throw DataError("dimension mismatch: checkpoint expects feature dimension " +
                      std::to_string(lift->value.rows()) + ", dataset has " +
                      std::to_string(data.feature_dim()));
    }
  }
  const ModelConfig model = cfg.run.model_config(data.feature_dim());

  // Node-level inputs are prepared once; graph-level ones per graph.
  std::optional<PreparedGraph> node_data;
  std::vector<SpectralBasis> bases;
  Tensor labels;
  const Split* split = nullptr;
  if (data.graph) {
    if (!data.graph->labels() || !data.graph->split()) {
      throw DataError("node probe needs labels and a split (data.labels, data.split)");
    }
    node_data = prepare_graph(*data.graph, cfg.run.k, cfg.run.seed);
    labels = *data.graph->labels();
    split = &*data.graph->split();
  } else {
    if (!data.collection->split) throw DataError("graph probe needs a split (data.split)");
    bases = collection_bases(*data.collection, cfg.run.k, cfg.run.seed);
    const auto& graphs = data.collection->graphs;
    if (!graphs.front().labels()) throw DataError("graph probe needs labels (data.labels)");
    labels = Tensor(graphs.size(), graphs.front().labels()->cols());
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      std::copy(graphs[g].labels()->data().begin(), graphs[g].labels()->data().end(), labels.row(g).begin());
    }
    split = &*data.collection->split;
  }

  auto embed = [&](const ParameterStore& params) {
    return node_data ? embed_nodes(params, model.encoder, *node_data)
                     : embed_graphs(params, model.encoder, *data.collection, bases, cfg.run.pooling);
  };
  std::optional<Tensor> fixed;
  if (trained) fixed = embed(*trained);

  std::vector<std::pair<std::uint64_t, double>> rows;
  for (std::size_t i = 0; i < cfg.probe.seeds; ++i) {
    const std::uint64_t seed = cfg.run.seed + i;
    const Tensor h = fixed ? *fixed : embed(init_model(model, seed));
    const ProbeResult r = linear_probe({select_rows(h, split->train), select_rows(labels, split->train)},
                                       {select_rows(h, split->valid), select_rows(labels, split->valid)},
                                       {select_rows(h, split->test), select_rows(labels, split->test)},
                                       cfg.probe, seed);
    rows.emplace_back(seed, r.metric);
    log << "seed " << seed << " " << to_string(cfg.probe.metric) << "=" << r.metric << "\n";
  }
  const std::string name = opts.dataset_name.empty() ? data.name : opts.dataset_name;
  const fs::path out = opts.out.empty() ? dir / (opts.untrained ? "probe_untrained.csv" : "probe_results.csv")
                                        : fs::path(opts.out);
  write_results_csv(out, name, cfg.probe.metric, rows);
  std::vector<double> values;
  for (const auto& r : rows) values.push_back(r.second);
  log << name << " " << to_string(cfg.probe.metric) << " " << format_mean_std(mean_std(values))
      << " -> " << out.string() << "\n";
}

}  // namespace graphpae::cli
