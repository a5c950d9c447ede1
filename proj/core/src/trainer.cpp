#include "graphpae/trainer.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "graphpae/corruption.hpp"
#include "graphpae/errors.hpp"
#include "graphpae/log.hpp"
#include "text.hpp"

namespace graphpae {
namespace {

struct PresetRow {
  const char* name;
  double lr, wd, r, alpha, dp, dp_edge;
  std::size_t k;
  // Graph datasets only.
  const char* pooling;
  std::size_t epochs;
};

// Node classification (GAT encoder) and graph prediction (GatedGCN encoder).
constexpr PresetRow kPresets[] = {
    {"blogcatalog", 0.001, 0.0, 0.25, 0.1, 0.6, 0.0, 50, nullptr, 0},
    {"chameleon", 0.001, 0.0, 0.25, 0.01, 0.0, 0.0, 50, nullptr, 0},
    {"squirrel", 0.001, 0.0, 0.5, 0.001, 0.6, 0.0, 50, nullptr, 0},
    {"actor", 0.0005, 0.0, 0.25, 0.01, 0.0, 0.0, 50, nullptr, 0},
    {"arxiv-year", 0.001, 0.0, 0.5, 0.01, 0.0, 0.0, 100, nullptr, 0},
    {"penn94", 0.001, 0.0, 0.25, 0.001, 0.0, 0.0, 200, nullptr, 0},
    {"molesol", 0.0005, 0.0, 0.75, 0.1, 0.6, 0.5, 8, "sum", 20},
    {"mollipo", 0.0005, 0.0001, 0.25, 0.001, 0.6, 0.0, 30, "sum", 20},
    {"molfreesolv", 0.0001, 0.0, 0.5, 0.1, 0.5, 0.5, 15, "sum", 100},
    {"molbace", 0.001, 0.0, 0.75, 0.1, 0.5, 0.5, 30, "mean", 100},
    {"molbbbp", 0.001, 0.0, 0.5, 0.01, 0.6, 0.6, 30, "mean", 20},
    {"molclintox", 0.0001, 0.0, 0.25, 0.01, 0.6, 0.0, 30, "mean", 20},
    {"moltox21", 0.0001, 0.0, 0.25, 0.1, 0.0, 0.6, 8, "mean", 20},
    {"zinc15", 0.001, 0.0, 0.35, 0.01, 0.0, 0.0, 6, "mean", 100},
};

std::string describe(double v) { return std::isnan(v) ? "nan" : (v > 0 ? "+inf" : "-inf"); }

void check_finite(std::size_t epoch, const char* component, double value) {
  if (!std::isfinite(value)) {
    throw NumericalError("epoch " + std::to_string(epoch) + ": " + component + " is " +
                         describe(value));
  }
}

void check_parameters(std::size_t epoch, const ParameterStore& params) {
  for (const auto& p : params) {
    if (!p->grad.all_finite()) {
      throw NumericalError("epoch " + std::to_string(epoch) + ": non-finite gradient for '" +
                           p->name + "'");
    }
  }
}

struct StepLosses {
  double feat = 0.0, pos = 0.0, total = 0.0;
};

// One optimization step on `data`; randomness keyed by (seed, epoch, step).
StepLosses train_step(TrainState& state, const ModelConfig& model, const PreparedGraph& data,
                      const RunConfig& cfg, std::size_t epoch, std::size_t step) {
  Rng mask_rng = make_rng(cfg.seed, epoch, step, Stream::kMaskSelection);
  Rng noise_rng = make_rng(cfg.seed, epoch, step, Stream::kPositionNoise);
  Rng drop_a = make_rng(cfg.seed, epoch, step, Stream::kDropoutFeaturePass);
  Rng drop_b = make_rng(cfg.seed, epoch, step, Stream::kDropoutPositionPass);
  CorruptionPlan plan = sample_plan(data.graph, cfg.mask_ratio, CorruptionMode::kFeature,
                                    cfg.noise_scale, mask_rng);
  plan.epoch_seed = derive_seed(cfg.seed, epoch, step, Stream::kMaskSelection);

  StepRandomness randomness;
  randomness.position_noise = &noise_rng;
  randomness.feature_pass = {true, &drop_a};
  randomness.position_pass = {true, &drop_b};

  Tape tape(state.params);
  const LossTerms terms = pae_loss(tape, model, data, plan, randomness);
  StepLosses out{terms.feature.value().item(), terms.position.value().item(),
                 terms.total.value().item()};
  check_finite(epoch, "feature reconstruction loss", out.feat);
  check_finite(epoch, "position reconstruction loss", out.pos);
  check_finite(epoch, "total loss", out.total);
  tape.backward(terms.total);
  check_parameters(epoch, state.params);
  state.adam.step(state.params);
  return out;
}

void prepare_checkpoint_dir(const TrainOptions& options) {
  if (!options.checkpoint_dir) return;
  std::error_code ec;
  std::filesystem::create_directories(*options.checkpoint_dir, ec);
  if (ec || !std::filesystem::is_directory(*options.checkpoint_dir)) {
    throw IoError("checkpoint directory '" + options.checkpoint_dir->string() +
                  "' is not usable" + (ec ? ": " + ec.message() : std::string()));
  }
}

TrainState initial_state(const RunConfig& cfg, const ModelConfig& model, const TrainOptions& options) {
  const AdamOptions adam{cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay};
  if (options.resume_from) {
    TrainState state = load_train_state(*options.resume_from, adam);
    const ParameterStore fresh = init_model(model, cfg.seed);
    if (fresh.size() != state.params.size()) {
      throw FormatError("checkpoint '" + options.resume_from->string() +
                        "' does not match the configured model");
    }
    for (std::size_t q = 0; q < fresh.size(); ++q) {
      if (fresh[q].name != state.params[q].name || !fresh[q].value.same_shape(state.params[q].value)) {
        throw FormatError("checkpoint parameter '" + state.params[q].name +
                          "' does not match the configured model");
      }
    }
    return state;
  }
  TrainState state;
  state.params = init_model(model, cfg.seed);
  state.adam = AdamState(state.params, adam);
  return state;
}

void maybe_checkpoint(TrainResult& result, const RunConfig& cfg, const TrainOptions& options,
                      std::size_t epoch) {
  if (!options.checkpoint_dir) return;
  const bool periodic = cfg.checkpoint_every > 0 && epoch % cfg.checkpoint_every == 0;
  const bool last = epoch == cfg.epochs;
  if (!periodic && !last) return;
  const auto path = last ? *options.checkpoint_dir / "checkpoint.paew"
                         : *options.checkpoint_dir / ("checkpoint_epoch" + std::to_string(epoch) + ".paew");
  save_train_state(path, result.state);
  result.log.checkpoints.push_back(path);
}

template <typename StepFn>
TrainResult run_epochs(const RunConfig& cfg, ModelConfig model, const TrainOptions& options,
                       StepFn&& epoch_fn) {
  cfg.validate();
  prepare_checkpoint_dir(options);
  TrainResult result;
  result.model = model;
  result.state = initial_state(cfg, model, options);
  for (std::size_t epoch = result.state.epochs_done + 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const StepLosses losses = epoch_fn(result.state, epoch);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    result.state.epochs_done = epoch;
    EpochRecord rec{epoch, losses.feat, losses.pos, losses.total, elapsed.count()};
    result.log.records.push_back(rec);
    if (options.on_epoch) options.on_epoch(rec);
    maybe_checkpoint(result, cfg, options, epoch);
  }
  return result;
}

}  // namespace

std::string to_string(Pooling pooling) {
  switch (pooling) {
    case Pooling::kMean: return "mean";
    case Pooling::kSum: return "sum";
    case Pooling::kMax: return "max";
  }
  return "mean";
}

Pooling parse_pooling(const std::string& text) {
  if (text == "mean") return Pooling::kMean;
  if (text == "sum") return Pooling::kSum;
  if (text == "max") return Pooling::kMax;
  throw ArgumentError("unknown pooling '" + text + "' (expected mean, sum or max)");
}

void RunConfig::validate() const {
  if (epochs < 1) throw ArgumentError("epochs must be at least 1");
  if (!(mask_ratio >= 0.0 && mask_ratio <= 1.0)) throw ArgumentError("mask_ratio must lie in [0, 1]");
  if (!(noise_scale >= 0.0)) throw ArgumentError("noise_scale must be non-negative");
  if (!(loss_alpha >= 0.0)) throw ArgumentError("loss_alpha must be non-negative");
  if (!(sce_gamma >= 1.0)) throw ArgumentError("sce_gamma must be at least 1");
  if (k < 1) throw ArgumentError("k must be at least 1");
  if (!(lr > 0.0)) throw ArgumentError("lr must be positive");
  if (!(weight_decay >= 0.0)) throw ArgumentError("weight_decay must be non-negative");
  if (batch_size < 1) throw ArgumentError("batch_size must be at least 1");
  encoder.validate();
}

ModelConfig RunConfig::model_config(std::size_t feature_dim) const {
  ModelConfig m;
  m.encoder = encoder;
  m.feature_dim = feature_dim;
  m.sce_gamma = sce_gamma;
  m.loss_alpha = loss_alpha;
  return m;
}

RunConfig preset(const std::string& name) {
  for (const auto& row : kPresets) {
    if (name != row.name) continue;
    RunConfig cfg;
    cfg.lr = row.lr;
    cfg.weight_decay = row.wd;
    cfg.mask_ratio = row.r;
    cfg.loss_alpha = row.alpha;
    cfg.encoder.node_dropout = row.dp;
    cfg.encoder.edge_dropout = row.dp_edge;
    cfg.k = row.k;
    if (row.pooling) {
      cfg.pooling = parse_pooling(row.pooling);
      cfg.epochs = row.epochs;
      cfg.task = TaskKind::kGraphClassification;
      cfg.encoder.attention = AttentionKind::kGatedGcn;
      cfg.encoder.hidden = 300;
    } else {
      cfg.encoder.attention = AttentionKind::kGat;
      cfg.encoder.heads = 4;
      cfg.encoder.hidden = 1024;
    }
    return cfg;
  }
  throw ArgumentError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& row : kPresets) out.emplace_back(row.name);
  return out;
}

void TrainLog::write_csv(const std::filesystem::path& path) const {
  auto out = detail::create_text(path);
  out << "epoch,loss_feat,loss_pos,loss_total,seconds\n";
  for (const auto& r : records) {
    out << r.epoch << ',' << detail::format_double(r.loss_feat) << ','
        << detail::format_double(r.loss_pos) << ',' << detail::format_double(r.loss_total) << ','
        << detail::format_double(r.seconds) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

TrainLog TrainLog::read_csv(const std::filesystem::path& path) {
  auto in = detail::open_text(path);
  TrainLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) continue;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto f = detail::split_on(body, ',');
    EpochRecord r;
    if (f.size() != 5 || !detail::parse_int(f[0], r.epoch) || !detail::parse_double(f[1], r.loss_feat) ||
        !detail::parse_double(f[2], r.loss_pos) || !detail::parse_double(f[3], r.loss_total) ||
        !detail::parse_double(f[4], r.seconds)) {
      detail::parse_fail(path, lineno, "malformed train log row");
    }
    log.records.push_back(r);
  }
  return log;
}

bool TrainLog::same_losses(const TrainLog& other) const {
  if (records.size() != other.records.size()) return false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = records[i];
    const auto& b = other.records[i];
    if (a.epoch != b.epoch || !bitwise_equal(Tensor::scalar(a.loss_feat), Tensor::scalar(b.loss_feat)) ||
        !bitwise_equal(Tensor::scalar(a.loss_pos), Tensor::scalar(b.loss_pos)) ||
        !bitwise_equal(Tensor::scalar(a.loss_total), Tensor::scalar(b.loss_total))) {
      return false;
    }
  }
  return true;
}

void save_train_state(const std::filesystem::path& path, const TrainState& state) {
  NamedTensors entries;
  for (const auto& p : state.params) entries.emplace_back(p->name, p->value);
  const auto& m = state.adam.first_moments();
  const auto& v = state.adam.second_moments();
  for (std::size_t q = 0; q < state.params.size(); ++q) {
    entries.emplace_back("adam.m." + state.params[q].name, m[q]);
    entries.emplace_back("adam.v." + state.params[q].name, v[q]);
  }
  entries.emplace_back("state.adam_step", Tensor::scalar(static_cast<double>(state.adam.step_count())));
  entries.emplace_back("state.epoch", Tensor::scalar(static_cast<double>(state.epochs_done)));
  write_checkpoint(path, entries);
}

TrainState load_train_state(const std::filesystem::path& path, const AdamOptions& options) {
  NamedTensors entries = read_checkpoint(path);
  std::map<std::string, Tensor> moments;
  TrainState state;
  std::optional<double> step, epoch;
  for (auto& [name, value] : entries) {
    if (name.rfind("adam.", 0) == 0) {
      moments.emplace(name, std::move(value));
    } else if (name == "state.adam_step") {
      step = value.item();
    } else if (name == "state.epoch") {
      epoch = value.item();
    } else {
      state.params.add(name, std::move(value));
    }
  }
  if (!step || !epoch) throw FormatError("'" + path.string() + "' is not a training checkpoint");
  std::vector<Tensor> m, v;
  for (const auto& p : state.params) {
    auto mi = moments.find("adam.m." + p->name);
    auto vi = moments.find("adam.v." + p->name);
    if (mi == moments.end() || vi == moments.end()) {
      throw FormatError("'" + path.string() + "' lacks optimizer moments for '" + p->name + "'");
    }
    m.push_back(mi->second);
    v.push_back(vi->second);
  }
  state.adam = AdamState(state.params, options);
  state.adam.restore(static_cast<std::uint64_t>(*step), std::move(m), std::move(v));
  state.epochs_done = static_cast<std::size_t>(*epoch);
  return state;
}

TrainResult pretrain(const PreparedGraph& data, const RunConfig& cfg, const TrainOptions& options) {
  const ModelConfig model = cfg.model_config(data.graph.feature_dim());
  return run_epochs(cfg, model, options, [&](TrainState& state, std::size_t epoch) {
    return train_step(state, model, data, cfg, epoch, 0);
  });
}

TrainResult pretrain(const Graph& graph, const RunConfig& cfg, const TrainOptions& options) {
  cfg.validate();
  prepare_checkpoint_dir(options);
  return pretrain(prepare_graph(graph, cfg.k, cfg.seed), cfg, options);
}

std::vector<SpectralBasis> collection_bases(const GraphCollection& collection, std::size_t k,
                                            std::uint64_t seed) {
  std::vector<SpectralBasis> bases;
  bases.reserve(collection.graphs.size());
  for (const auto& g : collection.graphs) {
    if (g.num_nodes() == 0) throw DataError("collection contains an empty graph");
    bases.push_back(topk_eigenpairs(normalized_laplacian(g), std::min(k, g.num_nodes()), seed));
  }
  return bases;
}

PreparedGraph prepare_batch(const GraphCollection& collection,
                            const std::vector<SpectralBasis>& bases,
                            std::span<const std::uint32_t> members, std::size_t k) {
  std::vector<Graph> graphs;
  std::vector<SpectralBasis> parts;
  for (auto m : members) {
    graphs.push_back(collection.graphs.at(m));
    parts.push_back(bases.at(m));
  }
  return PreparedGraph::from_basis(disjoint_union(graphs), stack_bases(parts, k));
}

TrainResult pretrain(const GraphCollection& collection, const RunConfig& cfg,
                     const TrainOptions& options) {
  cfg.validate();
  collection.validate();
  if (collection.graphs.empty()) throw DataError("graph collection is empty");
  prepare_checkpoint_dir(options);
  const std::vector<SpectralBasis> bases = collection_bases(collection, cfg.k, cfg.seed);
  const ModelConfig model = cfg.model_config(collection.graphs.front().feature_dim());
  return run_epochs(cfg, model, options, [&](TrainState& state, std::size_t epoch) {
    std::vector<std::uint32_t> order(collection.graphs.size());
    std::iota(order.begin(), order.end(), 0u);
    Rng order_rng = make_rng(cfg.seed, epoch, 0, Stream::kBatchOrder);
    shuffle(order, order_rng);
    StepLosses sum;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++steps) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const PreparedGraph batch = prepare_batch(
          collection, bases, std::span(order).subspan(start, stop - start), cfg.k);
      const StepLosses s = train_step(state, model, batch, cfg, epoch, steps);
      sum.feat += s.feat;
      sum.pos += s.pos;
      sum.total += s.total;
    }
    const double n = static_cast<double>(steps);
    return StepLosses{sum.feat / n, sum.pos / n, sum.total / n};
  });
}

}  // namespace graphpae
