// Acceptance run: one PASS/FAIL/SKIP line per criterion, exit status 1 if any
// required criterion fails.
#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "graphpae/objectives.hpp"
#include "graphpae/analysis.hpp"
#include "graphpae/errors.hpp"
#include "graphpae/evalkit.hpp"
#include "graphpae/graph_io.hpp"
#include "graphpae/log.hpp"
#include "graphpae/model.hpp"
#include "graphpae/synth.hpp"
#include "graphpae/trainer.hpp"
#include "oracles.hpp"

using namespace graphpae;
namespace fs = std::filesystem;

namespace {

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kFail;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome eigensolver_oracle() {
  const auto start = Clock::now();
  Rng rng(2024);
  double worst_value = 0.0, worst_residual = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 8 + uniform_index(rng, 193);
    const double p = 0.02 + 0.3 * uniform01(rng);
    const Graph g = make_random_graph(n, p, 1000 + trial);
    const std::size_t k = std::max<std::size_t>(1, n / 4);
    const auto lap = normalized_laplacian(g);
    const auto basis = topk_eigenpairs(lap, k, trial);
    const auto ref = oracle::jacobi(oracle::dense_laplacian(g));
    std::vector<double> u(n), lu(n);
    for (std::size_t c = 0; c < k; ++c) {
      worst_value = std::max(worst_value, std::abs(basis.eigenvalues[c] - ref.values[c]));
      for (std::size_t i = 0; i < n; ++i) u[i] = basis.eigenvectors(i, c);
      lap.apply(u, lu);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) r += std::pow(lu[i] - basis.eigenvalues[c] * u[i], 2);
      worst_residual = std::max(worst_residual, std::sqrt(r));
    }
  }
  const double t = seconds_since(start);
  const bool ok = worst_value <= 1e-8 && worst_residual <= 1e-6 && t < 30.0;
  return {ok ? Status::kPass : Status::kFail, "max |dlambda|=" + fmt(worst_value, 3) +
                                                   " max residual=" + fmt(worst_residual, 3) +
                                                   " time=" + fmt(t, 3) + "s"};
}

Outcome analytic_spectra() {
  double worst_complete = 0.0;
  for (std::size_t n : {3u, 5u, 8u}) {
    const auto b = topk_eigenpairs(normalized_laplacian(make_complete(n)), n, 0);
    worst_complete = std::max(worst_complete, std::abs(b.eigenvalues[0]));
    const double expected = static_cast<double>(n) / static_cast<double>(n - 1);
    for (std::size_t k = 1; k < n; ++k)
      worst_complete = std::max(worst_complete, std::abs(b.eigenvalues[k] - expected));
  }
  const Graph path = make_path(2);
  const auto b = topk_eigenpairs(normalized_laplacian(path), 2, 0);
  const double path_err = std::max(std::abs(b.eigenvalues[0]), std::abs(b.eigenvalues[1] - 2.0));
  const double dist_err = std::abs(relative_distances(b, path).values[0] - std::sqrt(2.0));
  const bool ok = worst_complete <= 1e-10 && path_err <= 1e-12 && dist_err <= 1e-12;
  return {ok ? Status::kPass : Status::kFail, "K_n err=" + fmt(worst_complete, 3) + " path err=" +
                                                   fmt(path_err, 3) + " P01 err=" + fmt(dist_err, 3)};
}

Graph twelve_node_graph(bool edge_features) {
  const Graph base = make_random_graph(12, 0.35, 77, 3);
  std::vector<EdgeInput> edges;
  Rng rng(78);
  for (std::size_t i = 0; i < 12; ++i)
    for (auto j : base.neighbors(i))
      if (i < j) {
        std::optional<std::int32_t> id;
        if (edge_features) id = static_cast<std::int32_t>(uniform_index(rng, 3));
        edges.push_back({static_cast<std::uint32_t>(i), j, id});
      }
  return Graph::from_edges(12, edges, base.features());
}

ModelConfig gradient_model(AttentionKind kind, bool edge_features) {
  ModelConfig m;
  m.encoder.layers = 2;
  m.encoder.hidden = 8;
  m.encoder.heads = 2;
  m.encoder.attention = kind;
  m.encoder.rbf_count = 16;
  m.encoder.edge_vocab = edge_features ? 3 : 0;
  m.feature_dim = 3;
  m.loss_alpha = 0.5;
  return m;
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t scalars = 0;
  for (auto kind : {AttentionKind::kGat, AttentionKind::kGatedGcn}) {
    for (bool edge_features : {false, true}) {
      const ModelConfig model = gradient_model(kind, edge_features);
      ParameterStore params = init_model(model, 5);
      // Generic point: non-zero biases and mask token.
      Rng rng(6);
      for (auto& p : params)
        if (p->name.ends_with(".b") || p->name == "mask_token")
          for (auto& v : p->value.data()) v = 0.2 * (uniform01(rng) - 0.5);
      const PreparedGraph data = prepare_graph(twelve_node_graph(edge_features), 6, 0);
      Rng mask_rng(7);
      const auto plan = sample_plan(data.graph, 0.25, CorruptionMode::kFeature, 0.05, mask_rng);
      const double err = finite_diff_check(params, [&](Tape& tape) {
        Rng noise(8);
        return pae_loss(tape, model, data, plan, {&noise, {}, {}}).total;
      });
      worst = std::max(worst, err);
      scalars += params.scalar_count();
    }
  }
  const double t = seconds_since(start);
  const bool ok = worst <= 1e-4 && t < 60.0;
  return {ok ? Status::kPass : Status::kFail, "max rel err=" + fmt(worst, 3) + " over " +
                                                   std::to_string(scalars) + " parameters, time=" +
                                                   fmt(t, 3) + "s"};
}

struct LossValues {
  Tensor nodes_feature_pass;
  Tensor positions_position_pass;
  double feature = 0.0;
  double position = 0.0;
  double total = 0.0;
};

LossValues evaluate(ParameterStore& params, const ModelConfig& model, const PreparedGraph& data,
                    const CorruptionPlan& plan, std::uint64_t noise_seed) {
  Rng noise(noise_seed);
  Tape tape(params);
  const auto terms = pae_loss(tape, model, data, plan, {&noise, {}, {}});
  LossValues out;
  out.feature = terms.feature.value().item();
  out.position = terms.position.value().item();
  out.total = terms.total.value().item();
  return out;
}

Outcome invariance_suite() {
  std::vector<std::string> failures;
  const Graph g = make_sbm({15, 15}, 0.4, 0.05, 11, FeatureMode::kSmooth);
  for (auto kind : {AttentionKind::kGat, AttentionKind::kGatedGcn}) {
    ModelConfig model = gradient_model(kind, false);
    model.feature_dim = g.feature_dim();
    ParameterStore params = init_model(model, 12);
    Rng brng(13);
    for (auto& p : params)
      if (p->name.ends_with(".b") || p->name == "mask_token")
        for (auto& v : p->value.data()) v = 0.2 * (uniform01(brng) - 0.5);
    const PreparedGraph data = prepare_graph(g, 8, 0);
    Rng mask_rng(14);
    const auto plan = sample_plan(g, 0.25, CorruptionMode::kFeature, 0.01, mask_rng);
    const LossValues base = evaluate(params, model, data, plan, 15);
    const std::string tag = std::string(" [") + to_string(kind) + "]";

    // (a) Sign flips of eigenvector columns.
    SpectralBasis flipped = data.basis;
    for (std::size_t k = 0; k < flipped.k(); k += 2)
      for (std::size_t i = 0; i < g.num_nodes(); ++i) flipped.eigenvectors(i, k) = -flipped.eigenvectors(i, k);
    const PreparedGraph fdata = PreparedGraph::from_basis(g, flipped);
    const LossValues f = evaluate(params, model, fdata, plan, 15);
    if (!(fdata.distances == data.distances)) failures.push_back("a:P" + tag);
    if (!bitwise_equal(embed_nodes(params, model.encoder, fdata), embed_nodes(params, model.encoder, data)))
      failures.push_back("a:encoder" + tag);
    {
      Tape ta(params), tb(params);
      auto oa = encoder_forward(ta, ta.constant(g.features()), data.distances, data.edges, model.encoder);
      auto ob = encoder_forward(tb, tb.constant(g.features()), fdata.distances, fdata.edges, model.encoder);
      if (!bitwise_equal(oa.positions.value(), ob.positions.value())) failures.push_back("a:positions" + tag);
    }
    if (!bitwise_equal(Tensor::scalar(f.total), Tensor::scalar(base.total)) ||
        !bitwise_equal(Tensor::scalar(f.position), Tensor::scalar(base.position)) ||
        !bitwise_equal(Tensor::scalar(f.feature), Tensor::scalar(base.feature)))
      failures.push_back("a:loss" + tag);

    // (b) Node permutation.
    std::vector<std::uint32_t> perm(g.num_nodes());
    std::iota(perm.begin(), perm.end(), 0u);
    Rng prng(16);
    shuffle(perm, prng);
    SpectralBasis pb = data.basis;
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
      for (std::size_t k = 0; k < pb.k(); ++k) pb.eigenvectors(perm[i], k) = data.basis.eigenvectors(i, k);
    const PreparedGraph pdata = PreparedGraph::from_basis(permute_graph(g, perm), pb);
    const Tensor h = embed_nodes(params, model.encoder, data);
    const Tensor hp = embed_nodes(params, model.encoder, pdata);
    bool permuted = true;
    for (std::size_t i = 0; i < g.num_nodes(); ++i)
      for (std::size_t c = 0; c < h.cols(); ++c) permuted = permuted && h(i, c) == hp(perm[i], c);
    if (!permuted) failures.push_back("b:embeddings" + tag);
    const LossValues p = evaluate(params, model, pdata, map_plan(plan, perm), 15);
    if (!bitwise_equal(Tensor::scalar(p.total), Tensor::scalar(base.total)) ||
        !bitwise_equal(Tensor::scalar(p.feature), Tensor::scalar(base.feature)) ||
        !bitwise_equal(Tensor::scalar(p.position), Tensor::scalar(base.position)))
      failures.push_back("b:loss" + tag);

    // (c) alpha = 0 decouples the position decoder.
    {
      ModelConfig zero = model;
      zero.loss_alpha = 0.0;
      Rng noise(15);
      Tape tape(params);
      tape.backward(pae_loss(tape, zero, data, plan, {&noise, {}, {}}).total);
      for (const auto& prm : params)
        if (prm->name.rfind("dec_p.", 0) == 0)
          for (double v : prm->grad.values())
            if (v != 0.0) {
              failures.push_back("c:" + prm->name + tag);
              break;
            }
    }

    // (d) Unmasked rows of the reconstruction do not enter the feature loss.
    {
      Tape tape(params);
      Var clean = tape.constant(g.features());
      Var masked = mask_features(clean, plan, tape.param("mask_token"));
      auto enc = encoder_forward(tape, masked, data.distances, data.edges, model.encoder);
      Tensor recon = decode_features(tape, enc.nodes).value();
      const double before =
          sce_loss(tape, clean, tape.constant(recon), plan.masked_nodes, model.sce_gamma).value().item();
      Rng r(17);
      for (std::size_t i = 0; i < g.num_nodes(); ++i)
        if (!plan.is_masked(i))
          for (auto& v : recon.row(i)) v += 10.0 * (uniform01(r) - 0.5);
      const double after =
          sce_loss(tape, clean, tape.constant(recon), plan.masked_nodes, model.sce_gamma).value().item();
      if (!bitwise_equal(Tensor::scalar(before), Tensor::scalar(after))) failures.push_back("d" + tag);
      if (!bitwise_equal(Tensor::scalar(before), Tensor::scalar(base.feature))) failures.push_back("d:base" + tag);
    }
  }
  std::string detail = failures.empty() ? "sign flip, permutation, alpha=0, unmasked rows: all exact" : "failed:";
  for (const auto& f : failures) detail += " " + f;
  return {failures.empty() ? Status::kPass : Status::kFail, detail};
}

Outcome loss_formulas() {
  ParameterStore params;
  Tape tape(params);
  auto sce = [&](Tensor x, Tensor y, double gamma) {
    return sce_loss(tape, tape.constant(x), tape.constant(y), std::vector<std::uint32_t>{0}, gamma).value().item();
  };
  auto huber = [&](double pred, double target) {
    return huber_pos_loss(tape, tape.constant(Tensor::scalar(pred)), std::vector<double>{target}).value().item();
  };
  // Norms and dot product are exact here, so the scale-invariance zero is exact too.
  const double scaled = sce(Tensor::from_rows({{3, 4}}), Tensor::from_rows({{6, 8}}), 2.0);
  const double same = huber(0.7, 0.7);
  const double orth = sce(Tensor::from_rows({{1, 0}}), Tensor::from_rows({{0, 1}}), 1.0);
  const double opp = sce(Tensor::from_rows({{1, 0}}), Tensor::from_rows({{-1, 0}}), 2.0);
  const double quad = huber(1.0, 0.5);
  const double lin = huber(2.5, 0.5);
  const bool exact = scaled == 0.0 && same == 0.0 && orth == 1.0 && opp == 4.0 && quad == 0.125 && lin == 1.5;

  auto slope = [](double d) {
    ParameterStore ps;
    ps.add("p", Tensor::scalar(d));
    Tape t(ps);
    t.backward(huber_pos_loss(t, t.param("p"), std::vector<double>{0.0}));
    return ps.at("p").grad.item();
  };
  const double eps = 1e-9;
  const double value_gap = std::abs(huber(1.0 + eps, 0.0) - huber(1.0 - eps, 0.0));
  const double slope_gap = std::abs(slope(1.0 + eps) - slope(1.0 - eps));
  const bool continuous = value_gap <= 1e-8 && slope_gap <= 1e-8;
  return {exact && continuous ? Status::kPass : Status::kFail,
          "values (" + fmt(scaled) + ", " + fmt(same) + ", " + fmt(orth) + ", " + fmt(opp) + ", " + fmt(quad) + ", " + fmt(lin) +
              ") continuity gaps value=" + fmt(value_gap, 3) + " slope=" + fmt(slope_gap, 3)};
}

// Criteria 6 and 7 share the pretraining runs.
struct SanityRun {
  std::uint64_t seed;
  Graph graph;
  RunConfig cfg;
  TrainResult result;
  double seconds;
};

Graph sanity_graph(std::uint64_t seed) { return make_sbm({50, 50}, 0.2, 0.02, seed, FeatureMode::kSmooth); }

RunConfig sanity_config(std::uint64_t seed) {
  RunConfig cfg;  // r=0.25, mu_p=0.01, alpha=0.1, K=16, T=200
  cfg.seed = seed;
  return cfg;
}

std::vector<SanityRun> run_sanity(const fs::path& out_dir) {
  std::vector<SanityRun> runs;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto start = Clock::now();
    SanityRun run{seed, sanity_graph(seed), sanity_config(seed), {}, 0.0};
    run.result = pretrain(run.graph, run.cfg);
    run.seconds = seconds_since(start);
    run.result.log.write_csv(out_dir / ("criterion6_seed" + std::to_string(seed) + "_log.csv"));
    runs.push_back(std::move(run));
  }
  return runs;
}

Outcome training_sanity(const std::vector<SanityRun>& runs) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const auto& rec = r.result.log.records;
    const double ratio = rec.back().loss_total / rec.front().loss_total;
    ok = ok && ratio <= 0.5 && r.seconds < 120.0;
    detail += "seed " + std::to_string(r.seed) + ": final/first=" + fmt(ratio, 3) + " (" + fmt(r.seconds, 3) + "s); ";
  }
  return {ok ? Status::kPass : Status::kFail, detail};
}

double probe_accuracy(const ParameterStore& params, const EncoderConfig& enc, const Graph& g, std::size_t k,
                      std::uint64_t seed) {
  const Tensor h = embed_nodes(params, enc, prepare_graph(g, k, seed));
  const Split& s = *g.split();
  const Tensor& y = *g.labels();
  ProbeSet train{select_rows(h, s.train), select_rows(y, s.train)};
  ProbeSet valid{select_rows(h, s.valid), select_rows(y, s.valid)};
  ProbeSet test{select_rows(h, s.test), select_rows(y, s.test)};
  return linear_probe(train, valid, test, ProbeConfig{}, seed).metric;
}

Outcome probe_lift(const std::vector<SanityRun>& runs) {
  std::vector<double> trained, random, lift;
  std::string detail;
  for (const auto& r : runs) {
    const ModelConfig model = r.result.model;
    const ParameterStore init = init_model(model, r.cfg.seed);
    const double a = probe_accuracy(r.result.state.params, model.encoder, r.graph, r.cfg.k, r.seed);
    const double b = probe_accuracy(init, model.encoder, r.graph, r.cfg.k, r.seed);
    trained.push_back(a);
    random.push_back(b);
    lift.push_back(a - b);
    detail += "seed " + std::to_string(r.seed) + ": " + fmt(a) + " vs random " + fmt(b) + "; ";
  }
  const MeanStd t = mean_std(trained), l = mean_std(lift);
  const bool ok = t.mean >= 0.90 && l.mean >= 0.05;
  detail += "mean pretrained=" + fmt(t.mean) + " mean lift=" + fmt(l.mean);
  return {ok ? Status::kPass : Status::kFail, detail};
}

Outcome figure_one(const fs::path& out_dir) {
  const auto start = Clock::now();
  const Graph g = make_sbm({50, 50}, 0.2, 0.02, 0, FeatureMode::kSmooth);
  const auto bands = uniform_bands(0.0, 2.0, 0.05);
  const auto feature = compare_spectra(g, SpectralCorruption::kFeature, 0.2, 0.0, bands, 1);
  const auto offset = compare_spectra(g, SpectralCorruption::kOffset, 0.2, 0.01, bands, 1);
  const auto edge = compare_spectra(g, SpectralCorruption::kEdge, 0.2, 0.0, bands, 1);
  write_band_csv(out_dir / "criterion8_feature.csv", feature);
  write_band_csv(out_dir / "criterion8_offset.csv", offset);
  write_band_csv(out_dir / "criterion8_edge.csv", edge);
  const double low = mean_abs_diff(feature, 0.0, 0.25);
  const double mid = mean_abs_diff(feature, 1.0, 1.25);
  std::size_t spread = 0;
  for (const auto& r : offset)
    if (r.lo >= 0.2 && r.abs_diff() && *r.abs_diff() > 0.0) ++spread;
  const double t = seconds_since(start);
  const bool ok = low >= 2.0 * mid && spread > 0 && t < 60.0;
  return {ok ? Status::kPass : Status::kFail, "feature low=" + fmt(low) + " mid=" + fmt(mid) + " ratio=" +
                                                   fmt(mid > 0 ? low / mid : INFINITY) + "; offset bands above 0.2 with nonzero diff=" +
                                                   std::to_string(spread) + "; time=" + fmt(t, 3) + "s"};
}

Outcome determinism_and_resume(const fs::path& out_dir) {
  const Graph g = sanity_graph(0);
  RunConfig cfg = sanity_config(0);
  cfg.epochs = 100;
  cfg.encoder.node_dropout = 0.1;
  cfg.encoder.edge_dropout = 0.1;
  const auto straight = pretrain(g, cfg);
  const auto repeat = pretrain(g, cfg);

  const fs::path ckpt = out_dir / "criterion9_checkpoints";
  RunConfig first = cfg;
  first.epochs = 50;
  TrainOptions opts;
  opts.checkpoint_dir = ckpt;
  const auto a = pretrain(g, first, opts);
  TrainOptions resume;
  resume.resume_from = ckpt / "checkpoint.paew";
  const auto b = pretrain(g, cfg, resume);

  TrainLog joined = a.log;
  joined.records.insert(joined.records.end(), b.log.records.begin(), b.log.records.end());
  bool params_equal = b.state.params.size() == straight.state.params.size();
  for (std::size_t i = 0; params_equal && i < straight.state.params.size(); ++i)
    params_equal = bitwise_equal(b.state.params[i].value, straight.state.params[i].value);
  const bool logs_equal = joined.same_losses(straight.log);
  const bool repeat_equal = repeat.log.same_losses(straight.log);
  const bool ok = params_equal && logs_equal && repeat_equal;
  return {ok ? Status::kPass : Status::kFail, std::string("resumed params ") + (params_equal ? "bit-exact" : "DIFFER") +
                                                   ", resumed log " + (logs_equal ? "bit-exact" : "DIFFERS") +
                                                   ", repeated run log " + (repeat_equal ? "identical" : "DIFFERS")};
}

Outcome chameleon() {
  const char* dir = std::getenv("GRAPHPAE_CHAMELEON_DIR");
  if (!dir || !fs::exists(fs::path(dir) / "edges.txt")) {
    return {Status::kSkip, "no data (set GRAPHPAE_CHAMELEON_DIR to a directory with edges.txt, features.csv, "
                           "labels.csv, split.txt)"};
  }
  const fs::path d(dir);
  const Graph g = load_graph(d / "edges.txt", d / "features.csv", d / "labels.csv", d / "split.txt");
  RunConfig cfg = preset("chameleon");
  cfg.encoder.layers = 2;
  cfg.encoder.hidden = 256;
  std::vector<double> acc;
  const auto trained = pretrain(g, cfg);
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    acc.push_back(probe_accuracy(trained.state.params, trained.model.encoder, g, cfg.k, seed));
  const MeanStd ms = mean_std(acc);
  return {ms.mean >= 0.70 ? Status::kPass : Status::kFail, "10-seed accuracy " + format_mean_std(ms)};
}

const char* label(Status s) {
  switch (s) {
    case Status::kPass:
      return "PASS";
    case Status::kFail:
      return "FAIL";
    case Status::kSkip:
      return "SKIP";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GraphPAE acceptance run"};
  std::string out_dir = "acceptance_out";
  app.add_option("--out-dir", out_dir, "Directory for CSV artifacts")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(out_dir);

  // Expected warnings (e.g. zero-norm reconstructions) are collected, not printed.
  std::size_t warnings = 0;
  set_warning_sink([&](const std::string&) { ++warnings; });

  struct Criterion {
    int id;
    const char* name;
    bool required;
    std::function<Outcome()> run;
  };
  std::vector<SanityRun> sanity;
  bool sanity_done = false;
  auto ensure_sanity = [&] {
    if (!sanity_done) {
      sanity = run_sanity(out_dir);
      sanity_done = true;
    }
  };
  const std::vector<Criterion> criteria{
      {1, "eigensolver oracle", true, eigensolver_oracle},
      {2, "analytic spectra", true, analytic_spectra},
      {3, "gradient correctness", true, gradient_correctness},
      {4, "invariance suite", true, invariance_suite},
      {5, "loss formulas", true, loss_formulas},
      {6, "training sanity", true, [&] { ensure_sanity(); return training_sanity(sanity); }},
      {7, "probe lift", true, [&] { ensure_sanity(); return probe_lift(sanity); }},
      {8, "spectral corruption directions", true, [&] { return figure_one(out_dir); }},
      {9, "determinism and resume", true, [&] { return determinism_and_resume(out_dir); }},
      {10, "small real graph (optional)", false, chameleon},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", label(o.status), c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (o.status == Status::kFail && c.required) ++failed;
  }
  std::printf("%d required criteria failed; %zu library warnings suppressed\n", failed, warnings);
  return failed == 0 ? 0 : 1;
}
