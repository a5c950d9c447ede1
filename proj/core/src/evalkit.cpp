#include "graphpae/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "graphpae/adam.hpp"
#include "graphpae/errors.hpp"
#include "graphpae/objectives.hpp"
#include "text.hpp"

namespace graphpae {
namespace {

enum class ProbeMode { kMulticlass, kMultilabel, kRegression };

double column_sum(std::vector<double>& scratch) { return order_invariant_sum(scratch); }

std::size_t class_id(double v) {
  if (!(v >= 0.0) || v != std::floor(v)) {
    throw DataError("class labels must be non-negative integers, got " + detail::format_double(v));
  }
  return static_cast<std::size_t>(v);
}

struct Standardizer {
  std::vector<double> mean, scale;

  static Standardizer fit(const Tensor& x, bool enabled) {
    Standardizer s;
    const std::size_t n = x.rows(), d = x.cols();
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    if (!enabled || n == 0) return s;
    for (std::size_t j = 0; j < d; ++j) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += x(i, j);
      m /= static_cast<double>(n);
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += (x(i, j) - m) * (x(i, j) - m);
      const double sd = std::sqrt(v / static_cast<double>(n));
      s.mean[j] = m;
      s.scale[j] = sd > 1e-12 ? 1.0 / sd : 1.0;
    }
    return s;
  }

  Tensor apply(const Tensor& x) const {
    Tensor out = x;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = (x(i, j) - mean[j]) * scale[j];
    return out;
  }
};

Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  const std::size_t n = x.rows(), d = x.cols(), c = w.cols();
  Tensor z(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < c; ++k) z(i, k) = b(0, k);
    for (std::size_t j = 0; j < d; ++j) {
      const double xv = x(i, j);
      for (std::size_t k = 0; k < c; ++k) z(i, k) += xv * w(j, k);
    }
  }
  return z;
}

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// Probabilities for classification modes, raw outputs for regression.
Tensor link(const Tensor& z, ProbeMode mode) {
  Tensor out = z;
  if (mode == ProbeMode::kMulticlass) {
    for (std::size_t i = 0; i < z.rows(); ++i) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < z.cols(); ++k) mx = std::max(mx, z(i, k));
      double s = 0.0;
      for (std::size_t k = 0; k < z.cols(); ++k) s += (out(i, k) = std::exp(z(i, k) - mx));
      for (std::size_t k = 0; k < z.cols(); ++k) out(i, k) /= s;
    }
  } else if (mode == ProbeMode::kMultilabel) {
    for (double& v : out.data()) v = sigmoid(v);
  }
  return out;
}

// d(loss)/dz for the mean loss of each mode.
Tensor output_gradient(const Tensor& prob, const Tensor& labels, ProbeMode mode) {
  const std::size_t n = prob.rows(), c = prob.cols();
  Tensor g(n, c);
  if (mode == ProbeMode::kMulticlass) {
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t y = class_id(labels(i, 0));
      for (std::size_t k = 0; k < c; ++k) g(i, k) = (prob(i, k) - (k == y ? 1.0 : 0.0)) * inv;
    }
  } else if (mode == ProbeMode::kMultilabel) {
    std::size_t count = 0;
    for (double v : labels.data()) count += !std::isnan(v);
    const double inv = count ? 1.0 / static_cast<double>(count) : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < c; ++k)
        g(i, k) = std::isnan(labels(i, k)) ? 0.0 : (prob(i, k) - labels(i, k)) * inv;
  } else {
    const double inv = 2.0 / static_cast<double>(n * c);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < c; ++k) g(i, k) = (prob(i, k) - labels(i, k)) * inv;
  }
  return g;
}

// Mean training objective; breaks ties between epochs with equal validation metric.
double output_loss(const Tensor& prob, const Tensor& labels, ProbeMode mode) {
  constexpr double kTiny = 1e-300;
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < prob.rows(); ++i) {
    if (mode == ProbeMode::kMulticlass) {
      total -= std::log(std::max(prob(i, class_id(labels(i, 0))), kTiny));
      ++count;
      continue;
    }
    for (std::size_t k = 0; k < prob.cols(); ++k) {
      const double y = labels(i, k);
      if (std::isnan(y)) continue;
      const double p = prob(i, k);
      total += mode == ProbeMode::kRegression
                   ? (p - y) * (p - y)
                   : -(y * std::log(std::max(p, kTiny)) + (1.0 - y) * std::log(std::max(1.0 - p, kTiny)));
      ++count;
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

ProbeMode probe_mode(const ProbeConfig& cfg, const Tensor& labels) {
  if (cfg.kind == ProbeKind::kLinearRegression) return ProbeMode::kRegression;
  return labels.cols() == 1 ? ProbeMode::kMulticlass : ProbeMode::kMultilabel;
}

void require_rows(const ProbeSet& s, const char* what) {
  if (s.features.rank() != 2 || s.labels.rank() != 2 || s.features.rows() != s.labels.rows()) {
    throw ShapeError(std::string("linear_probe: ") + what + " features " + s.features.shape_string() +
                     " vs labels " + s.labels.shape_string());
  }
}

std::size_t count_classes(const Tensor& labels) {
  std::size_t c = 0;
  for (double v : labels.data()) c = std::max(c, class_id(v) + 1);
  return c;
}

}  // namespace

std::string to_string(ProbeKind kind) {
  return kind == ProbeKind::kLogistic ? "logistic" : "linear-regression";
}

ProbeKind parse_probe_kind(const std::string& text) {
  if (text == "logistic") return ProbeKind::kLogistic;
  if (text == "linear-regression") return ProbeKind::kLinearRegression;
  throw ArgumentError("unknown probe kind '" + text + "' (expected logistic or linear-regression)");
}

std::string to_string(Metric metric) {
  switch (metric) {
    case Metric::kAccuracy: return "accuracy";
    case Metric::kRocAuc: return "roc-auc";
    case Metric::kRmse: return "rmse";
    case Metric::kMae: return "mae";
  }
  return "accuracy";
}

Metric parse_metric(const std::string& text) {
  if (text == "accuracy") return Metric::kAccuracy;
  if (text == "roc-auc") return Metric::kRocAuc;
  if (text == "rmse") return Metric::kRmse;
  if (text == "mae") return Metric::kMae;
  throw ArgumentError("unknown metric '" + text + "' (expected accuracy, roc-auc, rmse or mae)");
}

bool higher_is_better(Metric metric) { return metric == Metric::kAccuracy || metric == Metric::kRocAuc; }

void ProbeConfig::validate() const {
  if (!(lr > 0.0)) throw ArgumentError("probe.lr must be positive");
  if (epochs < 1) throw ArgumentError("probe.epochs must be at least 1");
  if (!(weight_decay >= 0.0)) throw ArgumentError("probe.weight_decay must be non-negative");
  if (seeds < 1) throw ArgumentError("probe.seeds must be at least 1");
  const bool regression_metric = metric == Metric::kRmse || metric == Metric::kMae;
  if ((kind == ProbeKind::kLinearRegression) != regression_metric) {
    throw ArgumentError("probe metric " + to_string(metric) + " does not fit probe kind " +
                        to_string(kind));
  }
}

Tensor embed_nodes(const ParameterStore& params, const EncoderConfig& cfg, const PreparedGraph& data) {
  ParameterStore frozen = params;
  Tape tape(frozen);
  Var x = tape.constant(data.graph.features());
  return encoder_forward(tape, x, data.distances, data.edges, cfg, ForwardContext{}).nodes.value();
}

Tensor readout(const Tensor& nodes, Pooling pooling) {
  if (nodes.rank() != 2 || nodes.rows() == 0) throw DataError("readout of an empty graph");
  const std::size_t n = nodes.rows(), d = nodes.cols();
  Tensor out(1, d);
  std::vector<double> scratch(n);
  for (std::size_t j = 0; j < d; ++j) {
    if (pooling == Pooling::kMax) {
      double m = nodes(0, j);
      for (std::size_t i = 1; i < n; ++i) m = std::max(m, nodes(i, j));
      out(0, j) = m;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i) scratch[i] = nodes(i, j);
    const double s = column_sum(scratch);
    out(0, j) = pooling == Pooling::kSum ? s : s / static_cast<double>(n);
  }
  return out;
}

Tensor embed_graphs(const ParameterStore& params, const EncoderConfig& cfg,
                    const GraphCollection& collection, const std::vector<SpectralBasis>& bases,
                    Pooling pooling) {
  if (bases.size() != collection.graphs.size()) throw ShapeError("embed_graphs: one basis per graph required");
  Tensor out(collection.graphs.size(), cfg.hidden);
  for (std::size_t g = 0; g < collection.graphs.size(); ++g) {
    const PreparedGraph data = PreparedGraph::from_basis(collection.graphs[g], bases[g]);
    const Tensor row = readout(embed_nodes(params, cfg, data), pooling);
    std::copy(row.data().begin(), row.data().end(), out.row(g).begin());
  }
  return out;
}

double roc_auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw ShapeError("roc_auc: score and label counts differ");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double positive_rank_sum = 0.0;
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1 .. j
    for (std::size_t q = i; q < j; ++q) {
      const double y = labels[order[q]];
      if (y == 1.0) {
        positive_rank_sum += mid_rank;
        ++pos;
      } else if (y == 0.0) {
        ++neg;
      } else {
        throw MetricError("roc-auc labels must be 0 or 1, got " + detail::format_double(y));
      }
    }
    i = j;
  }
  if (pos == 0 || neg == 0) throw MetricError("roc-auc is undefined when only one class is present");
  const double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double metric_suite(const Tensor& predictions, const Tensor& targets, Metric metric) {
  if (predictions.rank() != 2 || targets.rank() != 2 || predictions.rows() != targets.rows()) {
    throw ShapeError("metric: predictions " + predictions.shape_string() + " vs targets " +
                     targets.shape_string());
  }
  const std::size_t n = targets.rows();
  if (n == 0) throw MetricError("metric over zero samples");
  switch (metric) {
    case Metric::kAccuracy: {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t guess;
        if (predictions.cols() == 1) {
          guess = static_cast<std::size_t>(std::llround(predictions(i, 0)));
        } else {
          const auto r = predictions.row(i);
          guess = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
        }
        hits += guess == class_id(targets(i, 0));
      }
      return static_cast<double>(hits) / static_cast<double>(n);
    }
    case Metric::kRocAuc: {
      if (targets.cols() == 1 && predictions.cols() == 2) {
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) s[i] = predictions(i, 1), y[i] = targets(i, 0);
        return roc_auc(s, y);
      }
      if (targets.cols() != predictions.cols()) {
        throw ShapeError("roc-auc: predictions " + predictions.shape_string() + " vs targets " +
                         targets.shape_string());
      }
      double total = 0.0;
      std::size_t used = 0;
      for (std::size_t c = 0; c < targets.cols(); ++c) {
        std::vector<double> s, y;
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (std::isnan(targets(i, c))) continue;
          s.push_back(predictions(i, c));
          y.push_back(targets(i, c));
          has0 |= targets(i, c) == 0.0;
          has1 |= targets(i, c) == 1.0;
        }
        if (!has0 || !has1) continue;
        total += roc_auc(s, y);
        ++used;
      }
      if (used == 0) throw MetricError("roc-auc is undefined: no label has both classes present");
      return total / static_cast<double>(used);
    }
    case Metric::kRmse:
    case Metric::kMae: {
      if (!predictions.same_shape(targets)) {
        throw ShapeError("regression metric: predictions " + predictions.shape_string() +
                         " vs targets " + targets.shape_string());
      }
      double acc = 0.0;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const double d = predictions[i] - targets[i];
        acc += metric == Metric::kRmse ? d * d : std::abs(d);
      }
      acc /= static_cast<double>(targets.size());
      return metric == Metric::kRmse ? std::sqrt(acc) : acc;
    }
  }
  throw ArgumentError("unknown metric");
}

ProbeResult linear_probe(const ProbeSet& train, const ProbeSet& valid, const ProbeSet& eval,
                         const ProbeConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  require_rows(train, "train");
  require_rows(eval, "eval");
  const bool use_valid = valid.features.rank() == 2 && valid.features.rows() > 0;
  if (use_valid) require_rows(valid, "valid");
  if (train.features.rows() == 0) throw DataError("linear_probe: empty training set");
  const std::size_t d = train.features.cols();
  for (const ProbeSet* s : {&valid, &eval}) {
    if (s->features.rank() == 2 && s->features.rows() > 0 && s->features.cols() != d) {
      throw ShapeError("linear_probe: embedding width " + std::to_string(s->features.cols()) +
                       " differs from training width " + std::to_string(d));
    }
  }

  const ProbeMode mode = probe_mode(cfg, train.labels);
  std::size_t outputs = train.labels.cols();
  if (mode == ProbeMode::kMulticlass) {
    outputs = std::max<std::size_t>(2, count_classes(train.labels));
    for (const ProbeSet* s : {&valid, &eval})
      if (s->labels.rank() == 2) outputs = std::max(outputs, count_classes(s->labels));
    if (cfg.metric == Metric::kRocAuc && count_classes(train.labels) < 2) {
      throw MetricError("roc-auc probe needs both classes in the training labels");
    }
  }
  if (mode == ProbeMode::kMultilabel && cfg.metric == Metric::kRocAuc) {
    bool any = false;
    for (std::size_t c = 0; c < train.labels.cols() && !any; ++c) {
      bool has0 = false, has1 = false;
      for (std::size_t i = 0; i < train.labels.rows(); ++i) {
        has0 |= train.labels(i, c) == 0.0;
        has1 |= train.labels(i, c) == 1.0;
      }
      any = has0 && has1;
    }
    if (!any) throw MetricError("roc-auc probe needs both classes in the training labels");
  }

  const Standardizer scaler = Standardizer::fit(train.features, cfg.standardize);
  const Tensor xtr = scaler.apply(train.features);
  const Tensor xva = use_valid ? scaler.apply(valid.features) : Tensor();
  const Tensor xev = scaler.apply(eval.features);

  ParameterStore params;
  Rng rng = make_rng(seed, 0, 0, Stream::kProbe);
  Tensor w(d, outputs);
  for (double& v : w.data()) v = 0.01 * standard_normal(rng);
  params.add("probe.w", std::move(w));
  params.add("probe.b", Tensor(1, outputs));
  for (auto& p : params) p->grad = Tensor(p->value.rows(), p->value.cols());
  AdamState adam(params, AdamOptions{cfg.lr, 0.9, 0.999, 1e-8, cfg.weight_decay});

  auto predict = [&](const Tensor& x) { return link(affine(x, params[0].value, params[1].value), mode); };
  const bool higher = higher_is_better(cfg.metric);
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_loss = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0, since_best = 0;
  ParameterStore best_params = params;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const Tensor prob = predict(xtr);
    const Tensor g = output_gradient(prob, train.labels, mode);
    Tensor& gw = params[0].grad;
    Tensor& gb = params[1].grad;
    gw.fill(0.0);
    gb.fill(0.0);
    for (std::size_t i = 0; i < xtr.rows(); ++i)
      for (std::size_t k = 0; k < outputs; ++k) {
        const double gik = g(i, k);
        gb(0, k) += gik;
        for (std::size_t j = 0; j < d; ++j) gw(j, k) += xtr(i, j) * gik;
      }
    adam.step(params);

    if (use_valid) {
      const Tensor pva = predict(xva);
      const double m = metric_suite(pva, valid.labels, cfg.metric);
      const double loss = output_loss(pva, valid.labels, mode);
      const bool improved =
          std::isnan(best) || (higher ? m > best : m < best) || (m == best && loss < best_loss);
      if (improved) {
        best = m;
        best_loss = loss;
        best_epoch = epoch;
        best_params = params;
        since_best = 0;
      } else if (++since_best >= cfg.patience && cfg.patience > 0) {
        break;
      }
    }
  }
  if (use_valid) {
    params = best_params;
  } else {
    best_epoch = cfg.epochs;
  }

  ProbeResult result;
  result.predictions = predict(xev);
  result.metric = metric_suite(result.predictions, eval.labels, cfg.metric);
  result.valid_metric = best;
  result.best_epoch = best_epoch;
  return result;
}

double linear_probe(const Tensor& train_features, const Tensor& train_labels,
                    const Tensor& eval_features, const Tensor& eval_labels, const ProbeConfig& cfg,
                    std::uint64_t seed) {
  return linear_probe({train_features, train_labels}, {}, {eval_features, eval_labels}, cfg, seed).metric;
}

Tensor select_rows(const Tensor& m, std::span<const std::uint32_t> ids) {
  Tensor out(ids.size(), m.cols());
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= m.rows()) throw RangeError("row id " + std::to_string(ids[r]) + " out of range");
    const auto src = m.row(ids[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

MeanStd mean_std(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("mean_std of no values");
  MeanStd ms;
  for (double v : values) ms.mean += v;
  ms.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - ms.mean) * (v - ms.mean);
  ms.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return ms;
}

std::string format_mean_std(const MeanStd& ms, int digits) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.*f±%.*f", digits, ms.mean, digits, ms.stddev);
  return buf;
}

void write_results_csv(const std::filesystem::path& path, const std::string& dataset, Metric metric,
                       std::span<const std::pair<std::uint64_t, double>> rows) {
  auto out = detail::create_text(path);
  out << "dataset,seed,metric,value\n";
  std::vector<double> values;
  for (const auto& [seed, value] : rows) {
    out << dataset << ',' << seed << ',' << to_string(metric) << ',' << detail::format_double(value) << '\n';
    values.push_back(value);
  }
  if (!values.empty()) {
    out << dataset << ",summary," << to_string(metric) << ',' << format_mean_std(mean_std(values))
        << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FinetuneResult finetune(const GraphCollection& collection, const ParameterStore& pretrained,
                        EncoderConfig encoder, std::size_t k, const FinetuneConfig& cfg,
                        std::uint64_t seed) {
  collection.validate();
  if (!collection.split) throw DataError("fine-tuning needs a train/valid/test split");
  if (cfg.pooling == Pooling::kMax) throw ArgumentError("fine-tuning supports mean or sum pooling");
  const bool regression = collection.task == TaskKind::kGraphRegression;
  const std::size_t targets = collection.graphs.front().labels().value().cols();
  encoder.node_dropout = cfg.dropout;
  encoder.edge_dropout = cfg.dropout;

  ParameterStore params;
  for (const auto& p : pretrained) {
    if (p->name.rfind("enc.", 0) == 0) params.add(p->name, p->value);
  }
  Rng init = make_rng(seed, 0, 1, Stream::kInit);
  params.add("head.l1.w", xavier_uniform(encoder.hidden, encoder.hidden, init));
  params.add("head.l1.b", Tensor(1, encoder.hidden));
  params.add("head.l2.w", xavier_uniform(encoder.hidden, targets, init));
  params.add("head.l2.b", Tensor(1, targets));
  AdamState adam(params, AdamOptions{cfg.lr, 0.9, 0.999, 1e-8, 0.0});
  const std::vector<SpectralBasis> bases = collection_bases(collection, k, seed);

  auto forward = [&](Tape& tape, const PreparedGraph& batch, std::span<const std::uint32_t> members,
                     const ForwardContext& ctx) {
    Var x = tape.constant(batch.graph.features());
    Var h = encoder_forward(tape, x, batch.distances, batch.edges, encoder, ctx).nodes;
    std::vector<std::uint32_t> graph_of;
    Tensor inv_size(members.size(), 1);
    for (std::size_t q = 0; q < members.size(); ++q) {
      const std::size_t n = collection.graphs[members[q]].num_nodes();
      graph_of.insert(graph_of.end(), n, static_cast<std::uint32_t>(q));
      inv_size(q, 0) = cfg.pooling == Pooling::kMean ? 1.0 / static_cast<double>(n) : 1.0;
    }
    Var pooled = ad::mul(ad::segment_sum(h, graph_of, members.size()), tape.constant(inv_size));
    Var hidden = ad::relu(ad::add(ad::matmul(pooled, tape.param("head.l1.w")), tape.param("head.l1.b")));
    return ad::add(ad::matmul(hidden, tape.param("head.l2.w")), tape.param("head.l2.b"));
  };
  auto labels_of = [&](std::span<const std::uint32_t> members) {
    Tensor y(members.size(), targets);
    for (std::size_t q = 0; q < members.size(); ++q) {
      const Tensor& l = collection.graphs[members[q]].labels().value();
      std::copy(l.data().begin(), l.data().end(), y.row(q).begin());
    }
    return y;
  };

  FinetuneResult result;
  result.metric = regression ? Metric::kMae : Metric::kRocAuc;
  std::vector<std::uint32_t> train = collection.split->train;
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng order_rng = make_rng(seed, epoch, 1, Stream::kBatchOrder);
    shuffle(train, order_rng);
    double epoch_loss = 0.0;
    std::size_t steps = 0;
    for (std::size_t start = 0; start < train.size(); start += cfg.batch_size, ++steps) {
      const auto members = std::span(train).subspan(start, std::min(cfg.batch_size, train.size() - start));
      const PreparedGraph batch = prepare_batch(collection, bases, members, k);
      Rng drop = make_rng(seed, epoch, steps, Stream::kDropoutFeaturePass);
      Tape tape(params);
      Var out = forward(tape, batch, members, ForwardContext{true, &drop});
      Var y = tape.constant(labels_of(members));
      // Binary cross-entropy on logits: softplus(z) - y z.
      Var loss = regression ? ad::mean(ad::square(ad::sub(out, y)))
                            : ad::mean(ad::sub(ad::softplus(out), ad::mul(y, out)));
      epoch_loss += loss.value().item();
      tape.backward(loss);
      adam.step(params);
    }
    result.train_loss.push_back(steps ? epoch_loss / static_cast<double>(steps) : 0.0);
  }

  const auto& test = collection.split->test;
  if (test.empty()) throw DataError("fine-tuning needs a non-empty test split");
  const PreparedGraph batch = prepare_batch(collection, bases, test, k);
  Tape tape(params);
  Tensor pred = forward(tape, batch, test, ForwardContext{}).value();
  if (!regression) {
    for (double& v : pred.data()) v = sigmoid(v);
  }
  result.test_metric = metric_suite(pred, labels_of(test), result.metric);
  return result;
}

}  // namespace graphpae
