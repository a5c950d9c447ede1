#include "graphpae/encoder.hpp"

#include <cmath>
#include <string>

#include "graphpae/errors.hpp"

namespace graphpae {
namespace {

std::string layer_name(std::size_t layer, const char* suffix) {
  return "enc.l" + std::to_string(layer) + "." + suffix;
}

Var linear(Tape& tape, Var x, const std::string& prefix) {
  return ad::add(ad::matmul(x, tape.param(prefix + ".w")), tape.param(prefix + ".b"));
}

// Inverted dropout mask, drawn row-major.
Tensor dropout_mask(std::size_t rows, std::size_t cols, double rate, Rng& rng) {
  Tensor mask(rows, cols);
  const double keep = 1.0 / (1.0 - rate);
  for (double& m : mask.data()) m = uniform01(rng) < rate ? 0.0 : keep;
  return mask;
}

Var maybe_dropout(Tape& tape, Var x, double rate, const ForwardContext& ctx) {
  if (!ctx.training || ctx.rng == nullptr || rate <= 0.0) return x;
  return ad::mul(x, tape.constant(dropout_mask(x.rows(), x.cols(), rate, *ctx.rng)));
}

Tensor row_vector(std::size_t n, Rng& rng) {
  Tensor t = xavier_uniform(n, 1, rng);
  return Tensor({1, n}, t.data());
}

}  // namespace

std::string to_string(AttentionKind kind) {
  return kind == AttentionKind::kGat ? "gat" : "gatedgcn";
}

AttentionKind parse_attention_kind(const std::string& text) {
  if (text == "gat") return AttentionKind::kGat;
  if (text == "gatedgcn") return AttentionKind::kGatedGcn;
  throw ArgumentError("unknown attention kind '" + text + "' (expected gat or gatedgcn)");
}

std::vector<double> EncoderConfig::centers() const {
  if (!rbf_centers.empty()) return rbf_centers;
  std::vector<double> c(rbf_count);
  for (std::size_t k = 0; k < rbf_count; ++k) {
    c[k] = rbf_count == 1 ? 0.0 : 2.0 * static_cast<double>(k) / static_cast<double>(rbf_count - 1);
  }
  return c;
}

double EncoderConfig::sigma() const {
  if (rbf_sigma) return *rbf_sigma;
  return rbf_count > 1 ? 2.0 / static_cast<double>(rbf_count - 1) : 1.0;
}

void EncoderConfig::validate() const {
  if (layers < 1) throw ArgumentError("encoder.layers must be at least 1");
  if (hidden < 1) throw ArgumentError("encoder.hidden must be at least 1");
  if (rbf_count < 1) throw ArgumentError("encoder.rbf_count must be at least 1");
  if (!rbf_centers.empty() && rbf_centers.size() != rbf_count) {
    throw ArgumentError("encoder.rbf_centers must list rbf_count values");
  }
  if (!(sigma() > 0.0)) throw ArgumentError("encoder.rbf_sigma must be positive");
  if (attention == AttentionKind::kGat) {
    if (heads < 1 || hidden % heads != 0) {
      throw ArgumentError("encoder.hidden (" + std::to_string(hidden) +
                          ") must be a multiple of encoder.heads (" + std::to_string(heads) + ")");
    }
  }
  for (double rate : {node_dropout, edge_dropout}) {
    if (!(rate >= 0.0 && rate < 1.0)) throw ArgumentError("dropout rates must lie in [0, 1)");
  }
}

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor w(fan_in, fan_out);
  for (double& v : w.data()) v = uniform_open(rng, -bound, bound);
  return w;
}

void init_encoder_parameters(ParameterStore& params, const EncoderConfig& cfg,
                             std::size_t feature_dim, Rng& rng) {
  cfg.validate();
  const std::size_t h = cfg.hidden, c = cfg.coef_dim();
  params.add("enc.in.w", xavier_uniform(feature_dim, h, rng));
  params.add("enc.in.b", Tensor(1, h));
  params.add("enc.rbf.l1.w", xavier_uniform(cfg.rbf_count, h, rng));
  params.add("enc.rbf.l1.b", Tensor(1, h));
  params.add("enc.rbf.l2.w", xavier_uniform(h, c, rng));
  params.add("enc.rbf.l2.b", Tensor(1, c));
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    if (cfg.attention == AttentionKind::kGat) {
      params.add(layer_name(l, "att.w"), xavier_uniform(h, h, rng));
      params.add(layer_name(l, "att.dst"), row_vector(h, rng));
      params.add(layer_name(l, "att.src"), row_vector(h, rng));
    } else {
      params.add(layer_name(l, "gate.dst"), xavier_uniform(h, h, rng));
      params.add(layer_name(l, "gate.src"), xavier_uniform(h, h, rng));
      params.add(layer_name(l, "gate.b"), Tensor(1, h));
    }
    if (cfg.edge_vocab > 0) params.add(layer_name(l, "edge_emb"), xavier_uniform(cfg.edge_vocab, c, rng));
    params.add(layer_name(l, "msg.w"), xavier_uniform(h, h, rng));
    params.add(layer_name(l, "msg.b"), Tensor(1, h));
  }
}

EdgeIndex EdgeIndex::from_graph(const Graph& g) {
  EdgeIndex idx;
  idx.num_nodes = g.num_nodes();
  idx.rows.assign(g.edge_rows().begin(), g.edge_rows().end());
  idx.cols.assign(g.col_idx().begin(), g.col_idx().end());
  idx.feature_ids.assign(g.edge_feature_ids().begin(), g.edge_feature_ids().end());
  idx.inv_degree = Tensor(idx.rows.size(), 1);
  for (std::size_t e = 0; e < idx.rows.size(); ++e) {
    idx.inv_degree(e, 0) = 1.0 / static_cast<double>(g.degree(idx.rows[e]));
  }
  return idx;
}

Tensor rbf_features(const DistanceMap& distances, const EncoderConfig& cfg) {
  const std::vector<double> centers = cfg.centers();
  const double sigma = cfg.sigma();
  const double inv = 1.0 / (2.0 * sigma * sigma);
  Tensor out(distances.size(), centers.size());
  for (std::size_t e = 0; e < distances.size(); ++e) {
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double d = distances.values[e] - centers[k];
      out(e, k) = std::exp(-d * d * inv);
    }
  }
  return out;
}

Var rbf_lift(Tape& tape, const DistanceMap& distances, const EncoderConfig& cfg) {
  Var g = tape.constant(rbf_features(distances, cfg));
  return linear(tape, ad::relu(linear(tape, g, "enc.rbf.l1")), "enc.rbf.l2");
}

Var feature_lift(Tape& tape, Var features) { return linear(tape, features, "enc.in"); }

Var attention_gat(Tape& tape, Var nodes, const EdgeIndex& edges, const EncoderConfig& cfg,
                  std::size_t layer) {
  Var h = ad::matmul(nodes, tape.param(layer_name(layer, "att.w")));
  Var dst = ad::sum_blocks(ad::mul(h, tape.param(layer_name(layer, "att.dst"))), cfg.heads);
  Var src = ad::sum_blocks(ad::mul(h, tape.param(layer_name(layer, "att.src"))), cfg.heads);
  return ad::leaky_relu(ad::add(ad::gather_rows(dst, edges.rows), ad::gather_rows(src, edges.cols)),
                        0.2);
}

Var attention_gatedgcn(Tape& tape, Var nodes, const EdgeIndex& edges, std::size_t layer) {
  Var dst = ad::add(ad::matmul(nodes, tape.param(layer_name(layer, "gate.dst"))),
                    tape.param(layer_name(layer, "gate.b")));
  Var src = ad::matmul(nodes, tape.param(layer_name(layer, "gate.src")));
  return ad::sigmoid(ad::add(ad::gather_rows(dst, edges.rows), ad::gather_rows(src, edges.cols)));
}

EncoderOutput encoder_forward(Tape& tape, Var features, const DistanceMap& distances,
                              const EdgeIndex& edges, const EncoderConfig& cfg,
                              const ForwardContext& ctx) {
  if (distances.size() != edges.num_edges()) {
    throw ShapeError("encoder: " + std::to_string(distances.size()) + " distances for " +
                     std::to_string(edges.num_edges()) + " edges");
  }
  if (features.rows() != edges.num_nodes) {
    throw ShapeError("encoder: " + std::to_string(features.rows()) + " feature rows for " +
                     std::to_string(edges.num_nodes) + " nodes");
  }
  std::vector<std::uint32_t> edge_ids;
  if (cfg.edge_vocab > 0) {
    if (edges.feature_ids.size() != edges.num_edges()) {
      throw DataError("encoder configured with edge_vocab but the graph has no edge features");
    }
    edge_ids.reserve(edges.num_edges());
    for (std::int32_t id : edges.feature_ids) {
      if (id < 0 || static_cast<std::size_t>(id) >= cfg.edge_vocab) {
        throw RangeError("edge feature id " + std::to_string(id) + " outside vocabulary of " +
                         std::to_string(cfg.edge_vocab));
      }
      edge_ids.push_back(static_cast<std::uint32_t>(id));
    }
  }

  const bool gat = cfg.attention == AttentionKind::kGat;
  Var x = feature_lift(tape, features);
  Var p = rbf_lift(tape, distances, cfg);
  Var inv_degree = gat ? Var{} : tape.constant(edges.inv_degree);

  for (std::size_t l = 0; l < cfg.layers; ++l) {
    Var alpha = gat ? attention_gat(tape, x, edges, cfg, l) : attention_gatedgcn(tape, x, edges, l);
    if (cfg.edge_vocab > 0) {
      alpha = ad::add(alpha, ad::gather_rows(tape.param(layer_name(l, "edge_emb")), edge_ids));
    }
    Var coef = ad::add(alpha, p);
    coef = gat ? ad::segment_softmax(coef, edges.rows, edges.num_nodes) : ad::mul(coef, inv_degree);
    coef = maybe_dropout(tape, coef, cfg.edge_dropout, ctx);
    if (gat) coef = ad::repeat_cols(coef, cfg.hidden / cfg.heads);

    Var messages = ad::gather_rows(linear(tape, x, layer_name(l, "msg")), edges.cols);
    Var next = ad::segment_sum(ad::mul(messages, coef), edges.rows, edges.num_nodes);
    if (cfg.inter_layer_relu && l + 1 < cfg.layers) next = ad::relu(next);
    x = maybe_dropout(tape, next, cfg.node_dropout, ctx);
    p = ad::add(alpha, p);
  }
  return {x, p};
}

}  // namespace graphpae
