#include "graphpae/objectives.hpp"

#include <string>

#include "graphpae/errors.hpp"
#include "graphpae/log.hpp"

namespace graphpae {
namespace {

constexpr double kCosineFloor = 1e-12;

Var linear(Tape& tape, Var x, const std::string& prefix) {
  return ad::add(ad::matmul(x, tape.param(prefix + ".w")), tape.param(prefix + ".b"));
}

}  // namespace

void init_decoder_parameters(ParameterStore& params, std::size_t hidden, std::size_t coef_dim,
                             std::size_t feature_dim, Rng& rng) {
  params.add("dec_x.l1.w", xavier_uniform(hidden, hidden, rng));
  params.add("dec_x.l1.b", Tensor(1, hidden));
  params.add("dec_x.l2.w", xavier_uniform(hidden, feature_dim, rng));
  params.add("dec_x.l2.b", Tensor(1, feature_dim));
  params.add("dec_p.l1.w", xavier_uniform(coef_dim, hidden, rng));
  params.add("dec_p.l1.b", Tensor(1, hidden));
  params.add("dec_p.l2.w", xavier_uniform(hidden, 1, rng));
  params.add("dec_p.l2.b", Tensor(1, 1));
}

Var decode_features(Tape& tape, Var nodes) {
  return linear(tape, ad::relu(linear(tape, nodes, "dec_x.l1")), "dec_x.l2");
}

Var decode_positions(Tape& tape, Var positions, std::span<const std::uint32_t> edge_ids) {
  Var selected = ad::gather_rows(positions, edge_ids);
  return ad::softplus(linear(tape, ad::relu(linear(tape, selected, "dec_p.l1")), "dec_p.l2"));
}

Var sce_loss(Tape& tape, Var target, Var recon, std::span<const std::uint32_t> masked,
             double gamma) {
  if (!(gamma >= 1.0)) throw ArgumentError("sce gamma must be >= 1");
  if (!target.value().same_shape(recon.value())) {
    throw ShapeError("sce_loss: target " + target.value().shape_string() + " vs reconstruction " +
                     recon.value().shape_string());
  }
  if (masked.empty()) return tape.constant(Tensor::scalar(0.0));
  Var x = ad::gather_rows(target, masked);
  Var y = ad::gather_rows(recon, masked);
  Var nx = ad::row_l2_norm(x);
  Var ny = ad::row_l2_norm(y);
  for (std::size_t r = 0; r < masked.size(); ++r) {
    if (nx.value()(r, 0) * ny.value()(r, 0) < kCosineFloor) {
      warn("sce_loss: zero-norm row for node " + std::to_string(masked[r]) + "; cosine taken as 0");
      break;
    }
  }
  Var cosine = ad::div(ad::row_sum(ad::mul(x, y)), ad::clamp_min(ad::mul(nx, ny), kCosineFloor));
  Var gap = ad::clamp_min(ad::add_scalar(ad::scale(cosine, -1.0), 1.0), 0.0);
  Var term = gamma == 1.0 ? gap : ad::pow_scalar(gap, gamma);
  return ad::mean(term);
}

std::vector<std::uint32_t> position_loss_edges(const EdgeIndex& edges, const CorruptionPlan& plan) {
  if (plan.membership.size() != edges.num_nodes) {
    throw ShapeError("position_loss_edges: plan covers " + std::to_string(plan.membership.size()) +
                     " nodes, graph has " + std::to_string(edges.num_nodes));
  }
  std::vector<std::uint32_t> out;
  for (std::size_t e = 0; e < edges.num_edges(); ++e) {
    if (plan.is_masked(edges.rows[e]) && edges.rows[e] != edges.cols[e]) {
      out.push_back(static_cast<std::uint32_t>(e));
    }
  }
  return out;
}

Var huber_pos_loss(Tape& tape, Var predicted, std::span<const double> target) {
  if (predicted.rows() != target.size() || predicted.cols() != 1) {
    throw ShapeError("huber_pos_loss: predictions " + predicted.value().shape_string() + " for " +
                     std::to_string(target.size()) + " targets");
  }
  if (target.empty()) {
    warn("huber_pos_loss: no edges incident to masked nodes; position loss is 0");
    return tape.constant(Tensor::scalar(0.0));
  }
  Var t = tape.constant(Tensor::column(target));
  return ad::mean(ad::huber(ad::sub(predicted, t)));
}

Var total_loss(Var feature_loss, Var position_loss, double alpha) {
  if (!(alpha >= 0.0)) throw ArgumentError("loss alpha must be non-negative");
  return ad::add(feature_loss, ad::scale(position_loss, alpha));
}

}  // namespace graphpae
