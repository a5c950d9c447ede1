#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphpae/tensor.hpp"

namespace graphpae {

/// A trainable tensor with its accumulated gradient.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
};

/// Ordered registry of named parameters. Iteration order is insertion order,
/// which fixes the order of every per-parameter loop (Adam, checkpoints).
class ParameterStore {
 public:
  ParameterStore() = default;
  ParameterStore(const ParameterStore& other);
  ParameterStore& operator=(const ParameterStore& other);
  ParameterStore(ParameterStore&&) noexcept = default;
  ParameterStore& operator=(ParameterStore&&) noexcept = default;

  Parameter& add(std::string name, Tensor init);
  Parameter& at(std::string_view name);
  const Parameter& at(std::string_view name) const;
  Parameter* find(std::string_view name);
  const Parameter* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  std::size_t size() const { return params_.size(); }
  std::size_t scalar_count() const;

  void zero_grad();

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

class Tape;

/// Handle to a value recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::uint32_t id = 0;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

/// Define-by-run record of a computation. Records are appended in execution
/// order, so the record list is already a topological order; backward walks it
/// once in reverse. A tape is used by one thread and discarded after backward.
class Tape {
 public:
  explicit Tape(ParameterStore& params);
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf that never receives a gradient.
  Var constant(Tensor value);
  /// Leaf bound to a registered parameter; backward accumulates into its grad.
  Var param(std::string_view name);

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  /// Gradient of the last backward() target w.r.t. v (zeros if unreachable).
  Tensor grad(Var v) const;

  /// Zeroes every registered parameter gradient, then backpropagates from the
  /// scalar `loss`. Parameters off the path keep a zero gradient.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  ParameterStore& params() { return *params_; }

  // Interface for primitive implementations.
  using Adjoint = std::function<void(Tape&, std::uint32_t self)>;
  Var record(Tensor value, std::vector<std::uint32_t> inputs, Adjoint adjoint);
  const Tensor& upstream(std::uint32_t id) const { return nodes_[id].grad; }
  /// Mutable gradient buffer of input `id`, allocated on first use. Returns
  /// nullptr when the input does not require a gradient.
  Tensor* grad_buffer(std::uint32_t id);

 private:
  struct Node {
    Tensor value;
    Tensor grad;
    std::vector<std::uint32_t> inputs;
    Adjoint adjoint;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  ParameterStore* params_;
  std::vector<Node> nodes_;
};

/// Differentiable primitives. Binary elementwise ops broadcast rank-2 operands
/// numpy-style: each dimension must match or be 1 on one side.
namespace ad {

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var div(Var a, Var b);

Var scale(Var a, double s);
Var add_scalar(Var a, double s);
/// Elementwise a^p; requires a >= 0 when p is not an integer.
Var pow_scalar(Var a, double p);

Var matmul(Var a, Var b);
/// Concatenation along the last axis.
Var concat_cols(std::span<const Var> parts);
/// out[k] = a[index[k]].
Var gather_rows(Var a, std::span<const std::uint32_t> index);
/// out[s] = sum of rows k with segment[k] == s.
Var segment_sum(Var a, std::span<const std::uint32_t> segment, std::size_t num_segments);
/// Per column, softmax over the rows that share a segment id.
Var segment_softmax(Var a, std::span<const std::uint32_t> segment, std::size_t num_segments);
/// Rows listed in `rows` replaced by the single-row `token`.
Var replace_rows(Var a, std::span<const std::uint32_t> rows, Var token);
/// [n, c] -> [n, c*k]: column h is repeated into columns h*k .. h*k+k-1.
Var repeat_cols(Var a, std::size_t k);
/// [n, b*k] -> [n, b]: sums each contiguous block of k columns.
Var sum_blocks(Var a, std::size_t blocks);

Var leaky_relu(Var a, double slope = 0.2);
Var relu(Var a);
Var sigmoid(Var a);
Var softplus(Var a);
Var exp(Var a);
Var sqrt(Var a);
Var square(Var a);
Var abs(Var a);
/// Elementwise Huber with unit threshold: d^2/2 if |d| < 1, else |d| - 1/2.
Var huber(Var a);
/// max(a, lo) with gradient passed only where a > lo.
Var clamp_min(Var a, double lo);

/// [n, c] -> [n, 1]: Euclidean norm of each row.
Var row_l2_norm(Var a);
/// [n, c] -> [n, 1]: sum over the last axis.
Var row_sum(Var a);
/// Sum of all elements as a 1x1 tensor.
Var sum(Var a);
Var mean(Var a);

}  // namespace ad

/// Central-difference check of tape gradients. `fn` must build a scalar loss
/// on the supplied tape from the parameters in `params` and be deterministic.
/// Returns max over all parameter entries of |g_tape - g_fd| / max(|g_tape|,
/// |g_fd|, floor). Non-differentiable points (|x| at 0, relu at 0) are not
/// valid evaluation points.
double finite_diff_check(ParameterStore& params, const std::function<Var(Tape&)>& fn,
                         double h = 1e-5, double floor = 1e-6);

}  // namespace graphpae
