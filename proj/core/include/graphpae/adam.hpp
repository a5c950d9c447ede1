#pragma once

#include <cstdint>
#include <vector>

#include "graphpae/autodiff.hpp"

namespace graphpae {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
};

/// Adam with bias correction. Weight decay is decoupled: when positive,
/// `p <- p - lr * wd * p` is applied before the Adam delta.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const ParameterStore& params, AdamOptions options);

  /// One update of every parameter in `params` from its `grad`.
  void step(ParameterStore& params);

  const AdamOptions& options() const { return options_; }
  std::uint64_t step_count() const { return t_; }

  const std::vector<Tensor>& first_moments() const { return m_; }
  const std::vector<Tensor>& second_moments() const { return v_; }

  /// Restores moments and step count (checkpoint resume).
  void restore(std::uint64_t t, std::vector<Tensor> m, std::vector<Tensor> v);

 private:
  AdamOptions options_;
  std::uint64_t t_ = 0;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
};

}  // namespace graphpae
