#include "graphpae/adam.hpp"

#include <cmath>

#include "graphpae/errors.hpp"

namespace graphpae {

AdamState::AdamState(const ParameterStore& params, AdamOptions options) : options_(options) {
  for (const auto& p : params) {
    m_.emplace_back(p->value.shape(), std::vector<double>(p->value.size(), 0.0));
    v_.emplace_back(p->value.shape(), std::vector<double>(p->value.size(), 0.0));
  }
}

void AdamState::step(ParameterStore& params) {
  if (params.size() != m_.size()) {
    throw ContractError("AdamState was built for " + std::to_string(m_.size()) +
                        " parameters, store has " + std::to_string(params.size()));
  }
  ++t_;
  const auto& o = options_;
  const double c1 = 1.0 - std::pow(o.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(o.beta2, static_cast<double>(t_));
  for (std::size_t q = 0; q < params.size(); ++q) {
    Parameter& p = params[q];
    if (!p.value.same_shape(m_[q]) || !p.grad.same_shape(p.value)) {
      throw ShapeError("adam: shape mismatch for parameter '" + p.name + "'");
    }
    auto& w = p.value.data();
    const auto& g = p.grad.data();
    auto& m = m_[q].data();
    auto& v = v_[q].data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (o.weight_decay > 0.0) w[i] -= o.lr * o.weight_decay * w[i];
      m[i] = o.beta1 * m[i] + (1.0 - o.beta1) * g[i];
      v[i] = o.beta2 * v[i] + (1.0 - o.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

void AdamState::restore(std::uint64_t t, std::vector<Tensor> m, std::vector<Tensor> v) {
  if (m.size() != m_.size() || v.size() != v_.size()) {
    throw FormatError("adam: restored moment count does not match parameter count");
  }
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (!m[q].same_shape(m_[q]) || !v[q].same_shape(v_[q])) {
      throw FormatError("adam: restored moment shape mismatch at index " + std::to_string(q));
    }
  }
  t_ = t;
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace graphpae
