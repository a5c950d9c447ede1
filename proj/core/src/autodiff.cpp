#include "graphpae/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graphpae/errors.hpp"

namespace graphpae {

// ---------------------------------------------------------------------------
// ParameterStore

ParameterStore::ParameterStore(const ParameterStore& other) { *this = other; }

ParameterStore& ParameterStore::operator=(const ParameterStore& other) {
  if (this == &other) return *this;
  params_.clear();
  index_.clear();
  for (const auto& p : other.params_) {
    params_.push_back(std::make_unique<Parameter>(*p));
    index_.emplace(p->name, params_.size() - 1);
  }
  return *this;
}

Parameter& ParameterStore::add(std::string name, Tensor init) {
  if (index_.count(name)) throw ArgumentError("duplicate parameter name '" + name + "'");
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->grad = Tensor(init.shape(), std::vector<double>(init.size(), 0.0));
  p->value = std::move(init);
  params_.push_back(std::move(p));
  index_.emplace(std::move(name), params_.size() - 1);
  return *params_.back();
}

Parameter* ParameterStore::find(std::string_view name) {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : params_[it->second].get();
}

const Parameter* ParameterStore::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : params_[it->second].get();
}

Parameter& ParameterStore::at(std::string_view name) {
  if (auto* p = find(name)) return *p;
  throw ArgumentError("unknown parameter '" + std::string(name) + "'");
}

const Parameter& ParameterStore::at(std::string_view name) const {
  if (const auto* p = find(name)) return *p;
  throw ArgumentError("unknown parameter '" + std::string(name) + "'");
}

std::size_t ParameterStore::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) {
    if (!p->grad.same_shape(p->value)) {
      p->grad = Tensor(p->value.shape(), std::vector<double>(p->value.size(), 0.0));
    } else {
      p->grad.fill(0.0);
    }
  }
}

// ---------------------------------------------------------------------------
// Tape

const Tensor& Var::value() const { return tape->value(*this); }

Tape::Tape(ParameterStore& params) : params_(&params) { nodes_.reserve(256); }

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::param(std::string_view name) {
  Parameter& p = params_->at(name);
  Node n;
  n.value = p.value;
  n.param = &p;
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::record(Tensor value, std::vector<std::uint32_t> inputs, Adjoint adjoint) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = std::any_of(inputs.begin(), inputs.end(),
                                [this](std::uint32_t i) { return nodes_[i].requires_grad; });
  n.inputs = std::move(inputs);
  if (n.requires_grad) n.adjoint = std::move(adjoint);
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Tensor* Tape::grad_buffer(std::uint32_t id) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return nullptr;
  if (n.grad.size() != n.value.size() || !n.grad.same_shape(n.value)) {
    n.grad = Tensor(n.value.shape(), std::vector<double>(n.value.size(), 0.0));
  }
  return &n.grad;
}

Tensor Tape::grad(Var v) const {
  const Node& n = nodes_[v.id];
  if (n.grad.same_shape(n.value) && n.grad.size() == n.value.size()) return n.grad;
  return Tensor(n.value.shape(), std::vector<double>(n.value.size(), 0.0));
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw ContractError("backward: loss was recorded on another tape");
  if (nodes_[loss.id].value.size() != 1) {
    throw ContractError("backward: loss must be scalar, got shape " +
                        nodes_[loss.id].value.shape_string());
  }
  params_->zero_grad();
  for (auto& n : nodes_) n.grad = Tensor();
  if (!nodes_[loss.id].requires_grad) return;
  grad_buffer(loss.id)->fill(1.0);

  for (std::size_t k = loss.id + 1; k-- > 0;) {
    Node& n = nodes_[k];
    if (!n.requires_grad || n.grad.size() == 0) continue;
    if (n.param) {
      auto& dst = n.param->grad.data();
      const auto& src = n.grad.data();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    } else if (n.adjoint) {
      n.adjoint(*this, static_cast<std::uint32_t>(k));
    }
  }
}

// ---------------------------------------------------------------------------
// Primitives

namespace ad {
namespace {

void require_matrix(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected rank-2 operand, got " + t.shape_string());
  }
}

void require_same_tape(Var a, Var b) {
  if (a.tape != b.tape) throw ContractError("operands recorded on different tapes");
}

struct Broadcast {
  std::size_t rows, cols;
  std::size_t ar, ac, br, bc;
  std::size_t a_index(std::size_t r, std::size_t c) const {
    return (ar == 1 ? 0 : r) * ac + (ac == 1 ? 0 : c);
  }
  std::size_t b_index(std::size_t r, std::size_t c) const {
    return (br == 1 ? 0 : r) * bc + (bc == 1 ? 0 : c);
  }
};

Broadcast broadcast_shapes(const Tensor& a, const Tensor& b, const char* op) {
  require_matrix(a, op);
  require_matrix(b, op);
  auto dim = [&](std::size_t x, std::size_t y) {
    if (x == y || y == 1) return x;
    if (x == 1) return y;
    throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " +
                     b.shape_string());
  };
  Broadcast bc{};
  bc.ar = a.rows();
  bc.ac = a.cols();
  bc.br = b.rows();
  bc.bc = b.cols();
  bc.rows = dim(bc.ar, bc.br);
  bc.cols = dim(bc.ac, bc.bc);
  return bc;
}

template <typename Fwd, typename DA, typename DB>
Var binary(Var a, Var b, const char* op, Fwd fwd, DA da, DB db) {
  require_same_tape(a, b);
  Tape& tape = *a.tape;
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  const Broadcast bc = broadcast_shapes(av, bv, op);
  Tensor out(bc.rows, bc.cols);
  for (std::size_t r = 0; r < bc.rows; ++r)
    for (std::size_t c = 0; c < bc.cols; ++c)
      out(r, c) = fwd(av[bc.a_index(r, c)], bv[bc.b_index(r, c)]);
  const std::uint32_t ia = a.id, ib = b.id;
  return tape.record(std::move(out), {ia, ib}, [bc, ia, ib, da, db](Tape& t, std::uint32_t self) {
    const Tensor& g = t.upstream(self);
    const Tensor& x = t.value(Var{&t, ia});
    const Tensor& y = t.value(Var{&t, ib});
    if (Tensor* ga = t.grad_buffer(ia)) {
      for (std::size_t r = 0; r < bc.rows; ++r)
        for (std::size_t c = 0; c < bc.cols; ++c) {
          const std::size_t i = bc.a_index(r, c), j = bc.b_index(r, c);
          (*ga)[i] += da(x[i], y[j], g(r, c));
        }
    }
    if (Tensor* gb = t.grad_buffer(ib)) {
      for (std::size_t r = 0; r < bc.rows; ++r)
        for (std::size_t c = 0; c < bc.cols; ++c) {
          const std::size_t i = bc.a_index(r, c), j = bc.b_index(r, c);
          (*gb)[j] += db(x[i], y[j], g(r, c));
        }
    }
  });
}

// Elementwise op whose derivative is expressed through input x and output y.
template <typename Fwd, typename Deriv>
Var unary(Var a, Fwd fwd, Deriv deriv) {
  Tape& tape = *a.tape;
  const Tensor& av = a.value();
  Tensor out(av.shape(), std::vector<double>(av.size()));
  for (std::size_t i = 0; i < av.size(); ++i) out[i] = fwd(av[i]);
  const std::uint32_t ia = a.id;
  return tape.record(std::move(out), {ia}, [ia, deriv](Tape& t, std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    const Tensor& x = t.value(Var{&t, ia});
    const Tensor& y = t.value(Var{&t, self});
    for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * deriv(x[i], y[i]);
  });
}

// Rows of `segment` bucketed by segment id; within a bucket rows keep their
// original order.
struct Buckets {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> rows;
};

Buckets bucket_rows(std::span<const std::uint32_t> segment, std::size_t num_segments,
                    const char* op) {
  Buckets b;
  b.offsets.assign(num_segments + 1, 0);
  for (std::uint32_t s : segment) {
    if (s >= num_segments) {
      throw RangeError(std::string(op) + ": segment id " + std::to_string(s) +
                       " >= num_segments " + std::to_string(num_segments));
    }
    ++b.offsets[s + 1];
  }
  for (std::size_t s = 0; s < num_segments; ++s) b.offsets[s + 1] += b.offsets[s];
  b.rows.resize(segment.size());
  std::vector<std::size_t> cursor(b.offsets.begin(), b.offsets.end() - 1);
  for (std::size_t k = 0; k < segment.size(); ++k)
    b.rows[cursor[segment[k]]++] = static_cast<std::uint32_t>(k);
  return b;
}

}  // namespace

Var add(Var a, Var b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; },
      [](double, double, double g) { return g; }, [](double, double, double g) { return g; });
}

Var sub(Var a, Var b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; },
      [](double, double, double g) { return g; }, [](double, double, double g) { return -g; });
}

Var mul(Var a, Var b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; },
      [](double, double y, double g) { return g * y; },
      [](double x, double, double g) { return g * x; });
}

Var div(Var a, Var b) {
  return binary(
      a, b, "div", [](double x, double y) { return x / y; },
      [](double, double y, double g) { return g / y; },
      [](double x, double y, double g) { return -g * x / (y * y); });
}

Var scale(Var a, double s) {
  return unary(
      a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(
      a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

Var pow_scalar(Var a, double p) {
  return unary(
      a, [p](double x) { return std::pow(x, p); },
      [p](double x, double) { return p * std::pow(x, p - 1.0); });
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_matrix(av, "matmul");
  require_matrix(bv, "matmul");
  if (av.cols() != bv.rows()) {
    throw ShapeError("matmul: incompatible shapes " + av.shape_string() + " and " +
                     bv.shape_string());
  }
  const std::size_t n = av.rows(), k = av.cols(), m = bv.cols();
  Tensor out(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    double* o = &out(i, 0);
    for (std::size_t p = 0; p < k; ++p) {
      const double x = av(i, p);
      const double* brow = &bv(p, 0);
      for (std::size_t j = 0; j < m; ++j) o[j] += x * brow[j];
    }
  }
  const std::uint32_t ia = a.id, ib = b.id;
  return a.tape->record(std::move(out), {ia, ib}, [ia, ib, n, k, m](Tape& t, std::uint32_t self) {
    const Tensor& g = t.upstream(self);
    const Tensor& x = t.value(Var{&t, ia});
    const Tensor& y = t.value(Var{&t, ib});
    if (Tensor* ga = t.grad_buffer(ia)) {
      // dA = G B^T
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double acc = 0.0;
          for (std::size_t j = 0; j < m; ++j) acc += g(i, j) * y(p, j);
          (*ga)(i, p) += acc;
        }
    }
    if (Tensor* gb = t.grad_buffer(ib)) {
      // dB = A^T G
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double xv = x(i, p);
          if (xv == 0.0) continue;
          double* dst = &(*gb)(p, 0);
          const double* grow = &g(i, 0);
          for (std::size_t j = 0; j < m; ++j) dst[j] += xv * grow[j];
        }
    }
  });
}

Var concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw ShapeError("concat_cols: no operands");
  Tape& tape = *parts[0].tape;
  const std::size_t n = parts[0].value().rows();
  std::vector<std::size_t> widths;
  std::vector<std::uint32_t> ids;
  std::size_t total = 0;
  for (Var p : parts) {
    require_same_tape(parts[0], p);
    const Tensor& v = p.value();
    require_matrix(v, "concat_cols");
    if (v.rows() != n) {
      throw ShapeError("concat_cols: row mismatch " + parts[0].value().shape_string() + " and " +
                       v.shape_string());
    }
    widths.push_back(v.cols());
    ids.push_back(p.id);
    total += v.cols();
  }
  Tensor out(n, total);
  std::size_t offset = 0;
  for (std::size_t q = 0; q < parts.size(); ++q) {
    const Tensor& v = parts[q].value();
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < widths[q]; ++c) out(r, offset + c) = v(r, c);
    offset += widths[q];
  }
  return tape.record(std::move(out), ids, [ids, widths, n](Tape& t, std::uint32_t self) {
    const Tensor& g = t.upstream(self);
    std::size_t off = 0;
    for (std::size_t q = 0; q < ids.size(); ++q) {
      if (Tensor* gq = t.grad_buffer(ids[q])) {
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < widths[q]; ++c) (*gq)(r, c) += g(r, off + c);
      }
      off += widths[q];
    }
  });
}

Var gather_rows(Var a, std::span<const std::uint32_t> index) {
  const Tensor& av = a.value();
  require_matrix(av, "gather_rows");
  const std::size_t c = av.cols();
  Tensor out(index.size(), c);
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= av.rows()) {
      throw RangeError("gather_rows: row " + std::to_string(index[k]) + " out of range for " +
                       av.shape_string());
    }
    std::copy_n(&av(index[k], 0), c, &out(k, 0));
  }
  std::vector<std::uint32_t> idx(index.begin(), index.end());
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, idx = std::move(idx), c](Tape& t,
                                                                           std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < c; ++j) (*ga)(idx[k], j) += g(k, j);
  });
}

Var segment_sum(Var a, std::span<const std::uint32_t> segment, std::size_t num_segments) {
  const Tensor& av = a.value();
  require_matrix(av, "segment_sum");
  if (segment.size() != av.rows()) {
    throw ShapeError("segment_sum: " + std::to_string(segment.size()) +
                     " segment ids for operand " + av.shape_string());
  }
  const std::size_t c = av.cols();
  const Buckets b = bucket_rows(segment, num_segments, "segment_sum");
  Tensor out(num_segments, c);
  std::vector<double> scratch;
  for (std::size_t s = 0; s < num_segments; ++s) {
    const std::size_t lo = b.offsets[s], hi = b.offsets[s + 1];
    if (lo == hi) continue;
    for (std::size_t j = 0; j < c; ++j) {
      scratch.clear();
      for (std::size_t q = lo; q < hi; ++q) scratch.push_back(av(b.rows[q], j));
      out(s, j) = order_invariant_sum(scratch);
    }
  }
  std::vector<std::uint32_t> seg(segment.begin(), segment.end());
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, seg = std::move(seg), c](Tape& t,
                                                                           std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    for (std::size_t k = 0; k < seg.size(); ++k)
      for (std::size_t j = 0; j < c; ++j) (*ga)(k, j) += g(seg[k], j);
  });
}

Var segment_softmax(Var a, std::span<const std::uint32_t> segment, std::size_t num_segments) {
  const Tensor& av = a.value();
  require_matrix(av, "segment_softmax");
  if (segment.size() != av.rows()) {
    throw ShapeError("segment_softmax: " + std::to_string(segment.size()) +
                     " segment ids for operand " + av.shape_string());
  }
  const std::size_t c = av.cols();
  Buckets b = bucket_rows(segment, num_segments, "segment_softmax");
  Tensor out(av.rows(), c);
  std::vector<double> scratch;
  for (std::size_t s = 0; s < num_segments; ++s) {
    const std::size_t lo = b.offsets[s], hi = b.offsets[s + 1];
    if (lo == hi) continue;
    for (std::size_t j = 0; j < c; ++j) {
      double mx = -std::numeric_limits<double>::infinity();
      for (std::size_t q = lo; q < hi; ++q) mx = std::max(mx, av(b.rows[q], j));
      scratch.clear();
      for (std::size_t q = lo; q < hi; ++q) {
        const double e = std::exp(av(b.rows[q], j) - mx);
        out(b.rows[q], j) = e;
        scratch.push_back(e);
      }
      const double denom = order_invariant_sum(scratch);
      for (std::size_t q = lo; q < hi; ++q) out(b.rows[q], j) /= denom;
    }
  }
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, b = std::move(b), c](Tape& t,
                                                                       std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    const Tensor& y = t.value(Var{&t, self});
    const std::size_t segments = b.offsets.size() - 1;
    for (std::size_t s = 0; s < segments; ++s) {
      const std::size_t lo = b.offsets[s], hi = b.offsets[s + 1];
      for (std::size_t j = 0; j < c; ++j) {
        double dot = 0.0;
        for (std::size_t q = lo; q < hi; ++q) dot += y(b.rows[q], j) * g(b.rows[q], j);
        for (std::size_t q = lo; q < hi; ++q) {
          const std::uint32_t r = b.rows[q];
          (*ga)(r, j) += y(r, j) * (g(r, j) - dot);
        }
      }
    }
  });
}

Var replace_rows(Var a, std::span<const std::uint32_t> rows, Var token) {
  require_same_tape(a, token);
  const Tensor& av = a.value();
  const Tensor& tv = token.value();
  require_matrix(av, "replace_rows");
  require_matrix(tv, "replace_rows");
  if (tv.rows() != 1 || tv.cols() != av.cols()) {
    throw ShapeError("replace_rows: token " + tv.shape_string() + " does not fit rows of " +
                     av.shape_string());
  }
  Tensor out = av;
  std::vector<char> replaced(av.rows(), 0);
  for (std::uint32_t r : rows) {
    if (r >= av.rows()) throw RangeError("replace_rows: row " + std::to_string(r) + " out of range");
    replaced[r] = 1;
    std::copy_n(tv.data().data(), tv.cols(), &out(r, 0));
  }
  const std::uint32_t ia = a.id, it = token.id;
  const std::size_t c = av.cols();
  return a.tape->record(std::move(out), {ia, it},
                        [ia, it, c, replaced = std::move(replaced)](Tape& t, std::uint32_t self) {
                          const Tensor& g = t.upstream(self);
                          Tensor* ga = t.grad_buffer(ia);
                          Tensor* gt = t.grad_buffer(it);
                          for (std::size_t r = 0; r < replaced.size(); ++r) {
                            for (std::size_t j = 0; j < c; ++j) {
                              if (replaced[r]) {
                                if (gt) (*gt)(0, j) += g(r, j);
                              } else if (ga) {
                                (*ga)(r, j) += g(r, j);
                              }
                            }
                          }
                        });
}

Var repeat_cols(Var a, std::size_t k) {
  const Tensor& av = a.value();
  require_matrix(av, "repeat_cols");
  if (k == 0) throw ShapeError("repeat_cols: k must be positive");
  const std::size_t n = av.rows(), c = av.cols();
  Tensor out(n, c * k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t h = 0; h < c; ++h)
      for (std::size_t q = 0; q < k; ++q) out(r, h * k + q) = av(r, h);
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, n, c, k](Tape& t, std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t h = 0; h < c; ++h)
        for (std::size_t q = 0; q < k; ++q) (*ga)(r, h) += g(r, h * k + q);
  });
}

Var sum_blocks(Var a, std::size_t blocks) {
  const Tensor& av = a.value();
  require_matrix(av, "sum_blocks");
  if (blocks == 0 || av.cols() % blocks != 0) {
    throw ShapeError("sum_blocks: " + std::to_string(blocks) + " blocks do not divide " +
                     av.shape_string());
  }
  const std::size_t n = av.rows(), k = av.cols() / blocks;
  Tensor out(n, blocks);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t h = 0; h < blocks; ++h)
      for (std::size_t q = 0; q < k; ++q) out(r, h) += av(r, h * k + q);
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, n, blocks, k](Tape& t, std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t h = 0; h < blocks; ++h)
        for (std::size_t q = 0; q < k; ++q) (*ga)(r, h * k + q) += g(r, h);
  });
}

Var leaky_relu(Var a, double slope) {
  return unary(
      a, [slope](double x) { return x > 0.0 ? x : slope * x; },
      [slope](double x, double) { return x > 0.0 ? 1.0 : slope; });
}

Var relu(Var a) {
  return unary(
      a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var sigmoid(Var a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var softplus(Var a) {
  return unary(
      a, [](double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); },
      [](double x, double) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      });
}

Var exp(Var a) {
  return unary(
      a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Var sqrt(Var a) {
  return unary(
      a, [](double x) { return std::sqrt(x); }, [](double, double y) { return 0.5 / y; });
}

Var square(Var a) {
  return unary(
      a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var abs(Var a) {
  return unary(
      a, [](double x) { return std::abs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var huber(Var a) {
  return unary(
      a,
      [](double d) {
        const double m = std::abs(d);
        return m < 1.0 ? 0.5 * d * d : m - 0.5;
      },
      [](double d, double) {
        if (std::abs(d) < 1.0) return d;
        return d > 0.0 ? 1.0 : -1.0;
      });
}

Var clamp_min(Var a, double lo) {
  return unary(
      a, [lo](double x) { return x > lo ? x : lo; },
      [lo](double x, double) { return x > lo ? 1.0 : 0.0; });
}

Var row_l2_norm(Var a) {
  const Tensor& av = a.value();
  require_matrix(av, "row_l2_norm");
  const std::size_t n = av.rows(), c = av.cols();
  Tensor out(n, 1);
  for (std::size_t r = 0; r < n; ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += av(r, j) * av(r, j);
    out(r, 0) = std::sqrt(acc);
  }
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, n, c](Tape& t, std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    const Tensor& x = t.value(Var{&t, ia});
    const Tensor& y = t.value(Var{&t, self});
    for (std::size_t r = 0; r < n; ++r) {
      if (y(r, 0) == 0.0) continue;  // subgradient 0 at the origin
      const double s = g(r, 0) / y(r, 0);
      for (std::size_t j = 0; j < c; ++j) (*ga)(r, j) += s * x(r, j);
    }
  });
}

Var row_sum(Var a) {
  const Tensor& av = a.value();
  require_matrix(av, "row_sum");
  const std::size_t n = av.rows(), c = av.cols();
  Tensor out(n, 1);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < c; ++j) out(r, 0) += av(r, j);
  const std::uint32_t ia = a.id;
  return a.tape->record(std::move(out), {ia}, [ia, n, c](Tape& t, std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const Tensor& g = t.upstream(self);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t j = 0; j < c; ++j) (*ga)(r, j) += g(r, 0);
  });
}

Var sum(Var a) {
  const Tensor& av = a.value();
  std::vector<double> scratch(av.data());
  const double total = order_invariant_sum(scratch);
  const std::uint32_t ia = a.id;
  return a.tape->record(Tensor::scalar(total), {ia}, [ia](Tape& t, std::uint32_t self) {
    Tensor* ga = t.grad_buffer(ia);
    if (!ga) return;
    const double g = t.upstream(self)[0];
    for (double& v : ga->data()) v += g;
  });
}

Var mean(Var a) {
  const std::size_t n = a.value().size();
  if (n == 0) throw ShapeError("mean: empty operand");
  return scale(sum(a), 1.0 / static_cast<double>(n));
}

}  // namespace ad

double finite_diff_check(ParameterStore& params, const std::function<Var(Tape&)>& fn, double h,
                         double floor) {
  if (h <= 0.0) throw ArgumentError("finite_diff_check: step must be positive");
  std::vector<Tensor> analytic;
  {
    Tape tape(params);
    Var loss = fn(tape);
    tape.backward(loss);
    for (const auto& p : params) analytic.push_back(p->grad);
  }
  auto evaluate = [&]() {
    Tape tape(params);
    return fn(tape).value().item();
  };
  double worst = 0.0;
  for (std::size_t q = 0; q < params.size(); ++q) {
    Parameter& p = params[q];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double saved = p.value[i];
      p.value[i] = saved + h;
      const double up = evaluate();
      p.value[i] = saved - h;
      const double down = evaluate();
      p.value[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double exact = analytic[q][i];
      const double denom = std::max({std::abs(exact), std::abs(numeric), floor});
      worst = std::max(worst, std::abs(exact - numeric) / denom);
    }
  }
  return worst;
}

}  // namespace graphpae
