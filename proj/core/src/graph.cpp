#include "graphpae/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "graphpae/errors.hpp"

namespace graphpae {

void Split::validate(std::size_t count) const {
  std::vector<char> seen(count, 0);
  auto check = [&](const std::vector<std::uint32_t>& ids, const char* name) {
    for (std::uint32_t id : ids) {
      if (id >= count) {
        throw RangeError(std::string("split '") + name + "': index " + std::to_string(id) +
                         " >= " + std::to_string(count));
      }
      if (seen[id]) {
        throw DataError(std::string("split '") + name + "': index " + std::to_string(id) +
                        " appears in more than one set");
      }
      seen[id] = 1;
    }
  };
  check(train, "train");
  check(valid, "valid");
  check(test, "test");
}

namespace {

void validate_features(const Tensor& features, std::size_t num_nodes) {
  if (features.rank() != 2 || features.rows() != num_nodes) {
    throw DataError("feature matrix " + features.shape_string() + " does not have " +
                    std::to_string(num_nodes) + " rows");
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw DataError("non-finite feature at node " + std::to_string(i / features.cols()) +
                      ", column " + std::to_string(i % features.cols()));
    }
  }
}

}  // namespace

Graph Graph::from_edges(std::size_t num_nodes, std::span<const EdgeInput> edges, Tensor features,
                        GraphBuildOptions options) {
  validate_features(features, num_nodes);
  struct Pair {
    std::uint32_t lo, hi;
    std::size_t order;
    std::int32_t fid;
  };
  std::vector<Pair> pairs;
  pairs.reserve(edges.size());
  bool any_feature = false;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto& e = edges[k];
    if (e.src >= num_nodes || e.dst >= num_nodes) {
      throw RangeError("edge " + std::to_string(k) + " (" + std::to_string(e.src) + ", " +
                       std::to_string(e.dst) + ") references a node >= N=" +
                       std::to_string(num_nodes));
    }
    if (e.src == e.dst && !options.keep_self_loops) continue;
    any_feature = any_feature || e.feature_id.has_value();
    pairs.push_back({std::min(e.src, e.dst), std::max(e.src, e.dst), k, e.feature_id.value_or(0)});
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
  });
  std::vector<Pair> unique;
  unique.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (!unique.empty() && unique.back().lo == p.lo && unique.back().hi == p.hi) continue;
    unique.push_back(p);
  }

  struct Directed {
    std::uint32_t row, col;
    std::int32_t fid;
  };
  std::vector<Directed> directed;
  directed.reserve(unique.size() * 2);
  for (const auto& p : unique) {
    directed.push_back({p.lo, p.hi, p.fid});
    if (p.lo != p.hi) directed.push_back({p.hi, p.lo, p.fid});
  }
  std::sort(directed.begin(), directed.end(), [](const Directed& a, const Directed& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  Graph g;
  g.num_nodes_ = num_nodes;
  g.row_ptr_.assign(num_nodes + 1, 0);
  g.col_idx_.reserve(directed.size());
  for (const auto& d : directed) {
    ++g.row_ptr_[d.row + 1];
    g.col_idx_.push_back(d.col);
    if (any_feature) g.edge_feature_ids_.push_back(d.fid);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.row_ptr_[i + 1] += g.row_ptr_[i];
  g.features_ = std::move(features);
  g.duplicates_ = pairs.size() - unique.size();
  g.finalize();
  return g;
}

Graph Graph::from_csr(std::size_t num_nodes, std::vector<std::uint64_t> row_ptr,
                      std::vector<std::uint32_t> col_idx, Tensor features,
                      std::vector<std::int32_t> edge_feature_ids) {
  validate_features(features, num_nodes);
  if (row_ptr.size() != num_nodes + 1 || row_ptr.front() != 0 || row_ptr.back() != col_idx.size()) {
    throw DataError("CSR row pointer array inconsistent with N=" + std::to_string(num_nodes) +
                    " and E=" + std::to_string(col_idx.size()));
  }
  for (std::size_t i = 0; i < num_nodes; ++i) {
    if (row_ptr[i + 1] < row_ptr[i]) throw DataError("CSR row pointers not monotone");
    for (std::uint64_t e = row_ptr[i]; e < row_ptr[i + 1]; ++e) {
      if (col_idx[e] >= num_nodes) throw RangeError("CSR column index out of range");
      if (e > row_ptr[i] && col_idx[e] <= col_idx[e - 1]) {
        throw DataError("CSR column indices not strictly increasing in row " + std::to_string(i));
      }
    }
  }
  if (!edge_feature_ids.empty() && edge_feature_ids.size() != col_idx.size()) {
    throw DataError("edge feature ids do not match edge count");
  }
  Graph g;
  g.num_nodes_ = num_nodes;
  g.row_ptr_ = std::move(row_ptr);
  g.col_idx_ = std::move(col_idx);
  g.edge_feature_ids_ = std::move(edge_feature_ids);
  g.features_ = std::move(features);
  g.finalize();
  return g;
}

void Graph::finalize() {
  edge_rows_.resize(col_idx_.size());
  for (std::size_t i = 0; i < num_nodes_; ++i)
    for (std::uint64_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
      edge_rows_[e] = static_cast<std::uint32_t>(i);
  reverse_.resize(col_idx_.size());
  for (std::size_t e = 0; e < col_idx_.size(); ++e) {
    auto rev = edge_id(col_idx_[e], edge_rows_[e]);
    if (!rev) {
      throw DataError("graph is not symmetric: edge (" + std::to_string(edge_rows_[e]) + ", " +
                      std::to_string(col_idx_[e]) + ") has no reverse");
    }
    if (!edge_feature_ids_.empty() && edge_feature_ids_[*rev] != edge_feature_ids_[e]) {
      throw DataError("edge feature ids differ between directions of an edge");
    }
    reverse_[e] = static_cast<std::uint32_t>(*rev);
  }
}

std::span<const std::uint32_t> Graph::neighbors(std::size_t node) const {
  return std::span<const std::uint32_t>(col_idx_).subspan(row_ptr_[node],
                                                          row_ptr_[node + 1] - row_ptr_[node]);
}

std::optional<std::size_t> Graph::edge_id(std::size_t i, std::size_t j) const {
  if (i >= num_nodes_ || j >= num_nodes_) return std::nullopt;
  auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), static_cast<std::uint32_t>(j));
  if (it == nb.end() || *it != j) return std::nullopt;
  return row_ptr_[i] + static_cast<std::size_t>(it - nb.begin());
}

bool Graph::has_edge(std::size_t i, std::size_t j) const { return edge_id(i, j).has_value(); }

std::size_t Graph::self_loops() const {
  std::size_t n = 0;
  for (std::size_t e = 0; e < col_idx_.size(); ++e) n += edge_rows_[e] == col_idx_[e];
  return n;
}

Graph Graph::with_features(Tensor features) const {
  validate_features(features, num_nodes_);
  Graph g = *this;
  g.features_ = std::move(features);
  return g;
}

Graph Graph::with_labels(Tensor labels) const {
  if (labels.rank() != 2 || (labels.rows() != num_nodes_ && labels.rows() != 1)) {
    throw DataError("label matrix " + labels.shape_string() + " needs " +
                    std::to_string(num_nodes_) + " rows (node labels) or 1 row (graph label)");
  }
  if (!labels.all_finite()) throw DataError("non-finite label");
  Graph g = *this;
  g.labels_ = std::move(labels);
  return g;
}

Graph Graph::with_split(Split split) const {
  split.validate(num_nodes_);
  Graph g = *this;
  g.split_ = std::move(split);
  return g;
}

bool operator==(const Graph& a, const Graph& b) {
  return a.num_nodes_ == b.num_nodes_ && a.row_ptr_ == b.row_ptr_ && a.col_idx_ == b.col_idx_ &&
         a.edge_feature_ids_ == b.edge_feature_ids_ && a.features_ == b.features_ &&
         a.labels_ == b.labels_ && a.split_ == b.split_;
}

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::kNodeClassification: return "node-classification";
    case TaskKind::kGraphClassification: return "graph-classification";
    case TaskKind::kGraphRegression: return "graph-regression";
  }
  return "unknown";
}

TaskKind parse_task_kind(const std::string& text) {
  if (text == "node-classification") return TaskKind::kNodeClassification;
  if (text == "graph-classification") return TaskKind::kGraphClassification;
  if (text == "graph-regression") return TaskKind::kGraphRegression;
  throw ArgumentError("unknown task kind '" + text + "'");
}

void GraphCollection::validate() const {
  if (graphs.empty()) return;
  const std::size_t d = graphs.front().feature_dim();
  const bool ef = graphs.front().has_edge_features();
  for (std::size_t k = 0; k < graphs.size(); ++k) {
    if (graphs[k].feature_dim() != d) {
      throw DataError("graph " + std::to_string(k) + " has feature dimension " +
                      std::to_string(graphs[k].feature_dim()) + ", expected " + std::to_string(d));
    }
    if (graphs[k].has_edge_features() != ef && graphs[k].num_edges() > 0) {
      throw DataError("graph " + std::to_string(k) + " disagrees on edge-feature presence");
    }
  }
  if (split) split->validate(graphs.size());
}

std::vector<double> degree_vector(const Graph& g) {
  std::vector<double> d(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) d[i] = static_cast<double>(g.degree(i));
  return d;
}

Graph permute_graph(const Graph& g, std::span<const std::uint32_t> perm) {
  const std::size_t n = g.num_nodes();
  if (perm.size() != n) throw ArgumentError("permutation size does not match node count");
  std::vector<char> hit(n, 0);
  for (std::uint32_t p : perm) {
    if (p >= n || hit[p]) throw ArgumentError("not a permutation");
    hit[p] = 1;
  }
  std::vector<EdgeInput> edges;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::uint32_t i = g.edge_rows()[e], j = g.col_idx()[e];
    if (i > j) continue;
    EdgeInput in{perm[i], perm[j], std::nullopt};
    if (g.has_edge_features()) in.feature_id = g.edge_feature_ids()[e];
    edges.push_back(in);
  }
  Tensor feats(n, g.feature_dim());
  for (std::size_t i = 0; i < n; ++i)
    std::copy(g.features().row(i).begin(), g.features().row(i).end(), feats.row(perm[i]).begin());
  Graph out = Graph::from_edges(n, edges, std::move(feats));
  if (g.labels()) {
    const Tensor& l = *g.labels();
    if (l.rows() == n && n != 1) {
      Tensor pl(n, l.cols());
      for (std::size_t i = 0; i < n; ++i)
        std::copy(l.row(i).begin(), l.row(i).end(), pl.row(perm[i]).begin());
      out = out.with_labels(std::move(pl));
    } else {
      out = out.with_labels(l);
    }
  }
  if (g.split()) {
    Split s = *g.split();
    for (auto* set : {&s.train, &s.valid, &s.test})
      for (auto& id : *set) id = perm[id];
    out = out.with_split(std::move(s));
  }
  return out;
}

Graph disjoint_union(std::span<const Graph> graphs) {
  if (graphs.empty()) throw ArgumentError("disjoint_union of zero graphs");
  const std::size_t d = graphs.front().feature_dim();
  std::size_t n = 0, e = 0;
  for (const auto& g : graphs) {
    if (g.feature_dim() != d) throw DataError("disjoint_union: feature dimensions differ");
    n += g.num_nodes();
    e += g.num_edges();
  }
  const bool ef = std::any_of(graphs.begin(), graphs.end(),
                              [](const Graph& g) { return g.has_edge_features(); });
  const bool node_labels = std::all_of(graphs.begin(), graphs.end(), [](const Graph& g) {
    return g.labels() && g.labels()->rows() == g.num_nodes() && g.num_nodes() != 1;
  });
  std::vector<std::uint64_t> row_ptr{0};
  row_ptr.reserve(n + 1);
  std::vector<std::uint32_t> col;
  col.reserve(e);
  std::vector<std::int32_t> fids;
  Tensor feats(n, d);
  std::size_t offset = 0;
  for (const auto& g : graphs) {
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
      for (std::uint64_t k = g.row_ptr()[i]; k < g.row_ptr()[i + 1]; ++k) {
        col.push_back(static_cast<std::uint32_t>(g.col_idx()[k] + offset));
        if (ef) fids.push_back(g.has_edge_features() ? g.edge_feature_ids()[k] : 0);
      }
      row_ptr.push_back(col.size());
      std::copy(g.features().row(i).begin(), g.features().row(i).end(),
                feats.row(offset + i).begin());
    }
    offset += g.num_nodes();
  }
  Graph out = Graph::from_csr(n, std::move(row_ptr), std::move(col), std::move(feats), std::move(fids));
  if (node_labels) {
    const std::size_t t = graphs.front().labels()->cols();
    Tensor labels(n, t);
    std::size_t row = 0;
    for (const auto& g : graphs)
      for (std::size_t i = 0; i < g.num_nodes(); ++i, ++row)
        std::copy(g.labels()->row(i).begin(), g.labels()->row(i).end(), labels.row(row).begin());
    out = out.with_labels(std::move(labels));
  }
  return out;
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count) {
  const std::size_t n = g.num_nodes();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> comp(n, kUnset);
  std::vector<std::uint32_t> stack;
  std::uint32_t next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = next;
    stack.push_back(static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      const std::uint32_t u = stack.back();
      stack.pop_back();
      for (std::uint32_t v : g.neighbors(u)) {
        if (comp[v] == kUnset) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

}  // namespace graphpae
