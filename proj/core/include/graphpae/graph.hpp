#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graphpae/tensor.hpp"

namespace graphpae {

/// Index sets of a train/valid/test split (node ids or graph ids).
struct Split {
  std::vector<std::uint32_t> train;
  std::vector<std::uint32_t> valid;
  std::vector<std::uint32_t> test;

  /// Throws RangeError for ids >= count and DataError for overlapping sets.
  void validate(std::size_t count) const;
  friend bool operator==(const Split&, const Split&) = default;
};

/// One input edge. Undirected: the builder stores both directions.
struct EdgeInput {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::optional<std::int32_t> feature_id;
};

struct GraphBuildOptions {
  /// Self-loops are kept as data by default; they never enter the position
  /// reconstruction loss.
  bool keep_self_loops = true;
};

/// Immutable undirected graph in CSR form. Each undirected edge {i, j}, i != j,
/// is stored as the two directed edges (i, j) and (j, i); a self-loop is stored
/// once. Column indices within a row are strictly increasing, so "edge id"
/// means position in the CSR arrays and is stable for a given graph.
class Graph {
 public:
  Graph() = default;

  /// Symmetrizes and deduplicates `edges`. Duplicate undirected pairs keep the
  /// first edge-feature id seen. Throws RangeError for ids >= num_nodes and
  /// DataError for a feature matrix with the wrong row count or non-finite
  /// entries.
  static Graph from_edges(std::size_t num_nodes, std::span<const EdgeInput> edges, Tensor features,
                          GraphBuildOptions options = {});

  /// Adopts CSR arrays after validating every structural invariant.
  static Graph from_csr(std::size_t num_nodes, std::vector<std::uint64_t> row_ptr,
                        std::vector<std::uint32_t> col_idx, Tensor features,
                        std::vector<std::int32_t> edge_feature_ids = {});

  std::size_t num_nodes() const { return num_nodes_; }
  /// Stored directed edges.
  std::size_t num_edges() const { return col_idx_.size(); }
  std::size_t feature_dim() const { return features_.cols(); }

  std::span<const std::uint64_t> row_ptr() const { return row_ptr_; }
  std::span<const std::uint32_t> col_idx() const { return col_idx_; }
  /// Source row of every stored edge (the segment id for neighbor sums).
  std::span<const std::uint32_t> edge_rows() const { return edge_rows_; }
  /// Edge id of the reverse direction of every stored edge.
  std::span<const std::uint32_t> reverse_edges() const { return reverse_; }
  std::span<const std::uint32_t> neighbors(std::size_t node) const;
  std::size_t degree(std::size_t node) const { return row_ptr_[node + 1] - row_ptr_[node]; }

  bool has_edge(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> edge_id(std::size_t i, std::size_t j) const;

  const Tensor& features() const { return features_; }
  bool has_edge_features() const { return !edge_feature_ids_.empty(); }
  std::span<const std::int32_t> edge_feature_ids() const { return edge_feature_ids_; }

  /// Node-level labels (N rows) or a graph-level label (1 row).
  const std::optional<Tensor>& labels() const { return labels_; }
  const std::optional<Split>& split() const { return split_; }

  /// Undirected duplicates dropped while building from an edge list.
  std::size_t duplicate_edges() const { return duplicates_; }
  std::size_t self_loops() const;

  Graph with_features(Tensor features) const;
  Graph with_labels(Tensor labels) const;
  Graph with_split(Split split) const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  void finalize();

  std::size_t num_nodes_ = 0;
  std::vector<std::uint64_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
  std::vector<std::uint32_t> edge_rows_;
  std::vector<std::uint32_t> reverse_;
  std::vector<std::int32_t> edge_feature_ids_;
  Tensor features_{0, 0};
  std::optional<Tensor> labels_;
  std::optional<Split> split_;
  std::size_t duplicates_ = 0;
};

enum class TaskKind { kNodeClassification, kGraphClassification, kGraphRegression };

std::string to_string(TaskKind kind);
TaskKind parse_task_kind(const std::string& text);

/// Multi-graph dataset. Graph-level labels live on each graph (one row).
struct GraphCollection {
  std::vector<Graph> graphs;
  TaskKind task = TaskKind::kGraphClassification;
  std::optional<Split> split;

  /// Throws DataError unless all graphs share feature dimension and edge
  /// feature presence.
  void validate() const;
};

/// D_ii = number of stored edges leaving i.
std::vector<double> degree_vector(const Graph& g);

/// Relabels nodes: node i of `g` becomes node perm[i]. Features, labels, edge
/// features and split are carried along.
Graph permute_graph(const Graph& g, std::span<const std::uint32_t> perm);

/// Block-diagonal union; node ids of graph k are offset by the sizes of graphs
/// 0..k-1. Node-level labels are concatenated; graph-level labels dropped.
Graph disjoint_union(std::span<const Graph> graphs);

/// Connected-component id of every node, numbered by smallest member.
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count = nullptr);

}  // namespace graphpae
