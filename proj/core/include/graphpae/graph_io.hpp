#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "graphpae/graph.hpp"

namespace graphpae {

/// Edge list: one "src dst" pair per line separated by tabs or spaces, 0-based,
/// with an optional third integer column holding a categorical edge-feature id.
/// '#' starts a comment. Malformed lines raise ParseError naming the line.
std::vector<EdgeInput> read_edge_list(const std::filesystem::path& path);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

/// Headerless CSV of decimal/scientific floats, one row per node or graph.
/// Blank lines are skipped. Non-finite values raise DataError.
Tensor read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Tensor& m);

/// Split file with lines "train: i,j,k", "valid: ...", "test: ...".
Split read_split(const std::filesystem::path& path);
void write_split(const std::filesystem::path& path, const Split& split);

/// Loads a graph from text files. N is the feature row count.
Graph load_graph(const std::filesystem::path& edge_list_path,
                 const std::filesystem::path& feature_path,
                 const std::optional<std::filesystem::path>& label_path = std::nullopt,
                 const std::optional<std::filesystem::path>& split_path = std::nullopt,
                 GraphBuildOptions options = {});

/// Canonical binary form: "PAEG" | u16 version | u64 N | u64 E | u64 d |
/// u64 row_ptr[N+1] | u64 col_idx[E] | f64 features[N*d] (row-major).
/// Labels, splits and edge-feature ids are not part of it.
inline constexpr std::uint16_t kGraphFormatVersion = 1;
std::vector<char> serialize_graph(const Graph& g);
Graph deserialize_graph(std::vector<char> bytes, const std::string& source = "<memory>");
void save_graph(const std::filesystem::path& path, const Graph& g);
Graph load_graph_binary(const std::filesystem::path& path);

/// Multi-graph dataset described by a manifest: each non-comment line holds
/// "edge_list_path feature_path" (relative paths resolve against the
/// manifest's directory). Graph labels come from a CSV with one row per graph.
GraphCollection load_collection(const std::filesystem::path& manifest_path,
                                const std::optional<std::filesystem::path>& label_path,
                                const std::optional<std::filesystem::path>& split_path,
                                TaskKind task, GraphBuildOptions options = {});

}  // namespace graphpae
