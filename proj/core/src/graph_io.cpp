#include "graphpae/graph_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

#include "binary_io.hpp"
#include "text.hpp"
#include "graphpae/errors.hpp"

namespace graphpae {
using namespace detail;

std::vector<EdgeInput> read_edge_list(const std::filesystem::path& path) {
  auto in = open_text(path);
  std::vector<EdgeInput> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto fields = split_ws(body);
    if (fields.size() != 2 && fields.size() != 3) {
      parse_fail(path, lineno, "expected 'src dst [edge_feature_id]', got '" + std::string(body) + "'");
    }
    EdgeInput e;
    if (!parse_int(fields[0], e.src) || !parse_int(fields[1], e.dst)) {
      parse_fail(path, lineno, "node ids must be non-negative integers");
    }
    if (fields.size() == 3) {
      std::int32_t fid = 0;
      if (!parse_int(fields[2], fid) || fid < 0) {
        parse_fail(path, lineno, "edge feature id must be a non-negative integer");
      }
      e.feature_id = fid;
    }
    edges.push_back(e);
  }
  return edges;
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
  auto out = create_text(path);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto i = g.edge_rows()[e], j = g.col_idx()[e];
    if (i > j) continue;
    out << i << '\t' << j;
    if (g.has_edge_features()) out << '\t' << g.edge_feature_ids()[e];
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Tensor read_csv_matrix(const std::filesystem::path& path) {
  auto in = open_text(path);
  std::vector<double> values;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto field = trim(body.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start));
      double v = 0.0;
      if (!parse_double(field, v)) {
        parse_fail(path, lineno, "cannot parse '" + std::string(field) + "' as a number");
      }
      if (!std::isfinite(v)) {
        throw DataError(path.string() + ":" + std::to_string(lineno) + ": non-finite value '" +
                        std::string(field) + "'");
      }
      values.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      parse_fail(path, lineno, "expected " + std::to_string(cols) + " columns, got " +
                                   std::to_string(count));
    }
    ++rows;
  }
  return Tensor({rows, cols}, std::move(values));
}

void write_csv_matrix(const std::filesystem::path& path, const Tensor& m) {
  auto out = create_text(path);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) out << ',';
      out << format_double(m(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Split read_split(const std::filesystem::path& path) {
  auto in = open_text(path);
  Split s;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) parse_fail(path, lineno, "expected 'name: i,j,k'");
    const auto key = trim(body.substr(0, colon));
    std::vector<std::uint32_t>* target = nullptr;
    if (key == "train") target = &s.train;
    else if (key == "valid") target = &s.valid;
    else if (key == "test") target = &s.test;
    else parse_fail(path, lineno, "unknown split '" + std::string(key) + "'");
    auto rest = trim(body.substr(colon + 1));
    std::size_t start = 0;
    while (!rest.empty() && start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto field = trim(rest.substr(start, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - start));
      std::uint32_t id = 0;
      if (!parse_int(field, id)) {
        parse_fail(path, lineno, "bad index '" + std::string(field) + "'");
      }
      target->push_back(id);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return s;
}

void write_split(const std::filesystem::path& path, const Split& split) {
  auto out = create_text(path);
  auto emit = [&](const char* name, const std::vector<std::uint32_t>& ids) {
    out << name << ": ";
    for (std::size_t k = 0; k < ids.size(); ++k) out << (k ? "," : "") << ids[k];
    out << '\n';
  };
  emit("train", split.train);
  emit("valid", split.valid);
  emit("test", split.test);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Graph load_graph(const std::filesystem::path& edge_list_path,
                 const std::filesystem::path& feature_path,
                 const std::optional<std::filesystem::path>& label_path,
                 const std::optional<std::filesystem::path>& split_path,
                 GraphBuildOptions options) {
  Tensor features = read_csv_matrix(feature_path);
  const auto edges = read_edge_list(edge_list_path);
  const std::size_t n = features.rows();
  Graph g = Graph::from_edges(n, edges, std::move(features), options);
  if (label_path) {
    Tensor labels = read_csv_matrix(*label_path);
    if (labels.rows() != n) {
      throw DataError("'" + label_path->string() + "' has " + std::to_string(labels.rows()) +
                      " rows, expected " + std::to_string(n));
    }
    g = g.with_labels(std::move(labels));
  }
  if (split_path) g = g.with_split(read_split(*split_path));
  return g;
}

std::vector<char> serialize_graph(const Graph& g) {
  detail::ByteWriter w;
  w.bytes("PAEG");
  w.u16(kGraphFormatVersion);
  w.u64(g.num_nodes());
  w.u64(g.num_edges());
  w.u64(g.feature_dim());
  for (auto p : g.row_ptr()) w.u64(p);
  for (auto c : g.col_idx()) w.u64(c);
  for (double v : g.features().values()) w.f64(v);
  return w.buffer();
}

Graph deserialize_graph(std::vector<char> bytes, const std::string& source) {
  detail::ByteReader r(std::move(bytes), source);
  r.expect_magic("PAEG");
  const auto version = r.u16();
  if (version != kGraphFormatVersion) {
    throw FormatError("'" + source + "': graph format version " + std::to_string(version) +
                      " unsupported");
  }
  const std::uint64_t n = r.u64(), e = r.u64(), d = r.u64();
  r.require_elements(n + 1, 8);
  std::vector<std::uint64_t> row_ptr(n + 1);
  for (auto& p : row_ptr) p = r.u64();
  r.require_elements(e, 8);
  std::vector<std::uint32_t> col(e);
  for (auto& c : col) {
    const std::uint64_t v = r.u64();
    if (v >= n) throw FormatError("'" + source + "': column index out of range");
    c = static_cast<std::uint32_t>(v);
  }
  r.require_elements(n * d, 8);
  std::vector<double> feats(n * d);
  for (auto& v : feats) v = r.f64();
  if (!r.at_end()) throw FormatError("'" + source + "': trailing bytes");
  return Graph::from_csr(n, std::move(row_ptr), std::move(col), Tensor({n, d}, std::move(feats)));
}

void save_graph(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const auto bytes = serialize_graph(g);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Graph load_graph_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_graph(std::move(data), path.string());
}

GraphCollection load_collection(const std::filesystem::path& manifest_path,
                                const std::optional<std::filesystem::path>& label_path,
                                const std::optional<std::filesystem::path>& split_path,
                                TaskKind task, GraphBuildOptions options) {
  auto in = open_text(manifest_path);
  const auto base = manifest_path.parent_path();
  GraphCollection c;
  c.task = task;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto fields = split_ws(body);
    if (fields.size() != 2) parse_fail(manifest_path, lineno, "expected 'edge_list features'");
    auto resolve = [&](std::string_view f) {
      std::filesystem::path p{std::string(f)};
      return p.is_relative() ? base / p : p;
    };
    c.graphs.push_back(load_graph(resolve(fields[0]), resolve(fields[1]), std::nullopt,
                                  std::nullopt, options));
  }
  if (label_path) {
    const Tensor labels = read_csv_matrix(*label_path);
    if (labels.rows() != c.graphs.size()) {
      throw DataError("'" + label_path->string() + "' has " + std::to_string(labels.rows()) +
                      " rows, expected one per graph (" + std::to_string(c.graphs.size()) + ")");
    }
    for (std::size_t k = 0; k < c.graphs.size(); ++k) {
      Tensor row(1, labels.cols());
      std::copy(labels.row(k).begin(), labels.row(k).end(), row.row(0).begin());
      c.graphs[k] = c.graphs[k].with_labels(std::move(row));
    }
  }
  if (split_path) c.split = read_split(*split_path);
  c.validate();
  return c;
}

}  // namespace graphpae
