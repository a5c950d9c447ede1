#include "graphpae/analysis.hpp"

#include <cmath>
#include <numeric>

#include "graphpae/corruption.hpp"
#include "graphpae/errors.hpp"
#include "text.hpp"

namespace graphpae {
namespace {

SpectralBasis full_basis(const Graph& g, std::uint64_t seed) {
  EigenOptions opts;
  opts.method = EigenMethod::kDense;
  return topk_eigenpairs(normalized_laplacian(g), g.num_nodes(), seed, opts);
}

Graph drop_edges(const Graph& g, double ratio, Rng& rng) {
  std::vector<EdgeInput> undirected;
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto i = g.edge_rows()[e], j = g.col_idx()[e];
    if (i <= j) undirected.push_back({i, j, std::nullopt});
  }
  const auto remove = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(undirected.size())));
  shuffle(undirected, rng);
  undirected.resize(undirected.size() - remove);
  return Graph::from_edges(g.num_nodes(), undirected, g.features());
}

std::string cell(const std::optional<double>& v) { return v ? detail::format_double(*v) : "NA"; }

}  // namespace

std::string to_string(SpectralCorruption kind) {
  switch (kind) {
    case SpectralCorruption::kFeature: return "feature";
    case SpectralCorruption::kEdge: return "edge";
    case SpectralCorruption::kOffset: return "offset";
  }
  return "feature";
}

SpectralCorruption parse_spectral_corruption(const std::string& text) {
  if (text == "feature") return SpectralCorruption::kFeature;
  if (text == "edge") return SpectralCorruption::kEdge;
  if (text == "offset") return SpectralCorruption::kOffset;
  throw ArgumentError("unknown mask kind '" + text + "' (expected feature, edge or offset)");
}

std::optional<double> BandComparison::abs_diff() const {
  if (!original || !corrupted) return std::nullopt;
  return std::abs(*corrupted - *original);
}

std::vector<BandComparison> compare_spectra(const Graph& g, SpectralCorruption kind, double ratio,
                                            double noise_scale,
                                            std::span<const std::pair<double, double>> bands,
                                            std::uint64_t seed) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw ArgumentError("ratio must lie in [0, 1]");
  for (const auto& [lo, hi] : bands) {
    if (lo < 0.0 || hi > 2.0) {
      throw ArgumentError("band [" + detail::format_double(lo) + ", " + detail::format_double(hi) +
                          "] lies outside [0, 2]");
    }
  }
  if (g.num_nodes() == 0) throw DataError("spectral analysis of an empty graph");
  const SpectralBasis basis = full_basis(g, seed);
  const BandSpectrum original = frequency_magnitude(basis, g.features(), bands);

  Rng rng = make_rng(seed, 0, 0, Stream::kMaskSelection);
  BandSpectrum corrupted;
  switch (kind) {
    case SpectralCorruption::kFeature: {
      const CorruptionPlan plan = sample_plan(g, ratio, CorruptionMode::kFeature, 0.0, rng);
      Tensor x = g.features();
      for (auto v : plan.masked_nodes) std::fill(x.row(v).begin(), x.row(v).end(), 0.0);
      corrupted = frequency_magnitude(basis, x, bands);
      break;
    }
    case SpectralCorruption::kEdge: {
      const Graph thinned = drop_edges(g, ratio, rng);
      corrupted = frequency_magnitude(full_basis(thinned, seed), g.features(), bands);
      break;
    }
    case SpectralCorruption::kOffset: {
      const CorruptionPlan plan = sample_plan(g, ratio, CorruptionMode::kPosition, noise_scale, rng);
      Rng noise = make_rng(seed, 0, 0, Stream::kPositionNoise);
      const SpectralBasis moved = offset_positions(basis, plan.masked_nodes, noise_scale, noise);
      corrupted = frequency_magnitude(basis.eigenvalues, moved.eigenvectors, g.features(), bands);
      break;
    }
  }

  std::vector<BandComparison> rows;
  for (std::size_t b = 0; b < bands.size(); ++b) {
    rows.push_back({bands[b].first, bands[b].second, original.bands[b].magnitude,
                    corrupted.bands[b].magnitude});
  }
  return rows;
}

double mean_abs_diff(std::span<const BandComparison> rows, double lo, double hi) {
  double total = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.lo < lo || r.hi > hi) continue;
    if (auto d = r.abs_diff()) {
      total += *d;
      ++n;
    }
  }
  return n ? total / static_cast<double>(n) : 0.0;
}

void write_band_csv(const std::filesystem::path& path, std::span<const BandComparison> rows) {
  auto out = detail::create_text(path);
  out << "band_lo,band_hi,orig_magnitude,corrupt_magnitude,abs_diff\n";
  for (const auto& r : rows) {
    out << detail::format_double(r.lo) << ',' << detail::format_double(r.hi) << ',' << cell(r.original)
        << ',' << cell(r.corrupted) << ',' << cell(r.abs_diff()) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace graphpae
