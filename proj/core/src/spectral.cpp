#include "graphpae/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "binary_io.hpp"
#include "graphpae/eigensolver.hpp"
#include "graphpae/errors.hpp"

namespace graphpae {

NormalizedLaplacian::NormalizedLaplacian(const Graph& g)
    : n_(g.num_nodes()),
      row_ptr_(g.row_ptr().begin(), g.row_ptr().end()),
      col_(g.col_idx().begin(), g.col_idx().end()),
      inv_sqrt_deg_(g.num_nodes(), 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t d = g.degree(i);
    if (d > 0) inv_sqrt_deg_[i] = 1.0 / std::sqrt(static_cast<double>(d));
  }
}

void NormalizedLaplacian::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::uint64_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
      acc += inv_sqrt_deg_[col_[e]] * x[col_[e]];
    y[i] = x[i] - inv_sqrt_deg_[i] * acc;
  }
}

Tensor NormalizedLaplacian::to_dense() const {
  Tensor l(n_, n_);
  for (std::size_t i = 0; i < n_; ++i) {
    l(i, i) = 1.0;
    for (std::uint64_t e = row_ptr_[i]; e < row_ptr_[i + 1]; ++e)
      l(i, col_[e]) -= inv_sqrt_deg_[i] * inv_sqrt_deg_[col_[e]];
  }
  return l;
}

NormalizedLaplacian normalized_laplacian(const Graph& g) { return NormalizedLaplacian(g); }

double column_sign(const Tensor& vectors, std::size_t k) {
  double best = -1.0;
  double sign = 1.0;
  for (std::size_t r = 0; r < vectors.rows(); ++r) {
    const double v = vectors(r, k);
    if (std::abs(v) > best) {
      best = std::abs(v);
      sign = v < 0.0 ? -1.0 : 1.0;
    }
  }
  return sign;
}

void canonicalize_signs(Tensor& vectors) {
  for (std::size_t k = 0; k < vectors.cols(); ++k) {
    if (column_sign(vectors, k) < 0.0)
      for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, k) = -vectors(r, k);
  }
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double residual_norm(const NormalizedLaplacian& l, std::span<const double> u, double lambda,
                     std::vector<double>& scratch) {
  scratch.resize(u.size());
  l.apply(u, scratch);
  double r = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = scratch[i] - lambda * u[i];
    r += d * d;
  }
  return std::sqrt(r);
}

SpectralBasis dense_topk(const NormalizedLaplacian& l, std::size_t k) {
  SymmetricEigen full = dense_symmetric_eigen(l.to_dense());
  SpectralBasis b;
  const std::size_t n = l.size();
  b.eigenvalues.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(k));
  b.eigenvectors = Tensor(n, k);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < k; ++c) b.eigenvectors(r, c) = full.vectors(r, c);
  return b;
}

// Lanczos with full reorthogonalization. The Krylov basis grows until the
// residual bound |beta_m * s_{m,i}| of the k smallest Ritz pairs falls below
// the tolerance; a breakdown (invariant subspace) restarts from a fresh random
// vector orthogonal to the basis. Eigenvalues of multiplicity > 1 are only
// resolved through such restarts and rounding, so the dense path is preferred
// whenever it is affordable.
SpectralBasis lanczos_topk(const NormalizedLaplacian& l, std::size_t k, std::uint64_t seed,
                           const EigenOptions& options) {
  const std::size_t n = l.size();
  Rng rng(seed);
  std::vector<std::vector<double>> basis;
  std::vector<double> alpha, beta;

  auto random_orthogonal = [&]() {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::vector<double> v(n);
      for (auto& x : v) x = uniform01(rng) - 0.5;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& q : basis) {
          const double c = dot(q, v);
          for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
        }
      const double nv = std::sqrt(dot(v, v));
      if (nv > 1e-8) {
        for (auto& x : v) x /= nv;
        return v;
      }
    }
    throw NumericalError("lanczos: could not extend the Krylov basis");
  };

  basis.push_back(random_orthogonal());
  std::vector<double> w(n);
  const std::size_t first_check = std::min(n, std::max<std::size_t>(2 * k + 10, 20));
  SymmetricEigen ritz;
  bool converged = false;
  double last_beta = 0.0;

  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = basis[j];
    l.apply(v, w);
    const double a = dot(v, w);
    alpha.push_back(a);
    for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i];
    if (j > 0) {
      const auto& vp = basis[j - 1];
      for (std::size_t i = 0; i < n; ++i) w[i] -= beta[j - 1] * vp[i];
    }
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) {
        const double c = dot(q, w);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * q[i];
      }
    const double b = std::sqrt(dot(w, w));
    const std::size_t m = j + 1;

    const bool check = m >= first_check && (m == n || (m - first_check) % 10 == 0);
    if (check) {
      std::vector<double> off(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(m - 1));
      ritz = tridiagonal_eigen(alpha, off);
      converged = true;
      for (std::size_t i = 0; i < k; ++i) {
        const double bound = std::abs(b * ritz.vectors(m - 1, i));
        if (bound > options.tolerance) {
          converged = false;
          break;
        }
      }
      last_beta = b;
      if (converged || m == n) break;
    }
    if (m == n) break;
    if (b < 1e-10) {
      beta.push_back(0.0);
      basis.push_back(random_orthogonal());
    } else {
      beta.push_back(b);
      std::vector<double> next(n);
      for (std::size_t i = 0; i < n; ++i) next[i] = w[i] / b;
      basis.push_back(std::move(next));
    }
  }
  (void)last_beta;

  const std::size_t m = alpha.size();
  if (ritz.values.size() != m) {
    std::vector<double> off(beta.begin(), beta.begin() + static_cast<std::ptrdiff_t>(m - 1));
    ritz = tridiagonal_eigen(alpha, off);
  }
  SpectralBasis out;
  out.eigenvalues.assign(ritz.values.begin(), ritz.values.begin() + static_cast<std::ptrdiff_t>(k));
  out.eigenvectors = Tensor(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t q = 0; q < m; ++q) {
      const double s = ritz.vectors(q, c);
      for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) += s * basis[q][r];
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += out.eigenvectors(r, c) * out.eigenvectors(r, c);
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) /= norm;
  }
  return out;
}

}  // namespace

SpectralBasis topk_eigenpairs(const NormalizedLaplacian& laplacian, std::size_t k,
                              std::uint64_t seed, EigenOptions options) {
  const std::size_t n = laplacian.size();
  if (k < 1 || k > n) {
    throw ArgumentError("topk_eigenpairs: K=" + std::to_string(k) + " must be in [1, N=" +
                        std::to_string(n) + "]");
  }
  const bool dense = options.method == EigenMethod::kDense ||
                     (options.method == EigenMethod::kAuto && (n <= options.dense_limit || 5 * k >= n));
  SpectralBasis b = dense ? dense_topk(laplacian, k) : lanczos_topk(laplacian, k, seed, options);
  canonicalize_signs(b.eigenvectors);

  std::vector<double> scratch, column(n);
  double worst = 0.0;
  std::size_t worst_k = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < n; ++r) column[r] = b.eigenvectors(r, c);
    const double res = residual_norm(laplacian, column, b.eigenvalues[c], scratch);
    if (res > worst) {
      worst = res;
      worst_k = c;
    }
  }
  if (!(worst <= options.max_residual)) {
    std::ostringstream msg;
    msg << "topk_eigenpairs: eigenpair " << worst_k << " has residual " << worst
        << " > " << options.max_residual << " (" << (dense ? "dense" : "lanczos") << " solver)";
    throw NumericalError(msg.str());
  }
  for (double& v : b.eigenvalues) v = std::clamp(v, 0.0, 2.0);
  return b;
}

DistanceMap relative_distances(const Tensor& positions, const Graph& g) {
  if (positions.rank() != 2 || positions.rows() != g.num_nodes()) {
    throw ShapeError("relative_distances: positions " + positions.shape_string() +
                     " do not match N=" + std::to_string(g.num_nodes()));
  }
  const std::size_t k = positions.cols();
  DistanceMap p;
  p.values.resize(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const std::uint32_t i = g.edge_rows()[e], j = g.col_idx()[e];
    double acc = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double d = positions(i, c) - positions(j, c);
      acc += d * d;
    }
    p.values[e] = std::sqrt(acc);
  }
  return p;
}

DistanceMap relative_distances(const SpectralBasis& basis, const Graph& g) {
  return relative_distances(basis.eigenvectors, g);
}

SpectralBasis offset_positions(const SpectralBasis& basis, std::span<const std::uint32_t> masked,
                               double mu_p, Rng& rng) {
  if (mu_p < 0.0) throw ArgumentError("offset_positions: noise scale must be >= 0");
  SpectralBasis out = basis;
  if (mu_p == 0.0 || masked.empty()) return out;
  const std::size_t k = basis.eigenvectors.cols();
  std::vector<double> signs(k);
  for (std::size_t c = 0; c < k; ++c) signs[c] = column_sign(basis.eigenvectors, c);
  for (std::uint32_t node : masked) {
    if (node >= basis.num_nodes()) throw RangeError("offset_positions: node out of range");
    for (std::size_t c = 0; c < k; ++c)
      out.eigenvectors(node, c) += signs[c] * uniform_open(rng, -mu_p, mu_p);
  }
  return out;
}

BandSpectrum frequency_magnitude(std::span<const double> eigenvalues, const Tensor& vectors,
                                 const Tensor& features,
                                 std::span<const std::pair<double, double>> bands) {
  for (const auto& [lo, hi] : bands) {
    if (lo > hi) {
      throw ArgumentError("frequency band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] has lower edge above upper edge");
    }
  }
  if (vectors.rows() != features.rows()) {
    throw ShapeError("frequency_magnitude: basis " + vectors.shape_string() + " vs features " +
                     features.shape_string());
  }
  const std::size_t n = vectors.rows(), k = vectors.cols(), d = features.cols();
  // Mean over feature columns commutes with U^T, so average X first.
  std::vector<double> xbar(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += features(r, c);
    xbar[r] = d ? s / static_cast<double>(d) : 0.0;
  }
  std::vector<double> spectral(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += vectors(r, c) * xbar[r];
    spectral[c] = s;
  }
  BandSpectrum out;
  for (const auto& [lo, hi] : bands) {
    BandSpectrum::Band band{lo, hi, std::nullopt, 0};
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (eigenvalues[c] >= lo && eigenvalues[c] <= hi) {
        total += spectral[c];
        ++band.count;
      }
    }
    if (band.count) band.magnitude = total / static_cast<double>(band.count);
    out.bands.push_back(band);
  }
  return out;
}

BandSpectrum frequency_magnitude(const SpectralBasis& basis, const Tensor& features,
                                 std::span<const std::pair<double, double>> bands) {
  return frequency_magnitude(basis.eigenvalues, basis.eigenvectors, features, bands);
}

std::vector<std::pair<double, double>> uniform_bands(double lo, double hi, double width) {
  if (!(width > 0.0) || lo > hi) throw ArgumentError("uniform_bands: bad range or width");
  std::vector<std::pair<double, double>> out;
  const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9));
  for (std::size_t i = 0; i < count; ++i) {
    const double a = lo + width * static_cast<double>(i);
    out.emplace_back(a, std::min(hi, a + width));
  }
  return out;
}

void save_basis(const std::filesystem::path& path, const SpectralBasis& basis) {
  detail::ByteWriter w;
  w.bytes("PAES");
  w.u16(kBasisFormatVersion);
  w.u64(basis.num_nodes());
  w.u64(basis.k());
  for (double v : basis.eigenvalues) w.f64(v);
  for (double v : basis.eigenvectors.values()) w.f64(v);
  w.save(path);
}

SpectralBasis load_basis(const std::filesystem::path& path) {
  auto r = detail::ByteReader::from_file(path);
  r.expect_magic("PAES");
  const auto version = r.u16();
  if (version != kBasisFormatVersion) {
    throw FormatError("'" + path.string() + "': basis format version " + std::to_string(version) +
                      " unsupported");
  }
  const std::uint64_t n = r.u64(), k = r.u64();
  r.require_elements(k + n * k, 8);
  SpectralBasis b;
  b.eigenvalues.resize(k);
  for (auto& v : b.eigenvalues) v = r.f64();
  std::vector<double> u(n * k);
  for (auto& v : u) v = r.f64();
  b.eigenvectors = Tensor({n, k}, std::move(u));
  if (!r.at_end()) throw FormatError("'" + path.string() + "': trailing bytes");
  return b;
}

SpectralBasis stack_bases(std::span<const SpectralBasis> bases, std::size_t k) {
  std::size_t n = 0;
  for (const auto& b : bases) {
    if (b.k() > k) throw ArgumentError("stack_bases: component basis wider than K");
    n += b.num_nodes();
  }
  SpectralBasis out;
  // Eigenvalues of a stacked basis have no single meaning.
  out.eigenvalues.assign(k, std::numeric_limits<double>::quiet_NaN());
  out.eigenvectors = Tensor(n, k);
  std::size_t row = 0;
  for (const auto& b : bases) {
    for (std::size_t r = 0; r < b.num_nodes(); ++r, ++row)
      for (std::size_t c = 0; c < b.k(); ++c) out.eigenvectors(row, c) = b.eigenvectors(r, c);
  }
  return out;
}

}  // namespace graphpae
