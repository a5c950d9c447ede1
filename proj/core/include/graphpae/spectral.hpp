#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "graphpae/graph.hpp"
#include "graphpae/rng.hpp"
#include "graphpae/tensor.hpp"

namespace graphpae {

/// L = I - D^{-1/2} A D^{-1/2} as a sparse operator over the graph's CSR
/// arrays. Rows of isolated nodes are identity rows.
class NormalizedLaplacian {
 public:
  explicit NormalizedLaplacian(const Graph& g);

  std::size_t size() const { return n_; }
  /// y = L x.
  void apply(std::span<const double> x, std::span<double> y) const;
  Tensor to_dense() const;
  std::span<const double> inv_sqrt_degree() const { return inv_sqrt_deg_; }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> inv_sqrt_deg_;
};

/// Top-K eigenpairs (algebraically smallest K) of the normalized Laplacian.
/// Eigenvalues ascending and clamped into [0, 2]; each eigenvector column is
/// unit-norm with its largest-magnitude entry positive (lowest index on ties).
struct SpectralBasis {
  std::vector<double> eigenvalues;
  Tensor eigenvectors;  // N x K

  std::size_t k() const { return eigenvalues.size(); }
  std::size_t num_nodes() const { return eigenvectors.rank() == 2 ? eigenvectors.rows() : 0; }
};

enum class EigenMethod { kAuto, kDense, kLanczos };

struct EigenOptions {
  EigenMethod method = EigenMethod::kAuto;
  /// kAuto uses the dense solver up to this many nodes or when K >= N/5,
  /// Lanczos otherwise.
  std::size_t dense_limit = 400;
  /// Lanczos stops once every wanted Ritz pair's residual bound is below this.
  double tolerance = 1e-10;
  /// Residual ||L u - lambda u|| accepted on the returned pairs.
  double max_residual = 1e-6;
};

NormalizedLaplacian normalized_laplacian(const Graph& g);

/// Throws ArgumentError unless 1 <= k <= N, NumericalError when the solver
/// fails to reach `max_residual` (message reports the worst residual).
SpectralBasis topk_eigenpairs(const NormalizedLaplacian& laplacian, std::size_t k,
                              std::uint64_t seed, EigenOptions options = {});

/// Applies the sign convention in place.
void canonicalize_signs(Tensor& vectors);

/// Sign (+1/-1) of the largest-magnitude entry of column k, lowest index on ties.
double column_sign(const Tensor& vectors, std::size_t k);

/// Per stored edge (i, j): ||U_i - U_j||_2, indexed by edge id.
struct DistanceMap {
  std::vector<double> values;
  std::size_t size() const { return values.size(); }
  friend bool operator==(const DistanceMap&, const DistanceMap&) = default;
};

DistanceMap relative_distances(const Tensor& positions, const Graph& g);
DistanceMap relative_distances(const SpectralBasis& basis, const Graph& g);

/// Returns U~: rows listed in `masked` receive i.i.d. noise uniform in
/// (-mu_p, mu_p) per component, drawn in the order of `masked`. Each noise
/// column is multiplied by that eigenvector's canonical sign, so flipping a
/// column of U flips the corresponding noise and P~ is unchanged.
SpectralBasis offset_positions(const SpectralBasis& basis, std::span<const std::uint32_t> masked,
                               double mu_p, Rng& rng);

struct BandSpectrum {
  struct Band {
    double lo = 0.0;
    double hi = 0.0;
    /// Mean of the feature-averaged spectral coefficients over eigenvalues in
    /// [lo, hi]; empty when no eigenvalue falls in the band.
    std::optional<double> magnitude;
    std::size_t count = 0;
  };
  std::vector<Band> bands;
};

/// X^s = U^T X, averaged over feature columns, then averaged per band.
BandSpectrum frequency_magnitude(const SpectralBasis& basis, const Tensor& features,
                                 std::span<const std::pair<double, double>> bands);

/// Same with eigenvalues and vectors passed separately (lets callers pair a
/// perturbed U~ with the original eigenvalues).
BandSpectrum frequency_magnitude(std::span<const double> eigenvalues, const Tensor& vectors,
                                 const Tensor& features,
                                 std::span<const std::pair<double, double>> bands);

/// Consecutive bands of `width` covering [lo, hi].
std::vector<std::pair<double, double>> uniform_bands(double lo, double hi, double width);

/// "PAES" | u16 version | u64 N | u64 K | f64 eigenvalues[K] | f64 U[N*K] row-major.
inline constexpr std::uint16_t kBasisFormatVersion = 1;
void save_basis(const std::filesystem::path& path, const SpectralBasis& basis);
SpectralBasis load_basis(const std::filesystem::path& path);

/// Bases of the graphs of a batch stacked row-wise into one N_total x K basis.
/// A graph whose basis has fewer than K columns is padded with zero columns.
SpectralBasis stack_bases(std::span<const SpectralBasis> bases, std::size_t k);

}  // namespace graphpae
