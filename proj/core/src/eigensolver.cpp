#include "graphpae/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "graphpae/errors.hpp"

namespace graphpae {
namespace {

// In-place Householder tridiagonalization of the symmetric matrix z (n x n,
// row-major). On exit z holds the orthogonal transform Q, d the diagonal and
// e the sub-diagonal in e[1..n-1] (e[0] = 0).
void householder_tridiagonalize(Tensor& z, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = z.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::size_t k = 0; k < i; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (std::size_t k = 0; k < i; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        // e = A u / h with A the leading i x i lower triangle, traversed by rows.
        const double* u = &z(i, 0);
        for (std::size_t j = 0; j < i; ++j) {
          z(j, i) = u[j] / h;
          e[j] = 0.0;
        }
        for (std::size_t j = 0; j < i; ++j) {
          const double* row = &z(j, 0);
          const double uj = u[j];
          double acc = row[j] * uj;
          for (std::size_t k = 0; k < j; ++k) {
            acc += row[k] * u[k];
            e[k] += row[k] * uj;
          }
          e[j] += acc;
        }
        f = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
          e[j] /= h;
          f += e[j] * u[j];
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j < i; ++j) {
          f = z(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  // Accumulate the transformations.
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] != 0.0) {
      std::fill(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(i), 0.0);
      for (std::size_t k = 0; k < i; ++k) {
        const double a = z(i, k);
        const double* zk = &z(k, 0);
        for (std::size_t j = 0; j < i; ++j) g[j] += a * zk[j];
      }
      for (std::size_t k = 0; k < i; ++k) {
        const double b = z(k, i);
        double* zk = &z(k, 0);
        for (std::size_t j = 0; j < i; ++j) zk[j] -= g[j] * b;
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) z(j, i) = z(i, j) = 0.0;
  }
}

// Implicit QL with Wilkinson-style shifts on the tridiagonal (d, e), e given
// as sub-diagonal in e[1..n-1]. Rotations are accumulated into the columns of z.
void implicit_ql(std::vector<double>& d, std::vector<double>& e, Tensor& z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  // Rotate rows of the transpose so each update touches contiguous memory.
  const std::size_t rows = z.rows();
  Tensor zt(n, rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < n; ++c) zt(c, r) = z(r, c);
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  constexpr int kMaxSweeps = 60;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m = l;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxSweeps) {
          throw NumericalError("tridiagonal QL did not converge for eigenvalue " +
                               std::to_string(l) + " after " + std::to_string(kMaxSweeps) +
                               " sweeps (off-diagonal residual " + std::to_string(std::abs(e[l])) +
                               ")");
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool deflated = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          double* lo = &zt(i, 0);
          double* hi = &zt(i + 1, 0);
          for (std::size_t k = 0; k < rows; ++k) {
            const double h = hi[k];
            hi[k] = s * lo[k] + c * h;
            lo[k] = c * lo[k] - s * h;
          }
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < n; ++c) z(r, c) = zt(c, r);
}

SymmetricEigen sorted(std::vector<double> d, const Tensor& z) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Tensor(z.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = d[order[k]];
    for (std::size_t r = 0; r < z.rows(); ++r) out.vectors(r, k) = z(r, order[k]);
  }
  return out;
}

}  // namespace

SymmetricEigen dense_symmetric_eigen(Tensor a) {
  if (a.rank() != 2 || a.rows() != a.cols()) {
    throw ShapeError("dense_symmetric_eigen: expected a square matrix, got " + a.shape_string());
  }
  const std::size_t n = a.rows();
  if (n == 0) return {{}, Tensor(0, 0)};
  std::vector<double> d, e;
  householder_tridiagonalize(a, d, e);
  implicit_ql(d, e, a);
  return sorted(std::move(d), a);
}

SymmetricEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> off) {
  const std::size_t n = diag.size();
  if (n == 0) return {{}, Tensor(0, 0)};
  if (off.size() + 1 != n) throw ShapeError("tridiagonal_eigen: off-diagonal length must be n-1");
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = off[i - 1];
  Tensor z(n, n);
  for (std::size_t i = 0; i < n; ++i) z(i, i) = 1.0;
  implicit_ql(diag, e, z);
  return sorted(std::move(diag), z);
}

}  // namespace graphpae
