#pragma once

#include <vector>

#include "graphpae/tensor.hpp"

namespace graphpae {

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending, eigenvectors
/// as the columns of `vectors`.
struct SymmetricEigen {
  std::vector<double> values;
  Tensor vectors;
};

/// Householder reduction to tridiagonal form followed by implicit-shift QL.
/// O(n^3); intended for n up to a few thousand. Throws NumericalError if QL
/// needs more than 60 sweeps for one eigenvalue.
SymmetricEigen dense_symmetric_eigen(Tensor a);

/// Eigenpairs of the symmetric tridiagonal matrix with the given diagonal and
/// sub-diagonal (off.size() == diag.size() - 1). Ascending.
SymmetricEigen tridiagonal_eigen(std::vector<double> diag, std::vector<double> off);

}  // namespace graphpae
