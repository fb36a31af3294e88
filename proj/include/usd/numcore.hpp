#pragma once

#include <cstddef>
#include <vector>

#include "usd/complex_matrix.hpp"

namespace usd {

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns, same order
};

// Cyclic Jacobi diagonalization of a complex Hermitian matrix. Dimensions in
// this toolkit stay tiny (a few dozen at most), where Jacobi is simple and
// converges unconditionally.
//
// Throws NotHermitian when ||H - H^+||_F > 1e-8 max(1, ||H||_F), and
// NoConvergence when the off-diagonal mass has not vanished after
// max_sweeps sweeps.
HermitianEig hermitian_eig(const ComplexMatrix& h, int max_sweeps = 100);

// Hermitian PSD square root via eigendecomposition.
//
// Eigenvalues in [-neg_tol, 0) are treated as round-off and clamped to zero;
// anything below -neg_tol throws NotPSD. Eigenvalues in [0, zero_clamp) are
// flattened to exactly zero as well: the square root would otherwise turn
// eps-sized round-off into sqrt(eps)-sized output, and callers sitting on
// the feasibility boundary want an operator with an exact kernel.
ComplexMatrix psd_sqrt(const ComplexMatrix& h, double neg_tol = 1e-10,
                       double zero_clamp = 1e-13);

// Number of singular values above rel_tol * (largest singular value),
// computed by one-sided Jacobi orthogonalization. The zero matrix has
// rank 0.
std::size_t numerical_rank(const ComplexMatrix& m, double rel_tol = 1e-10);

}  // namespace usd
