#pragma once

#include "bswarm/types.hpp"

namespace bswarm {

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending and
/// eigenvectors stored column-wise in matching order.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
  int sweeps = 0;
};

/// Cyclic Jacobi rotations with a fixed row-by-row sweep order. Stops once
/// the off-diagonal Frobenius norm drops below tol * max(1, ||A||_F).
/// The input is symmetrized as (A + A^T) / 2 first.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-12, int max_sweeps = 100);

/// Moore-Penrose inverse of a symmetric matrix from its eigendecomposition.
/// Eigenvalues with |lambda| < rel_cut * max|lambda| are treated as zero.
Matrix pseudo_inverse_symmetric(const Matrix& a, double rel_cut = 1e-9);

double max_abs(const Matrix& a);

/// Max row sum of absolute values.
double inf_norm(const Matrix& a);

}  // namespace bswarm
