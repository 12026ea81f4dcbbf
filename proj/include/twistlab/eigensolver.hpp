#pragma once

#include <Eigen/Sparse>
#include <vector>

namespace twistlab::numerics {

using SparseReal = Eigen::SparseMatrix<double>;

// All eigenvalues of a symmetric sparse matrix via dense decomposition.
// Intended for dimensions up to a few thousand.
std::vector<double> dense_eigenvalues(const SparseReal& A);

// The k smallest eigenvalues of a symmetric positive semidefinite sparse
// matrix, by shift-inverted Lanczos with full reorthogonalization on a
// factorization of A - sigma I with sigma below the spectrum.  Accurate for
// the well-separated low end; k is capped at the dimension.
std::vector<double> lowest_eigenvalues(const SparseReal& A, int k);

// Number of eigenvalues <= threshold (PSD matrices).  Internally extends the
// Lanczos window until an eigenvalue above the threshold is seen.
int count_below(const SparseReal& A, double threshold);

// Smallest eigenvalue strictly above the threshold.
double smallest_above(const SparseReal& A, double threshold);

}  // namespace twistlab::numerics
