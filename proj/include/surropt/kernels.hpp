#ifndef SURROPT_KERNELS_HPP
#define SURROPT_KERNELS_HPP

#include "surropt/common.hpp"
#include "surropt/tags.hpp"

// Data-parallel inner loops shared by the surrogate and sampling modules.
// Each kernel has an OpenMP version and a serial reference under
// kernels::serial; the two are element-for-element identical arithmetic,
// so tests compare them bitwise. bench/bench_kernels times them.

namespace surropt::kernels {

/// Per row of A, the minimum Euclidean distance to any row of B.
/// B with zero rows yields +inf entries.
Vector min_distances(const Matrix& A, const Matrix& B);

/// phi(||x_i - c_j||) for every (row of X, row of centers) pair.
Matrix rbf_phi(const Matrix& X, const Matrix& centers, RbfKernel kernel);

/// Radial kernel value at distance r >= 0 (thin-plate defines phi(0)=0).
double phi(double r, RbfKernel kernel);

namespace serial {
Vector min_distances(const Matrix& A, const Matrix& B);
Matrix rbf_phi(const Matrix& X, const Matrix& centers, RbfKernel kernel);
}  // namespace serial

}  // namespace surropt::kernels

#endif
