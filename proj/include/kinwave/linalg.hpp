#pragma once

#include <cstddef>
#include <vector>

namespace kinwave {

struct NullspaceResult {
  std::vector<double> x;    // unit-norm null direction
  double pivot_ratio = 0.0; // |smallest pivot| / |largest pivot|
  bool used_svd = false;
};

// Null direction of a square matrix of expected rank n-1 (row-major storage).
// Full-pivot Gaussian elimination; when the pivot sequence cannot separate
// rank n-1 from deeper deficiency (second-smallest pivot ratio below 1e-8)
// a one-sided Jacobi SVD decides. Throws NumericalError when the null space
// is not one-dimensional.
NullspaceResult nullspace_rank_deficient_1(std::vector<double> a,
                                           std::size_t n);

}  // namespace kinwave
