#pragma once

#include <vector>

#include "fdam/tensor.hpp"

namespace fdam {

// c = a * b for rank-2 tensors, [R x K] * [K x C] -> [R x C].
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& m);

// Row-wise softmax with per-row max subtraction for stability.
// Every output row is nonnegative and sums to 1.
Tensor softmax_rows(const Tensor& m);

// Singular values of m, descending. One-sided Jacobi on the (possibly
// transposed) tall matrix; capped at 100 sweeps with a 1e-12 relative
// orthogonality threshold. Throws std::runtime_error if the sweep cap is
// hit before convergence.
std::vector<double> singular_values(const Tensor& m);

namespace reference {
// Serial twin of matmul (the public one may use OpenMP).
Tensor matmul(const Tensor& a, const Tensor& b);
}  // namespace reference

}  // namespace fdam
