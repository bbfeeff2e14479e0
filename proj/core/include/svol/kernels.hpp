#pragma once

#include <cstddef>

namespace svol::kernels {

// Raw f64 kernels. No shape checking here; callers validate.

// C[m x n] = A[m x k] * B[k x n]   (+= when accumulate)
void gemm_nn(size_t m, size_t k, size_t n, const double* a, const double* b, double* c,
             bool accumulate = false);

// C[m x n] = A[m x k] * B[n x k]^T
void gemm_nt(size_t m, size_t k, size_t n, const double* a, const double* b, double* c,
             bool accumulate = false);

// C[k x n] = A[m x k]^T * B[m x n]
void gemm_tn(size_t m, size_t k, size_t n, const double* a, const double* b, double* c,
             bool accumulate = false);

void transpose(size_t m, size_t n, const double* a, double* at);

// y[i] = exp(x[i]). Inputs clamped to [-700, 700]; max relative error ~1e-14.
void vexp(size_t n, const double* x, double* y);

bool all_finite(const double* x, size_t n);

}  // namespace svol::kernels
