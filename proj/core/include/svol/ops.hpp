#pragma once

#include <span>
#include <vector>

#include "svol/rng.hpp"
#include "svol/tensor.hpp"

namespace svol {

// Differentiable primitive operations. Each op computes its value eagerly
// and, when a tape is active and an input requires grad, records a backward
// closure implementing the standard adjoint rule.

// -------------------- matrix ops --------------------
Tensor matmul(const Tensor& a, const Tensor& b);      // [m x k] * [k x n]
Tensor matmul_nt(const Tensor& a, const Tensor& b);   // [m x k] * [n x k]^T

// -------------------- normalization --------------------
Tensor softmax(const Tensor& x, int axis);
// Per-row zero mean / unit variance (population), eps inside the sqrt.
Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

// -------------------- elementwise --------------------
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor div(const Tensor& a, const Tensor& b);
Tensor add_bias(const Tensor& x, const Tensor& bias);  // bias broadcast over rows
Tensor scale(const Tensor& x, double c);
Tensor add_const(const Tensor& x, double c);
Tensor rsub_const(double c, const Tensor& x);          // c - x
Tensor sigmoid(const Tensor& x);
Tensor relu(const Tensor& x);
Tensor log(const Tensor& x);
Tensor abs(const Tensor& x);
Tensor min_ew(const Tensor& a, const Tensor& b);
Tensor max_ew(const Tensor& a, const Tensor& b);
Tensor clamp(const Tensor& x, double lo, double hi);

// -------------------- structure --------------------
Tensor concat(std::span<const Tensor> parts, int axis);
Tensor concat(const Tensor& a, const Tensor& b, int axis);
Tensor slice_cols(const Tensor& x, size_t c0, size_t c1);
Tensor slice_rows(const Tensor& x, size_t r0, size_t r1);
Tensor gather_rows(const Tensor& x, std::span<const size_t> indices);
Tensor reshape(const Tensor& x, Shape shape);

// -------------------- reductions --------------------
Tensor sum(const Tensor& x);
Tensor mean_all(const Tensor& x);
Tensor mean(const Tensor& x, int axis);  // 2D: axis 0 -> [cols], axis 1 -> [rows]

// -------------------- regularization --------------------
// Inverted dropout; identity when rate == 0. Mask drawn from rng.
Tensor dropout(const Tensor& x, double rate, Rng& rng);

}  // namespace svol
