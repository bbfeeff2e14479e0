#include "svol/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

namespace svol::kernels {

void gemm_nn(size_t m, size_t k, size_t n, const double* a, const double* b, double* c,
             bool accumulate) {
    // i-k-j order: the inner loop runs over contiguous rows of B and C.
    for (size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        if (!accumulate) {
            std::memset(crow, 0, n * sizeof(double));
        }
        const double* arow = a + i * k;
        for (size_t kk = 0; kk < k; ++kk) {
            const double av = arow[kk];
            const double* brow = b + kk * n;
            for (size_t j = 0; j < n; ++j) {
                crow[j] += av * brow[j];
            }
        }
    }
}

void transpose(size_t m, size_t n, const double* a, double* at) {
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) at[j * m + i] = a[i * n + j];
}

void gemm_nt(size_t m, size_t k, size_t n, const double* a, const double* b, double* c,
             bool accumulate) {
    std::vector<double> bt(k * n);
    transpose(n, k, b, bt.data());
    gemm_nn(m, k, n, a, bt.data(), c, accumulate);
}

void gemm_tn(size_t m, size_t k, size_t n, const double* a, const double* b, double* c,
             bool accumulate) {
    std::vector<double> at(k * m);
    transpose(m, k, a, at.data());
    gemm_nn(k, m, n, at.data(), b, c, accumulate);
}

void vexp(size_t n, const double* x, double* y) {
    // Range reduction x = k*ln2 + r with |r| <= ln2/2, then a degree-12
    // Taylor polynomial for exp(r) and a 2^k exponent splice. Branch-free
    // so the loop auto-vectorizes.
    constexpr double kLog2e = 1.4426950408889634074;
    constexpr double kLn2Hi = 6.93147180369123816490e-01;
    constexpr double kLn2Lo = 1.90821492927058770002e-10;
    for (size_t i = 0; i < n; ++i) {
        double v = x[i];
        v = v > 700.0 ? 700.0 : v;
        v = v < -700.0 ? -700.0 : v;
        const double kd = std::rint(v * kLog2e);
        double r = v - kd * kLn2Hi;
        r -= kd * kLn2Lo;
        double p = 1.0 / 479001600.0;  // 1/12!
        p = p * r + 1.0 / 39916800.0;
        p = p * r + 1.0 / 3628800.0;
        p = p * r + 1.0 / 362880.0;
        p = p * r + 1.0 / 40320.0;
        p = p * r + 1.0 / 5040.0;
        p = p * r + 1.0 / 720.0;
        p = p * r + 1.0 / 120.0;
        p = p * r + 1.0 / 24.0;
        p = p * r + 1.0 / 6.0;
        p = p * r + 0.5;
        p = p * r + 1.0;
        p = p * r + 1.0;
        const int64_t ki = static_cast<int64_t>(kd);
        const double scale = std::bit_cast<double>((ki + 1023) << 52);
        y[i] = p * scale;
    }
}

bool all_finite(const double* x, size_t n) {
    // Summing moves the finiteness test out of the loop so it vectorizes.
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += x[i] * 0.0;
    return acc == 0.0;
}

}  // namespace svol::kernels
