#pragma once

// Independent reference implementations used as test oracles. Everything in
// this header is written as plain scalar loops against the published
// definitions and must stay independent of the library code paths it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace oracle {

// Plain triple-loop matrix product.
inline std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                                  size_t m, size_t k, size_t n) {
    std::vector<double> c(m * n, 0.0);
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (size_t kk = 0; kk < k; ++kk) s += a[i * k + kk] * b[kk * n + j];
            c[i * n + j] = s;
        }
    return c;
}

// Scalar softmax of one row using std::exp.
inline std::vector<double> softmax_row(const std::vector<double>& x) {
    double mx = *std::max_element(x.begin(), x.end());
    std::vector<double> y(x.size());
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        y[i] = std::exp(x[i] - mx);
        s += y[i];
    }
    for (double& v : y) v /= s;
    return y;
}

// Scalar layer norm of one row: population mean/variance, eps in the sqrt.
inline std::vector<double> layer_norm_row(const std::vector<double>& x,
                                          const std::vector<double>& gain,
                                          const std::vector<double>& bias, double eps) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= n;
    std::vector<double> y(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        y[i] = gain[i] * (x[i] - mean) / std::sqrt(var + eps) + bias[i];
    return y;
}

// One AdamW update on a scalar weight, following the published rule:
// decoupled decay, bias-corrected moments.
struct AdamWScalarRef {
    double m = 0.0, v = 0.0;
    long t = 0;

    double step(double w, double g, double lr, double wd, double beta1 = 0.9,
                double beta2 = 0.999, double eps = 1e-8) {
        t += 1;
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g * g;
        const double mhat = m / (1.0 - std::pow(beta1, static_cast<double>(t)));
        const double vhat = v / (1.0 - std::pow(beta2, static_cast<double>(t)));
        return w - lr * mhat / (std::sqrt(vhat) + eps) - lr * wd * w;
    }
};

// Area-arithmetic gIoU loss oracle on corner boxes (x1,y1,x2,y2).
inline double giou_loss_corners(double ax1, double ay1, double ax2, double ay2, double bx1,
                                double by1, double bx2, double by2) {
    const double eps = 1e-9;
    const double inter_w = std::max(0.0, std::min(ax2, bx2) - std::max(ax1, bx1));
    const double inter_h = std::max(0.0, std::min(ay2, by2) - std::max(ay1, by1));
    const double inter = inter_w * inter_h;
    const double area_a = (ax2 - ax1) * (ay2 - ay1);
    const double area_b = (bx2 - bx1) * (by2 - by1);
    const double uni = area_a + area_b - inter;
    const double hull = (std::max(ax2, bx2) - std::min(ax1, bx1)) *
                        (std::max(ay2, by2) - std::min(ay1, by1));
    const double iou = inter / (uni + eps);
    const double giou = iou - (hull - uni) / (hull + eps);
    return 1.0 - giou;
}

// gIoU loss oracle on (cx, cy, w, h) boxes clamped into the unit frame.
inline double giou_loss_cxcywh(const double* a, const double* b) {
    auto cl = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    return giou_loss_corners(cl(a[0] - a[2] / 2), cl(a[1] - a[3] / 2), cl(a[0] + a[2] / 2),
                             cl(a[1] + a[3] / 2), cl(b[0] - b[2] / 2), cl(b[1] - b[3] / 2),
                             cl(b[0] + b[2] / 2), cl(b[1] + b[3] / 2));
}

inline double iou_cxcywh(const double* a, const double* b) {
    auto cl = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    const double ax1 = cl(a[0] - a[2] / 2), ay1 = cl(a[1] - a[3] / 2);
    const double ax2 = cl(a[0] + a[2] / 2), ay2 = cl(a[1] + a[3] / 2);
    const double bx1 = cl(b[0] - b[2] / 2), by1 = cl(b[1] - b[3] / 2);
    const double bx2 = cl(b[0] + b[2] / 2), by2 = cl(b[1] + b[3] / 2);
    const double iw = std::max(0.0, std::min(ax2, bx2) - std::max(ax1, bx1));
    const double ih = std::max(0.0, std::min(ay2, by2) - std::max(ay1, by1));
    const double inter = iw * ih;
    const double uni = (ax2 - ax1) * (ay2 - ay1) + (bx2 - bx1) * (by2 - by1) - inter;
    return inter / (uni + 1e-9);
}

// Exhaustive minimum-cost assignment of n rows to n columns.
// Returns (best cost, best column-per-row), scanning permutations in
// lexicographic order so the first optimum found is deterministic.
inline std::pair<double, std::vector<int>> brute_force_assignment(
    const std::vector<double>& cost, size_t n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = 1e300;
    do {
        double c = 0.0;
        for (size_t i = 0; i < n; ++i) c += cost[i * n + perm[i]];
        if (c < best_cost - 1e-15) {
            best_cost = c;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best_cost, best};
}

// Brute-force minimum over all injections of k ground truths into n slots,
// where cost[slot * k + gt] prices a (slot, gt) pairing and unmatched slots
// are free. Used against the padded square Hungarian solve.
inline double brute_force_injection(const std::vector<double>& cost, size_t n_slots, size_t k) {
    std::vector<int> slots(n_slots);
    std::iota(slots.begin(), slots.end(), 0);
    std::vector<int> pick(k);
    double best = 1e300;
    // Enumerate ordered k-subsets of slots (assignment of each gt to a slot).
    std::vector<int> idx(k, 0);
    if (k == 0) return 0.0;
    while (true) {
        bool distinct = true;
        for (size_t i = 0; i < k && distinct; ++i)
            for (size_t j = i + 1; j < k; ++j)
                if (idx[i] == idx[j]) {
                    distinct = false;
                    break;
                }
        if (distinct) {
            double c = 0.0;
            for (size_t g = 0; g < k; ++g) c += cost[static_cast<size_t>(idx[g]) * k + g];
            best = std::min(best, c);
        }
        size_t d = 0;
        while (d < k) {
            idx[d] += 1;
            if (idx[d] < static_cast<int>(n_slots)) break;
            idx[d] = 0;
            d += 1;
        }
        if (d == k) break;
    }
    return best;
}

}  // namespace oracle
