#include "svol/ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "svol/kernels.hpp"

namespace svol {

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape())
        throw ShapeError(std::string(op) + ": " + shape_str(a.shape()) + " vs " +
                         shape_str(b.shape()));
}

void check_2d(const Tensor& x, const char* op) {
    if (x.rank() != 2) throw ShapeError(std::string(op) + ": expected 2D, got " + shape_str(x.shape()));
}

void record(std::function<void()> fn) { Tape::current()->record(std::move(fn)); }

using ImplPtr = std::shared_ptr<TensorImpl>;

}  // namespace

// -------------------- matrix ops --------------------

Tensor matmul(const Tensor& a, const Tensor& b) {
    check_2d(a, "matmul");
    check_2d(b, "matmul");
    const size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
    if (b.shape()[0] != k)
        throw ShapeError("matmul: inner dims " + shape_str(a.shape()) + " * " + shape_str(b.shape()));
    a.check_finite("matmul lhs");
    b.check_finite("matmul rhs");
    Tensor out = Tensor::zeros({m, n});
    kernels::gemm_nn(m, k, n, a.values().data(), b.values().data(), out.mutable_values().data());
    if (grad_enabled(a, b)) {
        out.set_requires_grad(true);
        record([ai = a.impl(), bi = b.impl(), oi = out.impl(), m, k, n] {
            if (oi->grad.empty()) return;
            if (ai->requires_grad) {
                ai->ensure_grad();
                kernels::gemm_nt(m, n, k, oi->grad.data(), bi->data.data(), ai->grad.data(), true);
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                kernels::gemm_tn(m, k, n, ai->data.data(), oi->grad.data(), bi->grad.data(), true);
            }
        });
    }
    return out;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    check_2d(a, "matmul_nt");
    check_2d(b, "matmul_nt");
    const size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[0];
    if (b.shape()[1] != k)
        throw ShapeError("matmul_nt: inner dims " + shape_str(a.shape()) + " * " +
                         shape_str(b.shape()) + "^T");
    a.check_finite("matmul_nt lhs");
    b.check_finite("matmul_nt rhs");
    Tensor out = Tensor::zeros({m, n});
    kernels::gemm_nt(m, k, n, a.values().data(), b.values().data(), out.mutable_values().data());
    if (grad_enabled(a, b)) {
        out.set_requires_grad(true);
        record([ai = a.impl(), bi = b.impl(), oi = out.impl(), m, k, n] {
            if (oi->grad.empty()) return;
            if (ai->requires_grad) {
                ai->ensure_grad();
                kernels::gemm_nn(m, n, k, oi->grad.data(), bi->data.data(), ai->grad.data(), true);
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                kernels::gemm_tn(m, n, k, oi->grad.data(), ai->data.data(), bi->grad.data(), true);
            }
        });
    }
    return out;
}

// -------------------- normalization --------------------

Tensor softmax(const Tensor& x, int axis) {
    if (x.rank() == 1) {
        if (axis != 0) throw ShapeError("softmax: axis " + std::to_string(axis) + " for 1D input");
        Tensor row = reshape(x, {1, x.numel()});
        return reshape(softmax(row, 1), x.shape());
    }
    check_2d(x, "softmax");
    if (axis != 0 && axis != 1)
        throw ShapeError("softmax: axis " + std::to_string(axis) + " out of range");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    Tensor out = Tensor::zeros(x.shape());
    const double* xd = x.values().data();
    double* yd = out.mutable_values().data();
    if (axis == 1) {
        for (size_t r = 0; r < rows; ++r) {
            const double* xr = xd + r * cols;
            double* yr = yd + r * cols;
            double mx = xr[0];
            for (size_t c = 1; c < cols; ++c) mx = std::max(mx, xr[c]);
            for (size_t c = 0; c < cols; ++c) yr[c] = xr[c] - mx;
            kernels::vexp(cols, yr, yr);
            double s = 0.0;
            for (size_t c = 0; c < cols; ++c) s += yr[c];
            const double inv = 1.0 / s;
            for (size_t c = 0; c < cols; ++c) yr[c] *= inv;
        }
    } else {
        std::vector<double> col(rows);
        for (size_t c = 0; c < cols; ++c) {
            double mx = xd[c];
            for (size_t r = 0; r < rows; ++r) {
                col[r] = xd[r * cols + c];
                mx = std::max(mx, col[r]);
            }
            for (size_t r = 0; r < rows; ++r) col[r] -= mx;
            kernels::vexp(rows, col.data(), col.data());
            double s = 0.0;
            for (size_t r = 0; r < rows; ++r) s += col[r];
            const double inv = 1.0 / s;
            for (size_t r = 0; r < rows; ++r) yd[r * cols + c] = col[r] * inv;
        }
    }
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl(), rows, cols, axis] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            const double* y = oi->data.data();
            const double* dy = oi->grad.data();
            double* dx = xi->grad.data();
            if (axis == 1) {
                for (size_t r = 0; r < rows; ++r) {
                    const double* yr = y + r * cols;
                    const double* dyr = dy + r * cols;
                    double dot = 0.0;
                    for (size_t c = 0; c < cols; ++c) dot += dyr[c] * yr[c];
                    double* dxr = dx + r * cols;
                    for (size_t c = 0; c < cols; ++c) dxr[c] += yr[c] * (dyr[c] - dot);
                }
            } else {
                for (size_t c = 0; c < cols; ++c) {
                    double dot = 0.0;
                    for (size_t r = 0; r < rows; ++r) dot += dy[r * cols + c] * y[r * cols + c];
                    for (size_t r = 0; r < rows; ++r)
                        dx[r * cols + c] += y[r * cols + c] * (dy[r * cols + c] - dot);
                }
            }
        });
    }
    return out;
}

Tensor layer_norm(const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
    check_2d(x, "layer_norm");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    if (gain.numel() != cols || bias.numel() != cols)
        throw ShapeError("layer_norm: gain/bias " + std::to_string(gain.numel()) + "/" +
                         std::to_string(bias.numel()) + " vs cols " + std::to_string(cols));
    Tensor out = Tensor::zeros(x.shape());
    // Saved for backward: normalized activations and per-row 1/sigma.
    auto xhat = std::make_shared<std::vector<double>>(rows * cols);
    auto inv_std = std::make_shared<std::vector<double>>(rows);
    const double* xd = x.values().data();
    const double* g = gain.values().data();
    const double* b = bias.values().data();
    double* yd = out.mutable_values().data();
    for (size_t r = 0; r < rows; ++r) {
        const double* xr = xd + r * cols;
        double mean = 0.0;
        for (size_t c = 0; c < cols; ++c) mean += xr[c];
        mean /= static_cast<double>(cols);
        double var = 0.0;
        for (size_t c = 0; c < cols; ++c) {
            const double d = xr[c] - mean;
            var += d * d;
        }
        var /= static_cast<double>(cols);
        const double is = 1.0 / std::sqrt(var + eps);
        (*inv_std)[r] = is;
        double* hr = xhat->data() + r * cols;
        double* yr = yd + r * cols;
        for (size_t c = 0; c < cols; ++c) {
            hr[c] = (xr[c] - mean) * is;
            yr[c] = g[c] * hr[c] + b[c];
        }
    }
    if (grad_enabled(x, gain, bias)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), gi = gain.impl(), bi = bias.impl(), oi = out.impl(), xhat, inv_std,
                rows, cols] {
            if (oi->grad.empty()) return;
            const double* dy = oi->grad.data();
            const double* g = gi->data.data();
            const double* h = xhat->data();
            for (size_t r = 0; r < rows; ++r) {
                const double* dyr = dy + r * cols;
                const double* hr = h + r * cols;
                if (xi->requires_grad) {
                    xi->ensure_grad();
                    double m1 = 0.0, m2 = 0.0;  // mean(g.dy), mean(g.dy.xhat)
                    for (size_t c = 0; c < cols; ++c) {
                        const double gd = g[c] * dyr[c];
                        m1 += gd;
                        m2 += gd * hr[c];
                    }
                    m1 /= static_cast<double>(cols);
                    m2 /= static_cast<double>(cols);
                    const double is = (*inv_std)[r];
                    double* dxr = xi->grad.data() + r * cols;
                    for (size_t c = 0; c < cols; ++c)
                        dxr[c] += is * (g[c] * dyr[c] - m1 - hr[c] * m2);
                }
                if (gi->requires_grad) {
                    gi->ensure_grad();
                    for (size_t c = 0; c < cols; ++c) gi->grad[c] += dyr[c] * hr[c];
                }
                if (bi->requires_grad) {
                    bi->ensure_grad();
                    for (size_t c = 0; c < cols; ++c) bi->grad[c] += dyr[c];
                }
            }
        });
    }
    return out;
}

// -------------------- elementwise helpers --------------------

namespace {

template <typename Fwd, typename Bwd>
Tensor binary_op(const Tensor& a, const Tensor& b, const char* name, Fwd fwd, Bwd bwd) {
    check_same_shape(a, b, name);
    const size_t n = a.numel();
    Tensor out = Tensor::zeros(a.shape());
    fwd(a.values().data(), b.values().data(), out.mutable_values().data(), n);
    if (grad_enabled(a, b)) {
        out.set_requires_grad(true);
        record([ai = a.impl(), bi = b.impl(), oi = out.impl(), bwd, n] {
            if (oi->grad.empty()) return;
            bwd(ai, bi, oi, n);
        });
    }
    return out;
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
    return binary_op(
        a, b, "add",
        [](const double* x, const double* y, double* z, size_t n) {
            for (size_t i = 0; i < n; ++i) z[i] = x[i] + y[i];
        },
        [](const ImplPtr& ai, const ImplPtr& bi, const ImplPtr& oi, size_t n) {
            const double* d = oi->grad.data();
            if (ai->requires_grad) {
                ai->ensure_grad();
                for (size_t i = 0; i < n; ++i) ai->grad[i] += d[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                for (size_t i = 0; i < n; ++i) bi->grad[i] += d[i];
            }
        });
}

Tensor sub(const Tensor& a, const Tensor& b) {
    return binary_op(
        a, b, "sub",
        [](const double* x, const double* y, double* z, size_t n) {
            for (size_t i = 0; i < n; ++i) z[i] = x[i] - y[i];
        },
        [](const ImplPtr& ai, const ImplPtr& bi, const ImplPtr& oi, size_t n) {
            const double* d = oi->grad.data();
            if (ai->requires_grad) {
                ai->ensure_grad();
                for (size_t i = 0; i < n; ++i) ai->grad[i] += d[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                for (size_t i = 0; i < n; ++i) bi->grad[i] -= d[i];
            }
        });
}

Tensor mul(const Tensor& a, const Tensor& b) {
    return binary_op(
        a, b, "mul",
        [](const double* x, const double* y, double* z, size_t n) {
            for (size_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
        },
        [](const ImplPtr& ai, const ImplPtr& bi, const ImplPtr& oi, size_t n) {
            const double* d = oi->grad.data();
            if (ai->requires_grad) {
                ai->ensure_grad();
                for (size_t i = 0; i < n; ++i) ai->grad[i] += d[i] * bi->data[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                for (size_t i = 0; i < n; ++i) bi->grad[i] += d[i] * ai->data[i];
            }
        });
}

Tensor div(const Tensor& a, const Tensor& b) {
    return binary_op(
        a, b, "div",
        [](const double* x, const double* y, double* z, size_t n) {
            for (size_t i = 0; i < n; ++i) z[i] = x[i] / y[i];
        },
        [](const ImplPtr& ai, const ImplPtr& bi, const ImplPtr& oi, size_t n) {
            const double* d = oi->grad.data();
            const double* y = bi->data.data();
            if (ai->requires_grad) {
                ai->ensure_grad();
                for (size_t i = 0; i < n; ++i) ai->grad[i] += d[i] / y[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                const double* z = oi->data.data();
                for (size_t i = 0; i < n; ++i) bi->grad[i] -= d[i] * z[i] / y[i];
            }
        });
}

Tensor add_bias(const Tensor& x, const Tensor& bias) {
    check_2d(x, "add_bias");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    if (bias.numel() != cols)
        throw ShapeError("add_bias: bias " + std::to_string(bias.numel()) + " vs cols " +
                         std::to_string(cols));
    Tensor out = Tensor::zeros(x.shape());
    const double* xd = x.values().data();
    const double* bd = bias.values().data();
    double* yd = out.mutable_values().data();
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) yd[r * cols + c] = xd[r * cols + c] + bd[c];
    if (grad_enabled(x, bias)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), bi = bias.impl(), oi = out.impl(), rows, cols] {
            if (oi->grad.empty()) return;
            const double* d = oi->grad.data();
            if (xi->requires_grad) {
                xi->ensure_grad();
                for (size_t i = 0; i < rows * cols; ++i) xi->grad[i] += d[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                for (size_t r = 0; r < rows; ++r)
                    for (size_t c = 0; c < cols; ++c) bi->grad[c] += d[r * cols + c];
            }
        });
    }
    return out;
}

namespace {

template <typename Fwd, typename Bwd>
Tensor unary_op(const Tensor& x, Fwd fwd, Bwd bwd) {
    const size_t n = x.numel();
    Tensor out = Tensor::zeros(x.shape());
    fwd(x.values().data(), out.mutable_values().data(), n);
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl(), bwd, n] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            bwd(xi, oi, n);
        });
    }
    return out;
}

}  // namespace

Tensor scale(const Tensor& x, double c) {
    return unary_op(
        x,
        [c](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = c * v[i];
        },
        [c](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            for (size_t i = 0; i < n; ++i) xi->grad[i] += c * oi->grad[i];
        });
}

Tensor add_const(const Tensor& x, double c) {
    return unary_op(
        x,
        [c](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = v[i] + c;
        },
        [](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            for (size_t i = 0; i < n; ++i) xi->grad[i] += oi->grad[i];
        });
}

Tensor rsub_const(double c, const Tensor& x) {
    return unary_op(
        x,
        [c](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = c - v[i];
        },
        [](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            for (size_t i = 0; i < n; ++i) xi->grad[i] -= oi->grad[i];
        });
}

Tensor sigmoid(const Tensor& x) {
    return unary_op(
        x,
        [](const double* v, double* y, size_t n) {
            // 1 / (1 + exp(-x)); vexp handles range clamping.
            for (size_t i = 0; i < n; ++i) y[i] = -v[i];
            kernels::vexp(n, y, y);
            for (size_t i = 0; i < n; ++i) y[i] = 1.0 / (1.0 + y[i]);
        },
        [](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            const double* y = oi->data.data();
            for (size_t i = 0; i < n; ++i) xi->grad[i] += oi->grad[i] * y[i] * (1.0 - y[i]);
        });
}

Tensor relu(const Tensor& x) {
    return unary_op(
        x,
        [](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = v[i] > 0.0 ? v[i] : 0.0;
        },
        [](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            const double* v = xi->data.data();
            for (size_t i = 0; i < n; ++i) xi->grad[i] += v[i] > 0.0 ? oi->grad[i] : 0.0;
        });
}

Tensor log(const Tensor& x) {
    return unary_op(
        x,
        [](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = std::log(v[i]);
        },
        [](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            const double* v = xi->data.data();
            for (size_t i = 0; i < n; ++i) xi->grad[i] += oi->grad[i] / v[i];
        });
}

Tensor abs(const Tensor& x) {
    return unary_op(
        x,
        [](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = std::fabs(v[i]);
        },
        [](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            const double* v = xi->data.data();
            for (size_t i = 0; i < n; ++i)
                xi->grad[i] += v[i] > 0.0 ? oi->grad[i] : (v[i] < 0.0 ? -oi->grad[i] : 0.0);
        });
}

Tensor min_ew(const Tensor& a, const Tensor& b) {
    return binary_op(
        a, b, "min_ew",
        [](const double* x, const double* y, double* z, size_t n) {
            for (size_t i = 0; i < n; ++i) z[i] = x[i] <= y[i] ? x[i] : y[i];
        },
        [](const ImplPtr& ai, const ImplPtr& bi, const ImplPtr& oi, size_t n) {
            const double* d = oi->grad.data();
            const double* x = ai->data.data();
            const double* y = bi->data.data();
            if (ai->requires_grad) {
                ai->ensure_grad();
                for (size_t i = 0; i < n; ++i)
                    if (x[i] <= y[i]) ai->grad[i] += d[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                for (size_t i = 0; i < n; ++i)
                    if (x[i] > y[i]) bi->grad[i] += d[i];
            }
        });
}

Tensor max_ew(const Tensor& a, const Tensor& b) {
    return binary_op(
        a, b, "max_ew",
        [](const double* x, const double* y, double* z, size_t n) {
            for (size_t i = 0; i < n; ++i) z[i] = x[i] >= y[i] ? x[i] : y[i];
        },
        [](const ImplPtr& ai, const ImplPtr& bi, const ImplPtr& oi, size_t n) {
            const double* d = oi->grad.data();
            const double* x = ai->data.data();
            const double* y = bi->data.data();
            if (ai->requires_grad) {
                ai->ensure_grad();
                for (size_t i = 0; i < n; ++i)
                    if (x[i] >= y[i]) ai->grad[i] += d[i];
            }
            if (bi->requires_grad) {
                bi->ensure_grad();
                for (size_t i = 0; i < n; ++i)
                    if (x[i] < y[i]) bi->grad[i] += d[i];
            }
        });
}

Tensor clamp(const Tensor& x, double lo, double hi) {
    return unary_op(
        x,
        [lo, hi](const double* v, double* y, size_t n) {
            for (size_t i = 0; i < n; ++i) y[i] = std::min(hi, std::max(lo, v[i]));
        },
        [lo, hi](const ImplPtr& xi, const ImplPtr& oi, size_t n) {
            const double* v = xi->data.data();
            for (size_t i = 0; i < n; ++i)
                if (v[i] >= lo && v[i] <= hi) xi->grad[i] += oi->grad[i];
        });
}

// -------------------- structure --------------------

Tensor concat(std::span<const Tensor> parts, int axis) {
    if (parts.empty()) throw ShapeError("concat: no inputs");
    if (parts[0].rank() == 1) {
        // Vector concat: stitch as a single row, then drop the row axis.
        if (axis != 0) throw ShapeError("concat: axis " + std::to_string(axis) + " for 1D input");
        std::vector<Tensor> rows;
        rows.reserve(parts.size());
        size_t total = 0;
        for (const Tensor& p : parts) {
            rows.push_back(reshape(p, {1, p.numel()}));
            total += p.numel();
        }
        return reshape(concat(std::span<const Tensor>(rows), 1), {total});
    }
    for (const Tensor& p : parts) check_2d(p, "concat");
    if (axis != 0 && axis != 1) throw ShapeError("concat: axis " + std::to_string(axis));
    size_t rows = parts[0].shape()[0], cols = parts[0].shape()[1];
    size_t total = 0;
    for (const Tensor& p : parts) {
        if (axis == 0) {
            if (p.shape()[1] != cols) throw ShapeError("concat: column mismatch");
            total += p.shape()[0];
        } else {
            if (p.shape()[0] != rows) throw ShapeError("concat: row mismatch");
            total += p.shape()[1];
        }
    }
    Tensor out = axis == 0 ? Tensor::zeros({total, cols}) : Tensor::zeros({rows, total});
    double* yd = out.mutable_values().data();
    bool any_grad = false;
    std::vector<ImplPtr> impls;
    impls.reserve(parts.size());
    size_t offset = 0;
    for (const Tensor& p : parts) {
        const double* pd = p.values().data();
        if (axis == 0) {
            std::memcpy(yd + offset * cols, pd, p.numel() * sizeof(double));
            offset += p.shape()[0];
        } else {
            const size_t pc = p.shape()[1];
            for (size_t r = 0; r < rows; ++r)
                std::memcpy(yd + r * total + offset, pd + r * pc, pc * sizeof(double));
            offset += pc;
        }
        any_grad = any_grad || p.requires_grad();
        impls.push_back(p.impl());
    }
    if (Tape::current() && any_grad) {
        out.set_requires_grad(true);
        record([impls = std::move(impls), oi = out.impl(), axis, rows, total] {
            if (oi->grad.empty()) return;
            const double* d = oi->grad.data();
            size_t offset = 0;
            for (const ImplPtr& pi : impls) {
                const size_t pr = pi->shape[0], pc = pi->shape[1];
                if (pi->requires_grad) {
                    pi->ensure_grad();
                    if (axis == 0) {
                        for (size_t i = 0; i < pr * pc; ++i) pi->grad[i] += d[offset * pc + i];
                    } else {
                        for (size_t r = 0; r < rows; ++r)
                            for (size_t c = 0; c < pc; ++c)
                                pi->grad[r * pc + c] += d[r * total + offset + c];
                    }
                }
                offset += axis == 0 ? pr : pc;
            }
        });
    }
    return out;
}

Tensor concat(const Tensor& a, const Tensor& b, int axis) {
    const Tensor parts[2] = {a, b};
    return concat(std::span<const Tensor>(parts, 2), axis);
}

Tensor slice_cols(const Tensor& x, size_t c0, size_t c1) {
    check_2d(x, "slice_cols");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    if (c0 >= c1 || c1 > cols)
        throw ShapeError("slice_cols: [" + std::to_string(c0) + "," + std::to_string(c1) +
                         ") of " + std::to_string(cols));
    const size_t w = c1 - c0;
    Tensor out = Tensor::zeros({rows, w});
    const double* xd = x.values().data();
    double* yd = out.mutable_values().data();
    for (size_t r = 0; r < rows; ++r)
        std::memcpy(yd + r * w, xd + r * cols + c0, w * sizeof(double));
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl(), rows, cols, c0, w] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            const double* d = oi->grad.data();
            for (size_t r = 0; r < rows; ++r)
                for (size_t c = 0; c < w; ++c) xi->grad[r * cols + c0 + c] += d[r * w + c];
        });
    }
    return out;
}

Tensor slice_rows(const Tensor& x, size_t r0, size_t r1) {
    check_2d(x, "slice_rows");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    if (r0 >= r1 || r1 > rows)
        throw ShapeError("slice_rows: [" + std::to_string(r0) + "," + std::to_string(r1) +
                         ") of " + std::to_string(rows));
    const size_t h = r1 - r0;
    Tensor out = Tensor::zeros({h, cols});
    std::memcpy(out.mutable_values().data(), x.values().data() + r0 * cols,
                h * cols * sizeof(double));
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl(), r0, cols, h] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            const double* d = oi->grad.data();
            for (size_t i = 0; i < h * cols; ++i) xi->grad[r0 * cols + i] += d[i];
        });
    }
    return out;
}

Tensor gather_rows(const Tensor& x, std::span<const size_t> indices) {
    check_2d(x, "gather_rows");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    Tensor out = Tensor::zeros({indices.size(), cols});
    double* yd = out.mutable_values().data();
    for (size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= rows)
            throw ShapeError("gather_rows: index " + std::to_string(indices[i]) + " out of " +
                             std::to_string(rows));
        std::memcpy(yd + i * cols, x.values().data() + indices[i] * cols, cols * sizeof(double));
    }
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        std::vector<size_t> idx(indices.begin(), indices.end());
        record([xi = x.impl(), oi = out.impl(), idx = std::move(idx), cols] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            const double* d = oi->grad.data();
            for (size_t i = 0; i < idx.size(); ++i)
                for (size_t c = 0; c < cols; ++c) xi->grad[idx[i] * cols + c] += d[i * cols + c];
        });
    }
    return out;
}

Tensor reshape(const Tensor& x, Shape shape) {
    if (shape_numel(shape) != x.numel())
        throw ShapeError("reshape: " + shape_str(x.shape()) + " -> " + shape_str(shape));
    Tensor out = Tensor::from(std::move(shape), {x.values().begin(), x.values().end()});
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl()] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            for (size_t i = 0; i < xi->grad.size(); ++i) xi->grad[i] += oi->grad[i];
        });
    }
    return out;
}

// -------------------- reductions --------------------

Tensor sum(const Tensor& x) {
    double s = 0.0;
    for (double v : x.values()) s += v;
    Tensor out = Tensor::scalar(s);
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl()] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            const double d = oi->grad[0];
            for (double& g : xi->grad) g += d;
        });
    }
    return out;
}

Tensor mean_all(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.numel())); }

Tensor mean(const Tensor& x, int axis) {
    check_2d(x, "mean");
    const size_t rows = x.shape()[0], cols = x.shape()[1];
    if (axis != 0 && axis != 1) throw ShapeError("mean: axis " + std::to_string(axis));
    const size_t out_n = axis == 0 ? cols : rows;
    const double denom = axis == 0 ? static_cast<double>(rows) : static_cast<double>(cols);
    Tensor out = Tensor::zeros({out_n});
    double* yd = out.mutable_values().data();
    const double* xd = x.values().data();
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) yd[axis == 0 ? c : r] += xd[r * cols + c];
    for (size_t i = 0; i < out_n; ++i) yd[i] /= denom;
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl(), rows, cols, axis, denom] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            const double* d = oi->grad.data();
            for (size_t r = 0; r < rows; ++r)
                for (size_t c = 0; c < cols; ++c)
                    xi->grad[r * cols + c] += d[axis == 0 ? c : r] / denom;
        });
    }
    return out;
}

// -------------------- regularization --------------------

Tensor dropout(const Tensor& x, double rate, Rng& rng) {
    if (rate < 0.0 || rate >= 1.0) throw ConfigError("dropout: rate must be in [0,1)");
    if (rate == 0.0) return x;
    const size_t n = x.numel();
    auto mask = std::make_shared<std::vector<double>>(n);
    const double keep_scale = 1.0 / (1.0 - rate);
    for (size_t i = 0; i < n; ++i) (*mask)[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    Tensor out = Tensor::zeros(x.shape());
    const double* xd = x.values().data();
    double* yd = out.mutable_values().data();
    for (size_t i = 0; i < n; ++i) yd[i] = xd[i] * (*mask)[i];
    if (grad_enabled(x)) {
        out.set_requires_grad(true);
        record([xi = x.impl(), oi = out.impl(), mask, n] {
            if (oi->grad.empty()) return;
            xi->ensure_grad();
            for (size_t i = 0; i < n; ++i) xi->grad[i] += oi->grad[i] * (*mask)[i];
        });
    }
    return out;
}

}  // namespace svol
