#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "svol/error.hpp"

namespace svol {

using Shape = std::vector<size_t>;

size_t shape_numel(const Shape& s);
std::string shape_str(const Shape& s);

struct TensorImpl {
    Shape shape;
    std::vector<double> data;
    std::vector<double> grad;  // empty until first accumulation
    bool requires_grad = false;

    void ensure_grad() {
        if (grad.empty()) grad.assign(data.size(), 0.0);
    }
};

// Dense row-major array of f64 with an optional gradient buffer. Cheap to
// copy (shared handle). Values are written once by the op that creates the
// tensor and treated as immutable afterwards.
class Tensor {
public:
    Tensor() = default;

    static Tensor zeros(Shape shape);
    static Tensor full(Shape shape, double value);
    static Tensor from(Shape shape, std::vector<double> data);
    static Tensor scalar(double value);

    bool defined() const { return impl_ != nullptr; }
    const Shape& shape() const { return impl_->shape; }
    size_t numel() const { return impl_->data.size(); }
    size_t rank() const { return impl_->shape.size(); }

    // 2D helpers; a rank-1 tensor is treated as a single row.
    size_t rows() const;
    size_t cols() const;

    std::span<const double> values() const { return impl_->data; }
    std::span<double> mutable_values() { return impl_->data; }
    double at(size_t i) const { return impl_->data[i]; }
    double item() const;

    bool requires_grad() const { return impl_->requires_grad; }
    void set_requires_grad(bool rq) { impl_->requires_grad = rq; }

    bool has_grad() const { return !impl_->grad.empty(); }
    std::span<const double> grad() const;
    void zero_grad() { impl_->grad.clear(); }

    bool all_finite() const;
    void check_finite(const std::string& what) const;

    std::shared_ptr<TensorImpl> impl() const { return impl_; }

private:
    explicit Tensor(std::shared_ptr<TensorImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<TensorImpl> impl_;
};

// Recorded operation tape for reverse-mode differentiation. Ops push a
// backward closure when a tape is active and an input requires grad.
// One tape per training step; cleared after the optimizer update.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    static Tape* current();

    void record(std::function<void()> backward_fn) { nodes_.push_back(std::move(backward_fn)); }

    // Seeds d(root)/d(root) = 1 and walks the tape in reverse. root must be
    // scalar. Gradients accumulate into each tensor's grad buffer.
    void backward(const Tensor& root);

    void clear() { nodes_.clear(); }
    size_t size() const { return nodes_.size(); }

private:
    friend class TapeScope;
    std::vector<std::function<void()>> nodes_;
};

// RAII activation of a tape on the current thread.
class TapeScope {
public:
    explicit TapeScope(Tape& tape);
    ~TapeScope();
    TapeScope(const TapeScope&) = delete;
    TapeScope& operator=(const TapeScope&) = delete;

private:
    Tape* prev_;
};

// True when a tape is active and any argument requires grad.
bool grad_enabled(const Tensor& a);
bool grad_enabled(const Tensor& a, const Tensor& b);
bool grad_enabled(const Tensor& a, const Tensor& b, const Tensor& c);

}  // namespace svol
