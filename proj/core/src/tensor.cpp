#include "svol/tensor.hpp"

#include <sstream>

#include "svol/kernels.hpp"

namespace svol {

size_t shape_numel(const Shape& s) {
    size_t n = 1;
    for (size_t d : s) n *= d;
    return n;
}

std::string shape_str(const Shape& s) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < s.size(); ++i) os << (i ? "x" : "") << s[i];
    os << "]";
    return os.str();
}

Tensor Tensor::zeros(Shape shape) {
    auto impl = std::make_shared<TensorImpl>();
    impl->data.assign(shape_numel(shape), 0.0);
    impl->shape = std::move(shape);
    return Tensor(std::move(impl));
}

Tensor Tensor::full(Shape shape, double value) {
    auto impl = std::make_shared<TensorImpl>();
    impl->data.assign(shape_numel(shape), value);
    impl->shape = std::move(shape);
    return Tensor(std::move(impl));
}

Tensor Tensor::from(Shape shape, std::vector<double> data) {
    if (shape_numel(shape) != data.size())
        throw ShapeError("from: " + shape_str(shape) + " does not hold " +
                         std::to_string(data.size()) + " values");
    auto impl = std::make_shared<TensorImpl>();
    impl->shape = std::move(shape);
    impl->data = std::move(data);
    return Tensor(std::move(impl));
}

Tensor Tensor::scalar(double value) { return from({1}, {value}); }

size_t Tensor::rows() const {
    const Shape& s = impl_->shape;
    if (s.size() == 2) return s[0];
    if (s.size() == 1) return 1;
    throw ShapeError("rows: rank-" + std::to_string(s.size()) + " tensor is not 2D");
}

size_t Tensor::cols() const {
    const Shape& s = impl_->shape;
    if (s.size() == 2) return s[1];
    if (s.size() == 1) return s[0];
    throw ShapeError("cols: rank-" + std::to_string(s.size()) + " tensor is not 2D");
}

double Tensor::item() const {
    if (numel() != 1) throw ShapeError("item: tensor " + shape_str(shape()) + " is not scalar");
    return impl_->data[0];
}

std::span<const double> Tensor::grad() const {
    if (impl_->grad.empty())
        throw NumericError("grad: no gradient has been accumulated for this tensor");
    return impl_->grad;
}

bool Tensor::all_finite() const {
    return kernels::all_finite(impl_->data.data(), impl_->data.size());
}

void Tensor::check_finite(const std::string& what) const {
    if (!all_finite()) throw NumericError(what + ": non-finite value in tensor " + shape_str(shape()));
}

namespace {
thread_local Tape* g_current_tape = nullptr;
}

Tape* Tape::current() { return g_current_tape; }

void Tape::backward(const Tensor& root) {
    if (root.numel() != 1)
        throw ShapeError("backward: root must be scalar, got " + shape_str(root.shape()));
    auto impl = root.impl();
    impl->ensure_grad();
    impl->grad[0] = 1.0;
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) (*it)();
}

TapeScope::TapeScope(Tape& tape) : prev_(g_current_tape) { g_current_tape = &tape; }

TapeScope::~TapeScope() { g_current_tape = prev_; }

bool grad_enabled(const Tensor& a) { return Tape::current() != nullptr && a.requires_grad(); }

bool grad_enabled(const Tensor& a, const Tensor& b) {
    return Tape::current() != nullptr && (a.requires_grad() || b.requires_grad());
}

bool grad_enabled(const Tensor& a, const Tensor& b, const Tensor& c) {
    return Tape::current() != nullptr &&
           (a.requires_grad() || b.requires_grad() || c.requires_grad());
}

}  // namespace svol
