#include "svol/optimizer.hpp"

#include <cmath>

namespace svol {

AdamW::AdamW(AdamWConfig cfg, const std::vector<Tensor>& params) : cfg_(cfg) {
    state_.m.reserve(params.size());
    state_.v.reserve(params.size());
    for (const Tensor& p : params) {
        state_.m.emplace_back(p.numel(), 0.0);
        state_.v.emplace_back(p.numel(), 0.0);
    }
}

void AdamW::step(std::vector<Tensor>& params) {
    if (params.size() != state_.m.size())
        throw ShapeError("adamw: parameter list changed size");
    state_.step += 1;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(state_.step));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(state_.step));
    for (size_t pi = 0; pi < params.size(); ++pi) {
        Tensor& p = params[pi];
        auto impl = p.impl();
        if (state_.m[pi].size() != impl->data.size())
            throw ShapeError("adamw: moment/parameter shape mismatch");
        const bool has_grad = !impl->grad.empty();
        double* w = impl->data.data();
        const double* g = has_grad ? impl->grad.data() : nullptr;
        double* m = state_.m[pi].data();
        double* v = state_.v[pi].data();
        for (size_t i = 0; i < impl->data.size(); ++i) {
            const double gi = has_grad ? g[i] : 0.0;
            m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * gi;
            v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * gi * gi;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            // Decoupled decay: both terms read the pre-update weight.
            w[i] -= cfg_.lr * (mhat / (std::sqrt(vhat) + cfg_.eps) + cfg_.weight_decay * w[i]);
        }
    }
}

void AdamW::zero_grad(std::vector<Tensor>& params) const {
    for (Tensor& p : params) p.zero_grad();
}

}  // namespace svol
