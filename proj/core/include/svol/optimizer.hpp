#pragma once

#include <cstdint>
#include <vector>

#include "svol/tensor.hpp"

namespace svol {

struct AdamWConfig {
    double lr = 1e-4;
    double weight_decay = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Per-parameter moment estimates plus the shared step counter.
struct OptimizerState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    int64_t step = 0;
};

// AdamW with decoupled weight decay: the decay term lr*wd*w is applied
// separately from the bias-corrected adaptive step.
class AdamW {
public:
    AdamW(AdamWConfig cfg, const std::vector<Tensor>& params);

    // Applies one update using each parameter's accumulated gradient.
    // Parameters without a gradient buffer are treated as zero-gradient.
    void step(std::vector<Tensor>& params);

    void zero_grad(std::vector<Tensor>& params) const;

    double lr() const { return cfg_.lr; }
    void set_lr(double lr) { cfg_.lr = lr; }
    int64_t step_count() const { return state_.step; }

    OptimizerState& state() { return state_; }
    const AdamWConfig& config() const { return cfg_; }

private:
    AdamWConfig cfg_;
    OptimizerState state_;
};

}  // namespace svol
