#include "svol/grad_check.hpp"

#include <cmath>
#include <vector>

namespace svol {

double grad_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x, double h) {
    // Analytic pass.
    Tensor probe = Tensor::from(x.shape(), {x.values().begin(), x.values().end()});
    probe.set_requires_grad(true);
    std::vector<double> analytic(x.numel(), 0.0);
    {
        Tape tape;
        TapeScope scope(tape);
        Tensor y = f(probe);
        if (y.numel() != 1) throw ShapeError("grad_check: f must return a scalar");
        if (!y.all_finite()) throw NumericError("grad_check: non-finite function value");
        tape.backward(y);
        if (probe.has_grad()) {
            auto g = probe.grad();
            analytic.assign(g.begin(), g.end());
        }
    }

    // Numeric pass, one central difference per component.
    double max_rel = 0.0;
    std::vector<double> base(x.values().begin(), x.values().end());
    for (size_t i = 0; i < base.size(); ++i) {
        std::vector<double> vp = base, vm = base;
        vp[i] += h;
        vm[i] -= h;
        const double fp = f(Tensor::from(x.shape(), std::move(vp))).item();
        const double fm = f(Tensor::from(x.shape(), std::move(vm))).item();
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw NumericError("grad_check: non-finite perturbed value");
        const double numeric = (fp - fm) / (2.0 * h);
        const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-8});
        max_rel = std::max(max_rel, std::fabs(analytic[i] - numeric) / denom);
    }
    return max_rel;
}

}  // namespace svol
