#pragma once

#include <functional>

#include "svol/tensor.hpp"

namespace svol {

// Compares the reverse-mode gradient of a scalar-valued function against
// central finite differences, component by component. Returns the maximum
// relative error with denominator max(|analytic|, |numeric|, 1e-8).
//
// f must be deterministic and evaluable at x +- h perturbations.
double grad_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x,
                  double h = 1e-6);

}  // namespace svol
