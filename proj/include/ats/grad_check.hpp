#pragma once

#include <functional>
#include <vector>

#include "ats/optim.hpp"

namespace ats {

/// Compares the analytic gradients already stored in each Parameter::grad
/// against central finite differences of loss_fn, coordinate by coordinate.
/// loss_fn must re-evaluate the loss from the parameters' current values.
/// Returns the max relative error |a - n| / max(|a|, |n|, 1e-8).
double grad_check(const std::function<double()>& loss_fn,
                  const std::vector<Parameter*>& params, double epsilon);

}  // namespace ats
