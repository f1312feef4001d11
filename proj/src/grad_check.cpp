#include "ats/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace ats {

double grad_check(const std::function<double()>& loss_fn,
                  const std::vector<Parameter*>& params, double epsilon) {
  double max_rel = 0.0;
  for (Parameter* p : params) {
    for (std::size_t k = 0; k < p->value.size(); ++k) {
      double& theta = p->value.data()[k];
      const double saved = theta;
      theta = saved + epsilon;
      const double up = loss_fn();
      theta = saved - epsilon;
      const double down = loss_fn();
      theta = saved;
      const double numeric = (up - down) / (2.0 * epsilon);
      const double analytic = p->grad.data()[k];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      max_rel = std::max(max_rel, std::abs(analytic - numeric) / denom);
    }
  }
  return max_rel;
}

}  // namespace ats
