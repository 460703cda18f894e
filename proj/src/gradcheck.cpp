#include "arnli/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "arnli/errors.hpp"

namespace arnli::learn {

double finite_difference_check(const LossFn& loss, std::span<const double> params,
                               std::span<const double> analytic, double step) {
  if (params.size() != analytic.size()) throw Error("gradient length differs from parameters");
  std::vector<double> p(params.begin(), params.end());
  double worst = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double saved = p[i];
    p[i] = saved + step;
    const double up = loss(p);
    p[i] = saved - step;
    const double down = loss(p);
    p[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double denom = std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-8);
    worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
  }
  return worst;
}

}  // namespace arnli::learn
