#pragma once

#include <functional>
#include <span>
#include <vector>

namespace arnli::learn {

using LossFn = std::function<double(std::span<const double>)>;

// Central differences (L(p + h e_i) - L(p - h e_i)) / 2h against `analytic`.
// Returns max_i |a_i - n_i| / max(|a_i| + |n_i|, 1e-8).
double finite_difference_check(const LossFn& loss, std::span<const double> params,
                               std::span<const double> analytic, double step = 1e-5);

}  // namespace arnli::learn
