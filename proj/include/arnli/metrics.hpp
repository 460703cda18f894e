#pragma once

#include <array>
#include <vector>

#include "arnli/label.hpp"

namespace arnli::learn {

struct Metrics {
  std::size_t total = 0;
  double accuracy = 0;
  double macro_f1 = 0;
  std::array<double, kNumLabels> precision{};
  std::array<double, kNumLabels> recall{};
  std::array<double, kNumLabels> f1{};
  std::array<std::size_t, kNumLabels> support{};
  // confusion[gold][predicted], label order.
  std::array<std::array<std::size_t, kNumLabels>, kNumLabels> confusion{};
};

// Precision or recall with an empty denominator is 0, and so is F1 when both
// are 0. Throws Error for an empty or length-mismatched input.
Metrics evaluate(const std::vector<Label>& gold, const std::vector<Label>& predicted);

}  // namespace arnli::learn
