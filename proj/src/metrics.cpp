#include "arnli/metrics.hpp"

#include "arnli/errors.hpp"

namespace arnli::learn {

Metrics evaluate(const std::vector<Label>& gold, const std::vector<Label>& predicted) {
  if (gold.size() != predicted.size()) throw Error("gold and predicted label counts differ");
  if (gold.empty()) throw Error("cannot evaluate on an empty test set");
  Metrics m;
  m.total = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++m.confusion[index_of(gold[i])][index_of(predicted[i])];
  }
  std::size_t correct = 0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    correct += m.confusion[k][k];
    std::size_t predicted_k = 0;
    for (std::size_t g = 0; g < kNumLabels; ++g) {
      m.support[k] += m.confusion[k][g];
      predicted_k += m.confusion[g][k];
    }
    const double tp = static_cast<double>(m.confusion[k][k]);
    m.precision[k] = predicted_k ? tp / static_cast<double>(predicted_k) : 0.0;
    m.recall[k] = m.support[k] ? tp / static_cast<double>(m.support[k]) : 0.0;
    const double pr = m.precision[k] + m.recall[k];
    m.f1[k] = pr > 0 ? 2.0 * m.precision[k] * m.recall[k] / pr : 0.0;
    m.macro_f1 += m.f1[k];
  }
  m.macro_f1 /= static_cast<double>(kNumLabels);
  m.accuracy = static_cast<double>(correct) / static_cast<double>(m.total);
  return m;
}

}  // namespace arnli::learn
