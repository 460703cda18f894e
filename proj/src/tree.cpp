#include "arnli/tree.hpp"

#include <algorithm>
#include <limits>

#include "arnli/errors.hpp"
#include "arnli/rng.hpp"

namespace arnli::learn {

Label argmax_label(const std::array<double, kNumLabels>& scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kNumLabels; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return label_at(best);
}

double sparse_value(std::span<const std::uint32_t> indices, std::span<const double> values,
                    std::uint32_t f) {
  auto it = std::lower_bound(indices.begin(), indices.end(), f);
  if (it == indices.end() || *it != f) return 0.0;
  return values[static_cast<std::size_t>(it - indices.begin())];
}

const TreeNode& DecisionTree::leaf_for(std::span<const std::uint32_t> indices,
                                       std::span<const double> values) const {
  std::size_t n = 0;
  while (!nodes[n].is_leaf()) {
    const double v = sparse_value(indices, values, static_cast<std::uint32_t>(nodes[n].feature));
    n = v <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
  }
  return nodes[n];
}

std::size_t DecisionTree::depth() const {
  std::vector<std::size_t> d(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, d[i]);
    if (!nodes[i].is_leaf()) {
      d[nodes[i].left] = d[i] + 1;
      d[nodes[i].right] = d[i] + 1;
    }
  }
  return deepest;
}

namespace {

using ClassWeights = std::array<double, kNumLabels>;

struct Item {
  double value;
  std::uint32_t row;
};

struct Split {
  bool found = false;
  std::uint32_t feature = 0;
  double threshold = 0;
  double score = -std::numeric_limits<double>::infinity();
};

class Builder {
 public:
  Builder(const FeatureMatrix& x, const ColumnIndex& columns, std::span<const Label> y,
          std::span<const double> w, const TreeParams& params, std::uint64_t seed)
      : x_(x), cols_(columns), y_(y), w_(w), params_(params), rng_(seed),
        stamp_(x.rows(), kNoNode) {
    features_.resize(x.cols());
    for (std::size_t f = 0; f < features_.size(); ++f) features_[f] = static_cast<std::uint32_t>(f);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (w[r] > 0) samples_.push_back(static_cast<std::uint32_t>(r));
    }
  }

  DecisionTree build() {
    DecisionTree tree;
    if (samples_.empty()) throw Error("cannot grow a tree without positively weighted samples");
    struct Task {
      std::uint32_t node;
      std::size_t begin, end, depth;
    };
    tree.nodes.emplace_back();
    std::vector<Task> stack{{0, 0, samples_.size(), 0}};
    while (!stack.empty()) {
      const Task task = stack.back();
      stack.pop_back();
      ClassWeights totals{};
      for (std::size_t i = task.begin; i < task.end; ++i) totals[index_of(y_[samples_[i]])] += w_[samples_[i]];
      double total = 0;
      std::size_t classes_present = 0;
      for (double t : totals) {
        total += t;
        classes_present += t > 0 ? 1 : 0;
      }
      TreeNode& node = tree.nodes[task.node];
      for (std::size_t k = 0; k < kNumLabels; ++k) node.distribution[k] = totals[k] / total;
      node.label = argmax_label(totals);

      const std::size_t n = task.end - task.begin;
      const bool depth_limited = params_.max_depth > 0 && task.depth >= params_.max_depth;
      if (classes_present <= 1 || depth_limited || n < 2 * std::max<std::size_t>(1, params_.min_leaf)) {
        continue;
      }
      const Split split = best_split(task.node, task.begin, task.end, totals);
      if (!split.found) continue;

      auto mid = std::stable_partition(
          samples_.begin() + static_cast<std::ptrdiff_t>(task.begin),
          samples_.begin() + static_cast<std::ptrdiff_t>(task.end), [&](std::uint32_t r) {
            return x_.at(r, split.feature) <= split.threshold;
          });
      const std::size_t cut = static_cast<std::size_t>(mid - samples_.begin());
      const auto left = static_cast<std::uint32_t>(tree.nodes.size());
      const auto right = left + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& parent = tree.nodes[task.node];
      parent.feature = static_cast<std::int32_t>(split.feature);
      parent.threshold = split.threshold;
      parent.left = left;
      parent.right = right;
      stack.push_back({right, cut, task.end, task.depth + 1});
      stack.push_back({left, task.begin, cut, task.depth + 1});
    }
    return tree;
  }

 private:
  static constexpr std::uint32_t kNoNode = std::numeric_limits<std::uint32_t>::max();

  Split best_split(std::uint32_t node, std::size_t begin, std::size_t end, const ClassWeights& totals) {
    for (std::size_t i = begin; i < end; ++i) stamp_[samples_[i]] = node;
    Split best;
    const std::size_t f_count = features_.size();
    const bool all = params_.max_features == 0 || params_.max_features >= f_count;
    for (std::size_t i = 0; i < f_count; ++i) {
      if (!all) {
        if (i >= params_.max_features && best.found) break;
        const std::size_t j = i + static_cast<std::size_t>(rng_.below(f_count - i));
        std::swap(features_[i], features_[j]);
      }
      const std::uint32_t f = all ? static_cast<std::uint32_t>(i) : features_[i];
      evaluate(f, node, begin, end, totals, best);
    }
    return best;
  }

  void evaluate(std::uint32_t f, std::uint32_t node, std::size_t begin, std::size_t end,
                const ClassWeights& totals, Split& best) {
    const std::size_t n = end - begin;
    items_.clear();
    if (cols_.column_nnz(f) <= 4 * n) {
      for (std::size_t k = cols_.col_ptr[f]; k < cols_.col_ptr[f + 1]; ++k) {
        const std::uint32_t r = cols_.row_idx[k];
        if (stamp_[r] == node && cols_.vals[k] != 0.0) items_.push_back({cols_.vals[k], r});
      }
    } else {
      for (std::size_t i = begin; i < end; ++i) {
        const double v = x_.at(samples_[i], f);
        if (v != 0.0) items_.push_back({v, samples_[i]});
      }
    }
    const std::size_t zeros = n - items_.size();
    if (items_.empty()) return;
    std::sort(items_.begin(), items_.end(), [](const Item& a, const Item& b) {
      return a.value < b.value || (a.value == b.value && a.row < b.row);
    });
    if (zeros == 0 && items_.front().value == items_.back().value) return;

    ClassWeights zero_w = totals;
    for (const auto& it : items_) zero_w[index_of(y_[it.row])] -= w_[it.row];
    for (auto& z : zero_w) z = std::max(0.0, z);

    // Ordered groups: negatives, the zero block, positives.
    const std::size_t first_positive = static_cast<std::size_t>(
        std::lower_bound(items_.begin(), items_.end(), 0.0,
                         [](const Item& a, double v) { return a.value < v; }) -
        items_.begin());

    ClassWeights left{};
    std::size_t left_n = 0;
    double prev_value = 0;
    bool have_prev = false;
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_leaf);

    auto consider = [&](double next_value) {
      if (!have_prev || next_value == prev_value) return;
      if (left_n < min_leaf || n - left_n < min_leaf) return;
      double lw = 0, rw = 0, lsq = 0, rsq = 0;
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        const double r = totals[k] - left[k];
        lw += left[k];
        rw += r;
        lsq += left[k] * left[k];
        rsq += r * r;
      }
      if (lw <= 0 || rw <= 0) return;
      const double score = lsq / lw + rsq / rw;
      if (!best.found || score > best.score + 1e-12 * std::abs(best.score)) {
        double thr = prev_value + (next_value - prev_value) / 2.0;
        if (thr >= next_value) thr = prev_value;
        best = {true, f, thr, score};
      }
    };
    auto add_item = [&](const Item& it) {
      consider(it.value);
      left[index_of(y_[it.row])] += w_[it.row];
      ++left_n;
      prev_value = it.value;
      have_prev = true;
    };

    for (std::size_t i = 0; i < first_positive; ++i) add_item(items_[i]);
    if (zeros > 0) {
      consider(0.0);
      for (std::size_t k = 0; k < kNumLabels; ++k) left[k] += zero_w[k];
      left_n += zeros;
      prev_value = 0.0;
      have_prev = true;
    }
    for (std::size_t i = first_positive; i < items_.size(); ++i) add_item(items_[i]);
  }

  const FeatureMatrix& x_;
  const ColumnIndex& cols_;
  std::span<const Label> y_;
  std::span<const double> w_;
  TreeParams params_;
  Rng rng_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> features_;
  std::vector<std::uint32_t> samples_;
  std::vector<Item> items_;
};

}  // namespace

DecisionTree build_tree(const FeatureMatrix& x, const ColumnIndex& columns,
                        std::span<const Label> y, std::span<const double> weights,
                        const TreeParams& params, std::uint64_t seed) {
  if (y.size() != x.rows() || weights.size() != x.rows()) {
    throw Error("tree training: label/weight count does not match rows");
  }
  return Builder(x, columns, y, weights, params, seed).build();
}

}  // namespace arnli::learn
