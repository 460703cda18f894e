#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "arnli/label.hpp"
#include "arnli/sparse.hpp"

namespace arnli::learn {

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0;       // go left when value <= threshold
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::array<double, kNumLabels> distribution{};  // normalized class weights
  Label label = Label::Neutral;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(std::span<const std::uint32_t> indices,
                           std::span<const double> values) const;
  Label predict(std::span<const std::uint32_t> indices, std::span<const double> values) const {
    return leaf_for(indices, values).label;
  }
  std::size_t depth() const;

  bool operator==(const DecisionTree&) const = default;
};

struct TreeParams {
  std::size_t max_depth = 0;     // 0: unbounded
  std::size_t min_leaf = 1;      // minimum distinct samples per child
  std::size_t max_features = 0;  // 0 or >= cols: every feature, in index order
};

// Weighted CART with Gini impurity. Rows with zero weight are ignored. When
// max_features is below the column count, features are drawn without
// replacement until max_features have been inspected and at least one valid
// split was found. Zero-gain splits are allowed, so an unbounded tree grows
// until its leaves are pure or inseparable.
DecisionTree build_tree(const FeatureMatrix& x, const ColumnIndex& columns,
                        std::span<const Label> y, std::span<const double> weights,
                        const TreeParams& params, std::uint64_t seed);

// Index of the largest entry; ties go to the earliest label.
Label argmax_label(const std::array<double, kNumLabels>& scores);

// Value of feature `f` in a sparse row.
double sparse_value(std::span<const std::uint32_t> indices, std::span<const double> values,
                    std::uint32_t f);

}  // namespace arnli::learn
