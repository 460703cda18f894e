#include <array>
#include <cmath>
#include <functional>

#include "doctest.h"

#include "arnli/learn.hpp"
#include "arnli/rng.hpp"
#include "arnli/tree.hpp"
#include "oracles.hpp"

using namespace arnli;
using namespace arnli::learn;

namespace {

FeatureMatrix matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  FeatureMatrix m(cols);
  for (const auto& r : rows) {
    auto v = SparseVector::from_dense(r);
    v.dim = cols;
    m.add_row(v);
  }
  return m;
}

double training_accuracy(const DecisionTree& t, const FeatureMatrix& x, const std::vector<Label>& y) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) ok += t.predict(x.row_indices(i), x.row_values(i)) == y[i];
  return static_cast<double>(ok) / static_cast<double>(x.rows());
}

// Straightforward dense CART used as a reference: same candidate order,
// midpoint thresholds and first-best tie rule, computed by direct sums.
struct DenseCart {
  const std::vector<std::vector<double>>& x;
  const std::vector<Label>& y;
  std::size_t min_leaf;
  std::vector<TreeNode> nodes;

  void grow(std::size_t node, std::vector<std::size_t> idx) {
    std::array<double, kNumLabels> tot{};
    for (auto i : idx) tot[index_of(y[i])] += 1;
    for (std::size_t k = 0; k < kNumLabels; ++k) nodes[node].distribution[k] = tot[k] / idx.size();
    nodes[node].label = argmax_label(tot);
    if (std::count_if(tot.begin(), tot.end(), [](double t) { return t > 0; }) <= 1) return;
    if (idx.size() < 2 * min_leaf) return;
    bool found = false;
    double best = 0, thr = 0;
    std::size_t bf = 0;
    for (std::size_t f = 0; f < x[0].size(); ++f) {
      std::vector<double> vals;
      for (auto i : idx) vals.push_back(x[i][f]);
      std::sort(vals.begin(), vals.end());
      vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
      for (std::size_t v = 0; v + 1 < vals.size(); ++v) {
        double t = vals[v] + (vals[v + 1] - vals[v]) / 2.0;
        if (t >= vals[v + 1]) t = vals[v];
        std::array<double, kNumLabels> l{}, r{};
        std::size_t ln = 0;
        for (auto i : idx) {
          if (x[i][f] <= t) {
            l[index_of(y[i])] += 1;
            ++ln;
          } else {
            r[index_of(y[i])] += 1;
          }
        }
        if (ln < min_leaf || idx.size() - ln < min_leaf) continue;
        double lw = 0, rw = 0, lsq = 0, rsq = 0;
        for (std::size_t k = 0; k < kNumLabels; ++k) {
          lw += l[k];
          rw += r[k];
          lsq += l[k] * l[k];
          rsq += r[k] * r[k];
        }
        const double score = lsq / lw + rsq / rw;
        if (!found || score > best + 1e-12 * std::abs(best)) {
          found = true;
          best = score;
          thr = t;
          bf = f;
        }
      }
    }
    if (!found) return;
    std::vector<std::size_t> li, ri;
    for (auto i : idx) (x[i][bf] <= thr ? li : ri).push_back(i);
    const auto left = static_cast<std::uint32_t>(nodes.size());
    nodes.emplace_back();
    nodes.emplace_back();
    nodes[node].feature = static_cast<std::int32_t>(bf);
    nodes[node].threshold = thr;
    nodes[node].left = left;
    nodes[node].right = left + 1;
    grow(left, li);
    grow(left + 1, ri);
  }
};

// Compare two trees structurally regardless of node numbering.
bool same_tree(const DecisionTree& a, std::size_t ia, const std::vector<TreeNode>& b, std::size_t ib) {
  const auto& na = a.nodes[ia];
  const auto& nb = b[ib];
  if (na.feature != nb.feature || na.label != nb.label || na.distribution != nb.distribution) return false;
  if (na.is_leaf()) return true;
  return na.threshold == nb.threshold && same_tree(a, na.left, b, nb.left) &&
         same_tree(a, na.right, b, nb.right);
}

}  // namespace

TEST_CASE("CART matches the exhaustive split oracle on every small binary dataset") {
  const auto sweep = testing::tree_oracle_sweep(12);
  CHECK(sweep.datasets == 125969);
  CHECK(sweep.mismatches == 0);
}

TEST_CASE("CART equals a dense reference implementation on random data") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(40), f = 1 + rng.below(6);
    std::vector<std::vector<double>> rows(n, std::vector<double>(f));
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& v : rows[i]) {
        // Mostly zeros, some negative values, some ties.
        const auto u = rng.below(5);
        v = u < 2 ? 0.0 : static_cast<double>(static_cast<int>(rng.below(7)) - 2);
      }
      y[i] = label_at(rng.below(3));
    }
    const std::size_t min_leaf = 1 + rng.below(3);
    const auto x = matrix(rows, f);
    const ColumnIndex cols(x);
    std::vector<double> w(n, 1.0);
    const auto tree = build_tree(x, cols, y, w, {0, min_leaf, 0}, 3);
    DenseCart ref{rows, y, min_leaf, {TreeNode{}}};
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    ref.grow(0, idx);
    CHECK(same_tree(tree, 0, ref.nodes, 0));
  }
}

TEST_CASE("leaf-pure regions predict their label and thresholds sit at midpoints") {
  const auto x = matrix({{1.0}, {2.0}, {4.0}, {6.0}}, 1);
  const std::vector<Label> y{Label::Neutral, Label::Neutral, Label::Entailment, Label::Entailment};
  const ColumnIndex cols(x);
  const std::vector<double> w(4, 1.0);
  const auto t = build_tree(x, cols, y, w, {}, 0);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].threshold == 3.0);
  CHECK(t.predict(std::vector<std::uint32_t>{0}, std::vector<double>{1.5}) == Label::Neutral);
  CHECK(t.predict(std::vector<std::uint32_t>{0}, std::vector<double>{5.0}) == Label::Entailment);
  CHECK(t.predict({}, {}) == Label::Neutral);
  CHECK(t.depth() == 1);
}

TEST_CASE("weights, depth limit and tie-break") {
  const auto x = matrix({{0.0}, {0.0}, {1.0}}, 1);
  const ColumnIndex cols(x);
  const std::vector<Label> y{Label::Neutral, Label::Entailment, Label::Contradiction};
  // Equal weights at the root: tie resolves to the first label in order.
  const auto stump0 = build_tree(x, cols, y, std::vector<double>{1, 1, 1}, {0, 1, 0}, 0);
  CHECK(stump0.nodes[0].label == Label::Contradiction);
  const auto heavy = build_tree(x, cols, y, std::vector<double>{5, 1, 1}, {1, 1, 0}, 0);
  CHECK(heavy.predict({}, {}) == Label::Neutral);
  // Zero weight drops a sample entirely.
  const auto dropped = build_tree(x, cols, y, std::vector<double>{0, 1, 1}, {0, 1, 0}, 0);
  CHECK(dropped.predict({}, {}) == Label::Entailment);
  // Depth 0 bound means unbounded; depth limit respected otherwise.
  Rng rng(2);
  FeatureMatrix big(3);
  std::vector<Label> yy;
  for (int i = 0; i < 200; ++i) {
    big.add_row(SparseVector::from_dense(std::vector<double>{rng.uniform(), rng.uniform(), rng.uniform()}));
    yy.push_back(label_at(rng.below(3)));
  }
  const ColumnIndex bc(big);
  const std::vector<double> ones(200, 1.0);
  CHECK(build_tree(big, bc, yy, ones, {3, 1, 0}, 0).depth() <= 3);
  const auto full = build_tree(big, bc, yy, ones, {0, 1, 0}, 0);
  CHECK(training_accuracy(full, big, yy) == 1.0);
  const auto leafy = build_tree(big, bc, yy, ones, {0, 10, 0}, 0);
  std::vector<std::size_t> per_leaf(leafy.nodes.size(), 0);
  for (std::size_t i = 0; i < 200; ++i) {
    const auto* leaf = &leafy.leaf_for(big.row_indices(i), big.row_values(i));
    ++per_leaf[static_cast<std::size_t>(leaf - leafy.nodes.data())];
  }
  for (std::size_t k = 0; k < per_leaf.size(); ++k) {
    if (leafy.nodes[k].is_leaf()) CHECK(per_leaf[k] >= 10);
  }
}
