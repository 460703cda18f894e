#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "arnli/label.hpp"
#include "arnli/sparse.hpp"
#include "arnli/tree.hpp"

namespace arnli::learn {

// Enumerator order is the report column order.
enum class Algorithm : std::uint8_t { Svm = 0, Sgd = 1, Dt = 2, AdaBoost = 3, Knn = 4, Rf = 5 };

inline constexpr std::array<Algorithm, 6> kAllAlgorithms = {
    Algorithm::Svm, Algorithm::Sgd, Algorithm::Dt, Algorithm::AdaBoost, Algorithm::Knn, Algorithm::Rf};

// Config names: svm_linear, sgd, dt, adaboost, knn, rf.
std::string_view to_string(Algorithm a);
// Column header: SVM, SGD, DT, ADA, KNN, RF.
std::string_view column_name(Algorithm a);
// Accepts config names and column headers, case-insensitive. Throws ConfigError.
Algorithm parse_algorithm(std::string_view name);

struct Hyperparameters {
  struct Forest {
    std::size_t trees = 100;
    std::size_t max_depth = 0;  // 0: unbounded
    std::size_t min_leaf = 1;
    bool bootstrap = true;
    std::size_t max_features = 0;  // 0: floor(sqrt(F)), at least 1
    std::size_t threads = 0;       // 0: hardware concurrency
    bool operator==(const Forest&) const = default;
  } rf;
  struct Tree {
    std::size_t max_depth = 0;
    std::size_t min_leaf = 1;
    bool operator==(const Tree&) const = default;
  } dt;
  struct Knn {
    std::size_t k = 5;
    std::size_t threads = 0;
    bool operator==(const Knn&) const = default;
  } knn;
  struct Boost {
    std::size_t rounds = 50;
    double learning_rate = 1.0;
    bool operator==(const Boost&) const = default;
  } adaboost;
  struct Svm {
    double c = 1.0;
    std::size_t epochs = 20;
    bool operator==(const Svm&) const = default;
  } svm_linear;
  struct Sgd {
    std::size_t epochs = 20;
    double learning_rate = 0.01;
    double alpha = 1e-4;  // L2 strength
    bool operator==(const Sgd&) const = default;
  } sgd;

  // Throws ConfigError for out-of-range values.
  void validate() const;

  // {"rf": {"trees": 100, ...}, "dt": {...}, ...}
  nlohmann::json to_json() const;
  // Overlays the keys present in `j`; unknown keys or invalid values raise
  // ConfigError and leave *this unchanged.
  void apply(const nlohmann::json& j);

  bool operator==(const Hyperparameters&) const = default;
};

struct TrainConfig {
  Algorithm algorithm = Algorithm::Rf;
  Hyperparameters hp;
  std::uint64_t seed = 42;
  bool operator==(const TrainConfig&) const = default;
};

struct Forest {
  std::vector<DecisionTree> trees;
  bool operator==(const Forest&) const = default;
};

struct NeighborStore {
  FeatureMatrix exemplars;
  std::vector<Label> labels;
  std::size_t k = 5;
  bool operator==(const NeighborStore&) const = default;
};

struct Boosted {
  std::vector<DecisionTree> stumps;
  std::vector<double> alphas;
  bool operator==(const Boosted&) const = default;
};

// One-vs-rest linear scorers: score_k(x) = w_k . x + b_k.
struct LinearOvr {
  std::vector<std::vector<double>> weights;  // kNumLabels rows of length F
  std::array<double, kNumLabels> bias{};
  bool operator==(const LinearOvr&) const = default;
};

using Parameters = std::variant<DecisionTree, Forest, NeighborStore, Boosted, LinearOvr>;

// Trained classifier. Immutable after training; prediction is const and
// thread-safe.
struct Estimator {
  Algorithm algorithm = Algorithm::Dt;
  std::size_t n_features = 0;
  TrainConfig config;
  Parameters params;

  // Per-class scores in label order: class vote shares for trees, forests,
  // boosting and KNN; raw margins for svm_linear; probabilities for sgd.
  std::array<double, kNumLabels> scores(std::span<const std::uint32_t> indices,
                                        std::span<const double> values) const;
  std::array<double, kNumLabels> scores(const SparseVector& x) const;
  Label predict(const SparseVector& x) const;
  std::vector<Label> predict(const FeatureMatrix& x) const;

  bool operator==(const Estimator&) const = default;
};

// Per-round diagnostics for boosting.
struct BoostTrace {
  std::vector<double> weight_sums;     // after renormalization
  std::vector<double> weighted_errors;
  std::vector<double> training_errors; // ensemble error after each round
};

// Throws Error on dimension/label count mismatch, fewer rows than distinct
// labels, or a single-class training set for AdaBoost.
Estimator train(const FeatureMatrix& x, const std::vector<Label>& y, const TrainConfig& cfg,
                BoostTrace* trace = nullptr);

// Logistic and hinge objectives for one sample. `params` is [w_0..w_{F-1}, b],
// `y` is +1 or -1. Training uses the same derivative helpers.
double logistic_loss(std::span<const double> params, const SparseVector& x, double y, double alpha);
std::vector<double> logistic_gradient(std::span<const double> params, const SparseVector& x,
                                      double y, double alpha);
double hinge_loss(std::span<const double> params, const SparseVector& x, double y, double lambda);
std::vector<double> hinge_subgradient(std::span<const double> params, const SparseVector& x,
                                      double y, double lambda);

// d/dz log(1 + exp(-y z)).
double logistic_dloss(double z, double y);

}  // namespace arnli::learn
