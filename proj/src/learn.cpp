#include "arnli/learn.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>

#include "arnli/errors.hpp"
#include "arnli/rng.hpp"
#include "parallel.hpp"

namespace arnli::learn {

using json = nlohmann::json;

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Svm: return "svm_linear";
    case Algorithm::Sgd: return "sgd";
    case Algorithm::Dt: return "dt";
    case Algorithm::AdaBoost: return "adaboost";
    case Algorithm::Knn: return "knn";
    case Algorithm::Rf: return "rf";
  }
  return "?";
}

std::string_view column_name(Algorithm a) {
  switch (a) {
    case Algorithm::Svm: return "SVM";
    case Algorithm::Sgd: return "SGD";
    case Algorithm::Dt: return "DT";
    case Algorithm::AdaBoost: return "ADA";
    case Algorithm::Knn: return "KNN";
    case Algorithm::Rf: return "RF";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "svm" || lower == "svm_linear") return Algorithm::Svm;
  if (lower == "sgd") return Algorithm::Sgd;
  if (lower == "dt") return Algorithm::Dt;
  if (lower == "ada" || lower == "adaboost") return Algorithm::AdaBoost;
  if (lower == "knn") return Algorithm::Knn;
  if (lower == "rf") return Algorithm::Rf;
  throw ConfigError("unknown classifier '" + std::string(name) +
                    "' (expected svm_linear, sgd, dt, adaboost, knn or rf)");
}

// ---- hyperparameters ------------------------------------------------------

void Hyperparameters::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("hyperparameter out of range: ") + what);
  };
  require(rf.trees >= 1, "rf.trees >= 1");
  require(rf.min_leaf >= 1, "rf.min_leaf >= 1");
  require(dt.min_leaf >= 1, "dt.min_leaf >= 1");
  require(knn.k >= 1, "knn.k >= 1");
  require(adaboost.rounds >= 1, "adaboost.rounds >= 1");
  require(adaboost.learning_rate > 0 && std::isfinite(adaboost.learning_rate),
          "adaboost.learning_rate > 0");
  require(svm_linear.c > 0 && std::isfinite(svm_linear.c), "svm_linear.c > 0");
  require(svm_linear.epochs >= 1, "svm_linear.epochs >= 1");
  require(sgd.epochs >= 1, "sgd.epochs >= 1");
  require(sgd.learning_rate > 0 && std::isfinite(sgd.learning_rate), "sgd.learning_rate > 0");
  require(sgd.alpha >= 0 && std::isfinite(sgd.alpha), "sgd.alpha >= 0");
}

json Hyperparameters::to_json() const {
  return json{
      {"rf", {{"trees", rf.trees}, {"max_depth", rf.max_depth}, {"min_leaf", rf.min_leaf},
              {"bootstrap", rf.bootstrap}, {"max_features", rf.max_features},
              {"threads", rf.threads}}},
      {"dt", {{"max_depth", dt.max_depth}, {"min_leaf", dt.min_leaf}}},
      {"knn", {{"k", knn.k}, {"threads", knn.threads}}},
      {"adaboost", {{"rounds", adaboost.rounds}, {"learning_rate", adaboost.learning_rate}}},
      {"svm_linear", {{"c", svm_linear.c}, {"epochs", svm_linear.epochs}}},
      {"sgd", {{"epochs", sgd.epochs}, {"learning_rate", sgd.learning_rate}, {"alpha", sgd.alpha}}},
  };
}

namespace {

using Setter = std::function<void(const json&)>;

Setter size_setter(std::size_t& field) {
  return [&field](const json& v) {
    if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
    field = v.get<std::size_t>();
  };
}
Setter double_setter(double& field) {
  return [&field](const json& v) {
    if (!v.is_number()) throw ConfigError("expected a number");
    field = v.get<double>();
  };
}
Setter bool_setter(bool& field) {
  return [&field](const json& v) {
    if (!v.is_boolean()) throw ConfigError("expected true or false");
    field = v.get<bool>();
  };
}

void apply_section(const std::string& section, const json& j,
                   const std::map<std::string, Setter>& setters) {
  if (!j.is_object()) throw ConfigError("hyperparameters." + section + " must be an object");
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown hyperparameter '" + section + "." + key + "'");
    }
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError("hyperparameter '" + section + "." + key + "': " + e.what());
    }
  }
}

}  // namespace

void Hyperparameters::apply(const json& j) {
  if (!j.is_object()) throw ConfigError("hyperparameters must be an object");
  Hyperparameters next = *this;
  for (const auto& [section, body] : j.items()) {
    if (section == "rf") {
      apply_section(section, body,
                    {{"trees", size_setter(next.rf.trees)}, {"max_depth", size_setter(next.rf.max_depth)},
                     {"min_leaf", size_setter(next.rf.min_leaf)}, {"bootstrap", bool_setter(next.rf.bootstrap)},
                     {"max_features", size_setter(next.rf.max_features)},
                     {"threads", size_setter(next.rf.threads)}});
    } else if (section == "dt") {
      apply_section(section, body,
                    {{"max_depth", size_setter(next.dt.max_depth)}, {"min_leaf", size_setter(next.dt.min_leaf)}});
    } else if (section == "knn") {
      apply_section(section, body, {{"k", size_setter(next.knn.k)}, {"threads", size_setter(next.knn.threads)}});
    } else if (section == "adaboost") {
      apply_section(section, body,
                    {{"rounds", size_setter(next.adaboost.rounds)},
                     {"learning_rate", double_setter(next.adaboost.learning_rate)}});
    } else if (section == "svm_linear") {
      apply_section(section, body,
                    {{"c", double_setter(next.svm_linear.c)}, {"epochs", size_setter(next.svm_linear.epochs)}});
    } else if (section == "sgd") {
      apply_section(section, body,
                    {{"epochs", size_setter(next.sgd.epochs)},
                     {"learning_rate", double_setter(next.sgd.learning_rate)},
                     {"alpha", double_setter(next.sgd.alpha)}});
    } else {
      throw ConfigError("unknown hyperparameter section '" + section + "'");
    }
  }
  next.validate();
  *this = next;
}

// ---- objectives -----------------------------------------------------------

namespace {

double sparse_dot(std::span<const double> w, std::span<const std::uint32_t> idx,
                  std::span<const double> val) {
  double s = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) s += w[idx[k]] * val[k];
  return s;
}

double margin(std::span<const double> params, const SparseVector& x) {
  if (params.size() != x.dim + 1) throw Error("parameter length must be dimension + 1");
  return sparse_dot(params, x.indices, x.values) + params[x.dim];
}

double half_sq_norm(std::span<const double> params) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < params.size(); ++i) s += params[i] * params[i];
  return 0.5 * s;
}

}  // namespace

double logistic_dloss(double z, double y) {
  // -y * sigmoid(-y z), evaluated without overflow.
  const double m = y * z;
  if (m > 0) {
    const double e = std::exp(-m);
    return -y * e / (1.0 + e);
  }
  return -y / (1.0 + std::exp(m));
}

double logistic_loss(std::span<const double> params, const SparseVector& x, double y, double alpha) {
  const double m = y * margin(params, x);
  const double data = m > 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
  return data + alpha * half_sq_norm(params);
}

std::vector<double> logistic_gradient(std::span<const double> params, const SparseVector& x,
                                      double y, double alpha) {
  const double g = logistic_dloss(margin(params, x), y);
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i + 1 < params.size(); ++i) grad[i] = alpha * params[i];
  for (std::size_t k = 0; k < x.nnz(); ++k) grad[x.indices[k]] += g * x.values[k];
  grad.back() = g;
  return grad;
}

double hinge_loss(std::span<const double> params, const SparseVector& x, double y, double lambda) {
  return std::max(0.0, 1.0 - y * margin(params, x)) + lambda * half_sq_norm(params);
}

std::vector<double> hinge_subgradient(std::span<const double> params, const SparseVector& x,
                                      double y, double lambda) {
  const bool active = y * margin(params, x) < 1.0;
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i + 1 < params.size(); ++i) grad[i] = lambda * params[i];
  if (active) {
    for (std::size_t k = 0; k < x.nnz(); ++k) grad[x.indices[k]] -= y * x.values[k];
    grad.back() = -y;
  }
  return grad;
}

// ---- estimators -----------------------------------------------------------

namespace {

double squared_distance(std::span<const std::uint32_t> ai, std::span<const double> av,
                        std::span<const std::uint32_t> bi, std::span<const double> bv) {
  double s = 0;
  std::size_t i = 0, j = 0;
  while (i < ai.size() || j < bi.size()) {
    double d;
    if (j == bi.size() || (i < ai.size() && ai[i] < bi[j])) {
      d = av[i++];
    } else if (i == ai.size() || bi[j] < ai[i]) {
      d = bv[j++];
    } else {
      d = av[i++] - bv[j++];
    }
    s += d * d;
  }
  return s;
}

std::array<double, kNumLabels> knn_scores(const NeighborStore& store,
                                          std::span<const std::uint32_t> idx,
                                          std::span<const double> val) {
  const std::size_t n = store.exemplars.rows();
  std::vector<std::pair<double, std::uint32_t>> dist(n);
  for (std::size_t r = 0; r < n; ++r) {
    dist[r] = {squared_distance(idx, val, store.exemplars.row_indices(r), store.exemplars.row_values(r)),
               static_cast<std::uint32_t>(r)};
  }
  const std::size_t k = std::min(store.k, n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::array<double, kNumLabels> votes{};
  for (std::size_t i = 0; i < k; ++i) votes[index_of(store.labels[dist[i].second])] += 1.0;
  for (auto& v : votes) v /= static_cast<double>(k);
  return votes;
}

void check_training_input(const FeatureMatrix& x, const std::vector<Label>& y) {
  if (x.rows() != y.size()) {
    throw Error("training set has " + std::to_string(x.rows()) + " vectors but " +
                std::to_string(y.size()) + " labels");
  }
  if (x.rows() == 0) throw Error("training set is empty");
  std::array<bool, kNumLabels> seen{};
  std::size_t distinct = 0;
  for (Label l : y) {
    if (!seen[index_of(l)]) ++distinct;
    seen[index_of(l)] = true;
  }
  if (x.rows() < distinct) throw Error("fewer training rows than classes");
}

std::size_t distinct_labels(const std::vector<Label>& y) {
  std::array<bool, kNumLabels> seen{};
  for (Label l : y) seen[index_of(l)] = true;
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), true));
}

DecisionTree train_tree(const FeatureMatrix& x, const ColumnIndex& cols, const std::vector<Label>& y,
                        const TrainConfig& cfg) {
  std::vector<double> w(x.rows(), 1.0);
  TreeParams p{cfg.hp.dt.max_depth, cfg.hp.dt.min_leaf, 0};
  return build_tree(x, cols, y, w, p, mix_seed(cfg.seed, 0));
}

Forest train_forest(const FeatureMatrix& x, const ColumnIndex& cols, const std::vector<Label>& y,
                    const TrainConfig& cfg) {
  const auto& hp = cfg.hp.rf;
  const std::size_t f = x.cols();
  std::size_t max_features = hp.max_features;
  if (max_features == 0) {
    max_features = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(f))));
  }
  TreeParams p{hp.max_depth, hp.min_leaf, max_features};
  Forest forest;
  forest.trees.resize(hp.trees);
  detail::parallel_for(hp.trees, hp.threads, [&](std::size_t t) {
    const std::uint64_t tree_seed = mix_seed(cfg.seed, t);
    std::vector<double> w(x.rows(), hp.bootstrap ? 0.0 : 1.0);
    if (hp.bootstrap) {
      Rng rng(mix_seed(tree_seed, 1));
      for (std::size_t i = 0; i < x.rows(); ++i) w[rng.below(x.rows())] += 1.0;
    }
    forest.trees[t] = build_tree(x, cols, y, w, p, tree_seed);
  });
  return forest;
}

Boosted train_adaboost(const FeatureMatrix& x, const ColumnIndex& cols, const std::vector<Label>& y,
                       const TrainConfig& cfg, BoostTrace* trace) {
  const std::size_t classes = distinct_labels(y);
  if (classes < 2) throw Error("adaboost needs at least two classes in the training set");
  const auto& hp = cfg.hp.adaboost;
  const std::size_t n = x.rows();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  std::vector<std::array<double, kNumLabels>> ensemble(n, std::array<double, kNumLabels>{});
  const TreeParams stump{1, 1, 0};
  Boosted model;
  for (std::size_t round = 0; round < hp.rounds; ++round) {
    DecisionTree tree = build_tree(x, cols, y, w, stump, mix_seed(cfg.seed, round));
    std::vector<Label> pred(n);
    double err = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = tree.predict(x.row_indices(i), x.row_values(i));
      total += w[i];
      if (pred[i] != y[i]) err += w[i];
    }
    err /= total;
    double alpha;
    bool stop = false;
    if (err <= 0) {
      alpha = 1.0;
      stop = true;
    } else if (err >= 1.0 - 1.0 / static_cast<double>(classes)) {
      if (!model.stumps.empty()) break;
      alpha = 1.0;
      stop = true;
    } else {
      alpha = hp.learning_rate *
              (std::log((1.0 - err) / err) + std::log(static_cast<double>(classes) - 1.0));
    }
    model.stumps.push_back(std::move(tree));
    model.alphas.push_back(alpha);

    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!stop && pred[i] != y[i]) w[i] *= std::exp(alpha);
      sum += w[i];
    }
    for (auto& wi : w) wi /= sum;

    if (trace) {
      double check = 0;
      for (double wi : w) check += wi;
      std::size_t wrong = 0;
      for (std::size_t i = 0; i < n; ++i) {
        ensemble[i][index_of(pred[i])] += alpha;
        if (argmax_label(ensemble[i]) != y[i]) ++wrong;
      }
      trace->weight_sums.push_back(check);
      trace->weighted_errors.push_back(err);
      trace->training_errors.push_back(static_cast<double>(wrong) / static_cast<double>(n));
    }
    if (stop) break;
  }
  return model;
}

// Shared driver for the one-vs-rest linear learners. The weight vector is
// kept as scale * v so the L2 shrink costs O(1) per step.
struct ScaledWeights {
  std::vector<double> v;
  double scale = 1.0;
  double bias = 0.0;
  bool scaled_bias = false;  // true: effective bias is scale * bias

  double dot(std::span<const std::uint32_t> idx, std::span<const double> val) const {
    return scale * sparse_dot(v, idx, val);
  }
  void shrink(double factor) {
    if (factor <= 0) {
      std::fill(v.begin(), v.end(), 0.0);
      if (scaled_bias) bias = 0.0;
      scale = 1.0;
      return;
    }
    scale *= factor;
    if (scale < 1e-9) fold();
  }
  void add(std::span<const std::uint32_t> idx, std::span<const double> val, double coef) {
    for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] += coef / scale * val[k];
  }
  void fold() {
    for (auto& x : v) x *= scale;
    if (scaled_bias) bias *= scale;
    scale = 1.0;
  }
};

LinearOvr train_linear(const FeatureMatrix& x, const std::vector<Label>& y, const TrainConfig& cfg) {
  const std::size_t n = x.rows();
  const std::size_t f = x.cols();
  LinearOvr model;
  model.weights.assign(kNumLabels, std::vector<double>(f, 0.0));
  detail::parallel_for(kNumLabels, kNumLabels, [&](std::size_t c) {
    Rng rng(mix_seed(cfg.seed, 100 + c));
    ScaledWeights w;
    w.v.assign(f, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::size_t t = 0;
    if (cfg.algorithm == Algorithm::Svm) {
      // Pegasos: lambda = 1 / (C n), step 1 / (lambda t). The bias is an
      // extra constant feature and is regularized with the weights.
      const double lambda = 1.0 / (cfg.hp.svm_linear.c * static_cast<double>(n));
      w.scaled_bias = true;
      for (std::size_t epoch = 0; epoch < cfg.hp.svm_linear.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
          ++t;
          const double eta = 1.0 / (lambda * static_cast<double>(t));
          const double target = y[i] == label_at(c) ? 1.0 : -1.0;
          const auto idx = x.row_indices(i);
          const auto val = x.row_values(i);
          const double z = w.dot(idx, val) + w.scale * w.bias;
          const bool active = target * z < 1.0;
          w.shrink(1.0 - eta * lambda);
          if (active) {
            w.add(idx, val, eta * target);
            w.bias += eta * target / w.scale;
          }
        }
        w.fold();
      }
    } else {
      // Logistic loss with learning rate eta0 / (1 + t / n), L2 on the
      // weights only.
      const auto& hp = cfg.hp.sgd;
      for (std::size_t epoch = 0; epoch < hp.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
          const double eta =
              hp.learning_rate / (1.0 + static_cast<double>(t) / static_cast<double>(n));
          ++t;
          const double target = y[i] == label_at(c) ? 1.0 : -1.0;
          const auto idx = x.row_indices(i);
          const auto val = x.row_values(i);
          const double g = logistic_dloss(w.dot(idx, val) + w.bias, target);
          w.shrink(1.0 - eta * hp.alpha);
          w.add(idx, val, -eta * g);
          w.bias -= eta * g;
        }
      }
      w.fold();
    }
    model.weights[c] = std::move(w.v);
    model.bias[c] = w.bias;
  });
  return model;
}

}  // namespace

Estimator train(const FeatureMatrix& x, const std::vector<Label>& y, const TrainConfig& cfg,
                BoostTrace* trace) {
  cfg.hp.validate();
  check_training_input(x, y);
  Estimator est;
  est.algorithm = cfg.algorithm;
  est.n_features = x.cols();
  est.config = cfg;
  switch (cfg.algorithm) {
    case Algorithm::Dt: {
      ColumnIndex cols(x);
      est.params = train_tree(x, cols, y, cfg);
      break;
    }
    case Algorithm::Rf: {
      ColumnIndex cols(x);
      est.params = train_forest(x, cols, y, cfg);
      break;
    }
    case Algorithm::AdaBoost: {
      ColumnIndex cols(x);
      est.params = train_adaboost(x, cols, y, cfg, trace);
      break;
    }
    case Algorithm::Knn:
      est.params = NeighborStore{x, y, cfg.hp.knn.k};
      break;
    case Algorithm::Svm:
    case Algorithm::Sgd:
      est.params = train_linear(x, y, cfg);
      break;
  }
  return est;
}

std::array<double, kNumLabels> Estimator::scores(std::span<const std::uint32_t> idx,
                                                 std::span<const double> val) const {
  if (!idx.empty() && idx.back() >= n_features) {
    throw Error("feature index " + std::to_string(idx.back()) + " outside trained dimension " +
                std::to_string(n_features));
  }
  std::array<double, kNumLabels> out{};
  if (const auto* tree = std::get_if<DecisionTree>(&params)) {
    out = tree->leaf_for(idx, val).distribution;
  } else if (const auto* forest = std::get_if<Forest>(&params)) {
    for (const auto& t : forest->trees) out[index_of(t.predict(idx, val))] += 1.0;
    for (auto& v : out) v /= static_cast<double>(forest->trees.size());
  } else if (const auto* store = std::get_if<NeighborStore>(&params)) {
    out = knn_scores(*store, idx, val);
  } else if (const auto* boost = std::get_if<Boosted>(&params)) {
    double total = 0;
    for (std::size_t m = 0; m < boost->stumps.size(); ++m) {
      out[index_of(boost->stumps[m].predict(idx, val))] += boost->alphas[m];
      total += boost->alphas[m];
    }
    if (total > 0) {
      for (auto& v : out) v /= total;
    }
  } else if (const auto* lin = std::get_if<LinearOvr>(&params)) {
    for (std::size_t c = 0; c < kNumLabels; ++c) {
      const double z = sparse_dot(lin->weights[c], idx, val) + lin->bias[c];
      out[c] = algorithm == Algorithm::Sgd ? 1.0 / (1.0 + std::exp(-z)) : z;
    }
  }
  return out;
}

std::array<double, kNumLabels> Estimator::scores(const SparseVector& x) const {
  if (x.dim != n_features) {
    throw Error("input has dimension " + std::to_string(x.dim) + ", model expects " +
                std::to_string(n_features));
  }
  return scores(x.indices, x.values);
}

Label Estimator::predict(const SparseVector& x) const { return argmax_label(scores(x)); }

std::vector<Label> Estimator::predict(const FeatureMatrix& x) const {
  if (x.cols() != n_features) {
    throw Error("input has dimension " + std::to_string(x.cols()) + ", model expects " +
                std::to_string(n_features));
  }
  std::vector<Label> out(x.rows());
  const std::size_t threads = algorithm == Algorithm::Knn ? config.hp.knn.threads : 1;
  detail::parallel_for(x.rows(), threads, [&](std::size_t r) {
    out[r] = argmax_label(scores(x.row_indices(r), x.row_values(r)));
  });
  return out;
}

}  // namespace arnli::learn
