#include "doctest.h"

#include "arnli/errors.hpp"
#include "arnli/experiment.hpp"
#include "synthetic.hpp"

using namespace arnli;
using namespace arnli::experiment;
namespace fs = std::filesystem;

namespace {

RunConfig small_config(const fs::path& dir) {
  RunConfig cfg;
  cfg.data = testing::write_synthetic_csv(dir, 250, 77);
  cfg.out = dir / "out";
  cfg.hyperparameters.rf.trees = 20;
  cfg.hyperparameters.adaboost.rounds = 10;
  cfg.sgns.dim = 10;
  cfg.sgns.epochs = 2;
  return cfg;
}

}  // namespace

TEST_CASE("config keys, relative paths and validation") {
  const auto dir = testing::scratch_dir("exp-config");
  testing::write_synthetic_csv(dir, 20, 1);
  const auto j = nlohmann::json::parse(R"({
    "data": "synthetic.csv", "seed": 9, "split": {"train_ratio": 0.75},
    "vectorizers": ["bow-char", "w2v"], "classifiers": ["rf", "KNN"],
    "hyperparameters": {"rf": {"trees": 3}}, "out": "res"
  })");
  const auto cfg = RunConfig::from_json(j, dir);
  CHECK(cfg.data == dir / "synthetic.csv");
  CHECK(cfg.out == dir / "res");
  CHECK(cfg.seed == 9);
  CHECK(cfg.train_ratio == 0.75);
  CHECK(cfg.vectorizers.size() == 2);
  CHECK(cfg.classifiers == std::vector<learn::Algorithm>{learn::Algorithm::Rf, learn::Algorithm::Knn});
  CHECK(cfg.hyperparameters.rf.trees == 3);
  CHECK_NOTHROW(cfg.validate());

  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"dataset": "x"})"), dir), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"split": {"ratio": 0.5}})"), dir), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"classifiers": ["svm_rbf"]})"), dir), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"seed": -1})"), dir), ConfigError);

  auto bad = cfg;
  bad.classifiers.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.vectorizers.clear();
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.data = dir / "missing.csv";
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.resources.lexicon = dir / "missing.tsv";
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  auto other = cfg;
  CHECK(other.hash() == cfg.hash());
  other.seed = 10;
  CHECK(other.hash() != cfg.hash());
  CHECK(RunConfig::from_json(cfg.to_json(), dir).to_json() == cfg.to_json());
}

TEST_CASE("grid shape, ordering and report consistency") {
  const auto dir = testing::scratch_dir("exp-grid");
  auto cfg = small_config(dir);
  cfg.vectorizers = {vectorize::VectorizerSpec::parse("bow-char"), vectorize::VectorizerSpec::parse("tfidf-word")};
  cfg.classifiers = {learn::Algorithm::Rf, learn::Algorithm::Svm, learn::Algorithm::Dt};
  const auto data = prepare_data(cfg);
  CHECK(data.train.size() == 200);
  CHECK(data.test.size() == 50);
  const auto report = run_experiment(cfg, data);
  REQUIRE(report.rows.size() == 6);
  CHECK(report.rows[0].vectorizer.name() == "bow-char");
  CHECK(report.rows[0].algorithm == learn::Algorithm::Rf);
  CHECK(report.rows[5].vectorizer.name() == "tfidf-word");
  CHECK(report.rows[5].algorithm == learn::Algorithm::Dt);
  for (const auto& r : report.rows) {
    CHECK(r.metrics.accuracy >= 0.0);
    CHECK(r.metrics.accuracy <= 1.0);
  }
  write_outputs(report, data, cfg, cfg.out);
  for (const auto& r : report.rows) {
    const auto file = cfg.out / "predictions" /
                      (r.vectorizer.name() + "__" + std::string(learn::to_string(r.algorithm)) + ".csv");
    REQUIRE(fs::exists(file));
    CHECK(accuracy_from_predictions_csv(testing::read_file(file)) == r.metrics.accuracy);
  }
  const auto md = testing::read_file(cfg.out / "report.md");
  CHECK(md.find("| Language model | SVM | SGD | DT | ADA | KNN | RF |") != std::string::npos);
  CHECK(md.find("| Bag of Words / Chars |") != std::string::npos);
  const auto csv = testing::read_file(cfg.out / "report.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(fs::exists(cfg.out / "run.json"));
  CHECK(fs::exists(cfg.out / "timings.csv"));
  const auto run = nlohmann::json::parse(testing::read_file(cfg.out / "run.json"));
  CHECK(run["config_hash"] == cfg.hash());
  CHECK(run["seed"] == cfg.seed);
}

TEST_CASE("a 1x1 grid gives one row") {
  const auto dir = testing::scratch_dir("exp-one");
  auto cfg = small_config(dir);
  cfg.vectorizers = {vectorize::VectorizerSpec::parse("ngram-char-2")};
  cfg.classifiers = {learn::Algorithm::Knn};
  const auto data = prepare_data(cfg);
  CHECK(run_experiment(cfg, data).rows.size() == 1);
}

TEST_CASE("two runs with the same config give byte-identical reports") {
  const auto dir = testing::scratch_dir("exp-determinism");
  auto cfg = small_config(dir);
  cfg.vectorizers = {vectorize::VectorizerSpec::parse("tfidf-char"), vectorize::VectorizerSpec::parse("w2v-tfidf")};
  std::string first;
  for (int run = 0; run < 2; ++run) {
    const auto data = prepare_data(cfg);
    const auto report = run_experiment(cfg, data);
    const auto out = dir / ("run" + std::to_string(run));
    write_outputs(report, data, cfg, out);
    const auto csv = testing::read_file(out / "report.csv");
    if (run == 0) {
      first = csv;
    } else {
      CHECK(csv == first);
    }
  }
  CHECK(std::count(first.begin(), first.end(), '\n') == 13);
}

TEST_CASE("the synthetic corpus is learnable") {
  const auto dir = testing::scratch_dir("exp-learnable");
  auto cfg = small_config(dir);
  cfg.vectorizers = {vectorize::VectorizerSpec::parse("bow-word")};
  cfg.classifiers = {learn::Algorithm::Rf};
  const auto data = prepare_data(cfg);
  const auto report = run_experiment(cfg, data);
  CHECK(report.rows[0].metrics.accuracy > 0.8);
}
