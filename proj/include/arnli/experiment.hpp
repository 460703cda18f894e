#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "arnli/contra.hpp"
#include "arnli/corpus.hpp"
#include "arnli/learn.hpp"
#include "arnli/metrics.hpp"
#include "arnli/model_io.hpp"
#include "arnli/pipeline.hpp"
#include "arnli/vectorize.hpp"

namespace arnli::experiment {

std::string_view library_version();
std::filesystem::path default_data_dir();

// Everything a train or experiment run depends on. Keys of the JSON form are
// listed in the README.
struct RunConfig {
  std::filesystem::path data;
  std::optional<corpus::Format> format;  // default: by file extension
  corpus::ColumnMapping columns;

  double train_ratio = 0.8;
  bool stratified = false;
  std::uint64_t seed = 42;

  std::filesystem::path resource_dir = default_data_dir();
  contra::Resources::Paths resources = contra::Resources::default_paths(default_data_dir());
  textproc::NormalizationConfig normalization;

  std::vector<vectorize::VectorizerSpec> vectorizers = vectorize::VectorizerSpec::grid_rows();
  bool include_contra = true;
  std::vector<learn::Algorithm> classifiers{learn::kAllAlgorithms.begin(), learn::kAllAlgorithms.end()};
  learn::Hyperparameters hyperparameters;

  bool smooth_idf = true;
  sgns::SgnsConfig sgns;
  std::optional<std::filesystem::path> embeddings;  // pre-trained word2vec text file

  std::filesystem::path out = "results";

  // Relative paths resolve against `base_dir`. Unknown keys raise ConfigError.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
  static RunConfig load(const std::filesystem::path& path);
  // Canonical form; its compact dump is what the config hash covers.
  nlohmann::json to_json() const;
  std::string hash() const;

  // Files exist, grids non-empty, ranges valid. Throws ConfigError.
  void validate() const;

  corpus::Format data_format() const;
  void set_resource_dir(const std::filesystem::path& dir);
};

// Dataset split and featurization inputs shared by every grid cell.
struct PreparedData {
  corpus::DatasetSplit split;
  contra::Resources resources;
  std::vector<pipeline::PreparedPair> train;
  std::vector<pipeline::PreparedPair> test;
  std::vector<Label> y_train;
  std::vector<Label> y_test;
};

PreparedData prepare_data(const RunConfig& cfg);

struct CellResult {
  vectorize::VectorizerSpec vectorizer;
  learn::Algorithm algorithm = learn::Algorithm::Rf;
  learn::Metrics metrics;
  double seconds = 0;
  std::vector<Label> predictions;
};

// Fits the vectorizer on the training side, trains, and scores the test side.
CellResult run_cell(const PreparedData& data, const RunConfig& cfg,
                    const vectorize::VectorizerSpec& spec, learn::Algorithm algorithm,
                    learn::Model* model_out = nullptr);

struct ExperimentReport {
  std::vector<CellResult> rows;  // vectorizer-major, both in grid order
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string version;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

ExperimentReport run_experiment(const RunConfig& cfg, const PreparedData& data,
                                std::ostream* progress = nullptr);

// Deterministic; no timings.
std::string report_csv(const ExperimentReport& report);
// Accuracy grid with vectorizers as rows and SVM, SGD, DT, ADA, KNN, RF as columns.
std::string report_markdown(const ExperimentReport& report);
std::string timings_csv(const ExperimentReport& report);
// `id,gold,predicted`
std::string predictions_csv(const std::vector<corpus::LabeledPair>& test,
                            const std::vector<Label>& predicted);
// Accuracy recomputed from a predictions file.
double accuracy_from_predictions_csv(const std::string& text);

// Writes report.csv, report.md, timings.csv, run.json and
// predictions/<vectorizer>__<classifier>.csv under `dir`.
void write_outputs(const ExperimentReport& report, const PreparedData& data,
                   const RunConfig& cfg, const std::filesystem::path& dir);

std::string format_double(double v);

}  // namespace arnli::experiment
