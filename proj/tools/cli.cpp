#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "arnli/corpus.hpp"
#include "arnli/errors.hpp"
#include "arnli/experiment.hpp"
#include "arnli/model_io.hpp"
#include "arnli/textproc.hpp"

namespace arnli::cli {

namespace fs = std::filesystem;
using experiment::RunConfig;

namespace {

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kUsage = 2;

struct CommonOptions {
  std::string config;
  std::string data;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> vectorizers;
  std::vector<std::string> classifiers;
  std::string resources;
  std::optional<double> train_ratio;
  bool stratified = false;
  bool no_contra = false;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool grid) {
  cmd->add_option("--config", o.config, "JSON run configuration");
  cmd->add_option("--data", o.data, "Dataset file (CSV or TSV)");
  cmd->add_option("--format", o.format, "Dataset format: csv or tsv (default: by extension)");
  cmd->add_option("--seed", o.seed, "Master seed for split and training");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--resources", o.resources, "Directory holding gazetteer, lexicon, stopword and stemmer files");
  cmd->add_option("--train-ratio", o.train_ratio, "Training fraction in (0, 1)");
  cmd->add_flag("--stratified", o.stratified, "Split each label separately");
  cmd->add_flag("--no-contra", o.no_contra, "Leave the contradiction vector out of the features");
  if (grid) {
    cmd->add_option("--vectorizer", o.vectorizers, "Vectorizer rows (repeatable or comma separated)")
        ->delimiter(',');
    cmd->add_option("--classifier", o.classifiers, "Classifiers (repeatable or comma separated)")
        ->delimiter(',');
  } else {
    cmd->add_option("--vectorizer", o.vectorizers, "Vectorizer, e.g. bow-char")->expected(1);
    cmd->add_option("--classifier", o.classifiers, "Classifier: svm_linear, sgd, dt, adaboost, knn, rf")
        ->expected(1);
  }
}

// Command line wins over the config file.
RunConfig build_config(const CommonOptions& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : RunConfig::load(o.config);
  if (!o.data.empty()) cfg.data = o.data;
  if (!o.format.empty()) cfg.format = corpus::parse_format(o.format);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.out.empty()) cfg.out = o.out;
  if (!o.resources.empty()) cfg.set_resource_dir(o.resources);
  if (o.train_ratio) cfg.train_ratio = *o.train_ratio;
  if (o.stratified) cfg.stratified = true;
  if (o.no_contra) cfg.include_contra = false;
  if (!o.vectorizers.empty()) {
    cfg.vectorizers.clear();
    for (const auto& v : o.vectorizers) {
      if (v == "all") {
        cfg.vectorizers = vectorize::VectorizerSpec::grid_rows();
        break;
      }
      cfg.vectorizers.push_back(vectorize::VectorizerSpec::parse(v));
    }
  }
  if (!o.classifiers.empty()) {
    cfg.classifiers.clear();
    for (const auto& c : o.classifiers) {
      if (c == "all") {
        cfg.classifiers.assign(learn::kAllAlgorithms.begin(), learn::kAllAlgorithms.end());
        break;
      }
      cfg.classifiers.push_back(learn::parse_algorithm(c));
    }
  }
  return cfg;
}

void write_file(const fs::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << s;
}

std::string join(const textproc::TokenList& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ' ';
    s += t[i];
  }
  return s;
}

nlohmann::json metrics_json(const learn::Metrics& m) {
  nlohmann::json j{{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}, {"total", m.total}};
  for (Label l : kAllLabels) {
    const std::size_t k = index_of(l);
    j["per_class"][std::string(to_string(l))] = {
        {"precision", m.precision[k]}, {"recall", m.recall[k]}, {"f1", m.f1[k]}, {"support", m.support[k]}};
    std::vector<std::size_t> row(m.confusion[k].begin(), m.confusion[k].end());
    j["confusion"].push_back(row);
  }
  return j;
}

int cmd_stats(const CommonOptions& o, bool as_csv, std::ostream& out) {
  RunConfig cfg = build_config(o);
  if (cfg.data.empty()) throw ConfigError("stats needs a dataset (--data PATH)");
  if (!fs::is_regular_file(cfg.data)) throw ConfigError("dataset not found: " + cfg.data.string());
  const auto pairs = corpus::load_dataset(cfg.data, cfg.data_format(), cfg.columns);
  const auto stats = corpus::compute_stats(pairs);
  const auto split = corpus::train_size(pairs.size(), cfg.train_ratio);
  if (as_csv) {
    out << corpus::format_stats_csv(stats);
  } else {
    out << corpus::format_stats_text(stats);
    out << "Training pairs (" << cfg.train_ratio << "): " << split << "\n";
    out << "Testing pairs: " << pairs.size() - split << "\n";
  }
  return kOk;
}

int cmd_preprocess(const std::string& sentence, bool as_json, const std::string& resources,
                   std::ostream& out) {
  textproc::Stemmer stemmer;
  if (!resources.empty()) {
    stemmer = textproc::Stemmer(textproc::StemmerRules::load(fs::path(resources) / "stemmer_rules.txt"));
  }
  const auto staged = textproc::preprocess_staged(sentence, {}, stemmer);
  if (as_json) {
    nlohmann::json j{{"normalized", staged.normalized},
                     {"tokenized", staged.tokens},
                     {"punctuation_removed", staged.words},
                     {"stemmed", staged.stems}};
    out << j.dump(2) << "\n";
  } else {
    out << "tokenized:           " << join(staged.tokens) << "\n";
    out << "punctuation removed: " << join(staged.words) << "\n";
    out << "stemmed:             " << join(staged.stems) << "\n";
  }
  return kOk;
}

int cmd_train(const CommonOptions& o, std::ostream& out) {
  RunConfig cfg = build_config(o);
  if (o.vectorizers.empty()) cfg.vectorizers = {vectorize::VectorizerSpec::parse("bow-char")};
  if (o.classifiers.empty()) cfg.classifiers = {learn::Algorithm::Rf};
  if (o.out.empty() && o.config.empty()) cfg.out = "model";
  cfg.validate();
  const auto data = experiment::prepare_data(cfg);
  learn::Model model;
  const auto cell = experiment::run_cell(data, cfg, cfg.vectorizers.front(), cfg.classifiers.front(), &model);
  fs::create_directories(cfg.out);
  learn::save_model(model, cfg.out / "model.arnli");
  auto m = metrics_json(cell.metrics);
  m["vectorizer"] = cell.vectorizer.name();
  m["classifier"] = std::string(learn::to_string(cell.algorithm));
  m["seed"] = cfg.seed;
  m["config_hash"] = cfg.hash();
  m["hyperparameters"] = cfg.hyperparameters.to_json();
  write_file(cfg.out / "metrics.json", m.dump(2) + "\n");
  write_file(cfg.out / "predictions.csv", experiment::predictions_csv(data.split.test, cell.predictions));
  out << cell.vectorizer.name() << " + " << learn::column_name(cell.algorithm) << ": accuracy "
      << std::fixed << std::setprecision(4) << cell.metrics.accuracy << ", macro-F1 "
      << cell.metrics.macro_f1 << " on " << cell.metrics.total << " test pairs\n";
  out << "model written to " << (cfg.out / "model.arnli").string() << "\n";
  return kOk;
}

int cmd_experiment(const CommonOptions& o, bool quiet, std::ostream& out) {
  RunConfig cfg = build_config(o);
  cfg.validate();
  const auto data = experiment::prepare_data(cfg);
  const auto report = experiment::run_experiment(cfg, data, quiet ? nullptr : &out);
  experiment::write_outputs(report, data, cfg, cfg.out);
  out << report.rows.size() << " cells written to " << cfg.out.string() << "\n";
  return kOk;
}

int cmd_predict(const std::string& model_path, const std::string& premise,
                const std::string& hypothesis, std::ostream& out) {
  if (textproc::normalize(premise).find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("--premise must not be empty");
  }
  if (textproc::normalize(hypothesis).find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError("--hypothesis must not be empty");
  }
  if (!fs::is_regular_file(model_path)) throw ConfigError("model file not found: " + model_path);
  const auto model = learn::load_model(model_path);
  const auto scores = model.scores(premise, hypothesis);
  out << to_string(learn::argmax_label(scores)) << "\n";
  for (Label l : kAllLabels) {
    out << "  " << std::left << std::setw(14) << to_string(l) << scores[index_of(l)] << "\n";
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Arabic sentence-pair inference toolkit", "arnli"};
  app.set_version_flag("--version", std::string(experiment::library_version()));
  app.require_subcommand(1);

  CommonOptions stats_o, train_o, exp_o;
  bool stats_csv = false;
  auto* stats = app.add_subcommand("stats", "Label counts and sentence length statistics");
  add_common(stats, stats_o, false);
  stats->add_flag("--csv", stats_csv, "Print label,count and metric,value rows");

  std::string sentence, pre_resources;
  bool pre_json = false;
  auto* pre = app.add_subcommand("preprocess", "Show tokenization, punctuation removal and stemming");
  pre->add_option("sentence", sentence, "Sentence to process")->required();
  pre->add_flag("--json", pre_json, "Emit JSON");
  pre->add_option("--resources", pre_resources, "Directory holding stemmer_rules.txt");

  auto* train = app.add_subcommand("train", "Train one vectorizer + classifier and save the model");
  add_common(train, train_o, false);

  bool quiet = false;
  auto* exp = app.add_subcommand("experiment", "Run the vectorizer x classifier grid");
  add_common(exp, exp_o, true);
  exp->add_flag("--quiet", quiet, "No per-cell progress lines");

  std::string model_path, premise, hypothesis;
  auto* predict = app.add_subcommand("predict", "Classify one sentence pair with a saved model");
  predict->add_option("--model", model_path, "Model file written by train")->required();
  predict->add_option("--premise", premise, "Premise sentence")->required();
  predict->add_option("--hypothesis", hypothesis, "Hypothesis sentence")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*stats) return cmd_stats(stats_o, stats_csv, out);
    if (*pre) return cmd_preprocess(sentence, pre_json, pre_resources, out);
    if (*train) return cmd_train(train_o, out);
    if (*exp) return cmd_experiment(exp_o, quiet, out);
    if (*predict) return cmd_predict(model_path, premise, hypothesis, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace arnli::cli
