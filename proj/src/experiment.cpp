#include "arnli/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "arnli/errors.hpp"
#include "arnli/rng.hpp"
#include "arnli/serialize.hpp"

namespace arnli::experiment {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string_view library_version() { return ARNLI_VERSION; }
fs::path default_data_dir() { return ARNLI_DATA_DIR; }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- config ---------------------------------------------------------------

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

void RunConfig::set_resource_dir(const fs::path& dir) {
  resource_dir = dir;
  resources = contra::Resources::default_paths(dir);
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base) {
  reject_unknown(j,
                 {"data", "format", "columns", "split", "seed", "resources", "normalization",
                  "vectorizers", "contra", "classifiers", "hyperparameters", "tfidf", "sgns",
                  "embeddings", "out"},
                 "");
  RunConfig c;
  if (j.contains("data")) c.data = resolve(base, get_as<std::string>(j["data"], "data"));
  if (j.contains("format")) c.format = corpus::parse_format(get_as<std::string>(j["format"], "format"));
  if (j.contains("columns")) {
    const auto& cols = j["columns"];
    reject_unknown(cols, {"id", "premise", "hypothesis", "label", "label_codes"}, "columns");
    if (cols.contains("id")) c.columns.id_column = get_as<std::string>(cols["id"], "columns.id");
    if (cols.contains("premise")) c.columns.premise_column = get_as<std::string>(cols["premise"], "columns.premise");
    if (cols.contains("hypothesis")) {
      c.columns.hypothesis_column = get_as<std::string>(cols["hypothesis"], "columns.hypothesis");
    }
    if (cols.contains("label")) c.columns.label_column = get_as<std::string>(cols["label"], "columns.label");
    if (cols.contains("label_codes")) {
      const auto& codes = cols["label_codes"];
      if (!codes.is_object()) throw ConfigError("columns.label_codes must be an object");
      for (const auto& [code, name] : codes.items()) {
        auto l = parse_label(get_as<std::string>(name, "columns.label_codes." + code));
        if (!l) throw ConfigError("columns.label_codes." + code + ": unknown label");
        c.columns.label_codes[code] = *l;
      }
    }
  }
  if (j.contains("split")) {
    const auto& s = j["split"];
    reject_unknown(s, {"train_ratio", "stratified"}, "split");
    if (s.contains("train_ratio")) c.train_ratio = get_as<double>(s["train_ratio"], "split.train_ratio");
    if (s.contains("stratified")) c.stratified = get_as<bool>(s["stratified"], "split.stratified");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config key 'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("resources")) {
    const auto& r = j["resources"];
    reject_unknown(r, {"dir", "gazetteer", "lexicon", "stopwords", "stemmer_rules"}, "resources");
    if (r.contains("dir")) c.set_resource_dir(resolve(base, get_as<std::string>(r["dir"], "resources.dir")));
    if (r.contains("gazetteer")) c.resources.gazetteer = resolve(base, get_as<std::string>(r["gazetteer"], "resources.gazetteer"));
    if (r.contains("lexicon")) c.resources.lexicon = resolve(base, get_as<std::string>(r["lexicon"], "resources.lexicon"));
    if (r.contains("stopwords")) c.resources.stopwords = resolve(base, get_as<std::string>(r["stopwords"], "resources.stopwords"));
    if (r.contains("stemmer_rules")) {
      c.resources.stemmer_rules = resolve(base, get_as<std::string>(r["stemmer_rules"], "resources.stemmer_rules"));
    }
  }
  if (j.contains("normalization")) {
    const auto& n = j["normalization"];
    reject_unknown(n, {"strip_tatweel", "unify_alef_variants", "strip_diacritics", "map_arabic_indic_digits"},
                   "normalization");
    auto& nc = c.normalization;
    if (n.contains("strip_tatweel")) nc.strip_tatweel = get_as<bool>(n["strip_tatweel"], "normalization.strip_tatweel");
    if (n.contains("unify_alef_variants")) {
      nc.unify_alef_variants = get_as<bool>(n["unify_alef_variants"], "normalization.unify_alef_variants");
    }
    if (n.contains("strip_diacritics")) {
      nc.strip_diacritics = get_as<bool>(n["strip_diacritics"], "normalization.strip_diacritics");
    }
    if (n.contains("map_arabic_indic_digits")) {
      nc.map_arabic_indic_digits = get_as<bool>(n["map_arabic_indic_digits"], "normalization.map_arabic_indic_digits");
    }
  }
  if (j.contains("contra")) c.include_contra = get_as<bool>(j["contra"], "contra");
  if (j.contains("vectorizers")) {
    const auto& v = j["vectorizers"];
    if (v.is_string() && v.get<std::string>() == "all") {
      c.vectorizers = vectorize::VectorizerSpec::grid_rows();
    } else {
      c.vectorizers.clear();
      for (const auto& name : get_as<std::vector<std::string>>(v, "vectorizers")) {
        c.vectorizers.push_back(vectorize::VectorizerSpec::parse(name));
      }
    }
  }
  if (j.contains("classifiers")) {
    const auto& v = j["classifiers"];
    if (v.is_string() && v.get<std::string>() == "all") {
      c.classifiers.assign(learn::kAllAlgorithms.begin(), learn::kAllAlgorithms.end());
    } else {
      c.classifiers.clear();
      for (const auto& name : get_as<std::vector<std::string>>(v, "classifiers")) {
        c.classifiers.push_back(learn::parse_algorithm(name));
      }
    }
  }
  if (j.contains("hyperparameters")) c.hyperparameters.apply(j["hyperparameters"]);
  if (j.contains("tfidf")) {
    reject_unknown(j["tfidf"], {"smooth_idf"}, "tfidf");
    if (j["tfidf"].contains("smooth_idf")) c.smooth_idf = get_as<bool>(j["tfidf"]["smooth_idf"], "tfidf.smooth_idf");
  }
  if (j.contains("sgns")) {
    const auto& s = j["sgns"];
    reject_unknown(s, {"dim", "window", "negatives", "epochs", "learning_rate", "min_count", "subsample"}, "sgns");
    auto& g = c.sgns;
    if (s.contains("dim")) g.dim = get_as<std::size_t>(s["dim"], "sgns.dim");
    if (s.contains("window")) g.window = get_as<std::size_t>(s["window"], "sgns.window");
    if (s.contains("negatives")) g.negatives = get_as<std::size_t>(s["negatives"], "sgns.negatives");
    if (s.contains("epochs")) g.epochs = get_as<std::size_t>(s["epochs"], "sgns.epochs");
    if (s.contains("learning_rate")) g.learning_rate = get_as<double>(s["learning_rate"], "sgns.learning_rate");
    if (s.contains("min_count")) g.min_count = get_as<std::size_t>(s["min_count"], "sgns.min_count");
    if (s.contains("subsample")) g.subsample = get_as<double>(s["subsample"], "sgns.subsample");
  }
  if (j.contains("embeddings")) c.embeddings = resolve(base, get_as<std::string>(j["embeddings"], "embeddings"));
  if (j.contains("out")) c.out = resolve(base, get_as<std::string>(j["out"], "out"));
  return c;
}

RunConfig RunConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

json RunConfig::to_json() const {
  json cols{{"id", columns.id_column},
            {"premise", columns.premise_column},
            {"hypothesis", columns.hypothesis_column},
            {"label", columns.label_column}};
  json codes = json::object();
  for (const auto& [code, label] : columns.label_codes) codes[code] = std::string(to_string(label));
  cols["label_codes"] = codes;
  json vecs = json::array();
  for (const auto& v : vectorizers) vecs.push_back(v.name());
  json clfs = json::array();
  for (auto a : classifiers) clfs.push_back(std::string(learn::to_string(a)));
  json j{
      {"data", data.string()},
      {"format", data_format() == corpus::Format::Tsv ? "tsv" : "csv"},
      {"columns", cols},
      {"split", {{"train_ratio", train_ratio}, {"stratified", stratified}}},
      {"seed", seed},
      {"resources",
       {{"gazetteer", resources.gazetteer.string()},
        {"lexicon", resources.lexicon.string()},
        {"stopwords", resources.stopwords.string()},
        {"stemmer_rules", resources.stemmer_rules.string()}}},
      {"normalization",
       {{"strip_tatweel", normalization.strip_tatweel},
        {"unify_alef_variants", normalization.unify_alef_variants},
        {"strip_diacritics", normalization.strip_diacritics},
        {"map_arabic_indic_digits", normalization.map_arabic_indic_digits}}},
      {"vectorizers", vecs},
      {"contra", include_contra},
      {"classifiers", clfs},
      {"hyperparameters", hyperparameters.to_json()},
      {"tfidf", {{"smooth_idf", smooth_idf}}},
      {"sgns",
       {{"dim", sgns.dim}, {"window", sgns.window}, {"negatives", sgns.negatives},
        {"epochs", sgns.epochs}, {"learning_rate", sgns.learning_rate},
        {"min_count", sgns.min_count}, {"subsample", sgns.subsample}}},
  };
  if (embeddings) j["embeddings"] = embeddings->string();
  return j;
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(io::fnv1a64(to_json().dump())));
  return buf;
}

corpus::Format RunConfig::data_format() const {
  if (format) return *format;
  return data.extension() == ".tsv" ? corpus::Format::Tsv : corpus::Format::Csv;
}

void RunConfig::validate() const {
  if (data.empty()) throw ConfigError("no dataset given (set \"data\" or pass --data)");
  if (!fs::is_regular_file(data)) throw ConfigError("dataset not found: " + data.string());
  if (!(train_ratio > 0 && train_ratio < 1)) throw ConfigError("split.train_ratio must be in (0, 1)");
  for (const auto& p : {resources.gazetteer, resources.lexicon, resources.stopwords, resources.stemmer_rules}) {
    if (!fs::is_regular_file(p)) throw ConfigError("resource file not found: " + p.string());
  }
  if (embeddings && !fs::is_regular_file(*embeddings)) {
    throw ConfigError("embeddings file not found: " + embeddings->string());
  }
  if (vectorizers.empty()) throw ConfigError("vectorizer grid is empty");
  if (classifiers.empty()) throw ConfigError("classifier grid is empty");
  if (sgns.dim == 0 || sgns.window == 0 || sgns.epochs == 0 || !(sgns.learning_rate > 0)) {
    throw ConfigError("sgns settings out of range");
  }
  hyperparameters.validate();
}

// ---- running --------------------------------------------------------------

PreparedData prepare_data(const RunConfig& cfg) {
  cfg.validate();
  PreparedData d;
  const auto pairs = corpus::load_dataset(cfg.data, cfg.data_format(), cfg.columns);
  d.split = corpus::split_dataset(pairs, cfg.train_ratio, cfg.seed, cfg.stratified);
  d.resources = contra::Resources::load(cfg.resources, cfg.normalization);
  d.train = pipeline::prepare_all(d.split.train, d.resources);
  d.test = pipeline::prepare_all(d.split.test, d.resources);
  for (const auto& p : d.split.train) d.y_train.push_back(p.label);
  for (const auto& p : d.split.test) d.y_test.push_back(p.label);
  return d;
}

CellResult run_cell(const PreparedData& data, const RunConfig& cfg,
                    const vectorize::VectorizerSpec& spec, learn::Algorithm algorithm,
                    learn::Model* model_out) {
  const auto start = std::chrono::steady_clock::now();
  vectorize::VectorizerSpec s = spec;
  s.include_contra = cfg.include_contra;
  vectorize::FitOptions options;
  options.smooth_idf = cfg.smooth_idf;
  options.sgns = cfg.sgns;
  options.sgns.seed = mix_seed(cfg.seed, 0x5347);
  if (cfg.embeddings) options.pretrained = sgns::EmbeddingTable::load_text(*cfg.embeddings);

  auto pipe = pipeline::FeaturePipeline::fit(s, data.resources, data.train, options);
  const FeatureMatrix x_train = pipe.transform_all(data.train);
  const FeatureMatrix x_test = pipe.transform_all(data.test);

  learn::TrainConfig tc;
  tc.algorithm = algorithm;
  tc.hp = cfg.hyperparameters;
  tc.seed = cfg.seed;
  learn::Estimator est = learn::train(x_train, data.y_train, tc);

  CellResult out;
  out.vectorizer = s;
  out.algorithm = algorithm;
  out.predictions = est.predict(x_test);
  out.metrics = learn::evaluate(data.y_test, out.predictions);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (model_out) *model_out = learn::Model{std::move(pipe), std::move(est)};
  return out;
}

ExperimentReport run_experiment(const RunConfig& cfg, const PreparedData& data, std::ostream* progress) {
  ExperimentReport report;
  report.seed = cfg.seed;
  report.config_hash = cfg.hash();
  report.version = std::string(library_version());
  report.train_size = data.train.size();
  report.test_size = data.test.size();
  for (const auto& spec : cfg.vectorizers) {
    for (auto algo : cfg.classifiers) {
      report.rows.push_back(run_cell(data, cfg, spec, algo));
      if (progress) {
        const auto& r = report.rows.back();
        *progress << spec.name() << " / " << learn::column_name(algo) << ": accuracy "
                  << std::fixed << std::setprecision(4) << r.metrics.accuracy << " ("
                  << std::setprecision(1) << r.seconds << " s)\n";
        progress->unsetf(std::ios::floatfield);
      }
    }
  }
  return report;
}

// ---- reports --------------------------------------------------------------

std::string report_csv(const ExperimentReport& report) {
  std::string out =
      "vectorizer,classifier,accuracy,macro_f1,f1_contradiction,f1_entailment,f1_neutral\n";
  for (const auto& r : report.rows) {
    out += r.vectorizer.name() + "," + std::string(learn::to_string(r.algorithm)) + "," +
           format_double(r.metrics.accuracy) + "," + format_double(r.metrics.macro_f1);
    for (double f : r.metrics.f1) out += "," + format_double(f);
    out += "\n";
  }
  return out;
}

std::string timings_csv(const ExperimentReport& report) {
  std::string out = "vectorizer,classifier,seconds\n";
  for (const auto& r : report.rows) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", r.seconds);
    out += r.vectorizer.name() + "," + std::string(learn::to_string(r.algorithm)) + "," + buf + "\n";
  }
  return out;
}

std::string report_markdown(const ExperimentReport& report) {
  std::vector<vectorize::VectorizerSpec> rows;
  for (const auto& r : report.rows) {
    if (std::find(rows.begin(), rows.end(), r.vectorizer) == rows.end()) rows.push_back(r.vectorizer);
  }
  std::ostringstream md;
  md << "# Results\n\n";
  md << "Accuracy on the held-out split (train " << report.train_size << ", test "
     << report.test_size << "), seed " << report.seed << ", config " << report.config_hash
     << ", version " << report.version << ".\n\n";
  md << "| Language model |";
  for (auto a : learn::kAllAlgorithms) md << ' ' << learn::column_name(a) << " |";
  md << "\n|---|";
  for (std::size_t i = 0; i < learn::kAllAlgorithms.size(); ++i) md << "---|";
  md << '\n';
  for (const auto& spec : rows) {
    md << "| " << spec.title() << " |";
    for (auto a : learn::kAllAlgorithms) {
      const CellResult* cell = nullptr;
      for (const auto& r : report.rows) {
        if (r.vectorizer == spec && r.algorithm == a) cell = &r;
      }
      if (cell) {
        md << ' ' << std::fixed << std::setprecision(3) << cell->metrics.accuracy << " |";
      } else {
        md << " n/a |";
      }
    }
    md << '\n';
  }
  md << "\n## Per-cell metrics\n\n";
  md << "| Vectorizer | Classifier | Accuracy | Macro-F1 | F1 C | F1 E | F1 N | Seconds |\n";
  md << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    md << "| " << r.vectorizer.name() << " | " << learn::column_name(r.algorithm) << " | "
       << std::setprecision(4) << r.metrics.accuracy << " | " << r.metrics.macro_f1 << " | "
       << r.metrics.f1[0] << " | " << r.metrics.f1[1] << " | " << r.metrics.f1[2] << " | "
       << std::setprecision(1) << r.seconds << " |\n";
  }
  return md.str();
}

std::string predictions_csv(const std::vector<corpus::LabeledPair>& test,
                            const std::vector<Label>& predicted) {
  if (test.size() != predicted.size()) throw Error("prediction count differs from test size");
  std::string out = "id,gold,predicted\n";
  for (std::size_t i = 0; i < test.size(); ++i) {
    std::string id = test[i].id;
    if (id.find_first_of(",\"\r\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : id) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      id = quoted + "\"";
    }
    out += id + "," + std::string(to_string(test[i].label)) + "," +
           std::string(to_string(predicted[i])) + "\n";
  }
  return out;
}

double accuracy_from_predictions_csv(const std::string& text) {
  const auto rows = corpus::parse_dataset(text, corpus::Format::Csv,
                                          {"id", "gold", "predicted", "gold", {}});
  // parse_dataset maps the gold column to `label` and the predicted column to
  // `hypothesis`.
  if (rows.empty()) throw Error("predictions file has no rows");
  std::size_t correct = 0;
  for (const auto& r : rows) {
    const auto p = parse_label(r.hypothesis);
    if (!p) throw Error("bad predicted label '" + r.hypothesis + "'");
    correct += *p == r.label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

void write_outputs(const ExperimentReport& report, const PreparedData& data, const RunConfig& cfg,
                   const fs::path& dir) {
  fs::create_directories(dir / "predictions");
  auto write = [](const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out << s;
  };
  write(dir / "report.csv", report_csv(report));
  write(dir / "report.md", report_markdown(report));
  write(dir / "timings.csv", timings_csv(report));
  json run{{"seed", report.seed},
           {"config_hash", report.config_hash},
           {"version", report.version},
           {"train_size", report.train_size},
           {"test_size", report.test_size},
           {"config", cfg.to_json()}};
  write(dir / "run.json", run.dump(2) + "\n");
  for (const auto& r : report.rows) {
    write(dir / "predictions" / (r.vectorizer.name() + "__" + std::string(learn::to_string(r.algorithm)) + ".csv"),
          predictions_csv(data.split.test, r.predictions));
  }
}

}  // namespace arnli::experiment
