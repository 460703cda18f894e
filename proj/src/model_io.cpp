#include "arnli/model_io.hpp"

#include <fstream>
#include <sstream>

#include "arnli/errors.hpp"
#include "arnli/serialize.hpp"
#include "arnli/utf8.hpp"

namespace arnli::learn {

Label Model::predict(std::string_view premise, std::string_view hypothesis) const {
  return estimator.predict(pipeline.transform(premise, hypothesis));
}

std::array<double, kNumLabels> Model::scores(std::string_view premise,
                                             std::string_view hypothesis) const {
  return estimator.scores(pipeline.transform(premise, hypothesis));
}

namespace {

using io::Reader;
using io::Writer;

void write_rules(Writer& w, const std::vector<textproc::AffixRule>& rules) {
  w.u64(rules.size());
  for (const auto& r : rules) {
    w.str(utf8::encode(r.affix));
    w.u64(r.min_residual);
  }
}

std::vector<textproc::AffixRule> read_rules(Reader& r) {
  std::vector<textproc::AffixRule> rules(r.count(16));
  for (auto& rule : rules) {
    rule.affix = utf8::decode(r.str());
    rule.min_residual = r.u64();
  }
  return rules;
}

void write_resources(Writer& w, const contra::Resources& res) {
  w.u8(res.norm.strip_tatweel);
  w.u8(res.norm.unify_alef_variants);
  w.u8(res.norm.strip_diacritics);
  w.u8(res.norm.map_arabic_indic_digits);
  write_rules(w, res.stemmer.rules().prefixes);
  write_rules(w, res.stemmer.rules().suffixes);
  w.u64(res.gazetteer.size());
  for (const auto& [surface, cls] : res.gazetteer.entries()) {
    w.str(surface);
    w.u8(static_cast<std::uint8_t>(cls));
  }
  w.u64(res.lexicon.size());
  for (const auto& [pair, rel] : res.lexicon.relations()) {
    w.str(pair.first);
    w.str(pair.second);
    w.u8(static_cast<std::uint8_t>(rel));
  }
  w.strs(res.stopwords.negations);
  w.strs(res.stopwords.exceptions);
  w.str(res.stopwords.confirmation.first);
  w.str(res.stopwords.confirmation.second);
}

contra::Resources read_resources(Reader& r) {
  contra::Resources res;
  res.norm.strip_tatweel = r.u8() != 0;
  res.norm.unify_alef_variants = r.u8() != 0;
  res.norm.strip_diacritics = r.u8() != 0;
  res.norm.map_arabic_indic_digits = r.u8() != 0;
  textproc::StemmerRules rules;
  rules.prefixes = read_rules(r);
  rules.suffixes = read_rules(r);
  res.stemmer = textproc::Stemmer(std::move(rules));
  const std::size_t g = r.count(9);
  for (std::size_t i = 0; i < g; ++i) {
    const std::string surface = r.str();
    const auto cls = r.u8();
    if (cls > static_cast<std::uint8_t>(contra::EntityClass::Misc)) throw FormatError("bad entity class");
    res.gazetteer.add(surface, static_cast<contra::EntityClass>(cls), res.norm);
  }
  const std::size_t l = r.count(17);
  for (std::size_t i = 0; i < l; ++i) {
    const std::string a = r.str();
    const std::string b = r.str();
    const auto rel = r.u8();
    if (rel > 1) throw FormatError("bad lexicon relation");
    res.lexicon.add(a, b, static_cast<contra::Relation>(rel));
  }
  res.stopwords.negations = r.strs();
  res.stopwords.exceptions = r.strs();
  res.stopwords.confirmation.first = r.str();
  res.stopwords.confirmation.second = r.str();
  return res;
}

void write_idf(Writer& w, const vectorize::IdfTable& idf) {
  w.f64s(idf.idf);
  w.u64(idf.documents);
  w.u8(idf.smooth);
}

vectorize::IdfTable read_idf(Reader& r) {
  vectorize::IdfTable idf;
  idf.idf = r.f64s();
  idf.documents = r.u64();
  idf.smooth = r.u8() != 0;
  return idf;
}

void write_vectorizer(Writer& w, const vectorize::FittedVectorizer& v) {
  w.u8(static_cast<std::uint8_t>(v.spec.scheme));
  w.u8(static_cast<std::uint8_t>(v.spec.analyzer));
  w.u64(v.spec.n);
  w.u8(v.spec.include_contra);
  w.strs(v.vocab.terms());
  write_idf(w, v.idf);
  w.strs(v.char_vocab.terms());
  write_idf(w, v.char_idf);
  w.u64(v.embeddings.dim());
  w.u64(v.embeddings.size());
  for (const auto& word : v.embeddings.words()) {
    w.str(word);
    for (double d : v.embeddings.lookup(word)) w.f64(d);
  }
}

vectorize::FittedVectorizer read_vectorizer(Reader& r) {
  vectorize::FittedVectorizer v;
  const auto scheme = r.u8();
  if (scheme > static_cast<std::uint8_t>(vectorize::Scheme::W2vTfidf)) throw FormatError("bad scheme");
  v.spec.scheme = static_cast<vectorize::Scheme>(scheme);
  const auto analyzer = r.u8();
  if (analyzer > 1) throw FormatError("bad analyzer");
  v.spec.analyzer = static_cast<vectorize::Analyzer>(analyzer);
  v.spec.n = r.u64();
  v.spec.include_contra = r.u8() != 0;
  v.vocab = vectorize::Vocabulary::from_terms(r.strs());
  v.idf = read_idf(r);
  v.char_vocab = vectorize::Vocabulary::from_terms(r.strs());
  v.char_idf = read_idf(r);
  const std::size_t dim = r.u64();
  const std::size_t count = r.count(8 + 8 * dim);
  v.embeddings = sgns::EmbeddingTable(dim);
  std::vector<double> vec(dim);
  for (std::size_t i = 0; i < count; ++i) {
    const std::string word = r.str();
    for (auto& d : vec) d = r.f64();
    v.embeddings.add(word, vec);
  }
  return v;
}

void write_tree(Writer& w, const DecisionTree& t) {
  w.u64(t.nodes.size());
  for (const auto& n : t.nodes) {
    w.i32(n.feature);
    w.f64(n.threshold);
    w.u32(n.left);
    w.u32(n.right);
    for (double d : n.distribution) w.f64(d);
    w.u8(static_cast<std::uint8_t>(n.label));
  }
}

Label read_label(Reader& r) {
  const auto l = r.u8();
  if (l >= kNumLabels) throw FormatError("bad label code");
  return label_at(l);
}

DecisionTree read_tree(Reader& r) {
  DecisionTree t;
  t.nodes.resize(r.count(45));
  for (auto& n : t.nodes) {
    n.feature = r.i32();
    n.threshold = r.f64();
    n.left = r.u32();
    n.right = r.u32();
    for (auto& d : n.distribution) d = r.f64();
    n.label = read_label(r);
  }
  // Children must point forward so traversal terminates.
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= t.nodes.size() ||
                         n.right >= t.nodes.size())) {
      throw FormatError("bad tree node links");
    }
  }
  if (t.nodes.empty()) throw FormatError("empty tree");
  return t;
}

void write_estimator(Writer& w, const Estimator& e) {
  w.u8(static_cast<std::uint8_t>(e.algorithm));
  w.u64(e.n_features);
  w.u64(e.config.seed);
  w.str(e.config.hp.to_json().dump());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, DecisionTree>) {
          write_tree(w, p);
        } else if constexpr (std::is_same_v<T, Forest>) {
          w.u64(p.trees.size());
          for (const auto& t : p.trees) write_tree(w, t);
        } else if constexpr (std::is_same_v<T, NeighborStore>) {
          w.u64(p.k);
          w.u64(p.exemplars.cols());
          w.u64(p.exemplars.rows());
          for (std::size_t r = 0; r < p.exemplars.rows(); ++r) {
            const auto idx = p.exemplars.row_indices(r);
            const auto val = p.exemplars.row_values(r);
            w.u8(static_cast<std::uint8_t>(p.labels[r]));
            w.u64(idx.size());
            for (std::size_t k = 0; k < idx.size(); ++k) {
              w.u32(idx[k]);
              w.f64(val[k]);
            }
          }
        } else if constexpr (std::is_same_v<T, Boosted>) {
          w.u64(p.stumps.size());
          for (std::size_t m = 0; m < p.stumps.size(); ++m) {
            write_tree(w, p.stumps[m]);
            w.f64(p.alphas[m]);
          }
        } else {
          for (std::size_t c = 0; c < kNumLabels; ++c) w.f64s(p.weights[c]);
          for (double b : p.bias) w.f64(b);
        }
      },
      e.params);
}

Estimator read_estimator(Reader& r) {
  Estimator e;
  const auto algo = r.u8();
  if (algo > static_cast<std::uint8_t>(Algorithm::Rf)) throw FormatError("bad algorithm tag");
  e.algorithm = static_cast<Algorithm>(algo);
  e.config.algorithm = e.algorithm;
  e.n_features = r.u64();
  e.config.seed = r.u64();
  try {
    e.config.hp.apply(nlohmann::json::parse(r.str()));
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(std::string("bad hyperparameter block: ") + ex.what());
  } catch (const ConfigError& ex) {
    throw FormatError(std::string("bad hyperparameter block: ") + ex.what());
  }
  switch (e.algorithm) {
    case Algorithm::Dt:
      e.params = read_tree(r);
      break;
    case Algorithm::Rf: {
      Forest f;
      f.trees.resize(r.count(8));
      for (auto& t : f.trees) t = read_tree(r);
      if (f.trees.empty()) throw FormatError("empty forest");
      e.params = std::move(f);
      break;
    }
    case Algorithm::Knn: {
      NeighborStore s;
      s.k = r.u64();
      const std::size_t cols = r.u64();
      const std::size_t rows = r.count(9);
      s.exemplars = FeatureMatrix(cols);
      for (std::size_t i = 0; i < rows; ++i) {
        s.labels.push_back(read_label(r));
        SparseVector v;
        v.dim = cols;
        const std::size_t nnz = r.count(12);
        for (std::size_t k = 0; k < nnz; ++k) {
          const auto idx = r.u32();
          if (idx >= cols || (!v.indices.empty() && idx <= v.indices.back())) {
            throw FormatError("bad sparse row");
          }
          v.indices.push_back(idx);
          v.values.push_back(r.f64());
        }
        s.exemplars.add_row(v);
      }
      e.params = std::move(s);
      break;
    }
    case Algorithm::AdaBoost: {
      Boosted b;
      const std::size_t m = r.count(16);
      for (std::size_t i = 0; i < m; ++i) {
        b.stumps.push_back(read_tree(r));
        b.alphas.push_back(r.f64());
      }
      e.params = std::move(b);
      break;
    }
    case Algorithm::Svm:
    case Algorithm::Sgd: {
      LinearOvr lin;
      for (std::size_t c = 0; c < kNumLabels; ++c) {
        lin.weights.push_back(r.f64s());
        if (lin.weights.back().size() != e.n_features) throw FormatError("bad weight vector length");
      }
      for (auto& b : lin.bias) b = r.f64();
      e.params = std::move(lin);
      break;
    }
  }
  return e;
}

}  // namespace

std::string serialize_model(const Model& model) {
  Writer payload;
  payload.u64(kNumLabels);
  for (Label l : kAllLabels) payload.str(to_string(l));
  write_resources(payload, model.pipeline.resources());
  write_vectorizer(payload, model.pipeline.vectorizer());
  write_estimator(payload, model.estimator);

  Writer out;
  out.raw(std::string_view(kModelMagic, sizeof kModelMagic));
  out.u32(kModelFormatVersion);
  out.u8(static_cast<std::uint8_t>(model.estimator.algorithm));
  out.u64(payload.bytes().size());
  out.raw(payload.bytes());
  out.u64(io::fnv1a64(payload.bytes()));
  return out.take();
}

Model deserialize_model(std::string_view bytes) {
  Reader head(bytes);
  if (head.remaining() < sizeof kModelMagic ||
      head.raw(sizeof kModelMagic) != std::string_view(kModelMagic, sizeof kModelMagic)) {
    throw FormatError("not a model file (bad magic)");
  }
  const std::uint32_t version = head.u32();
  if (version != kModelFormatVersion) {
    throw VersionError("unsupported model format version " + std::to_string(version) +
                       " (this build reads version " + std::to_string(kModelFormatVersion) + ")");
  }
  const std::uint8_t tag = head.u8();
  const std::uint64_t length = head.u64();
  if (length > head.remaining() || head.remaining() - length < 8) {
    throw FormatError("model file is truncated");
  }
  const std::string_view payload = head.raw(static_cast<std::size_t>(length));
  const std::uint64_t checksum = head.u64();
  if (head.remaining() != 0) throw FormatError("trailing bytes after model checksum");
  if (checksum != io::fnv1a64(payload)) throw FormatError("model checksum mismatch");

  Reader r(payload);
  if (r.u64() != kNumLabels) throw FormatError("unexpected label count");
  for (Label l : kAllLabels) {
    if (r.str() != to_string(l)) throw FormatError("unexpected label order");
  }
  contra::Resources res = read_resources(r);
  vectorize::FittedVectorizer vec = read_vectorizer(r);
  Estimator est = read_estimator(r);
  if (r.remaining() != 0) throw FormatError("unexpected bytes at end of payload");
  if (static_cast<std::uint8_t>(est.algorithm) != tag) throw FormatError("algorithm tag mismatch");

  Model m{pipeline::FeaturePipeline(std::move(res), std::move(vec)), std::move(est)};
  if (m.pipeline.dimension() != m.estimator.n_features) {
    throw FormatError("vectorizer dimension does not match classifier");
  }
  return m;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing model file " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

}  // namespace arnli::learn
