#include "arnli/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "arnli/errors.hpp"
#include "arnli/utf8.hpp"

namespace arnli::vectorize {

namespace {

struct RowInfo {
  const char* name;
  const char* title;
  VectorizerSpec spec;
};

const std::vector<RowInfo>& rows() {
  static const std::vector<RowInfo> table = {
      {"tfidf-char", "TFIDF / Char", {Scheme::Tfidf, Analyzer::Char, 1, true}},
      {"tfidf-word", "TFIDF / Word", {Scheme::Tfidf, Analyzer::Word, 1, true}},
      {"tfidf-union", "TFIDF / Union", {Scheme::TfidfUnion, Analyzer::Word, 1, true}},
      {"bow-char", "Bag of Words / Chars", {Scheme::Bow, Analyzer::Char, 1, true}},
      {"bow-word", "Bag of Words / Words", {Scheme::Bow, Analyzer::Word, 1, true}},
      {"ngram-word-1", "N-Grams / Words / Unigram", {Scheme::Ngram, Analyzer::Word, 1, true}},
      {"ngram-word-2", "N-Grams / Words / Bigram", {Scheme::Ngram, Analyzer::Word, 2, true}},
      {"ngram-word-3", "N-Grams / Words / Trigram", {Scheme::Ngram, Analyzer::Word, 3, true}},
      {"ngram-char-1", "N-Grams / Chars / Unigram", {Scheme::Ngram, Analyzer::Char, 1, true}},
      {"ngram-char-2", "N-Grams / Chars / Bigram", {Scheme::Ngram, Analyzer::Char, 2, true}},
      {"ngram-char-3", "N-Grams / Chars / Trigram", {Scheme::Ngram, Analyzer::Char, 3, true}},
      {"w2v", "W2Vec / word2vec", {Scheme::W2v, Analyzer::Word, 1, true}},
      {"w2v-tfidf", "W2Vec / word2vec TF-IDF", {Scheme::W2vTfidf, Analyzer::Word, 1, true}},
  };
  return table;
}

const RowInfo& row_of(const VectorizerSpec& spec) {
  for (const auto& r : rows()) {
    if (r.spec.scheme == spec.scheme && r.spec.analyzer == spec.analyzer && r.spec.n == spec.n) {
      return r;
    }
  }
  throw ConfigError("unsupported vectorizer combination");
}

std::map<std::uint32_t, double> count_terms(const TermList& terms, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : terms) {
    if (auto idx = vocab.index(t)) counts[*idx] += 1.0;
  }
  return counts;
}

SparseVector to_sparse(const std::map<std::uint32_t, double>& entries, std::size_t dim) {
  SparseVector v;
  v.dim = dim;
  for (const auto& [i, x] : entries) {
    if (x != 0.0) {
      v.indices.push_back(i);
      v.values.push_back(x);
    }
  }
  return v;
}

SparseVector dense_block(const std::vector<double>& dense) {
  return SparseVector::from_dense(dense);
}

}  // namespace

std::string VectorizerSpec::name() const { return row_of(*this).name; }
std::string VectorizerSpec::title() const { return row_of(*this).title; }

VectorizerSpec VectorizerSpec::parse(const std::string& name) {
  for (const auto& r : rows()) {
    if (name == r.name) return r.spec;
  }
  std::string known;
  for (const auto& r : rows()) known += std::string(known.empty() ? "" : ", ") + r.name;
  throw ConfigError("unknown vectorizer '" + name + "' (known: " + known + ")");
}

std::vector<VectorizerSpec> VectorizerSpec::grid_rows() {
  std::vector<VectorizerSpec> out;
  for (const auto& r : rows()) out.push_back(r.spec);
  return out;
}

TermList extract_terms(const Document& doc, Analyzer analyzer, std::size_t n) {
  if (n == 0) throw ConfigError("n-gram order must be at least 1");
  TermList terms;
  if (analyzer == Analyzer::Word) {
    const auto& units = doc.stems;
    if (units.size() < n) return terms;
    for (std::size_t i = 0; i + n <= units.size(); ++i) {
      std::string gram = units[i];
      for (std::size_t k = 1; k < n; ++k) gram += ' ' + units[i + k];
      terms.push_back(std::move(gram));
    }
  } else {
    const std::u32string units = utf8::decode(doc.chars);
    if (units.size() < n) return terms;
    for (std::size_t i = 0; i + n <= units.size(); ++i) {
      terms.push_back(utf8::encode(std::u32string_view(units).substr(i, n)));
    }
  }
  return terms;
}

Vocabulary Vocabulary::fit(const std::vector<TermList>& docs) {
  if (docs.empty()) throw Error("cannot fit a vocabulary on an empty corpus");
  std::set<std::string> universe;
  for (const auto& d : docs) universe.insert(d.begin(), d.end());
  if (universe.empty()) throw Error("corpus yields no terms");
  return from_terms(std::vector<std::string>(universe.begin(), universe.end()));
}

Vocabulary Vocabulary::from_terms(std::vector<std::string> sorted_terms) {
  Vocabulary v;
  v.terms_ = std::move(sorted_terms);
  for (std::size_t i = 0; i < v.terms_.size(); ++i) {
    v.index_.emplace(v.terms_[i], static_cast<std::uint32_t>(i));
  }
  return v;
}

std::optional<std::uint32_t> Vocabulary::index(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

IdfTable IdfTable::fit(const std::vector<TermList>& docs, const Vocabulary& vocab, bool smooth) {
  IdfTable table;
  table.documents = docs.size();
  table.smooth = smooth;
  std::vector<std::size_t> df(vocab.size(), 0);
  for (const auto& d : docs) {
    std::set<std::uint32_t> present;
    for (const auto& t : d) {
      if (auto idx = vocab.index(t)) present.insert(*idx);
    }
    for (auto i : present) ++df[i];
  }
  table.idf.resize(vocab.size());
  const double n = static_cast<double>(docs.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    const double f = static_cast<double>(df[i]);
    table.idf[i] = smooth ? std::log((1.0 + n) / (1.0 + f)) + 1.0 : std::log(n / f);
  }
  return table;
}

double IdfTable::unseen() const {
  const double n = static_cast<double>(documents);
  // Unsmoothed IDF is infinite for df = 0; fall back to the smoothed value.
  return std::log(1.0 + n) + 1.0;
}

SparseVector bow_vector(const TermList& terms, const Vocabulary& vocab) {
  auto counts = count_terms(terms, vocab);
  for (auto& [i, x] : counts) x = 1.0;
  return to_sparse(counts, vocab.size());
}

SparseVector ngram_vector(const TermList& terms, const Vocabulary& vocab) {
  return to_sparse(count_terms(terms, vocab), vocab.size());
}

SparseVector tfidf_vector(const TermList& terms, const Vocabulary& vocab, const IdfTable& idf) {
  auto weights = count_terms(terms, vocab);
  double norm2 = 0;
  for (auto& [i, x] : weights) {
    x *= idf.idf[i];
    norm2 += x * x;
  }
  if (norm2 > 0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& [i, x] : weights) x *= inv;
  }
  return to_sparse(weights, vocab.size());
}

std::vector<double> sentence_embedding(const textproc::TokenList& tokens,
                                       const sgns::EmbeddingTable& table,
                                       const Vocabulary* vocab, const IdfTable* idf) {
  std::vector<double> sum(table.dim(), 0.0);
  double total_weight = 0;
  for (const auto& t : tokens) {
    if (!table.contains(t)) continue;
    double w = 1.0;
    if (idf != nullptr && vocab != nullptr) {
      auto idx = vocab->index(t);
      w = idx ? idf->idf[*idx] : idf->unseen();
    }
    const auto vec = table.lookup(t);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * vec[i];
    total_weight += w;
  }
  if (total_weight > 0) {
    for (auto& x : sum) x /= total_weight;
  }
  return sum;
}

std::size_t FittedVectorizer::dimension() const {
  switch (spec.scheme) {
    case Scheme::Bow:
    case Scheme::Ngram:
    case Scheme::Tfidf:
      return vocab.size();
    case Scheme::TfidfUnion:
      return vocab.size() + char_vocab.size();
    case Scheme::W2v:
    case Scheme::W2vTfidf:
      return embeddings.dim();
  }
  return 0;
}

SparseVector FittedVectorizer::transform(const Document& doc) const {
  switch (spec.scheme) {
    case Scheme::Bow:
      return bow_vector(extract_terms(doc, spec.analyzer, 1), vocab);
    case Scheme::Ngram:
      return ngram_vector(extract_terms(doc, spec.analyzer, spec.n), vocab);
    case Scheme::Tfidf:
      return tfidf_vector(extract_terms(doc, spec.analyzer, 1), vocab, idf);
    case Scheme::TfidfUnion: {
      SparseVector v = tfidf_vector(extract_terms(doc, Analyzer::Word, 1), vocab, idf);
      v.append(tfidf_vector(extract_terms(doc, Analyzer::Char, 1), char_vocab, char_idf));
      return v;
    }
    case Scheme::W2v: {
      auto v = dense_block(sentence_embedding(doc.stems, embeddings));
      v.dim = embeddings.dim();
      return v;
    }
    case Scheme::W2vTfidf: {
      auto v = dense_block(sentence_embedding(doc.stems, embeddings, &vocab, &idf));
      v.dim = embeddings.dim();
      return v;
    }
  }
  throw Error("unknown vectorizer scheme");
}

FittedVectorizer fit_vectorizer(const VectorizerSpec& spec, const std::vector<Document>& docs,
                                const FitOptions& options) {
  FittedVectorizer f;
  f.spec = spec;
  auto terms_for = [&](Analyzer a, std::size_t n) {
    std::vector<TermList> out;
    out.reserve(docs.size());
    for (const auto& d : docs) out.push_back(extract_terms(d, a, n));
    return out;
  };
  switch (spec.scheme) {
    case Scheme::Bow:
    case Scheme::Ngram: {
      f.vocab = Vocabulary::fit(terms_for(spec.analyzer, spec.scheme == Scheme::Ngram ? spec.n : 1));
      break;
    }
    case Scheme::Tfidf: {
      const auto t = terms_for(spec.analyzer, 1);
      f.vocab = Vocabulary::fit(t);
      f.idf = IdfTable::fit(t, f.vocab, options.smooth_idf);
      break;
    }
    case Scheme::TfidfUnion: {
      const auto tw = terms_for(Analyzer::Word, 1);
      f.vocab = Vocabulary::fit(tw);
      f.idf = IdfTable::fit(tw, f.vocab, options.smooth_idf);
      const auto tc = terms_for(Analyzer::Char, 1);
      f.char_vocab = Vocabulary::fit(tc);
      f.char_idf = IdfTable::fit(tc, f.char_vocab, options.smooth_idf);
      break;
    }
    case Scheme::W2v:
    case Scheme::W2vTfidf: {
      if (options.pretrained) {
        f.embeddings = *options.pretrained;
      } else {
        std::vector<textproc::TokenList> sentences;
        sentences.reserve(docs.size());
        for (const auto& d : docs) sentences.push_back(d.stems);
        f.embeddings = sgns::train_sgns(sentences, options.sgns);
      }
      if (spec.scheme == Scheme::W2vTfidf) {
        const auto tw = terms_for(Analyzer::Word, 1);
        f.vocab = Vocabulary::fit(tw);
        f.idf = IdfTable::fit(tw, f.vocab, options.smooth_idf);
      }
      break;
    }
  }
  return f;
}

SparseVector build_pair_vector(const FittedVectorizer& fitted, const Document& premise,
                               const Document& hypothesis, const std::vector<double>& contra) {
  SparseVector v = fitted.transform(premise);
  v.append(fitted.transform(hypothesis));
  if (fitted.spec.include_contra) {
    SparseVector c = SparseVector::from_dense(contra);
    v.append(c);
  }
  return v;
}

}  // namespace arnli::vectorize
