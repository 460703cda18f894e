#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "arnli/sgns.hpp"
#include "arnli/sparse.hpp"
#include "arnli/textproc.hpp"

namespace arnli::vectorize {

enum class Scheme : std::uint8_t { Bow, Ngram, Tfidf, TfidfUnion, W2v, W2vTfidf };
enum class Analyzer : std::uint8_t { Word, Char };

struct VectorizerSpec {
  Scheme scheme = Scheme::Bow;
  Analyzer analyzer = Analyzer::Char;
  std::size_t n = 1;  // n-gram order; 1 for every scheme except Ngram
  bool include_contra = true;

  // Short CLI name, e.g. "bow-char", "ngram-word-2", "w2v-tfidf".
  std::string name() const;
  // Row label in the Markdown report, e.g. "Bag of Words / Chars".
  std::string title() const;
  // Throws ConfigError for names outside the 13 supported rows.
  static VectorizerSpec parse(const std::string& name);
  // The 13 rows of the experiment grid in report order.
  static std::vector<VectorizerSpec> grid_rows();

  bool operator==(const VectorizerSpec&) const = default;
};

// What the analyzers see of one sentence.
struct Document {
  textproc::TokenList stems;  // word analyzer units
  std::string chars;          // punctuation-free unstemmed words joined by ' '
};

using TermList = std::vector<std::string>;

// All contiguous n-grams of the analyzer units (L - n + 1 of them, or none
// when L < n). Word grams join stems with a space; char grams are substrings.
TermList extract_terms(const Document& doc, Analyzer analyzer, std::size_t n);

class Vocabulary {
 public:
  Vocabulary() = default;
  // Lexicographically sorted term universe. Throws Error on an empty corpus.
  static Vocabulary fit(const std::vector<TermList>& docs);
  static Vocabulary from_terms(std::vector<std::string> sorted_terms);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<std::uint32_t> index(const std::string& term) const;

  bool operator==(const Vocabulary& o) const { return terms_ == o.terms_; }

 private:
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct IdfTable {
  std::vector<double> idf;  // aligned with the vocabulary
  std::size_t documents = 0;
  bool smooth = true;

  // smooth: ln((1 + N) / (1 + df)) + 1; otherwise ln(N / df).
  static IdfTable fit(const std::vector<TermList>& docs, const Vocabulary& vocab,
                      bool smooth = true);
  // IDF of a term absent from training (df = 0).
  double unseen() const;

  bool operator==(const IdfTable&) const = default;
};

// Binary presence; out-of-vocabulary terms are dropped.
SparseVector bow_vector(const TermList& terms, const Vocabulary& vocab);
// Raw occurrence counts.
SparseVector ngram_vector(const TermList& terms, const Vocabulary& vocab);
// TF (raw count) * IDF, L2-normalized; an all-zero vector stays zero.
SparseVector tfidf_vector(const TermList& terms, const Vocabulary& vocab, const IdfTable& idf);

// Mean of known-word vectors, or with `idf` the TF*IDF-weighted mean.
// No known word gives the zero vector.
std::vector<double> sentence_embedding(const textproc::TokenList& tokens,
                                       const sgns::EmbeddingTable& table,
                                       const Vocabulary* vocab = nullptr,
                                       const IdfTable* idf = nullptr);

// Fitted language-model state for one VectorizerSpec.
struct FittedVectorizer {
  VectorizerSpec spec;
  Vocabulary vocab;       // word or char vocabulary (word for Union / w2v-tfidf)
  IdfTable idf;
  Vocabulary char_vocab;  // Union only
  IdfTable char_idf;
  sgns::EmbeddingTable embeddings;

  std::size_t dimension() const;
  SparseVector transform(const Document& doc) const;

  bool operator==(const FittedVectorizer&) const = default;
};

struct FitOptions {
  bool smooth_idf = true;
  sgns::SgnsConfig sgns;
  // Pre-trained vectors substitute for SGNS training when set.
  std::optional<sgns::EmbeddingTable> pretrained;
};

// `docs` are the training sentences only (both sides of every pair).
FittedVectorizer fit_vectorizer(const VectorizerSpec& spec, const std::vector<Document>& docs,
                                const FitOptions& options = {});

// [v(premise) | v(hypothesis) | contra?]
SparseVector build_pair_vector(const FittedVectorizer& fitted, const Document& premise,
                               const Document& hypothesis, const std::vector<double>& contra);

}  // namespace arnli::vectorize
