#include <cmath>
#include <map>
#include <set>

#include "doctest.h"

#include "arnli/errors.hpp"
#include "arnli/pipeline.hpp"
#include "arnli/rng.hpp"
#include "arnli/utf8.hpp"
#include "arnli/vectorize.hpp"
#include "synthetic.hpp"

using namespace arnli;
using namespace arnli::vectorize;

namespace {

Document word_doc(const std::string& s) {
  Document d;
  d.chars = s;
  std::string cur;
  for (char c : s + " ") {
    if (c == ' ') {
      if (!cur.empty()) d.stems.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return d;
}

std::vector<TermList> terms_of(const std::vector<Document>& docs, Analyzer a, std::size_t n) {
  std::vector<TermList> out;
  for (const auto& d : docs) out.push_back(extract_terms(d, a, n));
  return out;
}

double norm2(const SparseVector& v) { return std::sqrt(v.squared_norm()); }

const contra::Resources& shipped() {
  static const auto r = contra::Resources::load(contra::Resources::default_paths(ARNLI_DATA_DIR));
  return r;
}

}  // namespace

TEST_CASE("grid has the 13 rows and names round-trip") {
  const auto rows = VectorizerSpec::grid_rows();
  CHECK(rows.size() == 13);
  std::set<std::string> names;
  for (const auto& r : rows) {
    names.insert(r.name());
    CHECK(VectorizerSpec::parse(r.name()) == r);
    CHECK_FALSE(r.title().empty());
  }
  CHECK(names.size() == 13);
  CHECK_THROWS_AS(VectorizerSpec::parse("tfidf-trigram"), ConfigError);
}

TEST_CASE("vocabulary is sorted, dense and deterministic") {
  const std::vector<Document> docs{word_doc("ا ب"), word_doc("ا ج")};
  const auto v = Vocabulary::fit(terms_of(docs, Analyzer::Word, 1));
  CHECK(v.size() == 3);
  CHECK(v.terms() == std::vector<std::string>{"ا", "ب", "ج"});
  CHECK(*v.index("ج") == 2);
  CHECK_FALSE(v.index("د").has_value());
  CHECK(Vocabulary::fit(terms_of(docs, Analyzer::Word, 1)) == v);
  CHECK_THROWS_AS(Vocabulary::fit({}), Error);
  CHECK_THROWS_AS(Vocabulary::fit({{}, {}}), Error);
}

TEST_CASE("char n-grams include spaces") {
  Document d;
  d.chars = "كتاب";
  CHECK(extract_terms(d, Analyzer::Char, 3) == TermList{"كتا", "تاب"});
  d.chars = "في بيت";
  const auto g = extract_terms(d, Analyzer::Char, 3);
  CHECK(g.size() == 4);
  CHECK(std::count(g.begin(), g.end(), "ي ب") == 1);
  d.chars = "ab";
  CHECK(extract_terms(d, Analyzer::Char, 3).empty());
}

TEST_CASE("n-gram mass equals brute-force gram count") {
  Rng rng(5);
  const std::u32string alphabet = U"ابتث ";
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Document> docs;
    for (int k = 0; k < 4; ++k) {
      std::u32string s;
      const std::size_t len = rng.below(21);
      for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
      docs.push_back(word_doc(utf8::encode(s)));
    }
    docs.push_back(word_doc("ا ب ت"));
    for (std::size_t n = 1; n <= 3; ++n) {
      for (auto a : {Analyzer::Word, Analyzer::Char}) {
        const auto vocab = Vocabulary::fit(terms_of(docs, a, n));
        for (const auto& d : docs) {
          const std::size_t units = a == Analyzer::Word ? d.stems.size() : utf8::length(d.chars);
          const double expected = units >= n ? static_cast<double>(units - n + 1) : 0.0;
          double mass = 0;
          for (double x : ngram_vector(extract_terms(d, a, n), vocab).values) mass += x;
          CHECK(mass == expected);
        }
      }
    }
  }
}

TEST_CASE("word bigrams of a 4-token sentence") {
  const auto d = word_doc("ا ب ت ث");
  const auto terms = extract_terms(d, Analyzer::Word, 2);
  CHECK(terms.size() == 3);
  const auto vocab = Vocabulary::fit({terms});
  double mass = 0;
  for (double x : ngram_vector(terms, vocab).values) mass += x;
  CHECK(mass == 3.0);
  CHECK(ngram_vector(extract_terms(word_doc("ا"), Analyzer::Word, 2), vocab).nnz() == 0);
}

TEST_CASE("bag of words is binary") {
  const auto vocab = Vocabulary::fit({{"ا", "ب"}});
  const auto v = bow_vector({"ا", "ا", "ا"}, vocab);
  CHECK(v.indices == std::vector<std::uint32_t>{0});
  CHECK(v.values == std::vector<double>{1.0});
  CHECK(bow_vector({}, vocab).nnz() == 0);
  CHECK(bow_vector({"ز", "ح"}, vocab).nnz() == 0);
  CHECK(bow_vector({}, vocab).dim == 2);
}

TEST_CASE("tf-idf hand example, unsmoothed") {
  const std::vector<TermList> docs{{"a", "b"}, {"a", "c"}};
  const auto vocab = Vocabulary::fit(docs);
  const auto idf = IdfTable::fit(docs, vocab, false);
  CHECK(idf.idf[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(idf.idf[1] - std::log(2.0)) < 1e-12);
  const auto v = tfidf_vector(docs[0], vocab, idf);
  const auto dense = v.to_dense();
  REQUIRE(dense.size() == 3);
  CHECK(std::abs(dense[0] - 0.0) < 1e-9);
  CHECK(std::abs(dense[1] - 1.0) < 1e-9);
  CHECK(std::abs(dense[2] - 0.0) < 1e-9);
}

TEST_CASE("tf-idf matches an independent computation and has unit norm") {
  Rng rng(17);
  const std::vector<std::string> words{"ا", "ب", "ت", "ث", "ج", "ح"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TermList> docs(6);
    for (auto& d : docs) {
      const std::size_t len = 1 + rng.below(6);
      for (std::size_t i = 0; i < len; ++i) d.push_back(words[rng.below(words.size())]);
    }
    for (bool smooth : {true, false}) {
      const auto vocab = Vocabulary::fit(docs);
      const auto idf = IdfTable::fit(docs, vocab, smooth);
      std::map<std::string, int> df;
      for (const auto& d : docs) {
        for (const auto& w : std::set<std::string>(d.begin(), d.end())) ++df[w];
      }
      const double n = static_cast<double>(docs.size());
      for (const auto& d : docs) {
        std::map<std::string, double> raw;
        for (const auto& w : d) raw[w] += 1.0;
        double ss = 0;
        for (auto& [w, x] : raw) {
          x *= smooth ? std::log((1 + n) / (1 + df[w])) + 1 : std::log(n / df[w]);
          ss += x * x;
        }
        const auto v = tfidf_vector(d, vocab, idf);
        const auto dense = v.to_dense();
        for (const auto& [w, x] : raw) {
          const double expected = ss > 0 ? x / std::sqrt(ss) : 0.0;
          CHECK(std::abs(dense[*vocab.index(w)] - expected) < 1e-12);
        }
        if (v.nnz() > 0) CHECK(std::abs(norm2(v) - 1.0) < 1e-9);
      }
      CHECK(tfidf_vector({}, vocab, idf).nnz() == 0);
    }
  }
}

TEST_CASE("union vector is the concatenation of word and char tf-idf") {
  const std::vector<Document> docs{word_doc("ab cd"), word_doc("ab ef"), word_doc("cd cd")};
  const auto fitted = fit_vectorizer(VectorizerSpec::parse("tfidf-union"), docs);
  const auto word = fit_vectorizer(VectorizerSpec::parse("tfidf-word"), docs);
  const auto chr = fit_vectorizer(VectorizerSpec::parse("tfidf-char"), docs);
  CHECK(fitted.dimension() == word.dimension() + chr.dimension());
  for (const auto& d : docs) {
    auto expected = word.transform(d);
    expected.append(chr.transform(d));
    CHECK(fitted.transform(d) == expected);
  }
  CHECK(fitted.transform(Document{}).nnz() == 0);
}

TEST_CASE("sentence embeddings") {
  sgns::EmbeddingTable t(2);
  t.add("ا", std::vector<double>{1, 2});
  t.add("ب", std::vector<double>{3, 6});
  CHECK(sentence_embedding({"ا"}, t) == std::vector<double>{1, 2});
  CHECK(sentence_embedding({"ا", "ب"}, t) == std::vector<double>{2, 4});
  CHECK(sentence_embedding({"ز", "ح"}, t) == std::vector<double>{0, 0});
  CHECK(sentence_embedding({}, t) == std::vector<double>{0, 0});

  const std::vector<TermList> docs{{"ا"}, {"ا", "ب"}, {"ب", "ت"}};
  const auto vocab = Vocabulary::fit(docs);
  const auto idf = IdfTable::fit(docs, vocab);
  const auto w = sentence_embedding({"ا", "ب", "ب"}, t, &vocab, &idf);
  const double wa = idf.idf[0], wb = 2 * idf.idf[1];
  CHECK(w[0] == doctest::Approx((wa * 1 + wb * 3) / (wa + wb)));
  CHECK(w[1] == doctest::Approx((wa * 2 + wb * 6) / (wa + wb)));
}

TEST_CASE("pair vector layout over every grid row") {
  const auto pairs = testing::synthetic_corpus(120, 3);
  const auto prepared = pipeline::prepare_all(pairs, shipped());
  vectorize::FitOptions opts;
  opts.sgns.dim = 8;
  opts.sgns.epochs = 1;
  for (auto spec : VectorizerSpec::grid_rows()) {
    for (bool contra : {true, false}) {
      spec.include_contra = contra;
      const auto pipe = pipeline::FeaturePipeline::fit(spec, shipped(), prepared, opts);
      const auto lm = pipe.vectorizer().dimension();
      CHECK(pipe.dimension() == 2 * lm + (contra ? 15 : 0));
      const auto& p = prepared[0];
      const auto v = pipe.transform(pipeline::PreparedPair{p.premise, p.premise, p.contra});
      CHECK(v.dim == pipe.dimension());
      const auto dense = v.to_dense();
      for (std::size_t i = 0; i < lm; ++i) CHECK(dense[i] == dense[lm + i]);
      for (double x : dense) CHECK(std::isfinite(x));
      // Transforming does not touch fitted state and is repeatable.
      const auto before = pipe.vectorizer();
      CHECK(pipe.transform(prepared[1]) == pipe.transform(prepared[1]));
      CHECK(pipe.vectorizer() == before);
    }
  }
}

TEST_CASE("fitting is deterministic") {
  const auto prepared = pipeline::prepare_all(testing::synthetic_corpus(150, 4), shipped());
  vectorize::FitOptions opts;
  opts.sgns.dim = 10;
  opts.sgns.epochs = 2;
  for (const char* name : {"tfidf-char", "ngram-word-2", "w2v-tfidf"}) {
    const auto spec = VectorizerSpec::parse(name);
    const auto a = pipeline::FeaturePipeline::fit(spec, shipped(), prepared, opts);
    const auto b = pipeline::FeaturePipeline::fit(spec, shipped(), prepared, opts);
    CHECK(a.vectorizer() == b.vectorizer());
  }
}
