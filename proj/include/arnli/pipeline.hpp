#pragma once

#include <vector>

#include "arnli/contra.hpp"
#include "arnli/corpus.hpp"
#include "arnli/sparse.hpp"
#include "arnli/vectorize.hpp"

namespace arnli::pipeline {

// Everything about one pair that does not depend on a fitted vectorizer.
struct PreparedPair {
  vectorize::Document premise;
  vectorize::Document hypothesis;
  std::vector<double> contra;
};

vectorize::Document to_document(const contra::PreparedSentence& s);
PreparedPair prepare_pair(std::string_view premise, std::string_view hypothesis,
                          const contra::Resources& res);
std::vector<PreparedPair> prepare_all(const std::vector<corpus::LabeledPair>& pairs,
                                      const contra::Resources& res);

// Resources plus a vectorizer fitted on training pairs only.
class FeaturePipeline {
 public:
  FeaturePipeline() = default;
  FeaturePipeline(contra::Resources resources, vectorize::FittedVectorizer vectorizer)
      : resources_(std::move(resources)), vectorizer_(std::move(vectorizer)) {}

  static FeaturePipeline fit(const vectorize::VectorizerSpec& spec, contra::Resources resources,
                             const std::vector<PreparedPair>& train,
                             const vectorize::FitOptions& options = {});

  std::size_t dimension() const;
  SparseVector transform(const PreparedPair& pair) const;
  SparseVector transform(std::string_view premise, std::string_view hypothesis) const;
  FeatureMatrix transform_all(const std::vector<PreparedPair>& pairs) const;

  const contra::Resources& resources() const { return resources_; }
  const vectorize::FittedVectorizer& vectorizer() const { return vectorizer_; }

 private:
  contra::Resources resources_;
  vectorize::FittedVectorizer vectorizer_;
};

}  // namespace arnli::pipeline
