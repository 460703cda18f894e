#include "arnli/pipeline.hpp"

namespace arnli::pipeline {

vectorize::Document to_document(const contra::PreparedSentence& s) {
  vectorize::Document d;
  d.stems = s.stems;
  for (std::size_t i = 0; i < s.words.size(); ++i) {
    if (i) d.chars += ' ';
    d.chars += s.words[i];
  }
  return d;
}

PreparedPair prepare_pair(std::string_view premise, std::string_view hypothesis,
                          const contra::Resources& res) {
  const auto p = contra::prepare(premise, res);
  const auto h = contra::prepare(hypothesis, res);
  return {to_document(p), to_document(h), contra::build_contra_vector(p, h, res).values()};
}

std::vector<PreparedPair> prepare_all(const std::vector<corpus::LabeledPair>& pairs,
                                      const contra::Resources& res) {
  std::vector<PreparedPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(prepare_pair(p.premise, p.hypothesis, res));
  return out;
}

FeaturePipeline FeaturePipeline::fit(const vectorize::VectorizerSpec& spec,
                                     contra::Resources resources,
                                     const std::vector<PreparedPair>& train,
                                     const vectorize::FitOptions& options) {
  std::vector<vectorize::Document> docs;
  docs.reserve(2 * train.size());
  for (const auto& p : train) {
    docs.push_back(p.premise);
    docs.push_back(p.hypothesis);
  }
  return {std::move(resources), vectorize::fit_vectorizer(spec, docs, options)};
}

std::size_t FeaturePipeline::dimension() const {
  std::size_t d = 2 * vectorizer_.dimension();
  if (vectorizer_.spec.include_contra) d += contra::contra_dimension(resources_.stopwords);
  return d;
}

SparseVector FeaturePipeline::transform(const PreparedPair& pair) const {
  return vectorize::build_pair_vector(vectorizer_, pair.premise, pair.hypothesis, pair.contra);
}

SparseVector FeaturePipeline::transform(std::string_view premise,
                                        std::string_view hypothesis) const {
  return transform(prepare_pair(premise, hypothesis, resources_));
}

FeatureMatrix FeaturePipeline::transform_all(const std::vector<PreparedPair>& pairs) const {
  FeatureMatrix m(dimension());
  for (const auto& p : pairs) m.add_row(transform(p));
  return m;
}

}  // namespace arnli::pipeline
