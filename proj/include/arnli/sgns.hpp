#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "arnli/textproc.hpp"

// Skip-gram with negative sampling (word2vec) and the embedding table it
// produces.
namespace arnli::sgns {

struct SgnsConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly towards learning_rate * 1e-4
  std::size_t min_count = 2;
  double subsample = 1e-3;
  std::uint64_t seed = 1;

  bool operator==(const SgnsConfig&) const = default;
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim), zero_(dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  void add(const std::string& word, std::span<const double> vec);
  bool contains(const std::string& word) const { return index_.count(word) != 0; }
  // Unknown words map to the zero vector.
  std::span<const double> lookup(const std::string& word) const;

  // word2vec text format: "count dim" header, then "word v1 ... vd" lines.
  static EmbeddingTable load_text(const std::filesystem::path& path);
  void save_text(const std::filesystem::path& path) const;

  bool operator==(const EmbeddingTable& o) const {
    return dim_ == o.dim_ && words_ == o.words_ && data_ == o.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
  std::vector<double> zero_;
};

// Single-threaded and bit-deterministic for a fixed seed. Throws Error when
// no word reaches min_count.
EmbeddingTable train_sgns(const std::vector<textproc::TokenList>& sentences,
                          const SgnsConfig& cfg);

// Objective of one training sample, parameters flattened as
// [center (d) | context (d) | negative_1 (d) ... negative_k (d)]:
//   -log s(context . center) - sum_k log s(-negative_k . center)
double sample_loss(std::span<const double> params, std::size_t dim);
std::vector<double> sample_gradient(std::span<const double> params, std::size_t dim);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace arnli::sgns
