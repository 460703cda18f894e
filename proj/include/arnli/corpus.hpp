#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "arnli/label.hpp"

namespace arnli::corpus {

struct LabeledPair {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label label = Label::Neutral;

  bool operator==(const LabeledPair&) const = default;
};

enum class Format { Csv, Tsv };

Format parse_format(const std::string& name);

// Maps dataset columns onto pair fields. An empty id_column synthesizes ids
// from the record number ("row-1", "row-2", ...).
struct ColumnMapping {
  std::string id_column = "id";
  std::string premise_column = "sentence1";
  std::string hypothesis_column = "sentence2";
  std::string label_column = "label";
  // Extra label spellings ("1" -> Entailment ...). Consulted before the
  // case-insensitive English names; never applied implicitly.
  std::map<std::string, Label> label_codes;
};

// Throws SchemaError for a missing column and RowError for a bad record
// (unknown label, empty sentence, duplicate id, wrong field count).
std::vector<LabeledPair> load_dataset(const std::filesystem::path& path, Format format,
                                      const ColumnMapping& mapping = {});
std::vector<LabeledPair> parse_dataset(const std::string& text, Format format,
                                       const ColumnMapping& mapping = {});

// Writes a header row `id,sentence1,sentence2,label` and one record per pair,
// quoting fields when needed.
std::string serialize_dataset(const std::vector<LabeledPair>& pairs, Format format);
void save_dataset(const std::vector<LabeledPair>& pairs, const std::filesystem::path& path,
                  Format format);

struct DatasetSplit {
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> test;
  std::uint64_t seed = 0;
  double ratio = 0.8;
};

// Number of training items for N pairs: N - ceil((1 - ratio) * N).
std::size_t train_size(std::size_t n, double ratio);

// Seeded shuffle then prefix split. With `stratified`, each label group is
// shuffled and split on its own and the two sides are then shuffled.
DatasetSplit split_dataset(const std::vector<LabeledPair>& pairs, double ratio,
                           std::uint64_t seed, bool stratified = false);

struct LengthStats {
  double average = 0;
  std::size_t max = 0;
};

struct CorpusStats {
  std::array<std::size_t, kNumLabels> counts{};
  LengthStats hypothesis;
  LengthStats premise;
  std::size_t size = 0;
};

// Token lengths use tokenize + punctuation removal on normalized text.
CorpusStats compute_stats(const std::vector<LabeledPair>& pairs);

std::string format_stats_text(const CorpusStats& stats);
// `label,count` rows followed by `metric,value` rows.
std::string format_stats_csv(const CorpusStats& stats);

}  // namespace arnli::corpus
