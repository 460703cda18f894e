#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arnli/textproc.hpp"

// Contradiction features: named-entity agreement, lexical similarity counts,
// special-stopword codes and quantity conflicts, packed into a fixed layout.
namespace arnli::contra {

using textproc::TokenList;

enum class EntityClass : std::uint8_t { Per, Loc, Org, Misc };

std::string_view to_string(EntityClass c);
EntityClass parse_entity_class(std::string_view s);

struct NamedEntity {
  std::string surface;  // canonical gazetteer key
  EntityClass cls = EntityClass::Misc;

  auto operator<=>(const NamedEntity&) const = default;
};

using EntitySet = std::set<NamedEntity>;

// Surface form (1-3 normalized tokens joined by a single space) -> class.
class Gazetteer {
 public:
  static constexpr std::size_t kMaxEntryTokens = 3;

  void add(std::string_view surface, EntityClass cls,
           const textproc::NormalizationConfig& norm = {});
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, EntityClass>& entries() const { return entries_; }

  // TSV `surface<TAB>class`, '#' comments allowed.
  static Gazetteer load(const std::filesystem::path& path,
                        const textproc::NormalizationConfig& norm = {});
  static Gazetteer parse(std::string_view text, const textproc::NormalizationConfig& norm = {});

  const EntityClass* find(const std::string& key) const;

 private:
  std::map<std::string, EntityClass> entries_;
};

// Greedy left-to-right longest match without overlaps. A token that misses
// may still match after dropping one leading proclitic (و ف ب ل ك).
EntitySet extract_named_entities(const TokenList& tokens, const Gazetteer& gaz);

// 2: both non-empty and equal; 0: both empty; 1: otherwise.
int ne_feature(const EntitySet& a, const EntitySet& b);

enum class Relation : std::uint8_t { Synonym, Antonym };

// Symmetric word-pair relations.
class Lexicon {
 public:
  // Throws ConfigError if the pair already carries the other relation.
  void add(const std::string& a, const std::string& b, Relation rel);
  const Relation* find(const std::string& a, const std::string& b) const;
  std::size_t size() const { return relations_.size(); }
  const std::map<std::pair<std::string, std::string>, Relation>& relations() const {
    return relations_;
  }

  // TSV `word1<TAB>word2<TAB>SYN|ANT`. Each word is normalized and registered
  // both as written and as stemmed so lookups work on stems.
  static Lexicon load(const std::filesystem::path& path, const textproc::NormalizationConfig& norm,
                      const textproc::Stemmer& stemmer);
  static Lexicon parse(std::string_view text, const textproc::NormalizationConfig& norm,
                       const textproc::Stemmer& stemmer);

 private:
  std::map<std::pair<std::string, std::string>, Relation> relations_;
};

struct SimilarityCounts {
  std::size_t synonym = 0;
  std::size_t neutral = 0;
  std::size_t antonym = 0;

  bool operator==(const SimilarityCounts&) const = default;
};

// Over all |a|*|b| cross pairs of stems: synonym when equal or listed as
// synonyms, antonym when listed as antonyms, neutral otherwise.
SimilarityCounts similarity_counts(const TokenList& a, const TokenList& b, const Lexicon& lex);

struct StopwordConfig {
  std::vector<std::string> negations{"ما", "لا", "ليس"};
  std::vector<std::string> exceptions{"إلا", "سوى", "عدا"};
  std::pair<std::string, std::string> confirmation{"لا", "إلا"};

  // Negations then exceptions; this order fixes the vector layout.
  std::vector<std::string> stopwords() const;
  // Normalizes every entry; throws ConfigError if the lists overlap or an
  // entry is not a single token.
  StopwordConfig normalized(const textproc::NormalizationConfig& norm) const;

  // Sections [negation], [exception], [confirmation] (the latter holds one
  // TAB-separated pair).
  static StopwordConfig parse(std::string_view text);
  static StopwordConfig load(const std::filesystem::path& path);
};

struct StopwordFeatures {
  std::vector<int> codes;            // one per stopword, in StopwordConfig order
  std::array<int, 2> confirm{0, 0};  // per sentence
};

// Tokens must be normalized, unstemmed and punctuation-free. A token also
// counts as a stopword after dropping one leading و or ف ("وليس").
StopwordFeatures stopword_features(const TokenList& a, const TokenList& b,
                                   const StopwordConfig& cfg);

enum class QuantityKind : std::uint8_t { Number = 0, Date = 1, Time = 2 };
enum class Comparator : std::uint8_t { Exact, MoreThan, LessThan, About };

struct QuantityMention {
  QuantityKind kind = QuantityKind::Number;
  double value = 0;  // Date: year; Time: minutes since midnight
  Comparator comparator = Comparator::Exact;

  bool operator==(const QuantityMention&) const = default;
};

// Expects normalized text (ASCII digits).
std::vector<QuantityMention> extract_quantities(std::string_view text);

// Mentions denote sets (Exact {v}, MoreThan (v,inf), LessThan (-inf,v),
// About [v-t, v+t] with t = max(1, 0.1|v|)); two mentions are compatible
// when their sets intersect. Returns 1 iff both lists mention `kind` and no
// cross pair of that kind is compatible.
int quantity_conflict(const std::vector<QuantityMention>& a,
                      const std::vector<QuantityMention>& b, QuantityKind kind);

bool compatible(const QuantityMention& a, const QuantityMention& b);

// Immutable resources needed to build a contradiction vector.
struct Resources {
  textproc::NormalizationConfig norm;
  textproc::Stemmer stemmer;
  Gazetteer gazetteer;
  Lexicon lexicon;
  StopwordConfig stopwords;  // normalized

  struct Paths {
    std::filesystem::path gazetteer;
    std::filesystem::path lexicon;
    std::filesystem::path stopwords;
    std::filesystem::path stemmer_rules;
  };
  // Every path must exist; missing files raise ConfigError here, never during
  // extraction.
  static Resources load(const Paths& paths, const textproc::NormalizationConfig& norm = {});
  static Paths default_paths(const std::filesystem::path& data_dir);
};

// Layout (default dimension 15):
//   [0]      named-entity code
//   [1..3]   synonym, neutral, antonym counts
//   [4..4+S) stopword codes (S = 6 by default)
//   next 2   confirmation flags (premise, hypothesis)
//   last 3   number, date, time conflicts
struct ContraVector {
  int ne_code = 0;
  SimilarityCounts similarity;
  StopwordFeatures stopwords;
  std::array<int, 3> conflicts{0, 0, 0};

  std::vector<double> values() const;
};

std::size_t contra_dimension(const StopwordConfig& cfg);

// Preprocessed view of one sentence as consumed by the feature extractors.
struct PreparedSentence {
  std::string normalized;
  TokenList words;  // punctuation-free, unstemmed
  TokenList stems;
};

PreparedSentence prepare(std::string_view text, const Resources& res);

ContraVector build_contra_vector(const PreparedSentence& premise,
                                 const PreparedSentence& hypothesis, const Resources& res);

}  // namespace arnli::contra
