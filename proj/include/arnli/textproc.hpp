#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace arnli::textproc {

using TokenList = std::vector<std::string>;

struct NormalizationConfig {
  bool strip_tatweel = true;
  bool unify_alef_variants = true;  // أ إ آ -> ا
  bool strip_diacritics = true;     // U+064B..U+0652
  bool map_arabic_indic_digits = true;

  bool operator==(const NormalizationConfig&) const = default;
};

// Idempotent orthographic normalization.
std::string normalize(std::string_view text, const NormalizationConfig& cfg = {});

// Splits on Unicode whitespace. Runs of punctuation/symbol characters become
// their own tokens ("العربية.." -> "العربية", ".."). Comma and semicolon
// (Latin and Arabic forms) only delimit and are not emitted. Separators
// between two digits stay inside the number token ("3.5", "10:30").
TokenList tokenize(std::string_view text);

// True when every code point of the token is punctuation or a symbol.
bool is_punctuation_token(std::string_view token);

TokenList remove_punctuation(const TokenList& tokens);

// One affix of the light stemmer. The affix is stripped only when at least
// `min_residual` code points remain.
struct AffixRule {
  std::u32string affix;
  std::size_t min_residual = 2;

  bool operator==(const AffixRule&) const = default;
};

struct StemmerRules {
  std::vector<AffixRule> prefixes;
  std::vector<AffixRule> suffixes;

  bool operator==(const StemmerRules&) const = default;

  // The rule table shipped in data/stemmer_rules.txt.
  static StemmerRules defaults();

  // Text format:
  //   # comment
  //   [prefixes]
  //   وال<TAB>3
  //   [suffixes]
  //   ات
  // The optional second column is the minimum residual length (default 2).
  static StemmerRules parse(std::string_view text);
  static StemmerRules load(const std::filesystem::path& path);
  std::string to_text() const;
};

// Arabic light stemmer: strips the longest admissible suffix, then the
// longest admissible prefix. Tokens shorter than 3 code points are returned
// unchanged.
class Stemmer {
 public:
  Stemmer() : Stemmer(StemmerRules::defaults()) {}
  explicit Stemmer(StemmerRules rules);

  std::string stem(std::string_view token) const;
  const StemmerRules& rules() const { return rules_; }

 private:
  StemmerRules rules_;
};

// Intermediate products of the preprocessing pipeline for one sentence.
struct StagedTokens {
  std::string normalized;
  TokenList tokens;     // after tokenize
  TokenList words;      // after punctuation removal (unstemmed)
  TokenList stems;      // after stemming
};

StagedTokens preprocess_staged(std::string_view text, const NormalizationConfig& cfg,
                               const Stemmer& stemmer);

// normalize -> tokenize -> remove_punctuation -> stem.
TokenList preprocess(std::string_view text, const NormalizationConfig& cfg = {},
                     const Stemmer& stemmer = Stemmer());

}  // namespace arnli::textproc
