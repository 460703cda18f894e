#include "arnli/textproc.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "arnli/errors.hpp"
#include "arnli/utf8.hpp"

namespace arnli::textproc {

namespace {

// Mirrors data/stemmer_rules.txt.
constexpr std::string_view kDefaultRules = R"RULES(# Arabic light stemmer rules.
#
# One affix per line with an optional TAB-separated minimum residual length:
# the number of code points that must remain after the affix is stripped
# (default 2). The longest admissible suffix is stripped first, then the
# longest admissible prefix. Tokens shorter than 3 code points are never
# stemmed.

[prefixes]
وال	3
فال	3
بال	3
كال	3
لل	3
ال	3
و	3
ف	3
ب	4
ك	4
ل	4

[suffixes]
هما	3
كما	3
تين	3
تان	3
ات	3
ون	3
ين	3
ان	3
ية	3
ها	3
نا	3
هم	3
هن	3
كم	3
كن	3
تم	3
ة	3
ه	4
ي	4
ا	4
ك	4
)RULES";

constexpr char32_t kTatweel = U'ـ';

bool is_clause_separator(char32_t c) {
  return c == U',' || c == U';' || c == U'،' || c == U'؛';
}

// Separators allowed inside a number: 3.5, 10:30, 12/05/1987, 1,000.
bool is_number_separator(char32_t c) {
  return c == U'.' || c == U',' || c == U':' || c == U'/' || c == U'٫' || c == U'٬';
}

bool starts_with(const std::u32string& s, const std::u32string& p) {
  return s.size() >= p.size() && std::equal(p.begin(), p.end(), s.begin());
}

bool ends_with(const std::u32string& s, const std::u32string& p) {
  return s.size() >= p.size() && std::equal(p.rbegin(), p.rend(), s.rbegin());
}

}  // namespace

std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  std::u32string out;
  for (char32_t c : utf8::decode(text)) {
    if (cfg.strip_tatweel && c == kTatweel) continue;
    if (cfg.strip_diacritics && c >= U'ً' && c <= U'ْ') continue;
    if (cfg.unify_alef_variants && (c == U'أ' || c == U'إ' || c == U'آ')) {
      c = U'ا';
    }
    if (cfg.map_arabic_indic_digits) {
      if (c >= U'٠' && c <= U'٩') c = U'0' + (c - U'٠');
      if (c >= U'۰' && c <= U'۹') c = U'0' + (c - U'۰');
    }
    out.push_back(c);
  }
  return utf8::encode(out);
}

TokenList tokenize(std::string_view text) {
  enum class Kind { None, Word, Punct };
  const std::u32string u = utf8::decode(text);
  TokenList tokens;
  std::u32string current;
  Kind kind = Kind::None;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(utf8::encode(current));
    current.clear();
    kind = Kind::None;
  };
  auto inside_number = [&](std::size_t i) {
    return kind == Kind::Word && i > 0 && utf8::is_digit(u[i - 1]) && i + 1 < u.size() &&
           utf8::is_digit(u[i + 1]);
  };
  for (std::size_t i = 0; i < u.size(); ++i) {
    const char32_t c = u[i];
    if (utf8::is_space(c)) {
      flush();
      continue;
    }
    if (is_number_separator(c) && inside_number(i)) {
      current.push_back(c);
      continue;
    }
    if (is_clause_separator(c)) {
      flush();
      continue;
    }
    const Kind k = utf8::is_punct_or_symbol(c) ? Kind::Punct : Kind::Word;
    if (k != kind) flush();
    kind = k;
    current.push_back(c);
  }
  flush();
  return tokens;
}

bool is_punctuation_token(std::string_view token) {
  const auto u = utf8::decode(token);
  return !u.empty() && std::all_of(u.begin(), u.end(), utf8::is_punct_or_symbol);
}

TokenList remove_punctuation(const TokenList& tokens) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!is_punctuation_token(t)) out.push_back(t);
  }
  return out;
}

StemmerRules StemmerRules::defaults() { return parse(kDefaultRules); }

StemmerRules StemmerRules::parse(std::string_view text) {
  StemmerRules rules;
  std::vector<AffixRule>* section = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string_view trimmed = utf8::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    if (trimmed == "[prefixes]") {
      section = &rules.prefixes;
      continue;
    }
    if (trimmed == "[suffixes]") {
      section = &rules.suffixes;
      continue;
    }
    if (section == nullptr) {
      throw ConfigError("stemmer rules line " + std::to_string(lineno) +
                        ": affix outside a [prefixes]/[suffixes] section");
    }
    AffixRule rule;
    const auto tab = trimmed.find('\t');
    rule.affix = utf8::decode(utf8::trim(trimmed.substr(0, tab)));
    if (tab != std::string_view::npos) {
      const std::string num(utf8::trim(trimmed.substr(tab + 1)));
      try {
        std::size_t used = 0;
        const long v = std::stol(num, &used);
        if (used != num.size() || v < 1) throw std::invalid_argument(num);
        rule.min_residual = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw ConfigError("stemmer rules line " + std::to_string(lineno) +
                          ": bad minimum residual '" + num + "'");
      }
    }
    if (rule.affix.empty()) {
      throw ConfigError("stemmer rules line " + std::to_string(lineno) + ": empty affix");
    }
    section->push_back(std::move(rule));
  }
  return rules;
}

StemmerRules StemmerRules::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open stemmer rules: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string StemmerRules::to_text() const {
  std::string out = "[prefixes]\n";
  for (const auto& r : prefixes) {
    out += utf8::encode(r.affix) + "\t" + std::to_string(r.min_residual) + "\n";
  }
  out += "[suffixes]\n";
  for (const auto& r : suffixes) {
    out += utf8::encode(r.affix) + "\t" + std::to_string(r.min_residual) + "\n";
  }
  return out;
}

Stemmer::Stemmer(StemmerRules rules) : rules_(std::move(rules)) {
  // Longest match first; stable so equal-length affixes keep file order.
  auto by_length = [](const AffixRule& a, const AffixRule& b) {
    return a.affix.size() > b.affix.size();
  };
  std::stable_sort(rules_.prefixes.begin(), rules_.prefixes.end(), by_length);
  std::stable_sort(rules_.suffixes.begin(), rules_.suffixes.end(), by_length);
}

std::string Stemmer::stem(std::string_view token) const {
  std::u32string word = utf8::decode(token);
  if (word.size() < 3) return std::string(token);
  for (const auto& rule : rules_.suffixes) {
    if (ends_with(word, rule.affix) && word.size() - rule.affix.size() >= rule.min_residual) {
      word.resize(word.size() - rule.affix.size());
      break;
    }
  }
  for (const auto& rule : rules_.prefixes) {
    if (starts_with(word, rule.affix) && word.size() - rule.affix.size() >= rule.min_residual) {
      word.erase(0, rule.affix.size());
      break;
    }
  }
  return utf8::encode(word);
}

StagedTokens preprocess_staged(std::string_view text, const NormalizationConfig& cfg,
                               const Stemmer& stemmer) {
  StagedTokens staged;
  staged.normalized = normalize(text, cfg);
  staged.tokens = tokenize(staged.normalized);
  staged.words = remove_punctuation(staged.tokens);
  staged.stems.reserve(staged.words.size());
  for (const auto& w : staged.words) staged.stems.push_back(stemmer.stem(w));
  return staged;
}

TokenList preprocess(std::string_view text, const NormalizationConfig& cfg,
                     const Stemmer& stemmer) {
  return preprocess_staged(text, cfg, stemmer).stems;
}

}  // namespace arnli::textproc
