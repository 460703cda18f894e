#include "arnli/contra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include "arnli/errors.hpp"
#include "arnli/utf8.hpp"

namespace arnli::contra {

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string("cannot open ") + what + ": " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Calls fn(lineno, fields) for every non-blank, non-comment line.
template <typename Fn>
void for_each_tsv_line(std::string_view text, Fn&& fn) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    const std::string_view trimmed = utf8::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const auto tab = trimmed.find('\t', start);
      fields.emplace_back(utf8::trim(trimmed.substr(start, tab - start)));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    fn(lineno, fields);
  }
}

std::string join(const TokenList& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += tokens[i];
  }
  return out;
}

// Drops one leading proclitic letter from the candidate list when enough of
// the word remains.
std::string strip_proclitic(const std::string& token, std::u32string_view letters) {
  const auto u = utf8::decode(token);
  if (u.size() < 3) return {};
  if (letters.find(u.front()) == std::u32string_view::npos) return {};
  return utf8::encode(std::u32string_view(u).substr(1));
}

std::string normalize_entry(std::string_view s, const textproc::NormalizationConfig& norm) {
  return textproc::normalize(utf8::trim(s), norm);
}

}  // namespace

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::Per:
      return "PER";
    case EntityClass::Loc:
      return "LOC";
    case EntityClass::Org:
      return "ORG";
    case EntityClass::Misc:
      return "MISC";
  }
  return "MISC";
}

EntityClass parse_entity_class(std::string_view s) {
  if (s == "PER") return EntityClass::Per;
  if (s == "LOC") return EntityClass::Loc;
  if (s == "ORG") return EntityClass::Org;
  if (s == "MISC") return EntityClass::Misc;
  throw ConfigError("unknown entity class '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Named entities

void Gazetteer::add(std::string_view surface, EntityClass cls,
                    const textproc::NormalizationConfig& norm) {
  const auto tokens = textproc::remove_punctuation(textproc::tokenize(normalize_entry(surface, norm)));
  if (tokens.empty() || tokens.size() > kMaxEntryTokens) {
    throw ConfigError("gazetteer entry must have 1-3 tokens: '" + std::string(surface) + "'");
  }
  entries_[join(tokens, 0, tokens.size())] = cls;
}

const EntityClass* Gazetteer::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

Gazetteer Gazetteer::parse(std::string_view text, const textproc::NormalizationConfig& norm) {
  Gazetteer gaz;
  for_each_tsv_line(text, [&](std::size_t lineno, const std::vector<std::string>& f) {
    if (f.size() != 2) {
      throw ConfigError("gazetteer line " + std::to_string(lineno) + ": expected surface<TAB>class");
    }
    gaz.add(f[0], parse_entity_class(f[1]), norm);
  });
  return gaz;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path,
                          const textproc::NormalizationConfig& norm) {
  return parse(read_file(path, "gazetteer"), norm);
}

EntitySet extract_named_entities(const TokenList& tokens, const Gazetteer& gaz) {
  EntitySet found;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t matched = 0;
    const std::size_t longest = std::min(Gazetteer::kMaxEntryTokens, tokens.size() - i);
    for (std::size_t len = longest; len >= 1 && matched == 0; --len) {
      std::string key = join(tokens, i, i + len);
      const EntityClass* cls = gaz.find(key);
      if (cls == nullptr) {
        const std::string head = strip_proclitic(tokens[i], U"وفبلك");
        if (!head.empty()) {
          key = len == 1 ? head : head + " " + join(tokens, i + 1, i + len);
          cls = gaz.find(key);
        }
      }
      if (cls != nullptr) {
        found.insert({key, *cls});
        matched = len;
      }
    }
    i += matched == 0 ? 1 : matched;
  }
  return found;
}

int ne_feature(const EntitySet& a, const EntitySet& b) {
  if (a.empty() && b.empty()) return 0;
  if (!a.empty() && !b.empty() && a == b) return 2;
  return 1;
}

// ---------------------------------------------------------------------------
// Lexical similarity

void Lexicon::add(const std::string& a, const std::string& b, Relation rel) {
  auto key = std::minmax(a, b);
  auto [it, inserted] = relations_.emplace(std::pair{key.first, key.second}, rel);
  if (!inserted && it->second != rel) {
    throw ConfigError("lexicon pair (" + a + ", " + b + ") has conflicting relations");
  }
}

const Relation* Lexicon::find(const std::string& a, const std::string& b) const {
  auto key = std::minmax(a, b);
  auto it = relations_.find(std::pair{key.first, key.second});
  return it == relations_.end() ? nullptr : &it->second;
}

Lexicon Lexicon::parse(std::string_view text, const textproc::NormalizationConfig& norm,
                       const textproc::Stemmer& stemmer) {
  struct Entry {
    std::string a, b;
    Relation rel;
  };
  std::vector<Entry> entries;
  for_each_tsv_line(text, [&](std::size_t lineno, const std::vector<std::string>& f) {
    if (f.size() != 3 || (f[2] != "SYN" && f[2] != "ANT")) {
      throw ConfigError("lexicon line " + std::to_string(lineno) +
                        ": expected word1<TAB>word2<TAB>SYN|ANT");
    }
    entries.push_back({normalize_entry(f[0], norm), normalize_entry(f[1], norm),
                       f[2] == "SYN" ? Relation::Synonym : Relation::Antonym});
  });
  Lexicon lex;
  for (const auto& e : entries) lex.add(e.a, e.b, e.rel);
  // Stemmed aliases never override an explicit entry.
  for (const auto& e : entries) {
    const std::string sa = stemmer.stem(e.a);
    const std::string sb = stemmer.stem(e.b);
    if (lex.find(sa, sb) == nullptr) lex.add(sa, sb, e.rel);
  }
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path, const textproc::NormalizationConfig& norm,
                      const textproc::Stemmer& stemmer) {
  return parse(read_file(path, "lexicon"), norm, stemmer);
}

SimilarityCounts similarity_counts(const TokenList& a, const TokenList& b, const Lexicon& lex) {
  SimilarityCounts counts;
  for (const auto& x : a) {
    for (const auto& y : b) {
      const Relation* rel = x == y ? nullptr : lex.find(x, y);
      if (x == y || (rel != nullptr && *rel == Relation::Synonym)) {
        ++counts.synonym;
      } else if (rel != nullptr && *rel == Relation::Antonym) {
        ++counts.antonym;
      } else {
        ++counts.neutral;
      }
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// Special stopwords

std::vector<std::string> StopwordConfig::stopwords() const {
  std::vector<std::string> all = negations;
  all.insert(all.end(), exceptions.begin(), exceptions.end());
  return all;
}

StopwordConfig StopwordConfig::normalized(const textproc::NormalizationConfig& norm) const {
  auto one_token = [&](const std::string& w) {
    const std::string n = textproc::normalize(utf8::trim(w), norm);
    if (n.empty() || textproc::tokenize(n).size() != 1) {
      throw ConfigError("stopword entry must be a single token: '" + w + "'");
    }
    return n;
  };
  StopwordConfig out;
  out.negations.clear();
  out.exceptions.clear();
  for (const auto& w : negations) out.negations.push_back(one_token(w));
  for (const auto& w : exceptions) out.exceptions.push_back(one_token(w));
  out.confirmation = {one_token(confirmation.first), one_token(confirmation.second)};
  for (const auto& n : out.negations) {
    if (std::find(out.exceptions.begin(), out.exceptions.end(), n) != out.exceptions.end()) {
      throw ConfigError("stopword '" + n + "' is both a negation and an exception");
    }
  }
  return out;
}

StopwordConfig StopwordConfig::parse(std::string_view text) {
  StopwordConfig cfg;
  cfg.negations.clear();
  cfg.exceptions.clear();
  enum class Section { None, Negation, Exception, Confirmation } section = Section::None;
  bool have_confirmation = false;
  for_each_tsv_line(text, [&](std::size_t lineno, const std::vector<std::string>& f) {
    if (f.size() == 1 && f[0] == "[negation]") {
      section = Section::Negation;
    } else if (f.size() == 1 && f[0] == "[exception]") {
      section = Section::Exception;
    } else if (f.size() == 1 && f[0] == "[confirmation]") {
      section = Section::Confirmation;
    } else if (section == Section::Negation && f.size() == 1) {
      cfg.negations.push_back(f[0]);
    } else if (section == Section::Exception && f.size() == 1) {
      cfg.exceptions.push_back(f[0]);
    } else if (section == Section::Confirmation && f.size() == 2 && !have_confirmation) {
      cfg.confirmation = {f[0], f[1]};
      have_confirmation = true;
    } else {
      throw ConfigError("stopword config line " + std::to_string(lineno) + ": unexpected entry");
    }
  });
  if (!have_confirmation) throw ConfigError("stopword config lacks a [confirmation] pair");
  return cfg;
}

StopwordConfig StopwordConfig::load(const std::filesystem::path& path) {
  return parse(read_file(path, "stopword config"));
}

StopwordFeatures stopword_features(const TokenList& a, const TokenList& b,
                                   const StopwordConfig& cfg) {
  auto contains = [](const TokenList& tokens, const std::string& w) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string& t) {
      return t == w || strip_proclitic(t, U"وف") == w;
    });
  };
  StopwordFeatures f;
  for (const auto& w : cfg.stopwords()) {
    f.codes.push_back(static_cast<int>(contains(a, w)) + static_cast<int>(contains(b, w)));
  }
  const auto& [first, second] = cfg.confirmation;
  f.confirm[0] = contains(a, first) && contains(a, second) ? 1 : 0;
  f.confirm[1] = contains(b, first) && contains(b, second) ? 1 : 0;
  return f;
}

// ---------------------------------------------------------------------------
// Numbers, dates and times

namespace {

struct Span {
  std::size_t begin, end;
  std::string word;  // punctuation stripped
};

std::vector<Span> whitespace_spans(const std::string& text) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
                               text[i] == '\r')) {
      ++i;
    }
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !(text[j] == ' ' || text[j] == '\t' || text[j] == '\n' ||
                                text[j] == '\r')) {
      ++j;
    }
    std::u32string word;
    for (char32_t c : utf8::decode(std::string_view(text).substr(i, j - i))) {
      if (!utf8::is_punct_or_symbol(c)) word.push_back(c);
    }
    spans.push_back({i, j, utf8::encode(word)});
    i = j;
  }
  return spans;
}

bool word_matches(const std::string& word, const std::string& cue) {
  return word == cue || strip_proclitic(word, U"وف") == cue;
}

const std::vector<std::string>& date_cues() {
  static const std::vector<std::string> cues = {"عام", "العام", "لعام", "بعام",
                                                "سنة", "السنة", "لسنة", "بسنة"};
  return cues;
}

struct ComparatorPhrase {
  std::vector<std::string> words;
  Comparator comparator;
};

const std::vector<ComparatorPhrase>& comparator_phrases() {
  static const std::vector<ComparatorPhrase> phrases = [] {
    const std::vector<std::pair<std::string, Comparator>> raw = {
        {"يزيد عن", Comparator::MoreThan}, {"يزيد على", Comparator::MoreThan},
        {"أكثر من", Comparator::MoreThan}, {"يقل عن", Comparator::LessThan},
        {"أقل من", Comparator::LessThan},  {"ينقص", Comparator::LessThan},
        {"حوالي", Comparator::About},      {"نحو", Comparator::About}};
    std::vector<ComparatorPhrase> out;
    for (const auto& [text, cmp] : raw) {
      out.push_back({textproc::tokenize(textproc::normalize(text)), cmp});
    }
    return out;
  }();
  return phrases;
}

Comparator comparator_before(const std::vector<Span>& spans, std::size_t index) {
  constexpr std::size_t kWindow = 3;
  const std::size_t begin = index >= kWindow ? index - kWindow : 0;
  Comparator result = Comparator::Exact;
  std::size_t best_end = 0;
  for (const auto& phrase : comparator_phrases()) {
    const std::size_t n = phrase.words.size();
    for (std::size_t s = begin; s + n <= index; ++s) {
      bool ok = word_matches(spans[s].word, phrase.words[0]);
      for (std::size_t k = 1; ok && k < n; ++k) ok = spans[s + k].word == phrase.words[k];
      // The phrase closest to the number wins.
      if (ok && s + n > best_end) {
        best_end = s + n;
        result = phrase.comparator;
      }
    }
  }
  return result;
}

bool near_date_cue(const std::vector<Span>& spans, std::size_t index) {
  constexpr std::size_t kWindow = 2;
  const std::size_t begin = index >= kWindow ? index - kWindow : 0;
  const std::size_t end = std::min(spans.size(), index + kWindow + 1);
  for (std::size_t i = begin; i < end; ++i) {
    for (const auto& cue : date_cues()) {
      if (word_matches(spans[i].word, cue)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<QuantityMention> extract_quantities(std::string_view raw) {
  static const std::regex pattern(
      R"((\d{1,2}):(\d{2})|(\d{1,2})/(\d{1,2})/(\d{4})|(\d+(?:\.\d+)?))");
  const std::string text = textproc::normalize(raw);
  const auto spans = whitespace_spans(text);
  auto span_of = [&](std::size_t pos) {
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (pos >= spans[i].begin && pos < spans[i].end) return i;
    }
    return spans.size() - 1;
  };

  std::vector<QuantityMention> mentions;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), pattern);
       it != std::sregex_iterator(); ++it) {
    const std::smatch& m = *it;
    const std::size_t index = span_of(static_cast<std::size_t>(m.position(0)));
    QuantityMention q;
    q.comparator = comparator_before(spans, index);
    if (m[1].matched) {
      const int hours = std::stoi(m[1].str());
      const int minutes = std::stoi(m[2].str());
      if (hours >= 24 || minutes >= 60) continue;
      q.kind = QuantityKind::Time;
      q.value = hours * 60 + minutes;
    } else if (m[5].matched) {
      const int year = std::stoi(m[5].str());
      if (year < 1000 || year > 2999) continue;
      q.kind = QuantityKind::Date;
      q.value = year;
    } else {
      const std::string digits = m[6].str();
      q.value = std::stod(digits);
      const bool integral = digits.find('.') == std::string::npos;
      if (integral && q.value >= 1000 && q.value <= 2999 && near_date_cue(spans, index)) {
        q.kind = QuantityKind::Date;
      }
    }
    if (std::isfinite(q.value)) mentions.push_back(q);
  }
  return mentions;
}

bool compatible(const QuantityMention& a, const QuantityMention& b) {
  struct Interval {
    double lo, hi;
    bool lo_open, hi_open;
  };
  auto interval = [](const QuantityMention& q) -> Interval {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (q.comparator) {
      case Comparator::MoreThan:
        return {q.value, inf, true, true};
      case Comparator::LessThan:
        return {-inf, q.value, true, true};
      case Comparator::About: {
        const double tol = std::max(1.0, 0.1 * std::fabs(q.value));
        return {q.value - tol, q.value + tol, false, false};
      }
      case Comparator::Exact:
        break;
    }
    return {q.value, q.value, false, false};
  };
  const Interval x = interval(a);
  const Interval y = interval(b);
  // Intersection is non-empty iff max(lo) is below min(hi), or equal with
  // both bounds closed.
  const bool x_lo_max = x.lo > y.lo || (x.lo == y.lo && x.lo_open);
  const double lo = x_lo_max ? x.lo : y.lo;
  const bool lo_open = x_lo_max ? x.lo_open : y.lo_open;
  const bool x_hi_min = x.hi < y.hi || (x.hi == y.hi && x.hi_open);
  const double hi = x_hi_min ? x.hi : y.hi;
  const bool hi_open = x_hi_min ? x.hi_open : y.hi_open;
  if (lo < hi) return true;
  return lo == hi && !lo_open && !hi_open;
}

int quantity_conflict(const std::vector<QuantityMention>& a,
                      const std::vector<QuantityMention>& b, QuantityKind kind) {
  bool any_a = false;
  bool any_b = false;
  for (const auto& x : a) any_a |= x.kind == kind;
  for (const auto& y : b) any_b |= y.kind == kind;
  if (!any_a || !any_b) return 0;
  for (const auto& x : a) {
    if (x.kind != kind) continue;
    for (const auto& y : b) {
      if (y.kind == kind && compatible(x, y)) return 0;
    }
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Assembly

Resources::Paths Resources::default_paths(const std::filesystem::path& data_dir) {
  return {data_dir / "gazetteer.tsv", data_dir / "lexicon.tsv", data_dir / "stopwords.tsv",
          data_dir / "stemmer_rules.txt"};
}

Resources Resources::load(const Paths& paths, const textproc::NormalizationConfig& norm) {
  for (const auto* p : {&paths.gazetteer, &paths.lexicon, &paths.stopwords, &paths.stemmer_rules}) {
    if (!std::filesystem::is_regular_file(*p)) {
      throw ConfigError("resource file not found: " + p->string());
    }
  }
  Resources res;
  res.norm = norm;
  res.stemmer = textproc::Stemmer(textproc::StemmerRules::load(paths.stemmer_rules));
  res.gazetteer = Gazetteer::load(paths.gazetteer, norm);
  res.lexicon = Lexicon::load(paths.lexicon, norm, res.stemmer);
  res.stopwords = StopwordConfig::load(paths.stopwords).normalized(norm);
  return res;
}

std::size_t contra_dimension(const StopwordConfig& cfg) {
  return 1 + 3 + cfg.negations.size() + cfg.exceptions.size() + 2 + 3;
}

std::vector<double> ContraVector::values() const {
  std::vector<double> v;
  v.reserve(4 + stopwords.codes.size() + 5);
  v.push_back(ne_code);
  v.push_back(static_cast<double>(similarity.synonym));
  v.push_back(static_cast<double>(similarity.neutral));
  v.push_back(static_cast<double>(similarity.antonym));
  for (int c : stopwords.codes) v.push_back(c);
  v.push_back(stopwords.confirm[0]);
  v.push_back(stopwords.confirm[1]);
  for (int c : conflicts) v.push_back(c);
  return v;
}

PreparedSentence prepare(std::string_view text, const Resources& res) {
  auto staged = textproc::preprocess_staged(text, res.norm, res.stemmer);
  return {std::move(staged.normalized), std::move(staged.words), std::move(staged.stems)};
}

ContraVector build_contra_vector(const PreparedSentence& premise,
                                 const PreparedSentence& hypothesis, const Resources& res) {
  ContraVector v;
  v.ne_code = ne_feature(extract_named_entities(premise.words, res.gazetteer),
                         extract_named_entities(hypothesis.words, res.gazetteer));
  v.similarity = similarity_counts(premise.stems, hypothesis.stems, res.lexicon);
  v.stopwords = stopword_features(premise.words, hypothesis.words, res.stopwords);
  const auto qa = extract_quantities(premise.normalized);
  const auto qb = extract_quantities(hypothesis.normalized);
  for (auto kind : {QuantityKind::Number, QuantityKind::Date, QuantityKind::Time}) {
    v.conflicts[static_cast<std::size_t>(kind)] = quantity_conflict(qa, qb, kind);
  }
  return v;
}

}  // namespace arnli::contra
