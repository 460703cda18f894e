#include "arnli/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "arnli/errors.hpp"
#include "arnli/rng.hpp"
#include "arnli/textproc.hpp"
#include "arnli/utf8.hpp"

namespace arnli::corpus {

namespace {

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC-4180 reader: quoted fields may contain the delimiter, doubled quotes and
// line breaks. Blank lines are skipped.
std::vector<Record> read_records(std::string_view text, char delim) {
  std::vector<Record> records;
  std::size_t i = 0;
  std::size_t line = 1;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  while (i < text.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool quoted_field = false;
    bool end_of_record = false;
    while (!end_of_record) {
      if (i >= text.size()) {
        rec.fields.push_back(std::move(field));
        break;
      }
      char c = text[i];
      if (field.empty() && !quoted_field && c == '"') {
        quoted_field = true;
        ++i;
        bool closed = false;
        while (i < text.size()) {
          c = text[i++];
          if (c == '"') {
            if (i < text.size() && text[i] == '"') {
              field.push_back('"');
              ++i;
            } else {
              closed = true;
              break;
            }
          } else {
            if (c == '\n') ++line;
            field.push_back(c);
          }
        }
        if (!closed) throw RowError(rec.line, "unterminated quoted field");
        continue;
      }
      if (c == delim) {
        rec.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        ++i;
      } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
        i += 2;
        ++line;
        rec.fields.push_back(std::move(field));
        end_of_record = true;
      } else if (c == '\n') {
        ++i;
        ++line;
        rec.fields.push_back(std::move(field));
        end_of_record = true;
      } else {
        if (quoted_field) throw RowError(rec.line, "text after closing quote");
        field.push_back(c);
        ++i;
      }
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

char delimiter(Format f) { return f == Format::Csv ? ',' : '\t'; }

std::string quote(const std::string& field, char delim) {
  const bool needs = field.find_first_of(std::string{delim, '"', '\n', '\r'}) != std::string::npos;
  if (!needs) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
    return utf8::trim(h) == name;
  });
  if (it == header.end()) throw SchemaError("missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::size_t count_words(const std::string& sentence) {
  return textproc::remove_punctuation(textproc::tokenize(textproc::normalize(sentence))).size();
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "tsv") return Format::Tsv;
  throw ConfigError("unknown dataset format '" + name + "' (expected csv or tsv)");
}

std::vector<LabeledPair> parse_dataset(const std::string& text, Format format,
                                       const ColumnMapping& mapping) {
  auto records = read_records(text, delimiter(format));
  if (records.empty()) throw SchemaError("dataset has no header row");
  const auto& header = records.front().fields;
  const bool synth_ids = mapping.id_column.empty();
  const std::size_t id_col = synth_ids ? 0 : find_column(header, mapping.id_column);
  const std::size_t p_col = find_column(header, mapping.premise_column);
  const std::size_t h_col = find_column(header, mapping.hypothesis_column);
  const std::size_t l_col = find_column(header, mapping.label_column);

  std::vector<LabeledPair> pairs;
  pairs.reserve(records.size() - 1);
  std::unordered_set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != header.size()) {
      throw RowError(rec.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                   std::to_string(rec.fields.size()));
    }
    LabeledPair pair;
    pair.id = synth_ids ? "row-" + std::to_string(r) : std::string(utf8::trim(rec.fields[id_col]));
    pair.premise = rec.fields[p_col];
    pair.hypothesis = rec.fields[h_col];
    if (utf8::trim(pair.premise).empty()) throw RowError(rec.line, "empty premise");
    if (utf8::trim(pair.hypothesis).empty()) throw RowError(rec.line, "empty hypothesis");
    const std::string raw_label(utf8::trim(rec.fields[l_col]));
    if (auto it = mapping.label_codes.find(raw_label); it != mapping.label_codes.end()) {
      pair.label = it->second;
    } else if (auto parsed = parse_label(raw_label)) {
      pair.label = *parsed;
    } else {
      throw RowError(rec.line, "unknown label '" + raw_label + "'");
    }
    if (!seen.insert(pair.id).second) throw RowError(rec.line, "duplicate id '" + pair.id + "'");
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<LabeledPair> load_dataset(const std::filesystem::path& path, Format format,
                                      const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), format, mapping);
}

std::string serialize_dataset(const std::vector<LabeledPair>& pairs, Format format) {
  const char d = delimiter(format);
  std::string out = std::string("id") + d + "sentence1" + d + "sentence2" + d + "label\n";
  for (const auto& p : pairs) {
    out += quote(p.id, d) + d + quote(p.premise, d) + d + quote(p.hypothesis, d) + d +
           std::string(to_string(p.label)) + "\n";
  }
  return out;
}

void save_dataset(const std::vector<LabeledPair>& pairs, const std::filesystem::path& path,
                  Format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write dataset: " + path.string());
  out << serialize_dataset(pairs, format);
}

std::size_t train_size(std::size_t n, double ratio) {
  const double test_exact = (1.0 - ratio) * static_cast<double>(n);
  // The epsilon absorbs representation error in 1 - ratio (1 - 0.8 != 0.2).
  const auto test = static_cast<std::size_t>(std::ceil(test_exact - 1e-9));
  return n - std::min(test, n);
}

DatasetSplit split_dataset(const std::vector<LabeledPair>& pairs, double ratio,
                           std::uint64_t seed, bool stratified) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  if (pairs.size() < 2) throw Error("cannot split fewer than 2 pairs");

  DatasetSplit split;
  split.seed = seed;
  split.ratio = ratio;
  Rng rng(seed);
  if (!stratified) {
    std::vector<std::size_t> order(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    const std::size_t n_train = train_size(pairs.size(), ratio);
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < n_train ? split.train : split.test).push_back(pairs[order[i]]);
    }
  } else {
    std::array<std::vector<std::size_t>, kNumLabels> groups;
    for (std::size_t i = 0; i < pairs.size(); ++i) groups[index_of(pairs[i].label)].push_back(i);
    for (auto& g : groups) {
      rng.shuffle(g);
      const std::size_t n_train = train_size(g.size(), ratio);
      for (std::size_t i = 0; i < g.size(); ++i) {
        (i < n_train ? split.train : split.test).push_back(pairs[g[i]]);
      }
    }
    rng.shuffle(split.train);
    rng.shuffle(split.test);
  }
  if (split.train.empty() || split.test.empty()) {
    throw Error("split ratio leaves one side empty");
  }
  return split;
}

CorpusStats compute_stats(const std::vector<LabeledPair>& pairs) {
  if (pairs.empty()) throw Error("cannot compute statistics of an empty dataset");
  CorpusStats stats;
  stats.size = pairs.size();
  std::size_t hyp_total = 0;
  std::size_t prem_total = 0;
  for (const auto& p : pairs) {
    ++stats.counts[index_of(p.label)];
    const std::size_t h = count_words(p.hypothesis);
    const std::size_t q = count_words(p.premise);
    hyp_total += h;
    prem_total += q;
    stats.hypothesis.max = std::max(stats.hypothesis.max, h);
    stats.premise.max = std::max(stats.premise.max, q);
  }
  stats.hypothesis.average = static_cast<double>(hyp_total) / static_cast<double>(pairs.size());
  stats.premise.average = static_cast<double>(prem_total) / static_cast<double>(pairs.size());
  return stats;
}

std::string format_stats_text(const CorpusStats& s) {
  std::ostringstream out;
  out << std::left;
  out << std::setw(28) << "pairs" << s.size << "\n";
  for (Label l : kAllLabels) {
    out << std::setw(28) << std::string("  ") + std::string(to_string(l)) << s.counts[index_of(l)]
        << "\n";
  }
  out << std::fixed << std::setprecision(3);
  out << std::setw(28) << "hypothesis avg tokens" << s.hypothesis.average << "\n";
  out << std::setw(28) << "hypothesis max tokens" << s.hypothesis.max << "\n";
  out << std::setw(28) << "premise avg tokens" << s.premise.average << "\n";
  out << std::setw(28) << "premise max tokens" << s.premise.max << "\n";
  return out.str();
}

std::string format_stats_csv(const CorpusStats& s) {
  std::string out = "label,count\n";
  for (Label l : kAllLabels) {
    out += std::string(to_string(l)) + "," + std::to_string(s.counts[index_of(l)]) + "\n";
  }
  out += "metric,value\n";
  out += "pairs," + std::to_string(s.size) + "\n";
  out += "hypothesis_avg_tokens," + format_double(s.hypothesis.average) + "\n";
  out += "hypothesis_max_tokens," + std::to_string(s.hypothesis.max) + "\n";
  out += "premise_avg_tokens," + format_double(s.premise.average) + "\n";
  out += "premise_max_tokens," + std::to_string(s.premise.max) + "\n";
  return out;
}

}  // namespace arnli::corpus
