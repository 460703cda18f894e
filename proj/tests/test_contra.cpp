#include "doctest.h"

#include "arnli/contra.hpp"
#include "arnli/errors.hpp"
#include "synthetic.hpp"

using namespace arnli;
using namespace arnli::contra;

namespace {

const Resources& shipped() {
  static const Resources r = Resources::load(Resources::default_paths(ARNLI_DATA_DIR));
  return r;
}

ContraVector vec(const std::string& a, const std::string& b) {
  const auto& r = shipped();
  return build_contra_vector(prepare(a, r), prepare(b, r), r);
}

std::size_t code_index(const StopwordConfig& cfg, const std::string& word) {
  const auto sw = cfg.stopwords();
  return static_cast<std::size_t>(std::find(sw.begin(), sw.end(), word) - sw.begin());
}

}  // namespace

TEST_CASE("gazetteer longest match") {
  const auto gaz = Gazetteer::parse("باريس\tLOC\nليون\tLOC\nفرنسا\tLOC\n");
  const auto paris = extract_named_entities({"باريس", "عاصمة", "فرنسا"}, gaz);
  CHECK(paris == EntitySet{{"باريس", EntityClass::Loc}, {"فرنسا", EntityClass::Loc}});
  CHECK(extract_named_entities({"كتاب", "جديد"}, gaz).empty());

  const auto two = Gazetteer::parse("عبد الله\tPER\nعبد\tMISC\n");
  const auto hit = extract_named_entities({"قال", "عبد", "الله", "و", "عبد"}, two);
  CHECK(hit == EntitySet{{"عبد الله", EntityClass::Per}, {"عبد", EntityClass::Misc}});

  CHECK_THROWS_AS(Gazetteer::parse("a b c d\tLOC\n"), ConfigError);
  CHECK_THROWS_AS(Gazetteer::parse("باريس\tCITY\n"), ConfigError);
}

TEST_CASE("gazetteer longest match equals an exhaustive left-to-right scan") {
  Gazetteer gaz;
  const std::vector<std::string> words{"ا", "ب", "ج"};
  gaz.add("ا", EntityClass::Per);
  gaz.add("ا ب", EntityClass::Loc);
  gaz.add("ب ج ا", EntityClass::Org);
  gaz.add("ج", EntityClass::Misc);
  // Oracle: at each position take the longest entry starting there.
  for (int mask = 0; mask < 729; ++mask) {
    TokenList t;
    for (int m = mask, i = 0; i < 6; ++i, m /= 3) t.push_back(words[m % 3]);
    EntitySet oracle;
    for (std::size_t i = 0; i < t.size();) {
      std::size_t best = 0;
      for (std::size_t len = 1; len <= 3 && i + len <= t.size(); ++len) {
        std::string key = t[i];
        for (std::size_t k = 1; k < len; ++k) key += " " + t[i + k];
        if (gaz.find(key)) best = len;
      }
      if (best) {
        std::string key = t[i];
        for (std::size_t k = 1; k < best; ++k) key += " " + t[i + k];
        oracle.insert({key, *gaz.find(key)});
        i += best;
      } else {
        ++i;
      }
    }
    CHECK(extract_named_entities(t, gaz) == oracle);
  }
}

TEST_CASE("ne_feature codes") {
  const EntitySet a{{"باريس", EntityClass::Loc}, {"فرنسا", EntityClass::Loc}};
  const EntitySet b{{"ليون", EntityClass::Loc}, {"فرنسا", EntityClass::Loc}};
  CHECK(ne_feature(a, b) == 1);
  CHECK(ne_feature({}, {}) == 0);
  CHECK(ne_feature(a, a) == 2);
  CHECK(ne_feature(a, {}) == 1);
  CHECK(vec("باريس عاصمة فرنسا", "ليون عاصمة فرنسا").ne_code == 1);
}

TEST_CASE("similarity counts") {
  const textproc::Stemmer st;
  const auto lex = Lexicon::parse("أفل\tأشرق\tANT\n", {}, st);
  const auto norm = [](const char* s) { return textproc::normalize(s); };
  const auto c = similarity_counts({norm("أفل"), "قمر"}, {norm("أشرق"), "شمس"}, lex);
  CHECK(c == SimilarityCounts{0, 3, 1});

  const Lexicon empty;
  CHECK(similarity_counts({"كتاب"}, {"كتاب"}, empty) == SimilarityCounts{1, 0, 0});
  CHECK(similarity_counts({"ا", "ب"}, {"ج", "د", "ه"}, empty) == SimilarityCounts{0, 6, 0});

  Lexicon lx;
  lx.add("كبير", "ضخم", Relation::Synonym);
  CHECK(lx.find("ضخم", "كبير") != nullptr);
  CHECK(*lx.find("ضخم", "كبير") == Relation::Synonym);
  CHECK_THROWS_AS(lx.add("ضخم", "كبير", Relation::Antonym), ConfigError);
}

TEST_CASE("stopword codes and confirmation") {
  const auto cfg = StopwordConfig{}.normalized({});
  const auto f = stopword_features({"لا", "اله"}, {"لا", "اله", "الا", "الله"}, cfg);
  CHECK(f.codes[code_index(cfg, "لا")] == 2);
  CHECK(f.codes[code_index(cfg, "الا")] == 1);
  CHECK(f.codes[code_index(cfg, "سوى")] == 0);
  CHECK(f.confirm == std::array<int, 2>{0, 1});

  const auto none = stopword_features({"كتاب"}, {"قلم"}, cfg);
  CHECK(std::all_of(none.codes.begin(), none.codes.end(), [](int c) { return c == 0; }));
  CHECK(none.confirm == std::array<int, 2>{0, 0});

  // Through the full pipeline with unnormalized spelling.
  const auto v = vec("لا إله", "لا إله إلا الله");
  CHECK(v.stopwords.codes[code_index(shipped().stopwords, "لا")] == 2);
  CHECK(v.stopwords.codes[code_index(shipped().stopwords, "الا")] == 1);
  CHECK(v.stopwords.confirm == std::array<int, 2>{0, 1});

  CHECK_THROWS_AS((StopwordConfig{{"لا"}, {"لا"}, {"لا", "الا"}}.normalized({})), ConfigError);
}

TEST_CASE("quantity extraction") {
  using Q = QuantityMention;
  CHECK(extract_quantities(textproc::normalize("ولد خالد عام 1987")) ==
        std::vector<Q>{{QuantityKind::Date, 1987, Comparator::Exact}});
  CHECK(extract_quantities(textproc::normalize("وما يزيد عن 50 قتيلاً")) ==
        std::vector<Q>{{QuantityKind::Number, 50, Comparator::MoreThan}});
  CHECK(extract_quantities("لا ارقام هنا").empty());
  CHECK(extract_quantities("اقل من 7") == std::vector<Q>{{QuantityKind::Number, 7, Comparator::LessThan}});
  CHECK(extract_quantities("حوالي 100") == std::vector<Q>{{QuantityKind::Number, 100, Comparator::About}});
  CHECK(extract_quantities("في 12/05/2010") == std::vector<Q>{{QuantityKind::Date, 2010, Comparator::Exact}});
  CHECK(extract_quantities("الساعة 10:30") == std::vector<Q>{{QuantityKind::Time, 630, Comparator::Exact}});
  CHECK(extract_quantities("1987 كتاب") == std::vector<Q>{{QuantityKind::Number, 1987, Comparator::Exact}});
}

TEST_CASE("quantity conflicts") {
  using Q = QuantityMention;
  const Q y87{QuantityKind::Date, 1987, Comparator::Exact}, y90{QuantityKind::Date, 1990, Comparator::Exact};
  CHECK(quantity_conflict({y87}, {y90}, QuantityKind::Date) == 1);
  const Q n60{QuantityKind::Number, 60, Comparator::Exact};
  CHECK(quantity_conflict({n60}, {{QuantityKind::Number, 50, Comparator::MoreThan}}, QuantityKind::Number) == 0);
  CHECK(quantity_conflict({n60}, {{QuantityKind::Number, 50, Comparator::LessThan}}, QuantityKind::Number) == 1);
  CHECK(quantity_conflict({n60}, {{QuantityKind::Number, 55, Comparator::About}}, QuantityKind::Number) == 0);
  CHECK(quantity_conflict({n60}, {{QuantityKind::Number, 50, Comparator::About}}, QuantityKind::Number) == 1);
  CHECK(quantity_conflict({n60}, {}, QuantityKind::Number) == 0);
  CHECK(quantity_conflict({}, {}, QuantityKind::Time) == 0);
  CHECK(quantity_conflict({n60}, {y90}, QuantityKind::Number) == 0);
}

TEST_CASE("reference quantity rows through the full vector") {
  const auto row1 = vec("بلغ عدد ضحايا زلزال اليابان 60 قتيلاً", "زلزال في اليابان وما يزيد عن 50 قتيلاً");
  CHECK(row1.conflicts == std::array<int, 3>{0, 0, 0});
  const auto row3 = vec("ولد خالد عام 1987", "ولد خالد عام 1990");
  CHECK(row3.conflicts == std::array<int, 3>{0, 1, 0});
  const auto row4 = vec("بلغ عدد ضحايا زلزال في اليابان 60 قتيلاً", "زلزال في اليابان وما يقل عن 50 قتيلاً");
  CHECK(row4.conflicts == std::array<int, 3>{1, 0, 0});
}

TEST_CASE("contra vector layout") {
  const auto v = vec("لا يأتي الولد", "لا يأتي الولد");
  CHECK(v.ne_code == 0);
  CHECK(v.similarity.antonym == 0);
  CHECK(v.stopwords.codes[code_index(shipped().stopwords, "لا")] == 2);
  CHECK(v.conflicts == std::array<int, 3>{0, 0, 0});
  CHECK(v.values().size() == 15);
  CHECK(contra_dimension(shipped().stopwords) == 15);
  CHECK_THROWS_AS(Resources::load(Resources::default_paths("/nonexistent")), ConfigError);
}

TEST_CASE("contra invariants over generated pairs") {
  const auto& r = shipped();
  for (const auto& p : testing::synthetic_corpus(300, 21)) {
    const auto a = prepare(p.premise, r), b = prepare(p.hypothesis, r);
    const auto ab = build_contra_vector(a, b, r);
    const auto ba = build_contra_vector(b, a, r);
    const auto& s = ab.similarity;
    CHECK(s.synonym + s.neutral + s.antonym == a.stems.size() * b.stems.size());
    CHECK(ab.values().size() == 15);
    CHECK(ab.ne_code == ba.ne_code);
    CHECK(ab.similarity == ba.similarity);
    CHECK(ab.stopwords.codes == ba.stopwords.codes);
    CHECK(ab.conflicts == ba.conflicts);
    CHECK(ab.stopwords.confirm[0] == ba.stopwords.confirm[1]);
    CHECK(ab.stopwords.confirm[1] == ba.stopwords.confirm[0]);
  }
}
