#include <algorithm>
#include <map>

#include "doctest.h"

#include "arnli/rng.hpp"
#include "arnli/textproc.hpp"
#include "arnli/utf8.hpp"
#include "golden.hpp"

using namespace arnli;
using namespace arnli::textproc;
using namespace arnli::testing;

namespace {

using Multiset = std::map<std::string, int>;

Multiset multiset(const TokenList& t) {
  Multiset m;
  for (const auto& s : t) ++m[s];
  return m;
}

std::string random_text(Rng& rng, std::size_t len) {
  static const std::u32string alphabet =
      U"ابتثجحخدذرزسشصضطظعغفقكلمنهويىةءأإآؤئ0123456789٠١٢٣٤٥٦٧٨٩ـًٌٍَُِّْ .,!؟،:";
  std::u32string s;
  for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
  return utf8::encode(s);
}

}  // namespace

TEST_CASE("normalize strips diacritics and tatweel, unifies alef, maps digits") {
  CHECK(normalize("كِتَاب") == "كتاب");
  CHECK(normalize("٥٠") == "50");
  CHECK(normalize("۱۲") == "12");
  CHECK(normalize("أحمد إلى آخر") == "احمد الى اخر");
  CHECK(normalize("كتـــاب") == "كتاب");

  NormalizationConfig off{false, false, false, false};
  CHECK(normalize("كِتَـاب ٥ أ", off) == "كِتَـاب ٥ أ");
}

TEST_CASE("normalize is idempotent on random text") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto x = random_text(rng, rng.below(30));
    const auto once = normalize(x);
    CHECK(normalize(once) == once);
  }
}

TEST_CASE("tokenize splits on whitespace and separates punctuation runs") {
  CHECK(tokenize("عملنا في هذا البحث") == TokenList{"عملنا", "في", "هذا", "البحث"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n").empty());
  CHECK(tokenize("اللغات !") == TokenList{"اللغات", "!"});
  CHECK(tokenize("العربية..") == TokenList{"العربية", ".."});
  CHECK(tokenize("الساعة 10:30 و 3.5") == TokenList{"الساعة", "10:30", "و", "3.5"});
  CHECK(tokenize("أ، ب; ج") == TokenList{"أ", "ب", "ج"});
}

TEST_CASE("tokens never contain whitespace") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    for (const auto& t : tokenize(random_text(rng, 40))) {
      for (char32_t c : utf8::decode(t)) CHECK_FALSE(utf8::is_space(c));
      CHECK_FALSE(t.empty());
    }
  }
}

TEST_CASE("remove_punctuation drops punctuation-only tokens") {
  CHECK(remove_punctuation({"اللغات", "!"}) == TokenList{"اللغات"});
  CHECK(remove_punctuation({"..", ".."}).empty());
  const TokenList plain{"في", "هذا", "البحث"};
  CHECK(remove_punctuation(plain) == plain);
  CHECK(is_punctuation_token("؟!"));
  CHECK_FALSE(is_punctuation_token("3.5"));
}

TEST_CASE("stem examples") {
  Stemmer st;
  CHECK(st.stem("عملنا") == "عمل");
  CHECK(st.stem("العربية") == "عرب");
  CHECK(st.stem("الاستدلال") == "استدلال");
  CHECK(st.stem("فهم") == "فهم");
  CHECK(st.stem("1987") == "1987");
  CHECK(st.stem("في") == "في");
  CHECK(st.stem("لا") == "لا");
  CHECK(st.stem("") == "");
}

TEST_CASE("golden preprocessing: both reference sentences, all three stages") {
  const Stemmer st;
  for (auto [text, tok, punct, stem] :
       {std::tuple{kSentence1, kTok1, kPunct1, kStem1}, std::tuple{kSentence2, kTok2, kPunct2, kStem2}}) {
    const auto staged = preprocess_staged(text, {}, st);
    CHECK(multiset(staged.tokens) == multiset(tok));
    CHECK(multiset(staged.words) == multiset(punct));
    CHECK(multiset(staged.stems) == multiset(stem));
    CHECK(preprocess(text) == staged.stems);
  }
}

TEST_CASE("stem is idempotent on the reference vocabulary") {
  const Stemmer st;
  for (const auto* list : {&kPunct1, &kPunct2, &kStem1, &kStem2}) {
    for (const auto& w : *list) {
      const auto once = st.stem(normalize(w));
      CHECK_MESSAGE(st.stem(once) == once, w);
    }
  }
}

TEST_CASE("preprocess only grows the token count at the tokenize stage") {
  Rng rng(3);
  const Stemmer st;
  for (int i = 0; i < 300; ++i) {
    const auto staged = preprocess_staged(random_text(rng, 50), {}, st);
    CHECK(staged.words.size() <= staged.tokens.size());
    CHECK(staged.stems.size() == staged.words.size());
    for (const auto& t : staged.stems) CHECK_FALSE(is_punctuation_token(t));
  }
  CHECK(preprocess("").empty());
}

TEST_CASE("stemmer rule file round-trips and matches the shipped defaults") {
  const auto shipped = StemmerRules::load(std::filesystem::path(ARNLI_DATA_DIR) / "stemmer_rules.txt");
  CHECK(shipped == StemmerRules::defaults());
  CHECK(StemmerRules::parse(shipped.to_text()) == shipped);

  const auto custom = StemmerRules::parse("[prefixes]\nال\n[suffixes]\nات\t3\n");
  REQUIRE(custom.prefixes.size() == 1);
  CHECK(custom.prefixes[0].min_residual == 2);
  CHECK(custom.suffixes[0].min_residual == 3);
  Stemmer st(custom);
  CHECK(st.stem("الكتاب") == "كتاب");
  CHECK(st.stem("كلمات") == "كلم");
}
