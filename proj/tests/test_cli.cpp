#include "doctest.h"

#include <sstream>

#include "json.hpp"

#include "cli.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = arnli::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("usage and configuration errors exit with 2") {
  const auto dir = arnli::testing::scratch_dir("cli-errors");
  const auto data = arnli::testing::write_synthetic_csv(dir, 40, 3).string();
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"stats"}).code == 2);
  CHECK(run({"stats", "--data", (dir / "nope.csv").string()}).code == 2);
  CHECK(run({"stats", "--data", data, "--seed", "abc"}).code == 2);
  CHECK(run({"train", "--data", data, "--classifier", "bogus"}).code == 2);
  CHECK(run({"train", "--data", data, "--vectorizer", "bow-sentence"}).code == 2);
  CHECK(run({"train", "--data", data, "--train-ratio", "1.5"}).code == 2);
  CHECK(run({"predict", "--model", (dir / "none.arnli").string(), "--premise", "a", "--hypothesis", "b"})
            .code == 2);
  CHECK(run({"predict", "--model", "x"}).code == 2);
  const auto r = run({"stats"});
  CHECK(r.err.find("--data") != std::string::npos);
}

TEST_CASE("help and version exit with 0") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("preprocess prints the three stages") {
  const auto r = run({"preprocess", "ذهب الولد، إلى المدرسة."});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("tokenized:") != std::string::npos);
  CHECK(r.out.find("punctuation removed:") != std::string::npos);
  CHECK(r.out.find("stemmed:") != std::string::npos);
  CHECK(run({"preprocess", "ذهب الولد، إلى المدرسة."}).out == r.out);

  const auto empty = run({"preprocess", "", "--json"});
  REQUIRE(empty.code == 0);
  const auto j = nlohmann::json::parse(empty.out);
  CHECK(j["tokenized"].empty());
  CHECK(j["punctuation_removed"].empty());
  CHECK(j["stemmed"].empty());
}

TEST_CASE("stats csv") {
  const auto dir = arnli::testing::scratch_dir("cli-stats");
  const auto data = arnli::testing::write_synthetic_csv(dir, 40, 3).string();
  const auto r = run({"stats", "--data", data, "--csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("Contradiction,") != std::string::npos);
  CHECK(r.out.find("premise_avg_tokens,") != std::string::npos);
  const auto text = run({"stats", "--data", data});
  CHECK(text.code == 0);
  CHECK(text.out.find("Training pairs") != std::string::npos);
}

TEST_CASE("train then predict") {
  const auto dir = arnli::testing::scratch_dir("cli-train");
  const auto data = arnli::testing::write_synthetic_csv(dir, 120, 8).string();
  const auto out = (dir / "m").string();
  const auto t = run({"train", "--data", data, "--out", out, "--vectorizer", "tfidf-word", "--classifier",
                      "svm", "--seed", "5"});
  REQUIRE_MESSAGE(t.code == 0, t.err);
  CHECK(fs::exists(dir / "m" / "model.arnli"));
  CHECK(fs::exists(dir / "m" / "predictions.csv"));
  const auto metrics = arnli::testing::read_file(dir / "m" / "metrics.json");
  const auto j = nlohmann::json::parse(metrics);
  CHECK(j["classifier"] == "svm_linear");
  CHECK(j["vectorizer"] == "tfidf-word");
  CHECK(j["total"] == 24);

  const auto again = run({"train", "--data", data, "--out", out, "--vectorizer", "tfidf-word",
                          "--classifier", "svm", "--seed", "5"});
  REQUIRE(again.code == 0);
  CHECK(arnli::testing::read_file(dir / "m" / "metrics.json") == metrics);

  const auto p = run({"predict", "--model", (dir / "m" / "model.arnli").string(), "--premise",
                      "ذهب الولد إلى المدرسة", "--hypothesis", "لم يذهب الولد إلى المدرسة"});
  REQUIRE_MESSAGE(p.code == 0, p.err);
  const auto first_line = p.out.substr(0, p.out.find('\n'));
  CHECK((first_line == "Contradiction" || first_line == "Entailment" || first_line == "Neutral"));

  CHECK(run({"predict", "--model", (dir / "m" / "model.arnli").string(), "--premise", "  ",
             "--hypothesis", "x"})
            .code == 2);
}

TEST_CASE("experiment writes the report files") {
  const auto dir = arnli::testing::scratch_dir("cli-experiment");
  const auto data = arnli::testing::write_synthetic_csv(dir, 80, 2).string();
  const auto out = dir / "res";
  const auto r = run({"experiment", "--data", data, "--out", out.string(), "--vectorizer", "bow-char,ngram-char-3",
                      "--classifier", "dt,knn", "--quiet"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("4 cells") != std::string::npos);
  CHECK(fs::exists(out / "report.csv"));
  CHECK(fs::exists(out / "report.md"));
  CHECK(fs::exists(out / "predictions" / "bow-char__knn.csv"));
}
