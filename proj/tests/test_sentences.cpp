#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arag/sentences.hpp"

#include <random>
#include <string>
#include <vector>

using arag::SentenceSpan;
using arag::segment_sentences;

namespace {

std::vector<std::string> span_texts(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& span : segment_sentences(text)) {
    out.push_back(text.substr(span.begin, span.end - span.begin));
  }
  return out;
}

std::string concat(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += p;
  return out;
}

}  // namespace

TEST_CASE("two simple sentences") {
  auto spans = span_texts("A. B.");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == "A. ");
  CHECK(spans[1] == "B.");
}

TEST_CASE("empty input yields no spans") {
  CHECK(segment_sentences("").empty());
  CHECK(segment_sentences("   \n\t ").empty());
}

TEST_CASE("abbreviations do not split") {
  CHECK(span_texts("Dr. Smith arrived. He left.").size() == 2);
  CHECK(span_texts("Mr. Jones met Mrs. Park. They spoke.").size() == 2);
  CHECK(span_texts("The U.S. Senate convened. It adjourned.").size() == 2);
  CHECK(span_texts("See No. 4 for details. It is short.").size() == 2);
  // "e.g." is usually followed by lowercase, which never splits anyway; an
  // uppercase continuation must also be held together.
  CHECK(span_texts("Fruits, e.g. Apples, are cheap. Yes.").size() == 2);
}

TEST_CASE("split requires uppercase or digit continuation") {
  CHECK(span_texts("version 2. 5 is out").size() == 2);  // digit starts a sentence
  CHECK(span_texts("it ended. but quietly").size() == 1);
  CHECK(span_texts("Stop! Now. Go?").size() == 3);
}

TEST_CASE("paragraph break splits without punctuation") {
  auto spans = span_texts("first line\n\nSecond paragraph here.");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == "first line\n\n");
}

TEST_CASE("inter-sentence whitespace attaches to the preceding span") {
  auto spans = span_texts("One.   Two.");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == "One.   ");
  CHECK(spans[1] == "Two.");
}

TEST_CASE("coverage: spans tile random documents exactly") {
  std::mt19937 rng(42);
  const std::vector<std::string> words = {"alpha", "Beta", "gamma", "Delta",
                                          "Dr.", "No.", "42", "omega"};
  const std::vector<std::string> seps = {" ", ". ", "! ", "? ", "\n", "\n\n", "  "};
  for (int doc = 0; doc < 200; ++doc) {
    std::string text;
    int pieces = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < pieces; ++i) {
      text += words[rng() % words.size()];
      text += seps[rng() % seps.size()];
    }
    auto spans = segment_sentences(text);
    std::size_t cursor = 0;
    for (const auto& span : spans) {
      CHECK(span.begin == cursor);
      CHECK(span.end > span.begin);
      cursor = span.end;
    }
    CHECK(cursor == text.size());
    CHECK(concat(span_texts(text)) == text);
  }
}
