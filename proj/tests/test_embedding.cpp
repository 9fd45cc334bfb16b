#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arag/embedding.hpp"

#include <cmath>
#include <random>

using arag::HashEmbedder;

TEST_CASE("deterministic for identical input") {
  HashEmbedder embedder;
  auto a = embedder.embed("x");
  auto b = embedder.embed("x");
  CHECK(a == b);
}

TEST_CASE("every vector is unit-normalized") {
  HashEmbedder embedder;
  for (const char* text : {"a", "ab", "abc", "the quick brown fox", "  ", "1234567890"}) {
    auto v = embedder.embed(text);
    CHECK(std::abs(v.norm() - 1.0f) < 1e-6f);
  }
}

TEST_CASE("nearby strings map to distinct vectors") {
  HashEmbedder embedder;
  CHECK(embedder.embed("abc") != embedder.embed("abd"));
}

TEST_CASE("empty text maps to e0") {
  HashEmbedder embedder;
  auto v = embedder.embed("");
  CHECK(v[0] == 1.0f);
  CHECK(v.tail(v.size() - 1).norm() == 0.0f);
}

TEST_CASE("self-similarity is exactly 1 for unit vectors") {
  HashEmbedder embedder;
  auto v = embedder.embed("paris capital");
  CHECK(v.dot(v) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("shared n-grams raise cosine similarity") {
  HashEmbedder embedder;
  auto base = embedder.embed("paris capital");
  float related = base.dot(embedder.embed("paris capital france"));
  float unrelated = base.dot(embedder.embed("zebra quantum"));
  CHECK(related > unrelated);
}

TEST_CASE("case-insensitive: lowercased before hashing") {
  HashEmbedder embedder;
  CHECK(embedder.embed("Paris") == embedder.embed("paris"));
}

TEST_CASE("batch order matches single-item embedding") {
  HashEmbedder embedder;
  std::vector<std::string> texts = {"one fish", "two fish", "red fish", "blue fish"};
  auto batch = embedder.embed_batch(texts);
  REQUIRE(batch.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    CHECK(batch[i] == embedder.embed(texts[i]));
  }
}

TEST_CASE("dimension is configurable and enforced") {
  HashEmbedder embedder(64);
  CHECK(embedder.dimension() == 64);
  CHECK(embedder.embed("hello").size() == 64);
  CHECK_THROWS_AS(HashEmbedder(0), arag::EmbeddingError);
}
