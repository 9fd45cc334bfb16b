#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arag/index.hpp"

#include <filesystem>
#include <fstream>
#include <unistd.h>

using arag::build_index;
using arag::CorpusIndex;
using arag::Document;
using arag::HashEmbedder;

namespace {

const arag::TokenCounter kCounter = arag::whitespace_token_counter();

std::vector<Document> small_corpus() {
  return {
      {"doc_a", "France is in Europe. France borders Spain. Paris is its capital."},
      {"doc_b", "Tokyo is in Japan. It is a large city."},
  };
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("arag_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("chunk ids are sequential across documents") {
  HashEmbedder embedder(32);
  arag::BuildOptions options;
  options.max_chunk_tokens = 6;  // forces multiple chunks per document
  auto index = build_index(small_corpus(), embedder, kCounter, options);
  for (std::size_t i = 0; i < index.chunks.size(); ++i) {
    CHECK(index.chunks[i].chunk_id == std::to_string(i));
  }
  CHECK(index.chunks.size() >= 3);
}

TEST_CASE("one embedding row per sentence") {
  HashEmbedder embedder(32);
  auto index = build_index(small_corpus(), embedder, kCounter);
  CHECK(index.embedding_matrix.rows() ==
        static_cast<Eigen::Index>(index.sentences.size()));
  CHECK(index.embedding_matrix.cols() == 32);
  for (Eigen::Index r = 0; r < index.embedding_matrix.rows(); ++r) {
    CHECK(std::abs(index.embedding_matrix.row(r).norm() - 1.0f) < 1e-6f);
  }
}

TEST_CASE("sentences concatenate back to their chunk text") {
  HashEmbedder embedder(32);
  auto index = build_index(small_corpus(), embedder, kCounter);
  for (const auto& chunk : index.chunks) {
    std::string joined;
    for (auto s = chunk.sentence_range.first; s < chunk.sentence_range.second; ++s) {
      CHECK(index.sentences[static_cast<std::size_t>(s)].chunk_id == chunk.chunk_id);
      joined += index.sentences[static_cast<std::size_t>(s)].text;
    }
    CHECK(joined == chunk.text);
  }
}

TEST_CASE("empty corpus is rejected") {
  HashEmbedder embedder(32);
  CHECK_THROWS_AS(build_index({}, embedder, kCounter), arag::IndexError);
}

TEST_CASE("save/load round trip is field-for-field identical") {
  HashEmbedder embedder(32);
  auto index = build_index(small_corpus(), embedder, kCounter);
  TempDir dir;
  arag::save_index(index, dir.path);
  auto loaded = arag::load_index(dir.path);

  CHECK(loaded.manifest.embedder_id == index.manifest.embedder_id);
  CHECK(loaded.manifest.dimension == index.manifest.dimension);
  CHECK(loaded.manifest.token_counter_id == index.manifest.token_counter_id);
  CHECK(loaded.manifest.corpus_fingerprint == index.manifest.corpus_fingerprint);
  REQUIRE(loaded.chunks.size() == index.chunks.size());
  for (std::size_t i = 0; i < index.chunks.size(); ++i) {
    CHECK(loaded.chunks[i].chunk_id == index.chunks[i].chunk_id);
    CHECK(loaded.chunks[i].doc_id == index.chunks[i].doc_id);
    CHECK(loaded.chunks[i].text == index.chunks[i].text);
    CHECK(loaded.chunks[i].token_count == index.chunks[i].token_count);
    CHECK(loaded.chunks[i].sentence_range == index.chunks[i].sentence_range);
  }
  REQUIRE(loaded.sentences.size() == index.sentences.size());
  for (std::size_t i = 0; i < index.sentences.size(); ++i) {
    CHECK(loaded.sentences[i].text == index.sentences[i].text);
  }
  // Embeddings must be bit-exact.
  CHECK(loaded.embedding_matrix == index.embedding_matrix);
}

TEST_CASE("dimension mismatch on load is an error") {
  HashEmbedder embedder(32);
  auto index = build_index(small_corpus(), embedder, kCounter);
  TempDir dir;
  arag::save_index(index, dir.path);
  // Truncate the embedding file so it no longer matches the manifest.
  std::ofstream out(dir.path / "embeddings.f32", std::ios::binary | std::ios::trunc);
  float junk = 1.0f;
  out.write(reinterpret_cast<const char*>(&junk), sizeof(junk));
  out.close();
  CHECK_THROWS_AS(arag::load_index(dir.path), arag::IndexError);
}

TEST_CASE("loading a nonexistent path is a not-found error") {
  CHECK_THROWS_AS(arag::load_index("/nonexistent/arag_index"), arag::IndexError);
}

TEST_CASE("embedder failure aborts the build naming the batch") {
  struct FailingEmbedder : arag::EmbeddingProvider {
    std::string id = "failing";
    const std::string& provider_id() const override { return id; }
    int dimension() const override { return 8; }
    int batch_limit() const override { return 2; }
    std::vector<arag::Vector> embed_batch(const std::vector<std::string>&) override {
      throw arag::EmbeddingError("remote unavailable");
    }
  } embedder;
  try {
    build_index(small_corpus(), embedder, kCounter);
    FAIL("expected IndexError");
  } catch (const arag::IndexError& e) {
    CHECK(std::string(e.what()).find("batch") != std::string::npos);
  }
}
