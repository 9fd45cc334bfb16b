#pragma once

#include "arag/embedding.hpp"
#include "arag/tokenizer.hpp"
#include "arag/types.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace arag {

using EmbeddingMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct IndexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexManifest {
  std::string embedder_id;
  int dimension = 0;
  std::string token_counter_id;
  std::string corpus_fingerprint;
  std::int64_t num_chunks = 0;
  std::int64_t num_sentences = 0;
};

// Immutable once built; safe to share across concurrent readers.
// embedding_matrix row i corresponds to sentences[i].
struct CorpusIndex {
  std::vector<Chunk> chunks;
  std::vector<SentenceRecord> sentences;
  EmbeddingMatrix embedding_matrix;
  IndexManifest manifest;

  const Chunk* find_chunk(const std::string& chunk_id) const;

  void rebuild_lookup();

 private:
  std::unordered_map<std::string, std::size_t> chunk_by_id_;
};

// Greedy sentence packing: append whole sentences until the next one would
// exceed max_chunk_tokens, then start a new chunk. A single over-budget
// sentence becomes its own chunk. Concatenating the chunks reproduces the
// document text byte for byte. chunk_ids are assigned from first_chunk_id.
std::vector<Chunk> build_chunks(const Document& doc, int max_chunk_tokens,
                                const TokenCounter& counter,
                                std::int64_t first_chunk_id = 0);

struct BuildOptions {
  int max_chunk_tokens = 1000;
  int embed_batch_size = 64;
  int embed_threads = 4;
};

CorpusIndex build_index(const std::vector<Document>& corpus,
                        EmbeddingProvider& embedder, const TokenCounter& counter,
                        const BuildOptions& options = {});

std::string corpus_fingerprint(const std::vector<Document>& corpus);

// Directory layout: manifest.json, chunks.jsonl, sentences.jsonl,
// embeddings.f32 (row-major little-endian float32).
void save_index(const CorpusIndex& index, const std::filesystem::path& dir);
CorpusIndex load_index(const std::filesystem::path& dir);

}  // namespace arag
