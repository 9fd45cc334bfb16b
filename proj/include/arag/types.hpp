#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace arag {

struct Document {
  std::string doc_id;
  std::string text;
};

// Sentence-aligned span of a document. chunk_id is a decimal integer rendered
// as a string and globally sequential across the corpus, so the agent can
// derive adjacent chunk IDs by +/- 1.
struct Chunk {
  std::string chunk_id;
  std::string doc_id;
  std::string text;
  int token_count = 0;
  // Half-open range into the index-wide sentence table.
  std::pair<std::int64_t, std::int64_t> sentence_range{0, 0};
};

struct SentenceRecord {
  std::int64_t sentence_id = 0;
  std::string chunk_id;
  std::string text;
};

}  // namespace arag
