#pragma once

#include "arag/embedding.hpp"
#include "arag/index.hpp"
#include "arag/tokenizer.hpp"

#include <set>
#include <string>
#include <vector>

namespace arag {

struct SearchHit {
  std::string chunk_id;
  double score = 0.0;
  // Subsequence of the chunk's sentences in document order; for full-text
  // results this is the single chunk text.
  std::vector<std::string> snippet_sentences;
  bool full_text = false;
};

struct SearchResult {
  std::vector<SearchHit> hits;  // descending score, ties by ascending integer chunk_id
  std::string tool_name;
  int corpus_tokens = 0;        // token count of all snippet / full text returned
  std::string notice;           // e.g. top_k clamp disclosure
};

// Per-run set of already-read chunk IDs. Owned by exactly one agent run.
struct ContextTracker {
  std::set<std::string> read_ids;
};

struct ReadEntry {
  std::string chunk_id;
  enum class Status { kFull, kAlreadyRead, kUnknown } status = Status::kUnknown;
  std::string text;  // full chunk text, notification, or diagnostic
  int corpus_tokens = 0;
};

struct ReadResult {
  std::vector<ReadEntry> entries;  // order matches the request
  int corpus_tokens = 0;
};

inline constexpr int kDefaultTopK = 5;
inline constexpr int kMaxTopK = 20;
inline constexpr char kAlreadyReadNotice[] = "This chunk has been read before";

// Non-overlapping case-insensitive substring occurrences of needle in haystack.
int count_occurrences(std::string_view haystack, std::string_view needle);

// Lexical search: chunk score = sum over keywords of occurrence count times
// keyword character length; zero-score chunks are excluded. Snippet = the
// chunk's sentences containing at least one keyword. When full_text is set
// (w/o chunk-read ablation) hits carry the complete chunk text instead.
SearchResult keyword_search(const CorpusIndex& index,
                            const std::vector<std::string>& keywords, int top_k,
                            const TokenCounter& counter, bool full_text = false);

// Dense search: every sentence scored by cosine similarity against the query
// embedding via exhaustive scan; a chunk's score is its best sentence. The
// snippet holds the chunk's sentences retained from the global top-(4*top_k)
// sentence pool, in document order.
SearchResult semantic_search(const CorpusIndex& index, const std::string& query,
                             int top_k, EmbeddingProvider& embedder,
                             const TokenCounter& counter, bool full_text = false);

// Same ranking as semantic_search but each hit carries the chunk's full text.
SearchResult naive_embedding_search(const CorpusIndex& index, const std::string& query,
                                    int top_k, EmbeddingProvider& embedder,
                                    const TokenCounter& counter);

// Full-content access with repeat-read suppression: a chunk already in the
// tracker returns the notification text and contributes zero corpus tokens.
ReadResult chunk_read(const CorpusIndex& index, ContextTracker& tracker,
                      const std::vector<std::string>& chunk_ids,
                      const TokenCounter& counter);

// Plain-text renderings of tool results, what the agent sees as the tool message.
std::string render_search_result(const SearchResult& result);
std::string render_read_result(const ReadResult& result);

}  // namespace arag
