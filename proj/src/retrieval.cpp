#include "arag/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace arag {
namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::int64_t chunk_id_as_int(const std::string& chunk_id) {
  try {
    return std::stoll(chunk_id);
  } catch (...) {
    return std::numeric_limits<std::int64_t>::max();
  }
}

int clamp_top_k(int top_k, std::string& notice) {
  if (top_k < 1) {
    notice = "top_k clamped to 1";
    return 1;
  }
  if (top_k > kMaxTopK) {
    notice = "top_k clamped to " + std::to_string(kMaxTopK);
    return kMaxTopK;
  }
  return top_k;
}

void sort_hits(std::vector<SearchHit>& hits) {
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return chunk_id_as_int(a.chunk_id) < chunk_id_as_int(b.chunk_id);
  });
}

std::vector<std::string> chunk_sentences(const CorpusIndex& index, const Chunk& chunk) {
  std::vector<std::string> out;
  for (auto s = chunk.sentence_range.first; s < chunk.sentence_range.second; ++s) {
    out.push_back(index.sentences[static_cast<std::size_t>(s)].text);
  }
  return out;
}

int snippet_tokens(const std::vector<std::string>& sentences, const TokenCounter& counter) {
  int tokens = 0;
  for (const auto& s : sentences) tokens += counter.count(s);
  return tokens;
}

void fill_full_text(SearchHit& hit, const Chunk& chunk) {
  hit.snippet_sentences = {chunk.text};
  hit.full_text = true;
}

std::string format_score(double score) {
  double rounded = std::round(score);
  if (rounded == score && std::abs(score) < 1e15) {
    return std::to_string(static_cast<long long>(rounded));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  return buf;
}

}  // namespace

int count_occurrences(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  std::string h = to_lower(haystack);
  std::string n = to_lower(needle);
  int count = 0;
  std::size_t pos = 0;
  while ((pos = h.find(n, pos)) != std::string::npos) {
    ++count;
    pos += n.size();
  }
  return count;
}

SearchResult keyword_search(const CorpusIndex& index,
                            const std::vector<std::string>& keywords, int top_k,
                            const TokenCounter& counter, bool full_text) {
  if (keywords.empty()) throw std::invalid_argument("keyword list is empty");
  std::vector<std::string> cleaned;
  for (const auto& k : keywords) {
    std::string t = trim(k);
    if (t.empty()) throw std::invalid_argument("keyword is empty after trimming");
    cleaned.push_back(std::move(t));
  }

  SearchResult result;
  result.tool_name = "keyword_search";
  top_k = clamp_top_k(top_k, result.notice);

  for (const auto& chunk : index.chunks) {
    long long score = 0;
    for (const auto& keyword : cleaned) {
      score += static_cast<long long>(count_occurrences(chunk.text, keyword)) *
               static_cast<long long>(keyword.size());
    }
    if (score == 0) continue;

    SearchHit hit;
    hit.chunk_id = chunk.chunk_id;
    hit.score = static_cast<double>(score);
    if (full_text) {
      fill_full_text(hit, chunk);
    } else {
      for (const auto& sentence : chunk_sentences(index, chunk)) {
        bool matched = std::any_of(cleaned.begin(), cleaned.end(),
                                   [&](const std::string& keyword) {
                                     return count_occurrences(sentence, keyword) > 0;
                                   });
        if (matched) hit.snippet_sentences.push_back(sentence);
      }
    }
    result.hits.push_back(std::move(hit));
  }

  sort_hits(result.hits);
  if (static_cast<int>(result.hits.size()) > top_k) result.hits.resize(top_k);
  for (const auto& hit : result.hits) {
    const Chunk* chunk = index.find_chunk(hit.chunk_id);
    result.corpus_tokens +=
        hit.full_text ? chunk->token_count : snippet_tokens(hit.snippet_sentences, counter);
  }
  return result;
}

namespace {

SearchResult dense_search(const CorpusIndex& index, const std::string& query,
                          int top_k, EmbeddingProvider& embedder,
                          const TokenCounter& counter, bool full_text,
                          bool full_chunks, const char* tool_name) {
  if (trim(query).empty()) throw std::invalid_argument("query is empty");

  SearchResult result;
  result.tool_name = tool_name;
  top_k = clamp_top_k(top_k, result.notice);

  Vector q = embedder.embed(query);
  if (q.size() != index.embedding_matrix.cols()) {
    throw EmbeddingError("query embedding dimension does not match index");
  }

  // Exhaustive scan: one matrix-vector product over all sentence embeddings.
  Eigen::VectorXf scores = index.embedding_matrix * q;

  // Chunk score is the max over its sentences.
  std::unordered_map<std::string, double> chunk_scores;
  for (const auto& chunk : index.chunks) {
    if (chunk.sentence_range.first == chunk.sentence_range.second) continue;
    float best = -2.0f;
    for (auto s = chunk.sentence_range.first; s < chunk.sentence_range.second; ++s) {
      best = std::max(best, scores[static_cast<Eigen::Index>(s)]);
    }
    chunk_scores.emplace(chunk.chunk_id, static_cast<double>(best));
  }

  std::vector<SearchHit> hits;
  hits.reserve(chunk_scores.size());
  for (auto& [chunk_id, score] : chunk_scores) {
    hits.push_back({chunk_id, score, {}, false});
  }
  sort_hits(hits);
  if (static_cast<int>(hits.size()) > top_k) hits.resize(top_k);

  if (full_chunks || full_text) {
    for (auto& hit : hits) {
      const Chunk* chunk = index.find_chunk(hit.chunk_id);
      fill_full_text(hit, *chunk);
      result.corpus_tokens += chunk->token_count;
    }
  } else {
    // Snippet pool: the global top 4*top_k sentences; each retained chunk keeps
    // its pool sentences in document order.
    const auto pool_size =
        std::min<std::size_t>(static_cast<std::size_t>(4 * top_k),
                              static_cast<std::size_t>(scores.size()));
    std::vector<std::int64_t> order(static_cast<std::size_t>(scores.size()));
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool_size),
                      order.end(), [&](std::int64_t a, std::int64_t b) {
                        float sa = scores[static_cast<Eigen::Index>(a)];
                        float sb = scores[static_cast<Eigen::Index>(b)];
                        if (sa != sb) return sa > sb;
                        return a < b;
                      });
    std::unordered_map<std::string, std::vector<std::int64_t>> pool_by_chunk;
    for (std::size_t i = 0; i < pool_size; ++i) {
      pool_by_chunk[index.sentences[static_cast<std::size_t>(order[i])].chunk_id]
          .push_back(order[i]);
    }
    for (auto& hit : hits) {
      auto it = pool_by_chunk.find(hit.chunk_id);
      std::vector<std::int64_t> keep;
      if (it != pool_by_chunk.end()) {
        keep = it->second;
      } else {
        // Chunk ranked in despite no pool sentence; keep its best sentence.
        const Chunk* chunk = index.find_chunk(hit.chunk_id);
        std::int64_t best = chunk->sentence_range.first;
        for (auto s = chunk->sentence_range.first; s < chunk->sentence_range.second; ++s) {
          if (scores[static_cast<Eigen::Index>(s)] > scores[static_cast<Eigen::Index>(best)]) {
            best = s;
          }
        }
        keep.push_back(best);
      }
      std::sort(keep.begin(), keep.end());
      for (auto s : keep) {
        hit.snippet_sentences.push_back(index.sentences[static_cast<std::size_t>(s)].text);
      }
      result.corpus_tokens += snippet_tokens(hit.snippet_sentences, counter);
    }
  }

  result.hits = std::move(hits);
  return result;
}

}  // namespace

SearchResult semantic_search(const CorpusIndex& index, const std::string& query,
                             int top_k, EmbeddingProvider& embedder,
                             const TokenCounter& counter, bool full_text) {
  return dense_search(index, query, top_k, embedder, counter, full_text,
                      /*full_chunks=*/false, "semantic_search");
}

SearchResult naive_embedding_search(const CorpusIndex& index, const std::string& query,
                                    int top_k, EmbeddingProvider& embedder,
                                    const TokenCounter& counter) {
  return dense_search(index, query, top_k, embedder, counter, /*full_text=*/false,
                      /*full_chunks=*/true, "naive_embedding_search");
}

ReadResult chunk_read(const CorpusIndex& index, ContextTracker& tracker,
                      const std::vector<std::string>& chunk_ids,
                      const TokenCounter& counter) {
  (void)counter;
  if (chunk_ids.empty()) throw std::invalid_argument("chunk_ids is empty");

  ReadResult result;
  for (const auto& raw_id : chunk_ids) {
    std::string id = trim(raw_id);
    ReadEntry entry;
    entry.chunk_id = id;
    const Chunk* chunk = index.find_chunk(id);
    if (chunk == nullptr) {
      entry.status = ReadEntry::Status::kUnknown;
      entry.text = "unknown chunk id '" + id + "' (valid ids are 0.." +
                   std::to_string(index.chunks.size() - 1) + ")";
    } else if (tracker.read_ids.contains(id)) {
      entry.status = ReadEntry::Status::kAlreadyRead;
      entry.text = kAlreadyReadNotice;
    } else {
      entry.status = ReadEntry::Status::kFull;
      entry.text = chunk->text;
      entry.corpus_tokens = chunk->token_count;
      tracker.read_ids.insert(id);
    }
    result.corpus_tokens += entry.corpus_tokens;
    result.entries.push_back(std::move(entry));
  }
  return result;
}

std::string render_search_result(const SearchResult& result) {
  std::string out;
  if (!result.notice.empty()) out += "[notice] " + result.notice + "\n";
  if (result.hits.empty()) {
    out += "no results";
    return out;
  }
  for (std::size_t i = 0; i < result.hits.size(); ++i) {
    const auto& hit = result.hits[i];
    if (i > 0) out += "\n";
    out += "chunk_id=" + hit.chunk_id + " score=" + format_score(hit.score) + "\n";
    if (hit.full_text) {
      out += hit.snippet_sentences.empty() ? "" : hit.snippet_sentences.front();
    } else {
      for (std::size_t s = 0; s < hit.snippet_sentences.size(); ++s) {
        if (s > 0) out += " ... ";
        out += trim(hit.snippet_sentences[s]);
      }
    }
    out += "\n";
  }
  return out;
}

std::string render_read_result(const ReadResult& result) {
  std::string out;
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    if (i > 0) out += "\n";
    out += "chunk " + result.entries[i].chunk_id + ": " + result.entries[i].text + "\n";
  }
  return out;
}

}  // namespace arag
