#include "arag/index.hpp"

#include "arag/sentences.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace arag {
namespace {

using nlohmann::json;

std::uint64_t fnv1a_mix(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct ChunkedDoc {
  std::vector<Chunk> chunks;
  // sentences[i] holds the sentence texts of chunks[i], in document order.
  std::vector<std::vector<std::string>> sentences;
};

ChunkedDoc chunk_document(const Document& doc, int max_chunk_tokens,
                          const TokenCounter& counter, std::int64_t first_chunk_id) {
  if (max_chunk_tokens < 1) throw IndexError("max_chunk_tokens must be >= 1");

  ChunkedDoc out;
  auto spans = segment_sentences(doc.text);
  std::int64_t next_id = first_chunk_id;
  std::size_t i = 0;
  std::int64_t sentence_base = 0;
  while (i < spans.size()) {
    std::size_t begin = i;
    std::string text;
    std::vector<std::string> sentence_texts;
    int tokens = 0;
    while (i < spans.size()) {
      std::string_view sentence =
          std::string_view(doc.text).substr(spans[i].begin, spans[i].end - spans[i].begin);
      int sentence_tokens = counter.count(sentence);
      if (i > begin && tokens + sentence_tokens > max_chunk_tokens) break;
      text.append(sentence);
      sentence_texts.emplace_back(sentence);
      tokens += sentence_tokens;
      ++i;
    }
    Chunk chunk;
    chunk.chunk_id = std::to_string(next_id++);
    chunk.doc_id = doc.doc_id;
    chunk.text = std::move(text);
    chunk.token_count = tokens;
    chunk.sentence_range = {sentence_base, sentence_base + static_cast<std::int64_t>(i - begin)};
    sentence_base += static_cast<std::int64_t>(i - begin);
    out.chunks.push_back(std::move(chunk));
    out.sentences.push_back(std::move(sentence_texts));
  }
  return out;
}

}  // namespace

const Chunk* CorpusIndex::find_chunk(const std::string& chunk_id) const {
  auto it = chunk_by_id_.find(chunk_id);
  return it == chunk_by_id_.end() ? nullptr : &chunks[it->second];
}

void CorpusIndex::rebuild_lookup() {
  chunk_by_id_.clear();
  chunk_by_id_.reserve(chunks.size());
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    chunk_by_id_.emplace(chunks[i].chunk_id, i);
  }
}

std::vector<Chunk> build_chunks(const Document& doc, int max_chunk_tokens,
                                const TokenCounter& counter, std::int64_t first_chunk_id) {
  return chunk_document(doc, max_chunk_tokens, counter, first_chunk_id).chunks;
}

std::string corpus_fingerprint(const std::vector<Document>& corpus) {
  std::uint64_t h = 14695981039346656037ull;
  for (const auto& doc : corpus) {
    h = fnv1a_mix(h, doc.doc_id);
    h = fnv1a_mix(h, std::string_view("\0", 1));
    h = fnv1a_mix(h, doc.text);
    h = fnv1a_mix(h, "\n");
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

CorpusIndex build_index(const std::vector<Document>& corpus,
                        EmbeddingProvider& embedder, const TokenCounter& counter,
                        const BuildOptions& options) {
  if (corpus.empty()) throw IndexError("corpus is empty");

  CorpusIndex index;
  std::int64_t next_chunk_id = 0;
  std::int64_t next_sentence_id = 0;
  for (const auto& doc : corpus) {
    ChunkedDoc chunked = chunk_document(doc, options.max_chunk_tokens, counter, next_chunk_id);
    for (std::size_t c = 0; c < chunked.chunks.size(); ++c) {
      Chunk chunk = std::move(chunked.chunks[c]);
      auto count = chunk.sentence_range.second - chunk.sentence_range.first;
      chunk.sentence_range = {next_sentence_id, next_sentence_id + count};
      for (auto& sentence : chunked.sentences[c]) {
        index.sentences.push_back({next_sentence_id++, chunk.chunk_id, std::move(sentence)});
      }
      index.chunks.push_back(std::move(chunk));
    }
    next_chunk_id += static_cast<std::int64_t>(chunked.chunks.size());
  }

  const auto num_sentences = static_cast<Eigen::Index>(index.sentences.size());
  const int dim = embedder.dimension();
  index.embedding_matrix.resize(num_sentences, dim);

  const int batch_size = std::min(options.embed_batch_size, embedder.batch_limit());
  std::vector<std::pair<std::int64_t, std::int64_t>> batches;
  for (std::int64_t begin = 0; begin < num_sentences; begin += batch_size) {
    batches.emplace_back(begin, std::min<std::int64_t>(begin + batch_size, num_sentences));
  }

  std::mutex error_mutex;
  std::string first_error;
  std::size_t next_batch = 0;
  std::mutex batch_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t b;
      {
        std::lock_guard<std::mutex> lock(batch_mutex);
        if (next_batch >= batches.size()) return;
        b = next_batch++;
      }
      auto [begin, end] = batches[b];
      std::vector<std::string> texts;
      texts.reserve(static_cast<std::size_t>(end - begin));
      for (std::int64_t s = begin; s < end; ++s) {
        texts.push_back(index.sentences[static_cast<std::size_t>(s)].text);
      }
      try {
        auto vectors = embedder.embed_batch(texts);
        for (std::size_t i = 0; i < vectors.size(); ++i) {
          if (static_cast<int>(vectors[i].size()) != dim) {
            throw EmbeddingError("dimension mismatch in batch result");
          }
          index.embedding_matrix.row(static_cast<Eigen::Index>(begin) +
                                     static_cast<Eigen::Index>(i)) =
              vectors[i].transpose();
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) {
          first_error = "embedding batch " + std::to_string(b) + " (sentences " +
                        std::to_string(begin) + ".." + std::to_string(end - 1) +
                        ") failed: " + e.what();
        }
        return;
      }
    }
  };

  int threads = std::max(1, std::min<int>(options.embed_threads,
                                          static_cast<int>(batches.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) throw IndexError(first_error);

  index.manifest.embedder_id = embedder.provider_id();
  index.manifest.dimension = dim;
  index.manifest.token_counter_id = counter.id;
  index.manifest.corpus_fingerprint = corpus_fingerprint(corpus);
  index.manifest.num_chunks = static_cast<std::int64_t>(index.chunks.size());
  index.manifest.num_sentences = static_cast<std::int64_t>(index.sentences.size());
  index.rebuild_lookup();
  return index;
}

void save_index(const CorpusIndex& index, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);

  {
    json manifest = {{"embedder_id", index.manifest.embedder_id},
                     {"dimension", index.manifest.dimension},
                     {"token_counter_id", index.manifest.token_counter_id},
                     {"corpus_fingerprint", index.manifest.corpus_fingerprint},
                     {"num_chunks", index.manifest.num_chunks},
                     {"num_sentences", index.manifest.num_sentences}};
    std::ofstream out(dir / "manifest.json");
    out << manifest.dump(2) << "\n";
  }
  {
    std::ofstream out(dir / "chunks.jsonl");
    for (const auto& chunk : index.chunks) {
      json row = {{"chunk_id", chunk.chunk_id},
                  {"doc_id", chunk.doc_id},
                  {"text", chunk.text},
                  {"token_count", chunk.token_count},
                  {"sentence_range", {chunk.sentence_range.first, chunk.sentence_range.second}}};
      out << row.dump() << "\n";
    }
  }
  {
    std::ofstream out(dir / "sentences.jsonl");
    for (const auto& sentence : index.sentences) {
      json row = {{"sentence_id", sentence.sentence_id},
                  {"chunk_id", sentence.chunk_id},
                  {"text", sentence.text}};
      out << row.dump() << "\n";
    }
  }
  {
    std::ofstream out(dir / "embeddings.f32", std::ios::binary);
    static_assert(std::endian::native == std::endian::little,
                  "embeddings.f32 is little-endian");
    out.write(reinterpret_cast<const char*>(index.embedding_matrix.data()),
              static_cast<std::streamsize>(sizeof(float) *
                                           static_cast<std::size_t>(index.embedding_matrix.size())));
  }
}

CorpusIndex load_index(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "manifest.json")) {
    throw IndexError("index not found at " + dir.string());
  }

  CorpusIndex index;
  {
    std::ifstream in(dir / "manifest.json");
    json manifest = json::parse(in);
    index.manifest.embedder_id = manifest.at("embedder_id").get<std::string>();
    index.manifest.dimension = manifest.at("dimension").get<int>();
    index.manifest.token_counter_id = manifest.at("token_counter_id").get<std::string>();
    index.manifest.corpus_fingerprint = manifest.at("corpus_fingerprint").get<std::string>();
    index.manifest.num_chunks = manifest.at("num_chunks").get<std::int64_t>();
    index.manifest.num_sentences = manifest.at("num_sentences").get<std::int64_t>();
  }
  {
    std::ifstream in(dir / "chunks.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json row = json::parse(line);
      Chunk chunk;
      chunk.chunk_id = row.at("chunk_id").get<std::string>();
      chunk.doc_id = row.at("doc_id").get<std::string>();
      chunk.text = row.at("text").get<std::string>();
      chunk.token_count = row.at("token_count").get<int>();
      chunk.sentence_range = {row.at("sentence_range")[0].get<std::int64_t>(),
                              row.at("sentence_range")[1].get<std::int64_t>()};
      index.chunks.push_back(std::move(chunk));
    }
  }
  {
    std::ifstream in(dir / "sentences.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json row = json::parse(line);
      index.sentences.push_back({row.at("sentence_id").get<std::int64_t>(),
                                 row.at("chunk_id").get<std::string>(),
                                 row.at("text").get<std::string>()});
    }
  }

  if (static_cast<std::int64_t>(index.chunks.size()) != index.manifest.num_chunks) {
    throw IndexError("manifest num_chunks does not match chunks.jsonl");
  }
  if (static_cast<std::int64_t>(index.sentences.size()) != index.manifest.num_sentences) {
    throw IndexError("manifest num_sentences does not match sentences.jsonl");
  }

  {
    auto path = dir / "embeddings.f32";
    auto bytes = std::filesystem::file_size(path);
    const auto rows = static_cast<std::size_t>(index.manifest.num_sentences);
    const auto dim = static_cast<std::size_t>(index.manifest.dimension);
    if (bytes != rows * dim * sizeof(float)) {
      throw IndexError("embeddings.f32 size " + std::to_string(bytes) +
                       " does not match manifest (" + std::to_string(rows) + " x " +
                       std::to_string(dim) + " float32)");
    }
    index.embedding_matrix.resize(static_cast<Eigen::Index>(rows),
                                  static_cast<Eigen::Index>(dim));
    std::ifstream in(path, std::ios::binary);
    in.read(reinterpret_cast<char*>(index.embedding_matrix.data()),
            static_cast<std::streamsize>(bytes));
    if (!in) throw IndexError("failed to read embeddings.f32");
  }

  index.rebuild_lookup();
  return index;
}

}  // namespace arag
