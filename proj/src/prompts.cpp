#include "arag/chat.hpp"

namespace arag {
namespace {

using nlohmann::json;

constexpr const char* kKeywordSearchDescription =
    R"(Search for document chunks using keyword-based exact text matching (case-insensitive). Returns chunk IDs and abbreviated sentence snippets where the keywords appear.

IMPORTANT: This tool matches keywords literally in the text. Use SHORT, SPECIFIC terms (1-3 words maximum). Each keyword is matched independently.

Examples of GOOD keywords:
  - Entity names: "Albert Einstein", "Tesla", "Python", "Argentina"
  - Technical terms: "photosynthesis", "quantum mechanics"
  - Key concepts: "climate change", "GDP growth"

Examples of BAD keywords (DO NOT use):
  - Long phrases: "the person who invented the telephone" -> use "Alexander Bell" instead
  - Questions: "when did World War 2 start" -> use "World War 2", "1939" instead
  - Descriptions: "the country between France and Spain" -> use "Andorra" instead
  - Full sentences: "how does the stock market work" -> use "stock market", "trading" instead

RETURNS: Abbreviated snippets marked with "..." showing where keywords appear. These snippets help you identify relevant chunks, but you MUST use chunk_read to get the full text for answering questions.)";

constexpr const char* kSemanticSearchDescription =
    R"(Semantic search using embedding similarity. Matches your query against sentences in each chunk via vector similarity.

WHEN TO USE:
- When keyword search fails to find relevant information
- When exact wording in documents is unknown
- For conceptual/meaning-based matching

RETURNS: Abbreviated snippets with matched sentences. Use chunk_read to get full text for answering.)";

constexpr const char* kChunkReadDescription =
    R"(Read the complete content of document chunks by their IDs.

This tool returns the full text of the specified chunks, allowing you to examine the complete context and details that are not visible in search snippets.

IMPORTANT: Search results (keyword_search and semantic_search) only show abbreviated snippets marked with "..." - they are NOT sufficient for answering questions. You MUST use chunk_read to get the full content before formulating your answer.

STRATEGY:
- Always read promising chunks identified by your searches
- Make sure to read the most relevant chunks to gather complete information
- If information seems incomplete or truncated, read adjacent chunks (+/- 1)
- Reading full text is essential for accurate answers

Note: Previously read chunks will be marked as already seen to avoid redundant information.)";

constexpr const char* kNaiveEmbeddingSearchDescription =
    R"(Return top-k chunks by embedding similarity (no keyword/BM25).)";

ToolSchema keyword_search_schema() {
  return {
      "keyword_search",
      kKeywordSearchDescription,
      json{{"type", "object"},
           {"properties",
            {{"keywords",
              {{"type", "array"},
               {"items", {{"type", "string"}}},
               {"description",
                "List of keywords to search. Each keyword should be 1-3 words "
                "maximum (e.g., ['Einstein', 'relativity theory', '1905'])."}}},
             {"top_k",
              {{"type", "integer"},
               {"description",
                "Number of top-ranked chunks to return (default: 5, max: 20)"},
               {"default", 5}}}}},
           {"required", json::array({"keywords"})}},
  };
}

ToolSchema semantic_search_schema() {
  return {
      "semantic_search",
      kSemanticSearchDescription,
      json{{"type", "object"},
           {"properties",
            {{"query",
              {{"type", "string"},
               {"description",
                "Natural language query describing what information you're "
                "looking for"}}},
             {"top_k",
              {{"type", "integer"},
               {"description",
                "Number of most relevant results to return (default: 5, max: 20)"},
               {"default", 5}}}}},
           {"required", json::array({"query"})}},
  };
}

ToolSchema chunk_read_schema() {
  return {
      "chunk_read",
      kChunkReadDescription,
      json{{"type", "object"},
           {"properties",
            {{"chunk_ids",
              {{"type", "array"},
               {"items", {{"type", "string"}}},
               {"description",
                "List of chunk IDs to retrieve (e.g., ['0', '24', '172'])"}}}}},
           {"required", json::array({"chunk_ids"})}},
  };
}

ToolSchema naive_embedding_search_schema() {
  return {
      "naive_embedding_search",
      kNaiveEmbeddingSearchDescription,
      json{{"type", "object"},
           {"properties",
            {{"query",
              {{"type", "string"},
               {"description", "User question to search relevant chunks"}}},
             {"top_k",
              {{"type", "integer"},
               {"description", "Number of chunks to return (default: 5)"},
               {"default", 5}}}}},
           {"required", json::array({"query"})}},
  };
}

constexpr const char* kPromptHeader =
    R"(You are a question-answering assistant with access to a document corpus through available tools.

Your goal is to answer questions accurately by finding and analyzing relevant information from the provided documents.

[Available Tools]
)";

constexpr const char* kKeywordBullet =
    "- keyword_search: Find chunks by exact keyword matching\n";
constexpr const char* kSemanticBullet =
    "- semantic_search: Find chunks by semantic similarity\n";
constexpr const char* kChunkReadBullet =
    "- chunk_read: Read the full content of a specific chunk\n";
constexpr const char* kNaiveBullet =
    "- naive_embedding_search: Return top-k chunks by embedding similarity\n";

constexpr const char* kFullStrategy =
    R"(
[Strategy]
Work iteratively: search -> read -> evaluate -> search -> read -> ... -> answer. For multi-hop questions, decompose the problem and tackle each sub-question step by step.
)";

constexpr const char* kNaiveStrategy =
    R"(
[Strategy]
Work iteratively: retrieve -> read -> answer.
)";

constexpr const char* kWhenAnswering =
    R"(
[When Answering]
- Ground your response in the retrieved documents
- Cite the specific chunks that support your answer
- Provide clear, direct answers supported by evidence
- Avoid speculation beyond what the documents support)";

}  // namespace

std::string toolset_name(Toolset toolset) {
  switch (toolset) {
    case Toolset::kFull: return "full";
    case Toolset::kNaive: return "naive";
    case Toolset::kNoKeyword: return "no_keyword";
    case Toolset::kNoSemantic: return "no_semantic";
    case Toolset::kNoChunkRead: return "no_chunk_read";
  }
  return "full";
}

std::optional<Toolset> parse_toolset(const std::string& name) {
  if (name == "full") return Toolset::kFull;
  if (name == "naive") return Toolset::kNaive;
  if (name == "no_keyword" || name == "wo_keyword") return Toolset::kNoKeyword;
  if (name == "no_semantic" || name == "wo_semantic") return Toolset::kNoSemantic;
  if (name == "no_chunk_read" || name == "wo_chunk_read") return Toolset::kNoChunkRead;
  return std::nullopt;
}

std::vector<ToolSchema> render_tool_schemas(Toolset toolset) {
  switch (toolset) {
    case Toolset::kFull:
      return {keyword_search_schema(), semantic_search_schema(), chunk_read_schema()};
    case Toolset::kNaive:
      return {naive_embedding_search_schema(), chunk_read_schema()};
    case Toolset::kNoKeyword:
      return {semantic_search_schema(), chunk_read_schema()};
    case Toolset::kNoSemantic:
      return {keyword_search_schema(), chunk_read_schema()};
    case Toolset::kNoChunkRead:
      return {keyword_search_schema(), semantic_search_schema()};
  }
  return {};
}

std::string system_prompt(Toolset toolset) {
  std::string prompt = kPromptHeader;
  switch (toolset) {
    case Toolset::kFull:
      prompt += kKeywordBullet;
      prompt += kSemanticBullet;
      prompt += kChunkReadBullet;
      prompt += kFullStrategy;
      break;
    case Toolset::kNaive:
      prompt += kNaiveBullet;
      prompt += kChunkReadBullet;
      prompt += kNaiveStrategy;
      break;
    case Toolset::kNoKeyword:
      prompt += kSemanticBullet;
      prompt += kChunkReadBullet;
      prompt += kFullStrategy;
      break;
    case Toolset::kNoSemantic:
      prompt += kKeywordBullet;
      prompt += kChunkReadBullet;
      prompt += kFullStrategy;
      break;
    case Toolset::kNoChunkRead:
      prompt += kKeywordBullet;
      prompt += kSemanticBullet;
      prompt += kFullStrategy;
      break;
  }
  prompt += kWhenAnswering;
  return prompt;
}

std::string naive_rag_prompt(const std::string& retrieved_chunks,
                             const std::string& question) {
  std::string prompt =
      "You are a helpful assistant. Answer the question based on the provided "
      "context.\n\n[Context]\n";
  prompt += retrieved_chunks;
  prompt += "\n\n[Question]\n";
  prompt += question;
  prompt += "\n\nPlease provide a direct answer based on the context above.";
  return prompt;
}

std::string direct_answer_system_prompt() {
  return "You are a helpful assistant. Answer the question directly.";
}

}  // namespace arag
