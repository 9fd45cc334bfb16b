#pragma once

#include "arag/chat.hpp"
#include "arag/index.hpp"
#include "arag/retrieval.hpp"
#include "arag/tokenizer.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace arag {

struct AgentConfig {
  int max_steps = 20;
  Toolset toolset = Toolset::kFull;
  int default_top_k = kDefaultTopK;
  ChatParams chat;
};

struct AgentOutcome {
  std::string answer;
  std::vector<Message> transcript;
  int steps_used = 0;
  int corpus_tokens_retrieved = 0;
  bool forced_synthesis = false;
  bool failed = false;
  std::string failure;
};

inline constexpr char kForcedSynthesisPrompt[] = "Answer the question";
inline constexpr char kOneToolNotice[] =
    "one tool per turn: this call was ignored";

// Dispatches an advertised tool call against the index, updating the tracker
// for chunk reads, and returns the tool message with its corpus token count.
Message dispatch_tool(const ToolCall& call, const CorpusIndex& index,
                      ContextTracker& tracker, const AgentConfig& config,
                      EmbeddingProvider& embedder, const TokenCounter& counter);

// Iterative reason -> tool-call -> observe loop: one tool call per iteration,
// at most max_steps iterations, then a forced answer-only synthesis call.
AgentOutcome run_agent(const std::string& question, const CorpusIndex& index,
                       const AgentConfig& config, ChatClient& model,
                       EmbeddingProvider& embedder, const TokenCounter& counter);

// JSON lines, one message per line: role, content, tool metadata, corpus tokens.
void dump_transcript(const std::vector<Message>& transcript,
                     const std::filesystem::path& path);

}  // namespace arag
