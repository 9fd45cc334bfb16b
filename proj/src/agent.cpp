#include "arag/agent.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>

namespace arag {
namespace {

using nlohmann::json;

Message tool_message(const std::string& tool_call_id, std::string content,
                     int corpus_tokens = 0) {
  Message m;
  m.role = Role::kTool;
  m.tool_call_id = tool_call_id;
  m.content = std::move(content);
  m.corpus_tokens = corpus_tokens;
  return m;
}

std::vector<std::string> string_array(const json& value) {
  std::vector<std::string> out;
  for (const auto& item : value) out.push_back(item.get<std::string>());
  return out;
}

}  // namespace

Message dispatch_tool(const ToolCall& call, const CorpusIndex& index,
                      ContextTracker& tracker, const AgentConfig& config,
                      EmbeddingProvider& embedder, const TokenCounter& counter) {
  auto schemas = render_tool_schemas(config.toolset);
  bool advertised = std::any_of(schemas.begin(), schemas.end(),
                                [&](const ToolSchema& s) { return s.name == call.name; });
  if (!advertised) {
    return tool_message(call.id, "unknown tool: " + call.name);
  }

  json args;
  try {
    args = call.arguments_json.empty() ? json::object() : json::parse(call.arguments_json);
    if (!args.is_object()) throw std::invalid_argument("arguments must be a JSON object");
  } catch (const std::exception& e) {
    return tool_message(call.id,
                        std::string("tool argument parse error: ") + e.what());
  }

  const bool full_text = config.toolset == Toolset::kNoChunkRead;
  try {
    if (call.name == "keyword_search") {
      auto result = keyword_search(index, string_array(args.at("keywords")),
                                   args.value("top_k", config.default_top_k), counter,
                                   full_text);
      return tool_message(call.id, render_search_result(result), result.corpus_tokens);
    }
    if (call.name == "semantic_search") {
      auto result = semantic_search(index, args.at("query").get<std::string>(),
                                    args.value("top_k", config.default_top_k),
                                    embedder, counter, full_text);
      return tool_message(call.id, render_search_result(result), result.corpus_tokens);
    }
    if (call.name == "naive_embedding_search") {
      auto result = naive_embedding_search(index, args.at("query").get<std::string>(),
                                           args.value("top_k", config.default_top_k),
                                           embedder, counter);
      return tool_message(call.id, render_search_result(result), result.corpus_tokens);
    }
    if (call.name == "chunk_read") {
      auto result = chunk_read(index, tracker, string_array(args.at("chunk_ids")), counter);
      return tool_message(call.id, render_read_result(result), result.corpus_tokens);
    }
  } catch (const std::exception& e) {
    return tool_message(call.id, std::string("tool error: ") + e.what());
  }
  return tool_message(call.id, "unknown tool: " + call.name);
}

AgentOutcome run_agent(const std::string& question, const CorpusIndex& index,
                       const AgentConfig& config, ChatClient& model,
                       EmbeddingProvider& embedder, const TokenCounter& counter) {
  AgentOutcome outcome;
  ContextTracker tracker;
  auto schemas = render_tool_schemas(config.toolset);

  std::vector<Message>& history = outcome.transcript;
  history.push_back({Role::kSystem, system_prompt(config.toolset), {}, "", 0});
  history.push_back({Role::kUser, question, {}, "", 0});

  for (int step = 1; step <= config.max_steps; ++step) {
    Message reply;
    try {
      reply = model.chat(history, schemas, config.chat);
    } catch (const std::exception& e) {
      outcome.failed = true;
      outcome.failure = e.what();
      outcome.steps_used = step;
      return outcome;
    }
    history.push_back(reply);

    if (reply.tool_calls.empty()) {
      outcome.answer = reply.content;
      outcome.steps_used = step;
      return outcome;
    }

    // One tool per iteration: execute the first call, acknowledge the rest
    // with a notice so tool-call bookkeeping stays consistent.
    Message result = dispatch_tool(reply.tool_calls.front(), index, tracker, config,
                                   embedder, counter);
    outcome.corpus_tokens_retrieved += result.corpus_tokens;
    history.push_back(std::move(result));
    for (std::size_t extra = 1; extra < reply.tool_calls.size(); ++extra) {
      history.push_back(tool_message(reply.tool_calls[extra].id, kOneToolNotice));
    }
  }

  // Budget elapsed: force answer synthesis with tool calling disabled.
  history.push_back({Role::kUser, kForcedSynthesisPrompt, {}, "", 0});
  outcome.forced_synthesis = true;
  outcome.steps_used = config.max_steps;
  try {
    Message reply = model.chat(history, {}, config.chat);
    history.push_back(reply);
    outcome.answer = reply.content;
  } catch (const std::exception& e) {
    outcome.failed = true;
    outcome.failure = e.what();
  }
  return outcome;
}

void dump_transcript(const std::vector<Message>& transcript,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  for (const auto& m : transcript) {
    json row = {{"role", role_name(m.role)},
                {"content", m.content},
                {"corpus_tokens", m.corpus_tokens}};
    if (!m.tool_calls.empty()) {
      json calls = json::array();
      for (const auto& call : m.tool_calls) {
        calls.push_back({{"id", call.id},
                         {"name", call.name},
                         {"arguments", call.arguments_json}});
      }
      row["tool_calls"] = std::move(calls);
    }
    if (!m.tool_call_id.empty()) row["tool_call_id"] = m.tool_call_id;
    out << row.dump() << "\n";
  }
}

}  // namespace arag
