#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "arag/agent.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>

using arag::AgentConfig;
using arag::ContextTracker;
using arag::Document;
using arag::HashEmbedder;
using arag::Message;
using arag::Role;
using arag::ScriptedClient;
using arag::ScriptedScenario;
using arag::ScriptedStep;
using arag::ToolCall;
using arag::Toolset;
using arag::ToolSchema;

namespace {

const arag::TokenCounter kCounter = arag::whitespace_token_counter();

arag::CorpusIndex demo_index() {
  HashEmbedder embedder(32);
  return arag::build_index(
      {{"a", "France is in Europe. France borders Spain. Paris is its capital."},
       {"b", "Japan is an island nation. Tokyo is its capital."}},
      embedder, kCounter);
}

ScriptedStep tool_step(const std::string& name, const std::string& args) {
  ScriptedStep step;
  step.tool_call = ToolCall{"", name, args};
  return step;
}

ScriptedStep text_step(const std::string& text) {
  ScriptedStep step;
  step.text = text;
  return step;
}

// Counts chat calls and records the schema list of the last call.
class CountingClient : public arag::ChatClient {
 public:
  explicit CountingClient(arag::ChatClient& inner) : inner_(inner) {}
  const std::string& client_id() const override { return inner_.client_id(); }
  bool supports_tools() const override { return true; }
  Message chat(const std::vector<Message>& messages,
               const std::vector<ToolSchema>& schemas,
               const arag::ChatParams& params) override {
    ++calls;
    last_schema_count = schemas.size();
    return inner_.chat(messages, schemas, params);
  }
  int calls = 0;
  std::size_t last_schema_count = 0;

 private:
  arag::ChatClient& inner_;
};

}  // namespace

TEST_CASE("search, read, answer: three steps, no forced synthesis") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ScriptedClient model({{
      tool_step("keyword_search", R"({"keywords": ["France"], "top_k": 5})"),
      tool_step("chunk_read", R"({"chunk_ids": ["0"]})"),
      text_step("France borders Spain."),
  }});
  AgentConfig config;
  auto outcome = arag::run_agent("What does France border?", index, config, model,
                                 embedder, kCounter);
  CHECK(outcome.steps_used == 3);
  CHECK_FALSE(outcome.forced_synthesis);
  CHECK(outcome.answer == "France borders Spain.");
  CHECK(outcome.corpus_tokens_retrieved > 0);
}

TEST_CASE("budget exhaustion forces synthesis with exactly L+1 model calls") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  const int L = 5;
  ScriptedScenario scenario;
  for (int i = 0; i < L; ++i) {
    scenario.steps.push_back(
        tool_step("semantic_search", R"({"query": "capitals", "top_k": 3})"));
  }
  scenario.steps.push_back(text_step("Paris and Tokyo."));
  ScriptedClient inner(scenario);
  CountingClient model(inner);

  AgentConfig config;
  config.max_steps = L;
  auto outcome = arag::run_agent("Which capitals appear?", index, config, model,
                                 embedder, kCounter);
  CHECK(outcome.forced_synthesis);
  CHECK(model.calls == L + 1);
  CHECK(model.last_schema_count == 0);  // synthesis call advertises zero tools
  CHECK(outcome.answer == "Paris and Tokyo.");
  // The penultimate transcript message is the forced-synthesis prompt.
  const auto& messages = outcome.transcript;
  REQUIRE(messages.size() >= 2);
  CHECK(messages[messages.size() - 2].role == Role::kUser);
  CHECK(messages[messages.size() - 2].content == "Answer the question");
}

TEST_CASE("immediate answer: one step, three-message transcript") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ScriptedClient model({{text_step("I already know: Paris.")}});
  AgentConfig config;
  auto outcome =
      arag::run_agent("Capital of France?", index, config, model, embedder, kCounter);
  CHECK(outcome.steps_used == 1);
  REQUIRE(outcome.transcript.size() == 3);
  CHECK(outcome.transcript[0].role == Role::kSystem);
  CHECK(outcome.transcript[1].role == Role::kUser);
  CHECK(outcome.transcript[2].role == Role::kAssistant);
  CHECK(outcome.corpus_tokens_retrieved == 0);
}

TEST_CASE("dispatch updates the tracker for chunk_read only") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ContextTracker tracker;
  AgentConfig config;
  auto message = arag::dispatch_tool({"id1", "chunk_read", R"({"chunk_ids": ["1"]})"},
                                     index, tracker, config, embedder, kCounter);
  CHECK(tracker.read_ids.contains("1"));
  CHECK(message.corpus_tokens > 0);

  auto search = arag::dispatch_tool(
      {"id2", "keyword_search", R"({"keywords": ["France"]})"}, index, tracker,
      config, embedder, kCounter);
  CHECK(tracker.read_ids.size() == 1);
  CHECK(search.corpus_tokens > 0);
}

TEST_CASE("unadvertised tools are rejected per toolset") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ContextTracker tracker;
  AgentConfig config;
  config.toolset = Toolset::kNoKeyword;
  auto message = arag::dispatch_tool(
      {"id", "keyword_search", R"({"keywords": ["France"]})"}, index, tracker,
      config, embedder, kCounter);
  CHECK(message.content.find("unknown tool") != std::string::npos);
  CHECK(message.corpus_tokens == 0);
}

TEST_CASE("malformed tool arguments produce a parse-error tool message") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ContextTracker tracker;
  AgentConfig config;
  auto message = arag::dispatch_tool({"id", "keyword_search", "{not json"}, index,
                                     tracker, config, embedder, kCounter);
  CHECK(message.content.find("parse error") != std::string::npos);

  // Missing required field is also surfaced, not thrown.
  auto missing = arag::dispatch_tool({"id", "keyword_search", "{}"}, index, tracker,
                                     config, embedder, kCounter);
  CHECK(missing.content.find("tool error") != std::string::npos);
}

TEST_CASE("two tool calls in one reply: first executes, rest get a notice") {
  auto index = demo_index();
  HashEmbedder embedder(32);

  class TwoCallClient : public arag::ChatClient {
   public:
    const std::string& client_id() const override { return id_; }
    bool supports_tools() const override { return true; }
    Message chat(const std::vector<Message>&, const std::vector<ToolSchema>&,
                 const arag::ChatParams&) override {
      if (call_ == 0) {
        ++call_;
        Message m;
        m.role = Role::kAssistant;
        m.tool_calls.push_back({"c1", "chunk_read", R"({"chunk_ids": ["0"]})"});
        m.tool_calls.push_back({"c2", "chunk_read", R"({"chunk_ids": ["1"]})"});
        return m;
      }
      Message m;
      m.role = Role::kAssistant;
      m.content = "done";
      return m;
    }

   private:
    int call_ = 0;
    std::string id_ = "two-call";
  } model;

  AgentConfig config;
  auto outcome = arag::run_agent("q", index, config, model, embedder, kCounter);
  int executed_reads = 0;
  int notices = 0;
  for (const auto& m : outcome.transcript) {
    if (m.role != Role::kTool) continue;
    if (m.content.find("chunk 0:") != std::string::npos) ++executed_reads;
    if (m.content.find("one tool per turn") != std::string::npos) ++notices;
  }
  CHECK(executed_reads == 1);
  CHECK(notices == 1);
}

TEST_CASE("toolset gating: advertised schema names match the configuration") {
  auto names = [](Toolset toolset) {
    std::vector<std::string> out;
    for (const auto& schema : arag::render_tool_schemas(toolset)) {
      out.push_back(schema.name);
    }
    return out;
  };
  CHECK(names(Toolset::kFull) ==
        std::vector<std::string>{"keyword_search", "semantic_search", "chunk_read"});
  CHECK(names(Toolset::kNaive) ==
        std::vector<std::string>{"naive_embedding_search", "chunk_read"});
  CHECK(names(Toolset::kNoKeyword) ==
        std::vector<std::string>{"semantic_search", "chunk_read"});
  CHECK(names(Toolset::kNoSemantic) ==
        std::vector<std::string>{"keyword_search", "chunk_read"});
  CHECK(names(Toolset::kNoChunkRead) ==
        std::vector<std::string>{"keyword_search", "semantic_search"});
}

TEST_CASE("w/o chunk-read ablation returns full chunk texts from searches") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ContextTracker tracker;
  AgentConfig config;
  config.toolset = Toolset::kNoChunkRead;
  auto message = arag::dispatch_tool(
      {"id", "keyword_search", R"({"keywords": ["France"]})"}, index, tracker,
      config, embedder, kCounter);
  CHECK(message.content.find(index.chunks[0].text) != std::string::npos);
}

TEST_CASE("scripted scenario exhaustion is a hard failure") {
  ScriptedClient model({{text_step("only step")}});
  std::vector<Message> history = {{Role::kSystem, "s", {}, "", 0}};
  model.chat(history, {}, {});
  CHECK_THROWS_AS(model.chat(history, {}, {}), arag::ChatError);
}

TEST_CASE("scripted per-step assertion on incoming history") {
  ScriptedStep step = text_step("ok");
  step.expect_last_contains = "needle";
  ScriptedClient model({{step}});
  std::vector<Message> miss = {{Role::kUser, "haystack", {}, "", 0}};
  CHECK_THROWS_AS(model.chat(miss, {}, {}), arag::ChatError);
}

TEST_CASE("tool schema texts carry the documented guidance") {
  auto schemas = arag::render_tool_schemas(Toolset::kFull);
  CHECK(schemas[0].description.find("1-3 words maximum") != std::string::npos);
  CHECK(schemas[0].description.find("Examples of GOOD keywords") != std::string::npos);
  CHECK(schemas[2].description.find("adjacent chunks (+/- 1)") != std::string::npos);
  auto naive = arag::render_tool_schemas(Toolset::kNaive);
  CHECK(naive[0].description == "Return top-k chunks by embedding similarity (no keyword/BM25).");
  CHECK(naive[0].parameters["properties"]["top_k"]["default"] == 5);
}

TEST_CASE("schema and prompt fidelity checksums") {
  // FNV-1a over every advertised description plus the system prompts;
  // guards against accidental edits to the embedded texts.
  auto fnv = [](std::string_view s, std::uint64_t h) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  };
  std::uint64_t h = 14695981039346656037ull;
  for (Toolset toolset : {Toolset::kFull, Toolset::kNaive}) {
    for (const auto& schema : arag::render_tool_schemas(toolset)) {
      h = fnv(schema.name, h);
      h = fnv(schema.description, h);
    }
    h = fnv(arag::system_prompt(toolset), h);
  }
  CHECK(h == UINT64_C(14664474241366312640));
}

TEST_CASE("transcript dump is one JSON message per line") {
  auto index = demo_index();
  HashEmbedder embedder(32);
  ScriptedClient model({{
      tool_step("keyword_search", R"({"keywords": ["France"]})"),
      text_step("answer"),
  }});
  AgentConfig config;
  auto outcome = arag::run_agent("q", index, config, model, embedder, kCounter);
  auto path = std::filesystem::temp_directory_path() / "arag_transcript_test.jsonl";
  arag::dump_transcript(outcome.transcript, path);
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      auto row = nlohmann::json::parse(line);
      CHECK(row.contains("role"));
      CHECK(row.contains("corpus_tokens"));
      ++lines;
    }
  }
  CHECK(lines == outcome.transcript.size());
  std::filesystem::remove(path);
}
