#pragma once

#include <nlohmann/json.hpp>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arag {

enum class Role { kSystem, kUser, kAssistant, kTool };

std::string role_name(Role role);

struct ToolCall {
  std::string id;
  std::string name;
  std::string arguments_json;  // raw JSON text; parsed at dispatch
};

struct Message {
  Role role = Role::kUser;
  std::string content;
  std::vector<ToolCall> tool_calls;       // assistant messages only
  std::string tool_call_id;               // tool messages only
  int corpus_tokens = 0;                  // corpus-derived tokens in this message
};

// Which retrieval interfaces the agent is offered.
enum class Toolset { kFull, kNaive, kNoKeyword, kNoSemantic, kNoChunkRead };

std::string toolset_name(Toolset toolset);
std::optional<Toolset> parse_toolset(const std::string& name);

struct ToolSchema {
  std::string name;
  std::string description;
  nlohmann::json parameters;  // JSON-schema object
};

// Tool schemas advertised for a toolset, with the verbatim embedded
// description texts.
std::vector<ToolSchema> render_tool_schemas(Toolset toolset);

// System prompt for a toolset. Ablation toolsets use the full prompt minus
// the removed tool's bullet.
std::string system_prompt(Toolset toolset);

// Single-shot direct-answer prompt with retrieved context substituted in.
std::string naive_rag_prompt(const std::string& retrieved_chunks,
                             const std::string& question);
std::string direct_answer_system_prompt();

struct ChatParams {
  std::string model;
  std::string reasoning_effort;  // passed through when the model supports it
  int max_output_tokens = 0;     // 0 = endpoint default
  double temperature = 0.0;
};

struct ChatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual const std::string& client_id() const = 0;
  virtual bool supports_tools() const = 0;
  // Returns an assistant message: tool call(s) or final text.
  virtual Message chat(const std::vector<Message>& messages,
                       const std::vector<ToolSchema>& tool_schemas,
                       const ChatParams& params) = 0;
};

// One scripted reply: a tool call or final text, with an optional assertion
// on the incoming history.
struct ScriptedStep {
  std::optional<ToolCall> tool_call;
  std::string text;
  std::string expect_last_contains;  // non-empty: last message must contain this
};

struct ScriptedScenario {
  std::vector<ScriptedStep> steps;
};

// Deterministic mock: replays a scenario step per chat call; consuming past
// the script's end throws.
class ScriptedClient final : public ChatClient {
 public:
  explicit ScriptedClient(ScriptedScenario scenario);

  const std::string& client_id() const override { return id_; }
  bool supports_tools() const override { return true; }
  Message chat(const std::vector<Message>& messages,
               const std::vector<ToolSchema>& tool_schemas,
               const ChatParams& params) override;

  std::size_t steps_consumed() const { return next_; }

 private:
  ScriptedScenario scenario_;
  std::size_t next_ = 0;
  std::string id_ = "scripted";
};

ScriptedScenario load_scenario(const nlohmann::json& doc);
ScriptedScenario load_scenario_file(const std::string& path);

struct HttpChatConfig {
  std::string url;  // full chat-completions endpoint URL
  std::string api_key;
  bool supports_reasoning_effort = false;
  int max_retries = 3;
  int timeout_seconds = 120;
};

// OpenAI-compatible chat-completions client with function calling.
std::unique_ptr<ChatClient> make_http_chat_client(HttpChatConfig config);

}  // namespace arag
