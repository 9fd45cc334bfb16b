#include "arag/chat.hpp"

#include <httplib.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <thread>

namespace arag {

using nlohmann::json;

std::string role_name(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
    case Role::kTool: return "tool";
  }
  return "user";
}

ScriptedClient::ScriptedClient(ScriptedScenario scenario)
    : scenario_(std::move(scenario)) {}

Message ScriptedClient::chat(const std::vector<Message>& messages,
                             const std::vector<ToolSchema>& tool_schemas,
                             const ChatParams& params) {
  (void)tool_schemas;
  (void)params;
  if (next_ >= scenario_.steps.size()) {
    throw ChatError("scripted scenario exhausted after " +
                    std::to_string(scenario_.steps.size()) + " steps");
  }
  const ScriptedStep& step = scenario_.steps[next_++];
  if (!step.expect_last_contains.empty()) {
    if (messages.empty() ||
        messages.back().content.find(step.expect_last_contains) == std::string::npos) {
      throw ChatError("scripted assertion failed at step " + std::to_string(next_ - 1) +
                      ": last message does not contain \"" +
                      step.expect_last_contains + "\"");
    }
  }
  Message reply;
  reply.role = Role::kAssistant;
  if (step.tool_call) {
    ToolCall call = *step.tool_call;
    if (call.id.empty()) call.id = "call_" + std::to_string(next_);
    reply.tool_calls.push_back(std::move(call));
  } else {
    reply.content = step.text;
  }
  return reply;
}

ScriptedScenario load_scenario(const json& doc) {
  ScriptedScenario scenario;
  for (const auto& item : doc.at("steps")) {
    ScriptedStep step;
    if (item.contains("tool")) {
      ToolCall call;
      call.name = item.at("tool").get<std::string>();
      call.arguments_json = item.value("arguments", json::object()).dump();
      step.tool_call = std::move(call);
    } else {
      step.text = item.at("text").get<std::string>();
    }
    step.expect_last_contains = item.value("expect_last_contains", "");
    scenario.steps.push_back(std::move(step));
  }
  return scenario;
}

ScriptedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ChatError("cannot open scenario file: " + path);
  return load_scenario(json::parse(in));
}

namespace {

class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatConfig config)
      : config_(std::move(config)), id_("http-chat") {}

  const std::string& client_id() const override { return id_; }
  bool supports_tools() const override { return true; }

  Message chat(const std::vector<Message>& messages,
               const std::vector<ToolSchema>& tool_schemas,
               const ChatParams& params) override {
    json body;
    body["model"] = params.model;
    body["temperature"] = params.temperature;
    if (params.max_output_tokens > 0) body["max_tokens"] = params.max_output_tokens;
    if (!params.reasoning_effort.empty()) {
      if (config_.supports_reasoning_effort) {
        body["reasoning_effort"] = params.reasoning_effort;
      } else {
        std::cerr << "[arag] model does not support reasoning_effort; omitting\n";
      }
    }

    json msgs = json::array();
    for (const auto& m : messages) {
      json row = {{"role", role_name(m.role)}};
      row["content"] = m.content;
      if (!m.tool_calls.empty()) {
        json calls = json::array();
        for (const auto& call : m.tool_calls) {
          calls.push_back({{"id", call.id},
                           {"type", "function"},
                           {"function",
                            {{"name", call.name}, {"arguments", call.arguments_json}}}});
        }
        row["tool_calls"] = std::move(calls);
      }
      if (!m.tool_call_id.empty()) row["tool_call_id"] = m.tool_call_id;
      msgs.push_back(std::move(row));
    }
    body["messages"] = std::move(msgs);

    if (!tool_schemas.empty()) {
      json tools = json::array();
      for (const auto& schema : tool_schemas) {
        tools.push_back({{"type", "function"},
                         {"function",
                          {{"name", schema.name},
                           {"description", schema.description},
                           {"parameters", schema.parameters}}}});
      }
      body["tools"] = std::move(tools);
      body["tool_choice"] = "auto";
    }

    json response = json::parse(post_with_retries(body.dump()));
    const json& message = response.at("choices").at(0).at("message");

    Message reply;
    reply.role = Role::kAssistant;
    if (message.contains("content") && message["content"].is_string()) {
      reply.content = message["content"].get<std::string>();
    }
    if (message.contains("tool_calls") && message["tool_calls"].is_array()) {
      for (const auto& call : message["tool_calls"]) {
        reply.tool_calls.push_back(
            {call.value("id", ""), call.at("function").at("name").get<std::string>(),
             call.at("function").value("arguments", "{}")});
      }
    }
    return reply;
  }

 private:
  std::string post_with_retries(const std::string& body) {
    auto [host, path] = split_url(config_.url);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(500 << (attempt - 1)));
      }
      httplib::Client client(host);
      client.set_read_timeout(config_.timeout_seconds, 0);
      httplib::Headers headers;
      if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
      }
      auto res = client.Post(path, headers, body, "application/json");
      if (res && res->status >= 200 && res->status < 300) return res->body;
      if (res) {
        last_error = "HTTP " + std::to_string(res->status) + ": " +
                     res->body.substr(0, 200);
        if (res->status >= 400 && res->status < 500 && res->status != 429) break;
      } else {
        last_error = "transport error: " + httplib::to_string(res.error());
      }
    }
    throw ChatError("chat request failed: " + last_error);
  }

  static std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_begin = url.find('/', host_begin);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
  }

  HttpChatConfig config_;
  std::string id_;
};

}  // namespace

std::unique_ptr<ChatClient> make_http_chat_client(HttpChatConfig config) {
  if (config.url.empty()) throw ChatError("chat endpoint URL is empty");
  return std::make_unique<HttpChatClient>(std::move(config));
}

}  // namespace arag
