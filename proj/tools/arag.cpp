#include "arag/agent.hpp"
#include "arag/chat.hpp"
#include "arag/embedding.hpp"
#include "arag/eval.hpp"
#include "arag/index.hpp"
#include "arag/retrieval.hpp"
#include "arag/tokenizer.hpp"

#include <CLI11.hpp>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace {

using nlohmann::json;

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? value : "";
}

// Embedder ids: "hash" / "hash:<dim>" for the offline embedder, anything else
// is treated as a remote model id served at ARAG_EMBED_URL.
std::unique_ptr<arag::EmbeddingProvider> make_embedder(const std::string& id) {
  if (id == "hash") return std::make_unique<arag::HashEmbedder>();
  if (id.rfind("hash:", 0) == 0) {
    return std::make_unique<arag::HashEmbedder>(std::stoi(id.substr(5)));
  }
  if (id.rfind("hash-trigram-", 0) == 0) {
    return std::make_unique<arag::HashEmbedder>(std::stoi(id.substr(13)));
  }
  arag::HttpEmbedderConfig config;
  config.url = env_or_empty("ARAG_EMBED_URL");
  config.api_key = env_or_empty("ARAG_API_KEY");
  config.model = id.rfind("http:", 0) == 0 ? id.substr(5) : id;
  if (config.url.empty()) {
    throw arag::EmbeddingError("ARAG_EMBED_URL is not set for remote embedder '" +
                               id + "'");
  }
  return arag::make_http_embedder(std::move(config));
}

std::unique_ptr<arag::EmbeddingProvider> embedder_for_index(
    const arag::CorpusIndex& index) {
  return make_embedder(index.manifest.embedder_id);
}

std::unique_ptr<arag::ChatClient> make_live_chat(const std::string& reasoning_effort) {
  arag::HttpChatConfig config;
  config.url = env_or_empty("ARAG_CHAT_URL");
  config.api_key = env_or_empty("ARAG_API_KEY");
  config.supports_reasoning_effort = !reasoning_effort.empty();
  if (config.url.empty()) {
    throw arag::ChatError("ARAG_CHAT_URL is not set (or pass --scripted)");
  }
  return arag::make_http_chat_client(std::move(config));
}

// Scenario file: either a single scenario {"steps": [...]} used for every
// question, or {"scenarios": {question_id: {"steps": [...]}}}.
struct ScenarioBook {
  std::optional<arag::ScriptedScenario> single;
  std::map<std::string, arag::ScriptedScenario> by_question;

  arag::ScriptedScenario for_question(const std::string& question_id) const {
    auto it = by_question.find(question_id);
    if (it != by_question.end()) return it->second;
    if (single) return *single;
    throw arag::ChatError("no scripted scenario for question '" + question_id + "'");
  }
};

ScenarioBook load_scenario_book(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw arag::ChatError("cannot open scenario file: " + path);
  json doc = json::parse(in);
  ScenarioBook book;
  if (doc.contains("scenarios")) {
    for (auto& [qid, scenario] : doc["scenarios"].items()) {
      book.by_question.emplace(qid, arag::load_scenario(scenario));
    }
  }
  if (doc.contains("steps")) book.single = arag::load_scenario(doc);
  return book;
}

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream stream(value);
  std::string part;
  while (std::getline(stream, part, ',')) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

int cmd_index(const std::string& corpus_path, const std::string& out_dir,
              int max_chunk_tokens, const std::string& embedder_id) {
  auto [corpus, items] = [&] {
    std::vector<arag::Document> docs;
    std::ifstream in(corpus_path);
    if (!in) throw arag::IndexError("cannot open corpus file: " + corpus_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json row = json::parse(line);
      docs.push_back({row.at("doc_id").get<std::string>(),
                      row.at("text").get<std::string>()});
    }
    return std::pair{docs, 0};
  }();
  (void)items;

  auto embedder = make_embedder(embedder_id);
  auto counter = arag::whitespace_token_counter();
  arag::BuildOptions options;
  options.max_chunk_tokens = max_chunk_tokens;
  arag::CorpusIndex index = arag::build_index(corpus, *embedder, counter, options);
  arag::save_index(index, out_dir);
  std::cout << "indexed " << corpus.size() << " documents: " << index.chunks.size()
            << " chunks, " << index.sentences.size() << " sentences, dimension "
            << index.manifest.dimension << "\n";
  return 0;
}

struct EvalSetup {
  std::string corpus_path;
  std::string questions_path;
  std::string index_path;
  std::string model;
  std::string judge_model;
  std::string scripted_path;
  std::string judge_scripted_path;
  std::string reasoning_effort;
  std::string output_dir = ".";
  int max_steps = 20;
  int top_k = arag::kDefaultTopK;
  int parallelism = 4;
};

EvalSetup load_eval_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw arag::EvalError("cannot open config file: " + path);
  json doc = json::parse(in);
  EvalSetup setup;
  setup.corpus_path = doc.value("corpus", "");
  setup.questions_path = doc.at("questions").get<std::string>();
  setup.index_path = doc.at("index").get<std::string>();
  setup.model = doc.value("model", "");
  setup.judge_model = doc.value("judge_model", "");
  setup.scripted_path = doc.value("scripted", "");
  setup.judge_scripted_path = doc.value("judge_scripted", "");
  setup.reasoning_effort = doc.value("reasoning_effort", "");
  setup.output_dir = doc.value("output_dir", ".");
  setup.max_steps = doc.value("max_steps", 20);
  setup.top_k = doc.value("top_k", arag::kDefaultTopK);
  setup.parallelism = doc.value("parallelism", 4);
  return setup;
}

arag::EvalReport run_mode(const EvalSetup& setup, arag::EvalMode mode, int max_steps,
                          const std::vector<arag::QAItem>& items,
                          const arag::CorpusIndex& index,
                          arag::EmbeddingProvider& embedder,
                          const arag::TokenCounter& counter) {
  arag::EvalOptions options;
  options.mode = mode;
  options.agent.max_steps = max_steps;
  options.agent.default_top_k = setup.top_k;
  options.agent.chat.model = setup.model;
  options.agent.chat.reasoning_effort = setup.reasoning_effort;
  options.naive_rag_top_k = setup.top_k;
  options.parallelism = setup.parallelism;
  options.judge_params.model = setup.judge_model;

  arag::ChatClientFactory model_factory;
  if (!setup.scripted_path.empty()) {
    auto book = std::make_shared<ScenarioBook>(load_scenario_book(setup.scripted_path));
    model_factory = [book](const arag::QAItem& item) -> std::unique_ptr<arag::ChatClient> {
      return std::make_unique<arag::ScriptedClient>(book->for_question(item.question_id));
    };
  } else {
    std::string effort = setup.reasoning_effort;
    model_factory = [effort](const arag::QAItem&) { return make_live_chat(effort); };
  }

  arag::ChatClientFactory judge_factory;
  if (!setup.judge_scripted_path.empty()) {
    auto book =
        std::make_shared<ScenarioBook>(load_scenario_book(setup.judge_scripted_path));
    judge_factory = [book](const arag::QAItem& item) -> std::unique_ptr<arag::ChatClient> {
      return std::make_unique<arag::ScriptedClient>(book->for_question(item.question_id));
    };
  } else if (!setup.judge_model.empty()) {
    judge_factory = [](const arag::QAItem&) { return make_live_chat(""); };
  }

  return arag::run_eval(items, index, options, model_factory, embedder, counter,
                        judge_factory);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"A-RAG: hierarchical retrieval interfaces for tool-calling agents"};
  app.require_subcommand(1);

  // index
  auto* index_cmd = app.add_subcommand("index", "Build a corpus index");
  std::string corpus_path, out_dir, embedder_id = "hash";
  int max_chunk_tokens = 1000;
  index_cmd->add_option("--corpus", corpus_path, "Corpus JSONL of {doc_id, text}")
      ->required();
  index_cmd->add_option("--out", out_dir, "Output index directory")->required();
  index_cmd->add_option("--max-chunk-tokens", max_chunk_tokens,
                        "Chunk token budget (default 1000)");
  index_cmd->add_option("--embedder", embedder_id,
                        "Embedder id: hash, hash:<dim>, or a remote model id");

  // ask
  auto* ask_cmd = app.add_subcommand("ask", "Answer a single question");
  std::string index_path, question, mode_name = "full", transcript_path,
              scripted_path, model_id, reasoning_effort;
  int max_steps = 20;
  ask_cmd->add_option("--index", index_path, "Index directory")->required();
  ask_cmd->add_option("--question", question, "Question text")->required();
  ask_cmd->add_option("--mode", mode_name,
                      "Toolset: full, naive, no_keyword, no_semantic, no_chunk_read");
  ask_cmd->add_option("--max-steps", max_steps, "Iteration budget L (default 20)");
  ask_cmd->add_option("--dump-transcript", transcript_path, "Write transcript JSONL");
  ask_cmd->add_option("--scripted", scripted_path, "Scripted scenario JSON (offline)");
  ask_cmd->add_option("--model", model_id, "Model id for the live endpoint");
  ask_cmd->add_option("--reasoning-effort", reasoning_effort,
                      "Reasoning effort passthrough");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Run an evaluation");
  std::string eval_config_path, eval_mode_name = "arag_full", max_steps_csv;
  eval_cmd->add_option("--config", eval_config_path, "Eval config JSON")->required();
  eval_cmd->add_option("--mode", eval_mode_name,
                       "direct_answer, naive_rag, arag_naive, arag_full, wo_keyword, "
                       "wo_semantic, wo_chunk_read");
  eval_cmd->add_option("--max-steps", max_steps_csv,
                       "Override max steps; comma list sweeps (e.g. 5,10,15,20)");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Run several modes side by side");
  std::string compare_config_path, modes_csv = "naive_rag,arag_naive,arag_full";
  compare_cmd->add_option("--config", compare_config_path, "Eval config JSON")
      ->required();
  compare_cmd->add_option("--modes", modes_csv, "Comma-separated mode list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*index_cmd) {
      if (max_chunk_tokens < 1) {
        std::cerr << "error: --max-chunk-tokens must be >= 1\n";
        return 2;
      }
      return cmd_index(corpus_path, out_dir, max_chunk_tokens, embedder_id);
    }

    if (*ask_cmd) {
      auto toolset = arag::parse_toolset(mode_name);
      if (!toolset) {
        std::cerr << "error: unknown mode '" << mode_name << "'\n";
        return 2;
      }
      if (max_steps < 1) {
        std::cerr << "error: --max-steps must be >= 1\n";
        return 2;
      }
      arag::CorpusIndex index = arag::load_index(index_path);
      auto embedder = embedder_for_index(index);
      auto counter = arag::whitespace_token_counter();

      std::unique_ptr<arag::ChatClient> client;
      if (!scripted_path.empty()) {
        client = std::make_unique<arag::ScriptedClient>(
            arag::load_scenario_file(scripted_path));
      } else {
        client = make_live_chat(reasoning_effort);
      }

      arag::AgentConfig config;
      config.max_steps = max_steps;
      config.toolset = *toolset;
      config.chat.model = model_id;
      config.chat.reasoning_effort = reasoning_effort;

      arag::AgentOutcome outcome =
          arag::run_agent(question, index, config, *client, *embedder, counter);
      if (!transcript_path.empty()) {
        arag::dump_transcript(outcome.transcript, transcript_path);
      }
      if (outcome.failed) {
        std::cerr << "run failed: " << outcome.failure << "\n";
        if (!transcript_path.empty()) {
          std::cerr << "partial transcript: " << transcript_path << "\n";
        }
        return 1;
      }
      std::cout << outcome.answer << "\n\n";
      std::cout << "steps_used=" << outcome.steps_used
                << " corpus_tokens_retrieved=" << outcome.corpus_tokens_retrieved
                << " forced_synthesis=" << (outcome.forced_synthesis ? "true" : "false")
                << "\n";
      return 0;
    }

    if (*eval_cmd) {
      auto mode = arag::parse_eval_mode(eval_mode_name);
      if (!mode) {
        std::cerr << "error: unknown eval mode '" << eval_mode_name << "'\n";
        return 2;
      }
      EvalSetup setup = load_eval_config(eval_config_path);
      auto items = arag::load_questions(setup.questions_path);
      arag::CorpusIndex index = arag::load_index(setup.index_path);
      auto embedder = embedder_for_index(index);
      auto counter = arag::whitespace_token_counter();

      std::vector<int> sweep;
      if (max_steps_csv.empty()) {
        sweep.push_back(setup.max_steps);
      } else {
        for (const auto& part : split_csv(max_steps_csv)) sweep.push_back(std::stoi(part));
      }

      std::filesystem::create_directories(setup.output_dir);
      std::vector<arag::EvalReport> reports;
      for (int steps : sweep) {
        arag::EvalReport report =
            run_mode(setup, *mode, steps, items, index, *embedder, counter);
        std::string name = sweep.size() == 1
                               ? "report.json"
                               : "report_L" + std::to_string(steps) + ".json";
        arag::write_report(report, std::filesystem::path(setup.output_dir) / name);
        reports.push_back(std::move(report));
      }
      std::cout << arag::format_report_table(reports);
      int failures = 0;
      for (const auto& r : reports) failures += r.aggregates.failures;
      if (failures > 0) {
        std::cerr << failures << " question(s) failed\n";
      }
      return reports.empty() ||
                     std::any_of(reports.begin(), reports.end(),
                                 [&](const arag::EvalReport& r) {
                                   return !r.records.empty() &&
                                          r.aggregates.failures ==
                                              static_cast<int>(r.records.size());
                                 })
                 ? 1
                 : 0;
    }

    if (*compare_cmd) {
      EvalSetup setup = load_eval_config(compare_config_path);
      auto items = arag::load_questions(setup.questions_path);
      arag::CorpusIndex index = arag::load_index(setup.index_path);
      auto embedder = embedder_for_index(index);
      auto counter = arag::whitespace_token_counter();

      std::filesystem::create_directories(setup.output_dir);
      std::vector<arag::EvalReport> reports;
      bool any_total_failure = false;
      for (const auto& name : split_csv(modes_csv)) {
        auto mode = arag::parse_eval_mode(name);
        if (!mode) {
          std::cerr << "error: unknown eval mode '" << name << "'\n";
          return 2;
        }
        arag::EvalReport report =
            run_mode(setup, *mode, setup.max_steps, items, index, *embedder, counter);
        arag::write_report(report, std::filesystem::path(setup.output_dir) /
                                       ("report_" + name + ".json"));
        if (!report.records.empty() &&
            report.aggregates.failures == static_cast<int>(report.records.size())) {
          any_total_failure = true;
        }
        reports.push_back(std::move(report));
      }
      std::cout << arag::format_report_table(reports);
      return any_total_failure ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
