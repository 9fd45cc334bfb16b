#pragma once

#include "arag/agent.hpp"
#include "arag/chat.hpp"
#include "arag/index.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace arag {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QAItem {
  std::string question_id;
  std::string question;
  std::vector<std::string> gold_answers;  // any counts as correct
  nlohmann::json metadata;
};

enum class EvalMode {
  kDirectAnswer,
  kNaiveRag,
  kAragNaive,
  kAragFull,
  kWoKeyword,
  kWoSemantic,
  kWoChunkRead,
};

std::string eval_mode_name(EvalMode mode);
std::optional<EvalMode> parse_eval_mode(const std::string& name);

struct EvalRecord {
  std::string question_id;
  std::string mode;
  std::string answer;
  bool contain_correct = false;
  std::optional<bool> llm_correct;  // present iff a judge was configured
  bool judge_unparseable = false;
  int corpus_tokens_retrieved = 0;
  int steps_used = 0;
  bool forced_synthesis = false;
  bool failed = false;
  std::string failure;
};

struct EvalAggregates {
  double contain_acc = 0.0;           // percent
  std::optional<double> llm_acc;      // percent, present iff judged
  double mean_corpus_tokens = 0.0;
  double mean_steps = 0.0;
  int failures = 0;
};

struct EvalReport {
  std::string mode;
  std::vector<EvalRecord> records;
  EvalAggregates aggregates;

  // Aggregates derived from records; callers can verify consistency.
  static EvalAggregates compute_aggregates(const std::vector<EvalRecord>& records);
};

// corpus: JSON lines of {doc_id, text}; questions: JSON lines of
// {question_id, question, gold_answers}.
std::pair<std::vector<Document>, std::vector<QAItem>> load_dataset(
    const std::filesystem::path& corpus_path,
    const std::filesystem::path& questions_path);

std::vector<QAItem> load_questions(const std::filesystem::path& questions_path);

// Normalization for containment: lowercase, strip punctuation, collapse
// whitespace. This rule determines the metric and is fixed here.
std::string normalize_answer(std::string_view text);
bool contain_acc(const std::string& prediction,
                 const std::vector<std::string>& golds);

struct JudgeVerdict {
  bool correct = false;
  bool unparseable = false;
};

std::string judge_prompt(const std::string& question, const std::string& prediction,
                         const std::vector<std::string>& golds);
JudgeVerdict llm_judge(const std::string& question, const std::string& prediction,
                       const std::vector<std::string>& golds, ChatClient& judge,
                       const ChatParams& params);

// Fresh client per question so scripted scenarios stay isolated.
using ChatClientFactory = std::function<std::unique_ptr<ChatClient>(const QAItem&)>;

struct EvalOptions {
  EvalMode mode = EvalMode::kAragFull;
  AgentConfig agent;          // toolset is derived from mode for agentic modes
  int naive_rag_top_k = 5;
  int parallelism = 4;
  ChatParams judge_params;
};

EvalReport run_eval(const std::vector<QAItem>& items, const CorpusIndex& index,
                    const EvalOptions& options, const ChatClientFactory& model_factory,
                    EmbeddingProvider& embedder, const TokenCounter& counter,
                    const ChatClientFactory& judge_factory = nullptr);

void write_report(const EvalReport& report, const std::filesystem::path& path);
std::string format_report_table(const std::vector<EvalReport>& reports);

}  // namespace arag
