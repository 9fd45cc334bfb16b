#include "arag/eval.hpp"

#include "arag/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

namespace arag {
namespace {

using nlohmann::json;

Toolset toolset_for(EvalMode mode) {
  switch (mode) {
    case EvalMode::kAragNaive: return Toolset::kNaive;
    case EvalMode::kWoKeyword: return Toolset::kNoKeyword;
    case EvalMode::kWoSemantic: return Toolset::kNoSemantic;
    case EvalMode::kWoChunkRead: return Toolset::kNoChunkRead;
    default: return Toolset::kFull;
  }
}

bool is_agentic(EvalMode mode) {
  return mode != EvalMode::kDirectAnswer && mode != EvalMode::kNaiveRag;
}

}  // namespace

std::string eval_mode_name(EvalMode mode) {
  switch (mode) {
    case EvalMode::kDirectAnswer: return "direct_answer";
    case EvalMode::kNaiveRag: return "naive_rag";
    case EvalMode::kAragNaive: return "arag_naive";
    case EvalMode::kAragFull: return "arag_full";
    case EvalMode::kWoKeyword: return "wo_keyword";
    case EvalMode::kWoSemantic: return "wo_semantic";
    case EvalMode::kWoChunkRead: return "wo_chunk_read";
  }
  return "arag_full";
}

std::optional<EvalMode> parse_eval_mode(const std::string& name) {
  for (EvalMode mode :
       {EvalMode::kDirectAnswer, EvalMode::kNaiveRag, EvalMode::kAragNaive,
        EvalMode::kAragFull, EvalMode::kWoKeyword, EvalMode::kWoSemantic,
        EvalMode::kWoChunkRead}) {
    if (eval_mode_name(mode) == name) return mode;
  }
  return std::nullopt;
}

std::vector<QAItem> load_questions(const std::filesystem::path& questions_path) {
  std::vector<QAItem> items;
  std::ifstream in(questions_path);
  if (!in) throw EvalError("cannot open questions file: " + questions_path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    QAItem item;
    try {
      json row = json::parse(line);
      item.question_id = row.at("question_id").get<std::string>();
      item.question = row.at("question").get<std::string>();
      for (const auto& gold : row.at("gold_answers")) {
        item.gold_answers.push_back(gold.get<std::string>());
      }
      item.metadata = row.value("metadata", json::object());
    } catch (const std::exception& e) {
      throw EvalError("malformed question line " + std::to_string(line_no) + ": " +
                      e.what());
    }
    bool has_gold = std::any_of(item.gold_answers.begin(), item.gold_answers.end(),
                                [](const std::string& g) { return !g.empty(); });
    if (!has_gold) {
      throw EvalError("question line " + std::to_string(line_no) +
                      " has no non-empty gold answer");
    }
    items.push_back(std::move(item));
  }
  return items;
}

std::pair<std::vector<Document>, std::vector<QAItem>> load_dataset(
    const std::filesystem::path& corpus_path,
    const std::filesystem::path& questions_path) {
  std::vector<Document> corpus;
  {
    std::ifstream in(corpus_path);
    if (!in) throw EvalError("cannot open corpus file: " + corpus_path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      json row;
      try {
        row = json::parse(line);
        corpus.push_back({row.at("doc_id").get<std::string>(),
                          row.at("text").get<std::string>()});
      } catch (const std::exception& e) {
        throw EvalError("malformed corpus line " + std::to_string(line_no) + ": " +
                        e.what());
      }
    }
  }
  return {std::move(corpus), load_questions(questions_path)};
}

std::string normalize_answer(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      pending_space = true;
    } else if (std::ispunct(c)) {
      // stripped
    } else {
      if (pending_space && !out.empty()) out += ' ';
      pending_space = false;
      out += static_cast<char>(std::tolower(c));
    }
  }
  return out;
}

bool contain_acc(const std::string& prediction, const std::vector<std::string>& golds) {
  std::string pred = normalize_answer(prediction);
  for (const auto& gold : golds) {
    std::string g = normalize_answer(gold);
    if (!g.empty() && pred.find(g) != std::string::npos) return true;
  }
  return false;
}

std::string judge_prompt(const std::string& question, const std::string& prediction,
                         const std::vector<std::string>& golds) {
  std::string prompt =
      "You are grading a question-answering system. Decide whether the "
      "prediction conveys the same answer as any of the gold answers.\n\n";
  prompt += "[Question]\n" + question + "\n\n[Gold Answers]\n";
  for (const auto& gold : golds) prompt += "- " + gold + "\n";
  prompt += "\n[Prediction]\n" + prediction + "\n\n";
  prompt += "Reply with exactly YES or NO.";
  return prompt;
}

namespace {

// First standalone YES/NO token in the verdict, case-insensitive.
JudgeVerdict parse_verdict(const std::string& reply) {
  std::string upper(reply);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  std::istringstream stream(upper);
  std::string token;
  while (stream >> token) {
    while (!token.empty() && std::ispunct(static_cast<unsigned char>(token.back()))) {
      token.pop_back();
    }
    if (token == "YES") return {true, false};
    if (token == "NO") return {false, false};
  }
  return {false, true};
}

}  // namespace

JudgeVerdict llm_judge(const std::string& question, const std::string& prediction,
                       const std::vector<std::string>& golds, ChatClient& judge,
                       const ChatParams& params) {
  std::vector<Message> messages;
  messages.push_back({Role::kSystem, "You are a strict grader.", {}, "", 0});
  messages.push_back({Role::kUser, judge_prompt(question, prediction, golds), {}, "", 0});
  Message reply = judge.chat(messages, {}, params);
  return parse_verdict(reply.content);
}

EvalAggregates EvalReport::compute_aggregates(const std::vector<EvalRecord>& records) {
  EvalAggregates agg;
  if (records.empty()) return agg;
  double contain = 0.0, llm = 0.0, tokens = 0.0, steps = 0.0;
  bool any_judged = false;
  for (const auto& r : records) {
    contain += r.contain_correct ? 1.0 : 0.0;
    if (r.llm_correct.has_value()) {
      any_judged = true;
      llm += *r.llm_correct ? 1.0 : 0.0;
    }
    tokens += r.corpus_tokens_retrieved;
    steps += r.steps_used;
    if (r.failed) ++agg.failures;
  }
  const double n = static_cast<double>(records.size());
  agg.contain_acc = 100.0 * contain / n;
  if (any_judged) agg.llm_acc = 100.0 * llm / n;
  agg.mean_corpus_tokens = tokens / n;
  agg.mean_steps = steps / n;
  return agg;
}

namespace {

EvalRecord run_one(const QAItem& item, const CorpusIndex& index,
                   const EvalOptions& options, const ChatClientFactory& model_factory,
                   EmbeddingProvider& embedder, const TokenCounter& counter) {
  EvalRecord record;
  record.question_id = item.question_id;
  record.mode = eval_mode_name(options.mode);

  auto model = model_factory(item);
  if (is_agentic(options.mode)) {
    AgentConfig config = options.agent;
    config.toolset = toolset_for(options.mode);
    AgentOutcome outcome =
        run_agent(item.question, index, config, *model, embedder, counter);
    record.answer = outcome.answer;
    record.corpus_tokens_retrieved = outcome.corpus_tokens_retrieved;
    record.steps_used = outcome.steps_used;
    record.forced_synthesis = outcome.forced_synthesis;
    record.failed = outcome.failed;
    record.failure = outcome.failure;
  } else if (options.mode == EvalMode::kNaiveRag) {
    SearchResult retrieved = naive_embedding_search(index, item.question,
                                                    options.naive_rag_top_k, embedder,
                                                    counter);
    std::string context;
    for (const auto& hit : retrieved.hits) {
      if (!context.empty()) context += "\n\n";
      context += "[chunk " + hit.chunk_id + "]\n";
      if (!hit.snippet_sentences.empty()) context += hit.snippet_sentences.front();
    }
    std::vector<Message> messages;
    messages.push_back(
        {Role::kUser, naive_rag_prompt(context, item.question), {}, "", 0});
    Message reply = model->chat(messages, {}, options.agent.chat);
    record.answer = reply.content;
    record.corpus_tokens_retrieved = retrieved.corpus_tokens;
    record.steps_used = 1;
  } else {  // direct answer
    std::vector<Message> messages;
    messages.push_back({Role::kSystem, direct_answer_system_prompt(), {}, "", 0});
    messages.push_back({Role::kUser, item.question, {}, "", 0});
    Message reply = model->chat(messages, {}, options.agent.chat);
    record.answer = reply.content;
    record.corpus_tokens_retrieved = 0;
    record.steps_used = 1;
  }

  record.contain_correct = contain_acc(record.answer, item.gold_answers);
  return record;
}

}  // namespace

EvalReport run_eval(const std::vector<QAItem>& items, const CorpusIndex& index,
                    const EvalOptions& options, const ChatClientFactory& model_factory,
                    EmbeddingProvider& embedder, const TokenCounter& counter,
                    const ChatClientFactory& judge_factory) {
  EvalReport report;
  report.mode = eval_mode_name(options.mode);
  report.records.resize(items.size());

  std::size_t next = 0;
  std::mutex next_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= items.size()) return;
        i = next++;
      }
      try {
        report.records[i] = run_one(items[i], index, options, model_factory,
                                    embedder, counter);
      } catch (const std::exception& e) {
        EvalRecord record;
        record.question_id = items[i].question_id;
        record.mode = report.mode;
        record.failed = true;
        record.failure = e.what();
        report.records[i] = std::move(record);
      }
      if (judge_factory) {
        EvalRecord& record = report.records[i];
        try {
          auto judge = judge_factory(items[i]);
          JudgeVerdict verdict = llm_judge(items[i].question, record.answer,
                                           items[i].gold_answers, *judge,
                                           options.judge_params);
          record.llm_correct = verdict.correct && !verdict.unparseable;
          record.judge_unparseable = verdict.unparseable;
        } catch (const std::exception&) {
          record.llm_correct.reset();  // unjudged
        }
      }
    }
  };

  int threads = std::max(1, std::min<int>(options.parallelism,
                                          static_cast<int>(items.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  report.aggregates = EvalReport::compute_aggregates(report.records);
  return report;
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  json doc;
  doc["mode"] = report.mode;
  json agg = {{"contain_acc", report.aggregates.contain_acc},
              {"mean_corpus_tokens", report.aggregates.mean_corpus_tokens},
              {"mean_steps", report.aggregates.mean_steps},
              {"failures", report.aggregates.failures}};
  if (report.aggregates.llm_acc) agg["llm_acc"] = *report.aggregates.llm_acc;
  doc["aggregates"] = std::move(agg);

  json records = json::array();
  for (const auto& r : report.records) {
    json row = {{"question_id", r.question_id},
                {"mode", r.mode},
                {"answer", r.answer},
                {"contain_correct", r.contain_correct},
                {"corpus_tokens_retrieved", r.corpus_tokens_retrieved},
                {"steps_used", r.steps_used},
                {"forced_synthesis", r.forced_synthesis},
                {"failed", r.failed}};
    if (r.llm_correct) row["llm_correct"] = *r.llm_correct;
    if (r.judge_unparseable) row["judge_unparseable"] = true;
    if (!r.failure.empty()) row["failure"] = r.failure;
    records.push_back(std::move(row));
  }
  doc["records"] = std::move(records);

  std::ofstream out(path);
  if (!out) throw EvalError("cannot write report to " + path.string());
  out << doc.dump(2) << "\n";
}

std::string format_report_table(const std::vector<EvalReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "mode" << std::right << std::setw(14)
     << "contain_acc" << std::setw(10) << "llm_acc" << std::setw(14) << "mean_tokens"
     << std::setw(12) << "mean_steps" << std::setw(10) << "failures" << "\n";
  os << std::string(76, '-') << "\n";
  os << std::fixed;
  for (const auto& report : reports) {
    os << std::left << std::setw(16) << report.mode << std::right
       << std::setprecision(1) << std::setw(13) << report.aggregates.contain_acc << "%";
    if (report.aggregates.llm_acc) {
      os << std::setw(9) << *report.aggregates.llm_acc << "%";
    } else {
      os << std::setw(10) << "-";
    }
    os << std::setprecision(1) << std::setw(14) << report.aggregates.mean_corpus_tokens
       << std::setw(12) << report.aggregates.mean_steps << std::setw(10)
       << report.aggregates.failures << "\n";
  }
  return os.str();
}

}  // namespace arag
