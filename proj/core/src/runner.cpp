#include "sealev/runner.hpp"

#include "sealev/error.hpp"
#include "sealev/hashing.hpp"
#include "sealev/task_io.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace sealev {

namespace {

// Post-hoc timeout reclassification slack for real-clock measurements;
// declared virtual latencies are compared exactly.
constexpr double kMeasuredSlack = 0.25;

struct WorkItem {
  std::size_t submission_index;
  std::size_t task_index;
  std::size_t instance_index;
  int run_index;
};

// Localhost gateway that forwards out-of-process tool calls into the
// per-item ToolSession identified by a one-time token.
class ToolBridge {
 public:
  ToolBridge() {
    server_.Post("/retrieve", [this](const httplib::Request& req, httplib::Response& res) {
      nlohmann::json body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("token") || !body.contains("query")) {
        res.status = 400;
        res.set_content(R"({"error":"BAD_REQUEST"})", "application/json");
        return;
      }
      ToolSession* session = nullptr;
      {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = sessions_.find(body["token"].get<std::string>());
        if (it != sessions_.end()) session = it->second;
      }
      if (session == nullptr) {
        res.status = 403;
        res.set_content(R"({"error":"UNKNOWN_TOKEN"})", "application/json");
        return;
      }
      const auto reply = session->retrieve(body["query"].get<std::string>());
      nlohmann::json out = {{"allowed", reply.allowed}};
      if (reply.allowed) {
        out["passages"] = reply.response;
      } else {
        out["error"] = reply.response;
      }
      res.status = reply.allowed ? 200 : 429;
      res.set_content(out.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ToolBridge() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/retrieve"; }

  std::string register_session(ToolSession* session) {
    std::lock_guard<std::mutex> lock(mutex_);
    const std::string token = "t" + std::to_string(next_token_++);
    sessions_[token] = session;
    return token;
  }

  void unregister_session(const std::string& token) {
    std::lock_guard<std::mutex> lock(mutex_);
    sessions_.erase(token);
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::mutex mutex_;
  std::map<std::string, ToolSession*> sessions_;
  std::uint64_t next_token_ = 1;
};

ItemResult execute_item(Adapter& adapter, const TaskDefinition& task,
                        const TaskInstance& instance, const BudgetClass& budget,
                        const Syllabus& syllabus, const FrozenSubmission& submission,
                        int run_index, const ToolProxy* tools, ToolBridge* bridge) {
  ItemResult result;
  result.submission_id = submission.card.submission_id;
  result.task_id = task.task_id;
  result.instance_id = instance.instance_id;
  result.run_index = run_index;

  if (static_cast<std::int64_t>(instance.prompt.size()) > budget.max_input_chars) {
    result.status = ItemStatus::budget_exceeded;
    result.detail = "INPUT_EXCEEDS_BUDGET";
    return result;
  }

  const bool tools_allowed = submission.card.track.tools_allowed;
  ToolSession session(tools, budget, tools_allowed,
                      static_cast<std::int64_t>(instance.prompt.size()));

  InvokeContext ctx;
  ctx.tools = &session;
  std::string token;
  if (bridge != nullptr) {
    token = bridge->register_session(&session);
    ctx.tool_url = bridge->url();
    ctx.tool_token = token;
  }

  ItemRequest request{instance.instance_id, instance.prompt};

  // Exactly one retry, and only on a transient adapter error; never on
  // timeouts or format errors.
  const int max_retries = syllabus.retry_policy.max_transient_retries;
  AdapterResult attempt;
  int retries_used = 0;
  for (;;) {
    attempt = adapter.invoke(request, budget, ctx);
    if (attempt.outcome == AdapterResult::Outcome::transient_error && retries_used < max_retries) {
      ++retries_used;
      continue;
    }
    break;
  }

  if (bridge != nullptr) bridge->unregister_session(token);

  result.retries_used = retries_used;
  result.wall_clock_seconds = attempt.duration_seconds;
  result.tool_calls = session.log();
  result.policy_violations = session.policy_violations();
  result.detail = attempt.detail;

  switch (attempt.outcome) {
    case AdapterResult::Outcome::timeout:
      result.status = ItemStatus::timeout;
      return result;
    case AdapterResult::Outcome::transient_error:
    case AdapterResult::Outcome::permanent_error:
      result.status = ItemStatus::adapter_error;
      return result;
    case AdapterResult::Outcome::format_error:
      result.status = ItemStatus::format_error;
      result.raw_output = attempt.raw_output;
      return result;
    case AdapterResult::Outcome::ok:
      break;
  }

  // Responses that arrive after the cap are timeouts even when well-formed.
  const double slack = attempt.measured ? kMeasuredSlack : 0.0;
  if (attempt.duration_seconds > budget.max_wall_clock_per_item + slack) {
    result.status = ItemStatus::timeout;
    result.detail = "COMPLETED_AFTER_CAP";
    return result;
  }

  // Output truncation happens before schema parsing; the induced format
  // error is the intended penalty for busting the output budget.
  result.raw_output = attempt.raw_output;
  if (static_cast<std::int64_t>(result.raw_output.size()) > budget.max_output_chars) {
    result.raw_output.resize(static_cast<std::size_t>(budget.max_output_chars));
    result.truncated = true;
  }

  const RecordCheck check =
      validate_output_record(result.raw_output, task.io_contract.output_schema);
  if (!check.ok()) {
    result.status = ItemStatus::format_error;
    result.detail = check.violation;
    return result;
  }
  result.status = ItemStatus::ok;
  result.parsed_answer = check.record;
  return result;
}

}  // namespace

std::string item_status_name(ItemStatus status) {
  switch (status) {
    case ItemStatus::ok: return "ok";
    case ItemStatus::timeout: return "timeout";
    case ItemStatus::format_error: return "format_error";
    case ItemStatus::adapter_error: return "adapter_error";
    case ItemStatus::budget_exceeded: return "budget_exceeded";
  }
  return "adapter_error";
}

ItemStatus item_status_from_name(std::string_view name) {
  if (name == "ok") return ItemStatus::ok;
  if (name == "timeout") return ItemStatus::timeout;
  if (name == "format_error") return ItemStatus::format_error;
  if (name == "adapter_error") return ItemStatus::adapter_error;
  if (name == "budget_exceeded") return ItemStatus::budget_exceeded;
  throw Error("UNKNOWN_STATUS", std::string(name));
}

void to_json(nlohmann::json& j, const ToolCallRecord& v) {
  j = {{"sequence_number", v.sequence_number},
       {"query", v.query},
       {"response_chars", v.response_chars},
       {"duration_seconds", v.duration_seconds},
       {"allowed", v.allowed}};
}

void from_json(const nlohmann::json& j, ToolCallRecord& v) {
  v.sequence_number = j.at("sequence_number").get<int>();
  v.query = j.value("query", std::string{});
  v.response_chars = j.value("response_chars", std::int64_t{0});
  v.duration_seconds = j.value("duration_seconds", 0.0);
  v.allowed = j.value("allowed", false);
}

void to_json(nlohmann::json& j, const ItemResult& v) {
  j = {{"submission_id", v.submission_id},
       {"task_id", v.task_id},
       {"instance_id", v.instance_id},
       {"raw_output", v.raw_output},
       {"status", item_status_name(v.status)},
       {"wall_clock_seconds", v.wall_clock_seconds},
       {"retries_used", v.retries_used},
       {"tool_calls", v.tool_calls},
       {"run_index", v.run_index},
       {"truncated", v.truncated},
       {"policy_violations", v.policy_violations},
       {"detail", v.detail}};
  if (v.parsed_answer.has_value()) j["parsed_answer"] = *v.parsed_answer;
}

void from_json(const nlohmann::json& j, ItemResult& v) {
  v.submission_id = j.at("submission_id").get<std::string>();
  v.task_id = j.at("task_id").get<std::string>();
  v.instance_id = j.at("instance_id").get<std::string>();
  v.raw_output = j.value("raw_output", std::string{});
  v.status = item_status_from_name(j.at("status").get<std::string>());
  v.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  v.retries_used = j.value("retries_used", 0);
  v.tool_calls = j.value("tool_calls", std::vector<ToolCallRecord>{});
  v.run_index = j.value("run_index", 0);
  v.truncated = j.value("truncated", false);
  v.policy_violations = j.value("policy_violations", 0);
  v.detail = j.value("detail", std::string{});
  if (j.contains("parsed_answer")) v.parsed_answer = j.at("parsed_answer");
}

int required_runs(const Syllabus& syllabus, const SubmissionCard& card) {
  if (syllabus.stochasticity.kind == StochasticityKind::deterministic) return 1;
  if (card.decoding_policy.deterministic) return 1;
  return std::max(1, syllabus.stochasticity.run_count);
}

RunOutput run_evaluation(const std::vector<TaskDefinition>& tasks,
                         const std::vector<FrozenSubmission>& submissions,
                         const Syllabus& syllabus, const AdapterRegistry& adapters,
                         const ToolProxy* tools, const RunConfig& config) {
  syllabus.check();

  // The protocol's core separation mechanism: every submission must have
  // been frozen strictly before the bundle was first unsealed.
  for (const auto& sub : submissions) {
    if (sub.frozen_at >= config.unseal_time) {
      throw Error("SEAL_BEFORE_FREEZE_VIOLATION",
                  sub.card.submission_id + " frozen at " + format_timestamp(sub.frozen_at) +
                      ", bundle unsealed at " + format_timestamp(config.unseal_time));
    }
    if (!sub.dry_run_passed) {
      throw Error("DRY_RUN_REQUIRED", sub.card.submission_id);
    }
  }

  // Resolve budgets, adapters, and artifact commitments up front.
  std::vector<const BudgetClass*> budgets;
  std::vector<std::unique_ptr<Adapter>> submission_adapters;
  bool any_subprocess_tools = false;
  for (const auto& sub : submissions) {
    const BudgetClass* budget = syllabus.find_budget_class(sub.card.budget_class_id);
    if (budget == nullptr) throw Error("UNKNOWN_BUDGET_CLASS", sub.card.budget_class_id);
    budgets.push_back(budget);

    std::filesystem::path artifact_path;
    if (!config.artifacts_dir.empty()) {
      artifact_path = config.artifacts_dir / (sub.card.submission_id + ".artifact");
      if (sub.card.access_mode == AccessMode::open_weights) {
        const std::string bytes = read_file(artifact_path);
        if (!verify_commitment(sub, Bytes(bytes.begin(), bytes.end()))) {
          throw Error("COMMITMENT_MISMATCH", sub.card.submission_id);
        }
      }
    }
    submission_adapters.push_back(adapters.create(sub.card, artifact_path));
    if (sub.card.track.tools_allowed &&
        AdapterRegistry::scheme_of(sub.card.interface_descriptor) == "cmd") {
      any_subprocess_tools = true;
    }
  }

  std::unique_ptr<ToolBridge> bridge;
  if (config.enable_tool_bridge && any_subprocess_tools) {
    bridge = std::make_unique<ToolBridge>();
  }

  std::vector<WorkItem> work;
  for (std::size_t s = 0; s < submissions.size(); ++s) {
    const int runs = required_runs(syllabus, submissions[s].card);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      for (std::size_t i = 0; i < tasks[t].instances.size(); ++i) {
        for (int r = 0; r < runs; ++r) {
          work.push_back(WorkItem{s, t, i, r});
        }
      }
    }
  }

  std::vector<ItemResult> results(work.size());
  std::atomic<std::size_t> next{0};
  const int worker_count = std::max(1, config.workers);

  auto worker = [&] {
    for (;;) {
      const std::size_t index = next.fetch_add(1);
      if (index >= work.size()) return;
      const WorkItem& unit = work[index];
      const auto& sub = submissions[unit.submission_index];
      const auto& task = tasks[unit.task_index];
      results[index] = execute_item(*submission_adapters[unit.submission_index], task,
                                    task.instances[unit.instance_index],
                                    *budgets[unit.submission_index], syllabus, sub,
                                    unit.run_index, tools, bridge.get());
    }
  };

  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Deterministic merge: order never depends on scheduling.
  std::sort(results.begin(), results.end(), [](const ItemResult& a, const ItemResult& b) {
    return std::tie(a.submission_id, a.task_id, a.instance_id, a.run_index) <
           std::tie(b.submission_id, b.task_id, b.instance_id, b.run_index);
  });

  if (config.log_path.has_value()) {
    std::ostringstream log;
    for (const auto& r : results) log << nlohmann::json(r).dump() << "\n";
    write_file(*config.log_path, log.str());
  }

  return RunOutput{std::move(results)};
}

DryRunReport dry_run(const FrozenSubmission& frozen, Adapter& adapter,
                     const BudgetClass& budget) {
  // Synthetic, clearly-non-task item: the dry run must leak nothing about
  // sealed content.
  ItemRequest request{"dryrun-" + frozen.card.submission_id,
                      "Connectivity check: reply with a JSON object containing fields "
                      "id and answer."};
  InvokeContext ctx;
  AdapterResult attempt = adapter.invoke(request, budget, ctx);

  DryRunReport report;
  report.wall_clock_seconds = attempt.duration_seconds;
  switch (attempt.outcome) {
    case AdapterResult::Outcome::timeout:
      report.code = "TIMEOUT";
      return report;
    case AdapterResult::Outcome::transient_error:
    case AdapterResult::Outcome::permanent_error:
      report.code = "ADAPTER_UNREACHABLE";
      return report;
    case AdapterResult::Outcome::format_error:
      report.code = attempt.detail.empty() ? "NOT_PARSEABLE" : attempt.detail;
      return report;
    case AdapterResult::Outcome::ok:
      break;
  }
  const double slack = attempt.measured ? kMeasuredSlack : 0.0;
  if (attempt.duration_seconds > budget.max_wall_clock_per_item + slack) {
    report.code = "TIMEOUT";
    return report;
  }
  std::string raw = attempt.raw_output;
  if (static_cast<std::int64_t>(raw.size()) > budget.max_output_chars) {
    raw.resize(static_cast<std::size_t>(budget.max_output_chars));
  }
  const RecordCheck check = validate_output_record(raw, wire_output_schema());
  if (!check.ok()) {
    report.code = check.violation;
    return report;
  }
  report.passed = true;
  return report;
}

std::string canonical_results_digest(const std::vector<ItemResult>& results) {
  std::vector<const ItemResult*> sorted;
  sorted.reserve(results.size());
  for (const auto& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(), [](const ItemResult* a, const ItemResult* b) {
    return std::tie(a->submission_id, a->task_id, a->instance_id, a->run_index) <
           std::tie(b->submission_id, b->task_id, b->instance_id, b->run_index);
  });
  std::ostringstream out;
  for (const ItemResult* r : sorted) {
    nlohmann::json j = *r;
    j["wall_clock_seconds"] = 0.0;
    for (auto& call : j["tool_calls"]) call["duration_seconds"] = 0.0;
    out << j.dump() << "\n";
  }
  return sha256_hex(out.str());
}

}  // namespace sealev
