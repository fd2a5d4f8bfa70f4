#pragma once

#include "sealev/adapters.hpp"
#include "sealev/change_control.hpp"
#include "sealev/registry.hpp"
#include "sealev/tool_proxy.hpp"
#include "sealev/types.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sealev {

enum class ItemStatus { ok, timeout, format_error, adapter_error, budget_exceeded };

std::string item_status_name(ItemStatus status);
ItemStatus item_status_from_name(std::string_view name);

struct ItemResult {
  std::string submission_id;
  std::string task_id;
  std::string instance_id;
  std::string raw_output;
  std::optional<nlohmann::json> parsed_answer;  // present iff status == ok
  ItemStatus status = ItemStatus::adapter_error;
  double wall_clock_seconds = 0.0;
  int retries_used = 0;
  std::vector<ToolCallRecord> tool_calls;
  int run_index = 0;
  bool truncated = false;       // output cut at max_output_chars before parsing
  int policy_violations = 0;    // forbidden/over-cap tool calls on this item
  std::string detail;           // error code or adapter detail
};

void to_json(nlohmann::json& j, const ToolCallRecord& v);
void from_json(const nlohmann::json& j, ToolCallRecord& v);
void to_json(nlohmann::json& j, const ItemResult& v);
void from_json(const nlohmann::json& j, ItemResult& v);

struct RunConfig {
  int workers = 1;
  std::uint64_t seed = 0;
  // First unseal event of the task bundle; every freeze must strictly
  // precede it or the whole run is refused.
  Timestamp unseal_time = 0;
  std::filesystem::path artifacts_dir;  // <id>.artifact files; empty = trusted in-process mode
  bool enable_tool_bridge = false;      // HTTP tool gateway for subprocess solvers
  std::optional<std::filesystem::path> log_path;  // append-only raw run log
};

struct RunOutput {
  std::vector<ItemResult> results;  // canonical order
};

// Executes every frozen submission against the instrumented bundle under one
// harness: budget enforcement, single-retry policy on transient adapter
// errors, output truncation, probe-blind execution, full logging. Results
// are merged deterministically by (submission, task, instance, run) so the
// outcome is independent of worker count.
//
// Errors: "SEAL_BEFORE_FREEZE_VIOLATION" (some freeze does not strictly
// precede the unseal), "DRY_RUN_REQUIRED", "COMMITMENT_MISMATCH",
// "UNKNOWN_ADAPTER", "UNKNOWN_BUDGET_CLASS".
RunOutput run_evaluation(const std::vector<TaskDefinition>& tasks,
                         const std::vector<FrozenSubmission>& submissions,
                         const Syllabus& syllabus, const AdapterRegistry& adapters,
                         const ToolProxy* tools, const RunConfig& config);

// Required runs per item for this card under the event's stochasticity
// policy: 1 for deterministic decoding, the fixed run count otherwise.
int required_runs(const Syllabus& syllabus, const SubmissionCard& card);

struct DryRunReport {
  bool passed = false;
  std::string code;  // "ADAPTER_UNREACHABLE", "TIMEOUT", "NOT_PARSEABLE", ...
  double wall_clock_seconds = 0.0;
};

// Required format check before a submission becomes runnable: invokes the
// adapter once on a synthetic, clearly-non-task item and checks the output
// against the published wire contract within budget. Leaks nothing about
// sealed content.
DryRunReport dry_run(const FrozenSubmission& frozen, Adapter& adapter,
                     const BudgetClass& budget);

// Digest of the result multiset with volatile measured timings zeroed;
// equal digests across worker counts witness order-independence.
std::string canonical_results_digest(const std::vector<ItemResult>& results);

}  // namespace sealev
