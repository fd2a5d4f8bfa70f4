#pragma once

#include "sealev/clock.hpp"
#include "sealev/schema.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sealev {

// ---------------------------------------------------------------------------
// Syllabus: the rulebook published before the event. Task content is sealed;
// these constraints are not.
// ---------------------------------------------------------------------------

struct BudgetClass {
  std::string id;
  std::int64_t max_input_chars = 0;
  std::int64_t max_output_chars = 0;
  double max_wall_clock_per_item = 0.0;  // seconds
  std::int64_t max_tool_calls_per_item = 0;  // 0 = tools disallowed
};

enum class TrackKind { model, system };

std::string track_kind_name(TrackKind kind);
TrackKind track_kind_from_name(std::string_view name);

struct Track {
  TrackKind kind = TrackKind::model;
  bool tools_allowed = false;  // invariant: model track never allows tools
};

enum class StochasticityKind { deterministic, fixed_run_count };

struct StochasticityPolicy {
  StochasticityKind kind = StochasticityKind::deterministic;
  int run_count = 1;  // fixed_run_count only; >= 1
};

struct RetryPolicy {
  int max_transient_retries = 1;  // >= 0
};

struct InterfaceSpec {
  std::string input = "text";   // input media descriptor
  std::string output = "json";  // output media descriptor
};

struct ScoringPolicyDecl {
  std::string aggregation = "macro";
  std::vector<std::string> metric_ids;  // metrics recognized at this event
};

struct ReleasePolicy {
  std::vector<std::string> artifacts;  // artifact kinds published post-event
};

struct Syllabus {
  InterfaceSpec interface_spec;
  std::vector<BudgetClass> budget_classes;
  std::vector<Track> tracks;
  ScoringPolicyDecl scoring_policy;
  ReleasePolicy release_policy;
  StochasticityPolicy stochasticity;
  RetryPolicy retry_policy;

  const BudgetClass* find_budget_class(std::string_view id) const;
  const Track* find_track(TrackKind kind) const;
  bool metric_known(std::string_view metric_id) const;

  // Throws Error("INVALID_SYLLABUS", ...) when structural invariants fail.
  void check() const;
};

// ---------------------------------------------------------------------------
// Tasks and gold records
// ---------------------------------------------------------------------------

enum class TaskFamily { extraction, evidence_qa, stability, custom };

std::string task_family_name(TaskFamily family);
TaskFamily task_family_from_name(std::string_view name);

struct ExtractionGold {
  std::map<std::string, std::string> fields;  // scalar fields, exact-match scored
  std::vector<std::string> entities;          // set-F1 scored
};

struct EvidenceGold {
  bool answerable = false;
  std::string answer;      // empty when unanswerable
  std::int64_t span_begin = -1;  // gold support span, char offsets into the passage
  std::int64_t span_end = -1;
};

struct StabilityGold {
  std::string decision;
};

struct CustomGold {
  nlohmann::json value;
};

using Gold = std::variant<ExtractionGold, EvidenceGold, StabilityGold, CustomGold>;

nlohmann::json gold_to_json(const Gold& gold);
Gold gold_from_json(const nlohmann::json& j);

struct TaskInstance {
  std::string instance_id;
  std::string prompt;
  Gold gold;
  std::string family_id;     // stability variant grouping; empty otherwise
  bool is_probe = false;
  std::string probe_origin;  // instance_id this probe duplicates/perturbs
};

struct ScoringPlan {
  std::string metric_id;  // exact_match_schema | evidence_abstention | stability | custom
  nlohmann::json parameters = nlohmann::json::object();

  double param(const std::string& key, double fallback) const;
};

struct IoContract {
  std::string input = "text";
  OutputSchema output_schema;
};

struct TaskDefinition {
  std::string task_id;
  std::string title;
  IoContract io_contract;
  ScoringPlan scoring_plan;
  std::vector<TaskInstance> instances;
  std::string budget_class_id;
  TaskFamily family = TaskFamily::custom;

  const TaskInstance* find_instance(std::string_view id) const;
  std::int64_t non_probe_count() const;
};

// ---------------------------------------------------------------------------
// Submissions
// ---------------------------------------------------------------------------

enum class AccessMode { open_weights, closed_weights };

std::string access_mode_name(AccessMode mode);
AccessMode access_mode_from_name(std::string_view name);

struct DecodingPolicy {
  bool deterministic = true;
  int run_count = 1;  // stochastic submissions: declared run count
  std::string description = "greedy";
};

struct DeclaredLimits {
  std::int64_t max_context_chars = 0;
  std::int64_t max_output_chars = 0;
};

struct SubmissionCard {
  std::string submission_id;
  Track track;
  AccessMode access_mode = AccessMode::open_weights;
  // open_weights: "cmd:<template with {artifact} {input} {output}>"
  // closed_weights: endpoint address ("http://host:port")
  // simulated in-process: "sim:<profile json>" (test/scenario wiring)
  std::string interface_descriptor;
  std::string version_identifier;  // closed_weights commitment string
  std::string budget_class_id;
  DecodingPolicy decoding_policy;
  std::string tool_policy_note;
  DeclaredLimits declared_limits;
};

// JSON bindings (canonical: nlohmann objects serialize with sorted keys).
void to_json(nlohmann::json& j, const BudgetClass& v);
void from_json(const nlohmann::json& j, BudgetClass& v);
void to_json(nlohmann::json& j, const Track& v);
void from_json(const nlohmann::json& j, Track& v);
void to_json(nlohmann::json& j, const StochasticityPolicy& v);
void from_json(const nlohmann::json& j, StochasticityPolicy& v);
void to_json(nlohmann::json& j, const RetryPolicy& v);
void from_json(const nlohmann::json& j, RetryPolicy& v);
void to_json(nlohmann::json& j, const InterfaceSpec& v);
void from_json(const nlohmann::json& j, InterfaceSpec& v);
void to_json(nlohmann::json& j, const ScoringPolicyDecl& v);
void from_json(const nlohmann::json& j, ScoringPolicyDecl& v);
void to_json(nlohmann::json& j, const ReleasePolicy& v);
void from_json(const nlohmann::json& j, ReleasePolicy& v);
void to_json(nlohmann::json& j, const Syllabus& v);
void from_json(const nlohmann::json& j, Syllabus& v);
void to_json(nlohmann::json& j, const TaskInstance& v);
void from_json(const nlohmann::json& j, TaskInstance& v);
void to_json(nlohmann::json& j, const ScoringPlan& v);
void from_json(const nlohmann::json& j, ScoringPlan& v);
void to_json(nlohmann::json& j, const IoContract& v);
void from_json(const nlohmann::json& j, IoContract& v);
void to_json(nlohmann::json& j, const TaskDefinition& v);
void from_json(const nlohmann::json& j, TaskDefinition& v);
void to_json(nlohmann::json& j, const DecodingPolicy& v);
void from_json(const nlohmann::json& j, DecodingPolicy& v);
void to_json(nlohmann::json& j, const DeclaredLimits& v);
void from_json(const nlohmann::json& j, DeclaredLimits& v);
void to_json(nlohmann::json& j, const SubmissionCard& v);
void from_json(const nlohmann::json& j, SubmissionCard& v);

// Fig. 3 constants as the default event rulebook: 12,000-char input,
// 1,000-char output, 30s/item, 3 tool calls/item; model + system tracks.
Syllabus default_syllabus();

}  // namespace sealev
