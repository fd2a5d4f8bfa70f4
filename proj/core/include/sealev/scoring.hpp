#pragma once

#include "sealev/runner.hpp"
#include "sealev/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sealev {

struct TaskScore {
  std::string submission_id;
  std::string task_id;
  std::string metric_id;
  double score = 0.0;           // in [0,1]
  std::int64_t item_count = 0;  // non-probe instances
  nlohmann::json breakdown = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const TaskScore& v);
void from_json(const nlohmann::json& j, TaskScore& v);

// Pure function of results + plan; re-scoring the same results is
// byte-identical (replay determinism). Probe results never contribute.
// Missing or errored items score 0 within their task.
TaskScore score_task(const TaskDefinition& task, const std::vector<ItemResult>& results,
                     const std::string& submission_id);

// Family scorers (dispatched by score_task; exposed for direct testing).
// extraction: 0 if schema-invalid, else mean over scalar-field exact matches
// (normalized) with the entity list scored by set-F1.
// evidence_abstention: the preregistered parameter table over
// answerable/abstain/support-overlap outcomes.
// stability: per variant family, plan-weighted mean of correctness and
// consistency = (modal count - 1) / (v - 1).
double extraction_item_score(const ExtractionGold& gold, const nlohmann::json& answer,
                             const ScoringPlan& plan);
double evidence_item_score(const EvidenceGold& gold, const nlohmann::json& answer,
                           const ScoringPlan& plan);

// Set-F1 between normalized entity sets.
double entity_set_f1(const std::vector<std::string>& gold,
                     const std::vector<std::string>& predicted);

// Canonical comparable form of a parsed answer record: the record minus its
// wire id, string leaves normalized, dumped with sorted keys.
std::string canonical_answer_form(const nlohmann::json& parsed_answer);

struct StabilityReport {
  std::string submission_id;
  std::int64_t probes_total = 0;
  std::int64_t probes_consistent = 0;
  std::vector<std::pair<std::string, std::string>> inconsistency_examples;  // bounded
  std::optional<double> stability_rate;  // absent when probes_total == 0
};

void to_json(nlohmann::json& j, const StabilityReport& v);
void from_json(const nlohmann::json& j, StabilityReport& v);

// Probe-vs-origin consistency, compared per run under the same answer
// normalization as scoring. Lives outside the main score.
StabilityReport stability_report(const std::vector<TaskDefinition>& tasks,
                                 const std::vector<ItemResult>& results,
                                 const std::string& submission_id,
                                 std::size_t max_examples = 10);

// "macro": unweighted mean of task scores (the ranked aggregate).
// "micro": instance-count-weighted mean (sensitivity diagnostic).
// Refuses (Error "MISSING_TASK_SCORE") when any expected task lacks a score.
double aggregate(const std::vector<TaskScore>& per_task,
                 const std::vector<std::string>& expected_task_ids, const std::string& policy);

struct LeaderboardRow {
  std::string submission_id;
  TrackKind track = TrackKind::model;
  AccessMode access_mode = AccessMode::open_weights;
  double overall_score = 0.0;
  std::map<std::string, double> per_task_scores;
  std::string budget_class;
  double runtime_median_seconds = 0.0;
  double error_rate = 0.0;
  std::int64_t timeout_count = 0;
  int run_count = 1;
};

struct Leaderboard {
  TrackKind track = TrackKind::model;
  AccessMode access_mode = AccessMode::open_weights;
  std::vector<LeaderboardRow> rows;  // sorted: overall desc, timeouts asc, id asc
};

void to_json(nlohmann::json& j, const LeaderboardRow& v);
void from_json(const nlohmann::json& j, LeaderboardRow& v);
void to_json(nlohmann::json& j, const Leaderboard& v);
void from_json(const nlohmann::json& j, Leaderboard& v);

// Partitioned by (track, access mode) — assurance tiers are never merged.
std::vector<Leaderboard> build_leaderboard(
    const std::vector<TaskDefinition>& tasks,
    const std::vector<FrozenSubmission>& submissions,
    const std::map<std::string, std::vector<TaskScore>>& scores_by_submission,
    const std::vector<ItemResult>& all_results, const Syllabus& syllabus);

std::string render_leaderboard_table(const std::vector<Leaderboard>& boards);

struct SensitivityReport {
  std::vector<std::string> macro_order;
  std::vector<std::string> micro_order;
  std::optional<double> kendall_tau;  // absent when degenerate
  bool degenerate = false;
};

void to_json(nlohmann::json& j, const SensitivityReport& v);

// Diagnostic only: rank agreement (Kendall tau-b) between macro and micro
// orderings across submissions.
SensitivityReport aggregation_sensitivity(
    const std::map<std::string, std::vector<TaskScore>>& scores_by_submission,
    const std::vector<std::string>& expected_task_ids);

}  // namespace sealev
