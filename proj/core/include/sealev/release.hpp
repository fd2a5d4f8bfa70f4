#pragma once

#include "sealev/change_control.hpp"
#include "sealev/probes.hpp"
#include "sealev/registry.hpp"
#include "sealev/runner.hpp"
#include "sealev/scoring.hpp"
#include "sealev/sealing.hpp"
#include "sealev/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sealev {

// Replayable record of one submission's evaluation. Serialization is
// canonical (sorted keys) so manifests hash reproducibly.
struct RunManifest {
  std::string submission_id;
  TrackKind track = TrackKind::model;
  AccessMode mode = AccessMode::open_weights;
  std::string commitment;  // artifact hash (open) or endpoint version (closed)
  std::string budget_class;
  std::string decoding;
  std::int64_t max_output_chars = 0;
  std::int64_t total_items = 0;  // instances x runs
  std::int64_t ok_count = 0;
  std::int64_t timeout_count = 0;
  std::int64_t format_error_count = 0;
  std::int64_t adapter_error_count = 0;
  std::int64_t budget_exceeded_count = 0;
  // Aggregate runtime metadata (the only per-run detail closed endpoints
  // release): min, q25, median, q75, max.
  std::vector<double> runtime_quartiles;
  std::string notes = "none";

  std::string timeouts_counter() const;       // "3/1200"
  std::string format_errors_counter() const;  // "1/1200"
};

void to_json(nlohmann::json& j, const RunManifest& v);
void from_json(const nlohmann::json& j, RunManifest& v);

// Counts computed from the result stream; refuses (Error
// "INCOMPLETE_RESULTS", detail lists missing items) unless every
// (instance, run) pair of the instrumented bundle is present.
RunManifest emit_manifest(const std::vector<ItemResult>& results,
                          const FrozenSubmission& frozen,
                          const std::vector<TaskDefinition>& instrumented_tasks,
                          const Syllabus& syllabus);

struct ReleaseInputs {
  std::vector<TaskDefinition> tasks;  // original (pre-instrumentation) task set
  Syllabus syllabus;
  std::vector<FrozenSubmission> submissions;
  std::map<std::string, std::vector<TaskScore>> scores;
  std::map<std::string, StabilityReport> stability;
  std::map<std::string, RunManifest> manifests;
  std::vector<Leaderboard> leaderboards;
  SensitivityReport sensitivity;
  ChangeControlLog change_log;
  std::string sealed_fingerprint;
  KeyMaterial key;  // secrecy is temporary: released with stage 2
  SealNonce nonce{};
  ProbePlan probe_plan;
  std::uint64_t run_seed = 0;
  int workers = 1;
  Timestamp unseal_time = 0;
  std::string harness_version;
  // Per-item logs are released for open-weights submissions only.
  std::map<std::string, std::vector<ItemResult>> results_by_submission;
};

// Stage 1: leaderboards + generated analysis summary (budgets included).
// Stage 2: the full reproducibility bundle, verifiable against the
// pre-published fingerprint. Stage 2 requires stage 1 on disk and a clean
// change-control state ("BLOCKED_BY_CHANGE_CONTROL" otherwise). Every file
// lands in the stage's hash index.
void build_release(int stage, const ReleaseInputs& inputs,
                   const std::filesystem::path& out_dir);

struct AuditCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  bool all_passed() const;
};

// Third-party entry point over a stage-2 bundle directory:
//   (a) reseal: task set re-encrypts (recorded key+nonce) to the published
//       fingerprint,
//   (b) manifests: counters internally consistent and conserved,
//   (c) leaderboard: recomputable from released per-task scores,
//   (d) hash_index: every file matches its recorded hash.
AuditReport verify_release(const std::filesystem::path& stage2_dir,
                           const std::string& published_fingerprint);

struct ReplayOutcome {
  std::string submission_id;
  bool replayed = false;
  bool scores_match = false;
  std::string reason;  // skip/refusal reason or "ok"
};

struct ReplayReport {
  std::vector<ReplayOutcome> outcomes;
  bool all_replayed_match() const;
};

// Re-runs the harness on the released tasks with the recorded seed and
// policies. Deterministic submissions must reproduce byte-identical task
// scores. Open-weights artifacts are re-verified against their commitments
// (mismatch -> refused); missing artifacts and unreachable endpoints are
// skipped with a reason.
ReplayReport replay(const std::filesystem::path& stage2_dir,
                    const std::filesystem::path& artifacts_dir,
                    const AdapterRegistry& adapters);

// {relative path -> sha256} over every regular file under dir (the index
// file itself excluded), written as hash_index.json.
nlohmann::json compute_hash_index(const std::filesystem::path& dir);

}  // namespace sealev
