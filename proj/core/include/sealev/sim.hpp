#pragma once

#include "sealev/adapters.hpp"
#include "sealev/probes.hpp"
#include "sealev/release.hpp"
#include "sealev/types.hpp"

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace sealev {

// Deterministic simulated participants and adversaries. The simulator tests
// the protocol, not language ability: generated tasks are mechanically
// solvable from the prompt alone, so a frozen solver artifact needs no task
// knowledge (the freeze-before-unseal separation applies to the simulator
// too).
struct SimSolverProfile {
  // oracle | noisy | drifting | slow | malformed | tool_abuser | scripted
  std::string kind = "oracle";
  double accuracy = 1.0;           // noisy: P(answer gold)
  double drift_probability = 0.0;  // drifting: P(flip on a repeated item)
  double latency_seconds = 0.0;    // declared per-item latency
  double malformed_rate = 0.0;     // malformed: P(schema-breaking output)
  std::uint64_t seed = 0;
  // Scripted per-instance behavior (engineered failure counts).
  std::vector<std::string> timeout_instance_ids;
  std::vector<std::string> malformed_instance_ids;
  // Endpoint fault injection: 503-once-then-succeed / always-400.
  std::vector<std::string> transient_fail_instance_ids;
  std::vector<std::string> permanent_fail_instance_ids;
};

void to_json(nlohmann::json& j, const SimSolverProfile& v);
void from_json(const nlohmann::json& j, SimSolverProfile& v);

// The simulated "capability": derives the correct output record from the
// prompt by recognizing the generator templates. Unknown prompts get a plain
// {id, answer} record (dry runs).
nlohmann::json solve_prompt(const std::string& prompt, const std::string& id);

// Raw wire behavior for one item: the output line the solver would emit.
// drift_ids marks the repeated items a drifting endpoint answers
// inconsistently (organizer-side test equipment; see SimSolverProfile).
std::string sim_answer_line(const SimSolverProfile& profile, const std::string& id,
                            const std::string& prompt,
                            const std::set<std::string>* drift_ids);

// In-process adapter: identical answers to the subprocess/endpoint wires but
// with declared (virtual) latencies, so scenario outputs are bit-reproducible.
class InprocSimAdapter : public Adapter {
 public:
  InprocSimAdapter(SimSolverProfile profile,
                   std::shared_ptr<const std::set<std::string>> drift_ids);
  AdapterResult invoke(const ItemRequest& item, const BudgetClass& budget,
                       const InvokeContext& ctx) override;

 private:
  SimSolverProfile profile_;
  std::shared_ptr<const std::set<std::string>> drift_ids_;
};

// Registers the "sim:<profile json>" scheme. drift_ids may be null (shared
// by every drifting profile created through this registry).
void register_sim_scheme(AdapterRegistry& registry,
                         std::shared_ptr<const std::set<std::string>> drift_ids);

// Closed-weights mock endpoint (POST /infer) with the same behavior plus
// HTTP-level fault injection. Binds an ephemeral localhost port.
class SimEndpoint {
 public:
  SimEndpoint(SimSolverProfile profile,
              std::shared_ptr<const std::set<std::string>> drift_ids);
  ~SimEndpoint();
  SimEndpoint(const SimEndpoint&) = delete;
  SimEndpoint& operator=(const SimEndpoint&) = delete;

  std::string url() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// --- Scenario orchestration -------------------------------------------------

struct ScenarioTaskSpec {
  TaskFamily family = TaskFamily::extraction;
  int instances = 100;       // stability: rounded up to whole variant families
  bool scalar_only = false;  // extraction without an entity list
};

struct ScenarioSolverSpec {
  std::string submission_id;
  SimSolverProfile profile;
  TrackKind track = TrackKind::model;
  bool tools_allowed = false;
  AccessMode mode = AccessMode::open_weights;
  std::string wire = "inproc";  // inproc | subprocess | http
  bool late = false;            // attempts to freeze after the deadline
};

struct ScenarioConfig {
  std::vector<ScenarioTaskSpec> tasks;
  ProbePlan probe_plan;
  std::vector<ScenarioSolverSpec> solvers;
  Syllabus syllabus = default_syllabus();
  std::uint64_t seed = 0;
  int workers = 4;
  std::filesystem::path solver_binary;  // subprocess wire only
};

void to_json(nlohmann::json& j, const ScenarioTaskSpec& v);
void from_json(const nlohmann::json& j, ScenarioTaskSpec& v);
void to_json(nlohmann::json& j, const ScenarioSolverSpec& v);
void from_json(const nlohmann::json& j, ScenarioSolverSpec& v);
void to_json(nlohmann::json& j, const ScenarioConfig& v);
void from_json(const nlohmann::json& j, ScenarioConfig& v);

ScenarioConfig load_scenario(const std::filesystem::path& path);

// Synthetic tasks of the three supported families with programmatically
// known gold; byte-identical for a fixed config.
std::vector<TaskDefinition> generate_tasks(const ScenarioConfig& config);

struct ScenarioReport {
  std::map<std::string, std::string> refusals;  // submission -> error code
  std::map<std::string, std::int64_t> policy_violation_items;
  std::map<std::string, StabilityReport> stability;
  bool release_built = false;
  bool verify_passed = false;
  std::string fingerprint;
  std::filesystem::path out_dir;
};

void to_json(nlohmann::json& j, const ScenarioReport& v);

// The complete lifecycle at desk scale: generate -> validate -> seal ->
// freeze -> dry-run -> unseal -> instrument -> run -> score -> release ->
// verify, emitting the same file formats as a real event.
ScenarioReport run_scenario(const ScenarioConfig& config,
                            const std::filesystem::path& out_dir);

// Appendix-size pilot: 5 tasks x ~200 instances, one budget class, three
// deterministic solvers, duplicate probes.
ScenarioConfig pilot_scenario();

}  // namespace sealev
