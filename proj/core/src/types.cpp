#include "sealev/types.hpp"

#include "sealev/error.hpp"

#include <algorithm>

namespace sealev {

std::string track_kind_name(TrackKind kind) {
  return kind == TrackKind::model ? "model" : "system";
}

TrackKind track_kind_from_name(std::string_view name) {
  if (name == "model") return TrackKind::model;
  if (name == "system") return TrackKind::system;
  throw Error("UNKNOWN_TRACK", std::string(name));
}

std::string task_family_name(TaskFamily family) {
  switch (family) {
    case TaskFamily::extraction: return "extraction";
    case TaskFamily::evidence_qa: return "evidence_qa";
    case TaskFamily::stability: return "stability";
    case TaskFamily::custom: return "custom";
  }
  return "custom";
}

TaskFamily task_family_from_name(std::string_view name) {
  if (name == "extraction") return TaskFamily::extraction;
  if (name == "evidence_qa") return TaskFamily::evidence_qa;
  if (name == "stability") return TaskFamily::stability;
  if (name == "custom") return TaskFamily::custom;
  throw Error("UNKNOWN_FAMILY", std::string(name));
}

std::string access_mode_name(AccessMode mode) {
  return mode == AccessMode::open_weights ? "open_weights" : "closed_weights";
}

AccessMode access_mode_from_name(std::string_view name) {
  if (name == "open_weights") return AccessMode::open_weights;
  if (name == "closed_weights") return AccessMode::closed_weights;
  throw Error("UNKNOWN_ACCESS_MODE", std::string(name));
}

const BudgetClass* Syllabus::find_budget_class(std::string_view id) const {
  for (const auto& bc : budget_classes) {
    if (bc.id == id) return &bc;
  }
  return nullptr;
}

const Track* Syllabus::find_track(TrackKind kind) const {
  for (const auto& t : tracks) {
    if (t.kind == kind) return &t;
  }
  return nullptr;
}

bool Syllabus::metric_known(std::string_view metric_id) const {
  return std::find(scoring_policy.metric_ids.begin(), scoring_policy.metric_ids.end(),
                   metric_id) != scoring_policy.metric_ids.end();
}

void Syllabus::check() const {
  if (budget_classes.empty()) throw Error("INVALID_SYLLABUS", "no budget classes");
  if (tracks.empty()) throw Error("INVALID_SYLLABUS", "no tracks");
  for (const auto& bc : budget_classes) {
    if (bc.max_input_chars <= 0 || bc.max_output_chars <= 0 ||
        bc.max_wall_clock_per_item <= 0.0) {
      throw Error("INVALID_SYLLABUS", "budget class " + bc.id + " has non-positive limits");
    }
    if (bc.max_tool_calls_per_item < 0) {
      throw Error("INVALID_SYLLABUS", "budget class " + bc.id + " has negative tool cap");
    }
  }
  for (const auto& t : tracks) {
    if (t.kind == TrackKind::model && t.tools_allowed) {
      throw Error("INVALID_SYLLABUS", "model track must not allow tools");
    }
  }
  if (retry_policy.max_transient_retries < 0) {
    throw Error("INVALID_SYLLABUS", "negative retry maximum");
  }
  if (stochasticity.kind == StochasticityKind::fixed_run_count && stochasticity.run_count < 1) {
    throw Error("INVALID_SYLLABUS", "fixed-run-count policy requires run_count >= 1");
  }
}

nlohmann::json gold_to_json(const Gold& gold) {
  nlohmann::json j;
  if (const auto* g = std::get_if<ExtractionGold>(&gold)) {
    j["kind"] = "extraction";
    j["fields"] = g->fields;
    j["entities"] = g->entities;
  } else if (const auto* g = std::get_if<EvidenceGold>(&gold)) {
    j["kind"] = "evidence";
    j["answerable"] = g->answerable;
    j["answer"] = g->answer;
    j["span"] = {g->span_begin, g->span_end};
  } else if (const auto* g = std::get_if<StabilityGold>(&gold)) {
    j["kind"] = "stability";
    j["decision"] = g->decision;
  } else if (const auto* g = std::get_if<CustomGold>(&gold)) {
    j["kind"] = "custom";
    j["value"] = g->value;
  }
  return j;
}

Gold gold_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "extraction") {
    ExtractionGold g;
    g.fields = j.at("fields").get<std::map<std::string, std::string>>();
    g.entities = j.value("entities", std::vector<std::string>{});
    return g;
  }
  if (kind == "evidence") {
    EvidenceGold g;
    g.answerable = j.at("answerable").get<bool>();
    g.answer = j.value("answer", std::string{});
    auto span = j.value("span", std::vector<std::int64_t>{-1, -1});
    if (span.size() == 2) {
      g.span_begin = span[0];
      g.span_end = span[1];
    }
    return g;
  }
  if (kind == "stability") {
    StabilityGold g;
    g.decision = j.at("decision").get<std::string>();
    return g;
  }
  if (kind == "custom") {
    CustomGold g;
    g.value = j.value("value", nlohmann::json());
    return g;
  }
  throw Error("UNKNOWN_GOLD_KIND", kind);
}

double ScoringPlan::param(const std::string& key, double fallback) const {
  auto it = parameters.find(key);
  if (it == parameters.end() || !it->is_number()) return fallback;
  return it->get<double>();
}

const TaskInstance* TaskDefinition::find_instance(std::string_view id) const {
  for (const auto& inst : instances) {
    if (inst.instance_id == id) return &inst;
  }
  return nullptr;
}

std::int64_t TaskDefinition::non_probe_count() const {
  return static_cast<std::int64_t>(
      std::count_if(instances.begin(), instances.end(),
                    [](const TaskInstance& i) { return !i.is_probe; }));
}

// --- JSON bindings ---------------------------------------------------------

void to_json(nlohmann::json& j, const BudgetClass& v) {
  j = {{"id", v.id},
       {"max_input_chars", v.max_input_chars},
       {"max_output_chars", v.max_output_chars},
       {"max_wall_clock_per_item", v.max_wall_clock_per_item},
       {"max_tool_calls_per_item", v.max_tool_calls_per_item}};
}

void from_json(const nlohmann::json& j, BudgetClass& v) {
  v.id = j.at("id").get<std::string>();
  v.max_input_chars = j.at("max_input_chars").get<std::int64_t>();
  v.max_output_chars = j.at("max_output_chars").get<std::int64_t>();
  v.max_wall_clock_per_item = j.at("max_wall_clock_per_item").get<double>();
  v.max_tool_calls_per_item = j.at("max_tool_calls_per_item").get<std::int64_t>();
}

void to_json(nlohmann::json& j, const Track& v) {
  j = {{"kind", track_kind_name(v.kind)}, {"tools_allowed", v.tools_allowed}};
}

void from_json(const nlohmann::json& j, Track& v) {
  v.kind = track_kind_from_name(j.at("kind").get<std::string>());
  v.tools_allowed = j.at("tools_allowed").get<bool>();
}

void to_json(nlohmann::json& j, const StochasticityPolicy& v) {
  j = {{"kind", v.kind == StochasticityKind::deterministic ? "deterministic"
                                                           : "fixed_run_count"},
       {"run_count", v.run_count}};
}

void from_json(const nlohmann::json& j, StochasticityPolicy& v) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "deterministic") {
    v.kind = StochasticityKind::deterministic;
  } else if (kind == "fixed_run_count") {
    v.kind = StochasticityKind::fixed_run_count;
  } else {
    throw Error("UNKNOWN_STOCHASTICITY", kind);
  }
  v.run_count = j.value("run_count", 1);
}

void to_json(nlohmann::json& j, const RetryPolicy& v) {
  j = {{"max_transient_retries", v.max_transient_retries}};
}

void from_json(const nlohmann::json& j, RetryPolicy& v) {
  v.max_transient_retries = j.at("max_transient_retries").get<int>();
}

void to_json(nlohmann::json& j, const InterfaceSpec& v) {
  j = {{"input", v.input}, {"output", v.output}};
}

void from_json(const nlohmann::json& j, InterfaceSpec& v) {
  v.input = j.value("input", "text");
  v.output = j.value("output", "json");
}

void to_json(nlohmann::json& j, const ScoringPolicyDecl& v) {
  j = {{"aggregation", v.aggregation}, {"metrics", v.metric_ids}};
}

void from_json(const nlohmann::json& j, ScoringPolicyDecl& v) {
  v.aggregation = j.value("aggregation", "macro");
  v.metric_ids = j.value("metrics", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const ReleasePolicy& v) {
  j = {{"artifacts", v.artifacts}};
}

void from_json(const nlohmann::json& j, ReleasePolicy& v) {
  v.artifacts = j.value("artifacts", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const Syllabus& v) {
  j = {{"interface", v.interface_spec},
       {"budget_classes", v.budget_classes},
       {"tracks", v.tracks},
       {"scoring_policy", v.scoring_policy},
       {"release_policy", v.release_policy},
       {"stochasticity", v.stochasticity},
       {"retry_policy", v.retry_policy}};
}

void from_json(const nlohmann::json& j, Syllabus& v) {
  v.interface_spec = j.value("interface", InterfaceSpec{});
  v.budget_classes = j.at("budget_classes").get<std::vector<BudgetClass>>();
  v.tracks = j.at("tracks").get<std::vector<Track>>();
  v.scoring_policy = j.value("scoring_policy", ScoringPolicyDecl{});
  v.release_policy = j.value("release_policy", ReleasePolicy{});
  v.stochasticity = j.value("stochasticity", StochasticityPolicy{});
  v.retry_policy = j.value("retry_policy", RetryPolicy{});
}

void to_json(nlohmann::json& j, const TaskInstance& v) {
  j = {{"instance_id", v.instance_id}, {"prompt", v.prompt}, {"gold", gold_to_json(v.gold)}};
  if (!v.family_id.empty()) j["family_id"] = v.family_id;
  if (v.is_probe) {
    j["is_probe"] = true;
    j["probe_origin"] = v.probe_origin;
  }
}

void from_json(const nlohmann::json& j, TaskInstance& v) {
  v.instance_id = j.at("instance_id").get<std::string>();
  v.prompt = j.at("prompt").get<std::string>();
  v.gold = gold_from_json(j.at("gold"));
  v.family_id = j.value("family_id", std::string{});
  v.is_probe = j.value("is_probe", false);
  v.probe_origin = j.value("probe_origin", std::string{});
}

void to_json(nlohmann::json& j, const ScoringPlan& v) {
  j = {{"metric_id", v.metric_id}, {"parameters", v.parameters}};
}

void from_json(const nlohmann::json& j, ScoringPlan& v) {
  v.metric_id = j.at("metric_id").get<std::string>();
  v.parameters = j.value("parameters", nlohmann::json::object());
}

void to_json(nlohmann::json& j, const IoContract& v) {
  j = {{"input", v.input}, {"output_schema", v.output_schema}};
}

void from_json(const nlohmann::json& j, IoContract& v) {
  v.input = j.value("input", "text");
  v.output_schema = j.at("output_schema").get<OutputSchema>();
}

void to_json(nlohmann::json& j, const TaskDefinition& v) {
  j = {{"task_id", v.task_id},
       {"title", v.title},
       {"family", task_family_name(v.family)},
       {"budget_class_id", v.budget_class_id},
       {"io_contract", v.io_contract},
       {"scoring_plan", v.scoring_plan}};
  // Instances are carried separately in the line-delimited instance file;
  // embedding them here is used by the sealed archive only.
  j["instances"] = v.instances;
}

void from_json(const nlohmann::json& j, TaskDefinition& v) {
  v.task_id = j.at("task_id").get<std::string>();
  v.title = j.value("title", std::string{});
  v.family = task_family_from_name(j.at("family").get<std::string>());
  v.budget_class_id = j.at("budget_class_id").get<std::string>();
  v.io_contract = j.at("io_contract").get<IoContract>();
  v.scoring_plan = j.at("scoring_plan").get<ScoringPlan>();
  v.instances = j.value("instances", std::vector<TaskInstance>{});
}

void to_json(nlohmann::json& j, const DecodingPolicy& v) {
  j = {{"deterministic", v.deterministic},
       {"run_count", v.run_count},
       {"description", v.description}};
}

void from_json(const nlohmann::json& j, DecodingPolicy& v) {
  v.deterministic = j.value("deterministic", true);
  v.run_count = j.value("run_count", 1);
  v.description = j.value("description", "greedy");
}

void to_json(nlohmann::json& j, const DeclaredLimits& v) {
  j = {{"max_context_chars", v.max_context_chars}, {"max_output_chars", v.max_output_chars}};
}

void from_json(const nlohmann::json& j, DeclaredLimits& v) {
  v.max_context_chars = j.at("max_context_chars").get<std::int64_t>();
  v.max_output_chars = j.at("max_output_chars").get<std::int64_t>();
}

void to_json(nlohmann::json& j, const SubmissionCard& v) {
  j = {{"submission_id", v.submission_id},
       {"track", v.track},
       {"access_mode", access_mode_name(v.access_mode)},
       {"interface", v.interface_descriptor},
       {"version", v.version_identifier},
       {"budget_class_id", v.budget_class_id},
       {"decoding", v.decoding_policy},
       {"tool_policy_note", v.tool_policy_note},
       {"declared_limits", v.declared_limits}};
}

void from_json(const nlohmann::json& j, SubmissionCard& v) {
  v.submission_id = j.at("submission_id").get<std::string>();
  v.track = j.at("track").get<Track>();
  v.access_mode = access_mode_from_name(j.at("access_mode").get<std::string>());
  v.interface_descriptor = j.at("interface").get<std::string>();
  v.version_identifier = j.value("version", std::string{});
  v.budget_class_id = j.at("budget_class_id").get<std::string>();
  v.decoding_policy = j.value("decoding", DecodingPolicy{});
  v.tool_policy_note = j.value("tool_policy_note", std::string{});
  v.declared_limits = j.at("declared_limits").get<DeclaredLimits>();
}

Syllabus default_syllabus() {
  Syllabus s;
  s.interface_spec = {"text", "json"};
  s.budget_classes = {{"A", 12000, 1000, 30.0, 3}};
  s.tracks = {{TrackKind::model, false}, {TrackKind::system, true}};
  s.scoring_policy.aggregation = "macro";
  s.scoring_policy.metric_ids = {"exact_match_schema", "evidence_abstention", "stability"};
  s.release_policy.artifacts = {"tasks", "scores", "manifests", "harness"};
  s.stochasticity = {StochasticityKind::deterministic, 1};
  s.retry_policy = {1};
  return s;
}

}  // namespace sealev
