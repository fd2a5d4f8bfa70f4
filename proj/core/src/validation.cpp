#include "sealev/validation.hpp"

#include <map>
#include <set>
#include <sstream>

namespace sealev {

namespace {

void add(std::vector<Violation>& out, std::string code, std::string detail) {
  out.push_back(Violation{std::move(code), std::move(detail)});
}

}  // namespace

std::vector<Violation> validate_task_proposal(const TaskDefinition& proposal,
                                              const Syllabus& syllabus) {
  std::vector<Violation> out;

  if (proposal.task_id.empty()) add(out, "MISSING_TASK_ID", "task_id is empty");
  if (proposal.instances.empty()) add(out, "EMPTY_INSTANCES", "task has no instances");

  const BudgetClass* budget = syllabus.find_budget_class(proposal.budget_class_id);
  if (budget == nullptr) {
    add(out, "UNKNOWN_BUDGET_CLASS", proposal.budget_class_id);
  }
  if (!syllabus.metric_known(proposal.scoring_plan.metric_id)) {
    add(out, "UNKNOWN_METRIC", proposal.scoring_plan.metric_id);
  }
  if (proposal.io_contract.output_schema.fields.empty()) {
    add(out, "EMPTY_OUTPUT_SCHEMA", "output schema declares no fields");
  }

  std::set<std::string> ids;
  std::set<std::string> non_probe_ids;
  for (const auto& inst : proposal.instances) {
    if (!ids.insert(inst.instance_id).second) {
      add(out, "DUPLICATE_INSTANCE_ID", inst.instance_id);
    }
    if (!inst.is_probe) non_probe_ids.insert(inst.instance_id);
    if (budget != nullptr &&
        static_cast<std::int64_t>(inst.prompt.size()) > budget->max_input_chars) {
      std::ostringstream detail;
      detail << inst.instance_id << ": " << inst.prompt.size() << " > "
             << budget->max_input_chars;
      add(out, "INPUT_EXCEEDS_BUDGET", detail.str());
    }
  }

  for (const auto& inst : proposal.instances) {
    if (inst.is_probe && non_probe_ids.count(inst.probe_origin) == 0) {
      add(out, "BAD_PROBE_ORIGIN",
          inst.instance_id + " -> " + (inst.probe_origin.empty() ? "<none>" : inst.probe_origin));
    }
  }

  if (proposal.family == TaskFamily::stability) {
    std::map<std::string, std::int64_t> family_sizes;
    for (const auto& inst : proposal.instances) {
      if (inst.is_probe) continue;
      if (inst.family_id.empty()) {
        add(out, "MISSING_FAMILY_ID", inst.instance_id);
        continue;
      }
      ++family_sizes[inst.family_id];
    }
    std::int64_t expected = family_sizes.empty() ? 0 : family_sizes.begin()->second;
    for (const auto& [fid, size] : family_sizes) {
      if (size != expected) {
        std::ostringstream detail;
        detail << fid << " has " << size << " variants, expected " << expected;
        add(out, "UNEVEN_VARIANT_FAMILY", detail.str());
      }
    }
  }

  return out;
}

std::vector<Violation> validate_submission_card(const SubmissionCard& card,
                                                const Syllabus& syllabus) {
  std::vector<Violation> out;

  if (card.submission_id.empty()) add(out, "MISSING_SUBMISSION_ID", "");

  const Track* track = syllabus.find_track(card.track.kind);
  if (track == nullptr) {
    add(out, "UNKNOWN_TRACK", track_kind_name(card.track.kind));
  } else if (card.track.tools_allowed && !track->tools_allowed) {
    add(out, "TOOLS_FORBIDDEN", "track does not allow tools at this event");
  }
  if (card.track.kind == TrackKind::model && card.track.tools_allowed) {
    add(out, "TOOLS_FORBIDDEN", "model track never allows tools");
  }

  if (card.access_mode == AccessMode::open_weights) {
    if (card.interface_descriptor.rfind("cmd:", 0) != 0 &&
        card.interface_descriptor.rfind("sim:", 0) != 0) {
      add(out, "MISSING_SUBPROCESS_CONTRACT", card.interface_descriptor);
    }
  } else {
    const bool has_endpoint = card.interface_descriptor.rfind("http://", 0) == 0 ||
                              card.interface_descriptor.rfind("https://", 0) == 0 ||
                              card.interface_descriptor.rfind("sim:", 0) == 0;
    if (!has_endpoint) add(out, "MISSING_ENDPOINT", card.interface_descriptor);
    if (card.version_identifier.empty()) add(out, "MISSING_VERSION_IDENTIFIER", "");
  }

  const BudgetClass* budget = syllabus.find_budget_class(card.budget_class_id);
  if (budget == nullptr) {
    add(out, "UNKNOWN_BUDGET_CLASS", card.budget_class_id);
  } else {
    if (card.declared_limits.max_context_chars > budget->max_input_chars ||
        card.declared_limits.max_output_chars > budget->max_output_chars) {
      add(out, "DECLARED_LIMITS_EXCEED_BUDGET", card.budget_class_id);
    }
  }

  if (!card.decoding_policy.deterministic && card.decoding_policy.run_count < 1) {
    add(out, "BAD_DECODING_POLICY", "stochastic decoding requires run_count >= 1");
  }

  return out;
}

std::string render_violations(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.code;
    if (!v.detail.empty()) out << " (" << v.detail << ")";
    out << "\n";
  }
  return out.str();
}

}  // namespace sealev
