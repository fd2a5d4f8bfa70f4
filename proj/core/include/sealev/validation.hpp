#pragma once

#include "sealev/types.hpp"

#include <string>
#include <vector>

namespace sealev {

struct Violation {
  std::string code;    // machine-readable, e.g. "INPUT_EXCEEDS_BUDGET"
  std::string detail;  // human context ("instance i0042: 13000 > 12000")
};

// Empty report iff the proposal satisfies every TaskDefinition invariant and
// references a known budget class and metric. Deterministic: identical input
// bytes produce an identical report.
std::vector<Violation> validate_task_proposal(const TaskDefinition& proposal,
                                              const Syllabus& syllabus);

// Card-level checks used by the registry before freezing: mode/interface
// coherence, declared limits within the budget class, track present in the
// syllabus.
std::vector<Violation> validate_submission_card(const SubmissionCard& card,
                                                const Syllabus& syllabus);

std::string render_violations(const std::vector<Violation>& violations);

}  // namespace sealev
