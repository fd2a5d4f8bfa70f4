#pragma once

#include "sealev/types.hpp"

#include <cstdint>
#include <vector>

namespace sealev {

// Consistency-probe instrumentation: duplicated or mildly perturbed items
// injected to detect instability and endpoint drift. Probes are excluded
// from main scoring and land in the stability report.
struct ProbePlan {
  double probe_fraction = 0.0;      // ceil(fraction * instance count) probes per task
  double duplicate_fraction = 1.0;  // + perturb_fraction sums to 1
  double perturb_fraction = 0.0;
  std::string perturbation_policy = "whitespace_punctuation";
  std::uint64_t seed = 0;
};

void to_json(nlohmann::json& j, const ProbePlan& v);
void from_json(const nlohmann::json& j, ProbePlan& v);

// Appends probe instances per task (origins sampled without replacement,
// opaque seeded ids, gold preserved) and interleaves placement with a seeded
// shuffle so probes are not positionally identifiable. Deterministic for a
// fixed seed. probe_fraction 0 returns the input unchanged.
std::vector<TaskDefinition> inject_probes(const std::vector<TaskDefinition>& tasks,
                                          const ProbePlan& plan);

// Whitespace/punctuation-level rewording that never changes the gold.
std::string perturb_prompt(const std::string& prompt, std::uint64_t seed);

}  // namespace sealev
