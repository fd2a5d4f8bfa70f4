#include "sealev/probes.hpp"

#include "sealev/error.hpp"
#include "sealev/hashing.hpp"
#include "sealev/rng.hpp"

#include <algorithm>
#include <cmath>

namespace sealev {

void to_json(nlohmann::json& j, const ProbePlan& v) {
  j = {{"probe_fraction", v.probe_fraction},
       {"duplicate_fraction", v.duplicate_fraction},
       {"perturb_fraction", v.perturb_fraction},
       {"perturbation_policy", v.perturbation_policy},
       {"seed", v.seed}};
}

void from_json(const nlohmann::json& j, ProbePlan& v) {
  v.probe_fraction = j.value("probe_fraction", 0.0);
  v.duplicate_fraction = j.value("duplicate_fraction", 1.0);
  v.perturb_fraction = j.value("perturb_fraction", 0.0);
  v.perturbation_policy = j.value("perturbation_policy", "whitespace_punctuation");
  v.seed = j.value("seed", std::uint64_t{0});
}

std::string perturb_prompt(const std::string& prompt, std::uint64_t seed) {
  Rng rng(seed);
  std::string out = prompt;
  // Three gold-preserving edits; retry with the next op if one is a no-op so
  // the perturbed prompt always differs from the original.
  for (int attempt = 0; attempt < 3; ++attempt) {
    switch ((rng.next() + attempt) % 3) {
      case 0: {  // duplicate one internal space
        std::vector<std::size_t> spaces;
        for (std::size_t i = 0; i < out.size(); ++i) {
          if (out[i] == ' ') spaces.push_back(i);
        }
        if (spaces.empty()) continue;
        out.insert(spaces[rng.below(spaces.size())], 1, ' ');
        return out;
      }
      case 1: {  // toggle the trailing period
        if (!out.empty() && out.back() == '.') {
          out.pop_back();
        } else {
          out.push_back('.');
        }
        return out;
      }
      case 2: {  // append a trailing space
        out.push_back(' ');
        return out;
      }
    }
  }
  out.push_back(' ');
  return out;
}

std::vector<TaskDefinition> inject_probes(const std::vector<TaskDefinition>& tasks,
                                          const ProbePlan& plan) {
  if (plan.probe_fraction < 0.0 || plan.probe_fraction > 1.0) {
    throw Error("BAD_PROBE_PLAN", "probe_fraction outside [0,1]");
  }
  if (std::abs(plan.duplicate_fraction + plan.perturb_fraction - 1.0) > 1e-9) {
    throw Error("BAD_PROBE_PLAN", "duplicate_fraction + perturb_fraction must sum to 1");
  }
  if (plan.probe_fraction == 0.0) return tasks;

  std::vector<TaskDefinition> out = tasks;
  for (auto& task : out) {
    if (task.instances.empty()) {
      throw Error("BAD_PROBE_PLAN", "cannot probe empty task " + task.task_id);
    }
    const std::size_t n = task.instances.size();
    const std::size_t probe_count =
        static_cast<std::size_t>(std::ceil(plan.probe_fraction * static_cast<double>(n)));
    const std::size_t duplicate_count = static_cast<std::size_t>(
        std::llround(plan.duplicate_fraction * static_cast<double>(probe_count)));

    Rng rng(SeedMixer(plan.seed).mix(task.task_id).value());

    // Origins sampled without replacement: at most one probe per origin.
    std::vector<std::size_t> origin_indices(n);
    for (std::size_t i = 0; i < n; ++i) origin_indices[i] = i;
    rng.shuffle(origin_indices);
    origin_indices.resize(std::min(probe_count, n));

    std::vector<TaskInstance> probes;
    for (std::size_t k = 0; k < origin_indices.size(); ++k) {
      const TaskInstance& origin = task.instances[origin_indices[k]];
      TaskInstance probe;
      const std::uint64_t probe_seed =
          SeedMixer(plan.seed).mix(task.task_id).mix(origin.instance_id).mix(k).value();
      // Opaque id: the id shape must not mark probes on the wire.
      probe.instance_id = "q" + sha256_hex(std::to_string(probe_seed)).substr(0, 12);
      probe.is_probe = true;
      probe.probe_origin = origin.instance_id;
      probe.gold = origin.gold;
      probe.family_id = origin.family_id;
      probe.prompt = k < duplicate_count ? origin.prompt : perturb_prompt(origin.prompt, probe_seed);
      probes.push_back(std::move(probe));
    }

    for (auto& probe : probes) task.instances.push_back(std::move(probe));
    Rng placement(SeedMixer(plan.seed).mix(task.task_id).mix("placement").value());
    placement.shuffle(task.instances);
  }
  return out;
}

}  // namespace sealev
