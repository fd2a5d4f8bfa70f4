#include "sealev/overlap.hpp"

#include "sealev/error.hpp"
#include "sealev/text.hpp"

namespace sealev {

std::vector<OverlapFlag> check_overlap(const std::vector<TaskDefinition>& tasks,
                                       double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw Error("BAD_THRESHOLD", "similarity threshold must lie in [0,1]");
  }

  struct Ref {
    const std::string* task_id;
    const std::string* instance_id;
    const std::string* prompt;
  };
  std::vector<Ref> all;
  for (const auto& task : tasks) {
    for (const auto& inst : task.instances) {
      all.push_back(Ref{&task.task_id, &inst.instance_id, &inst.prompt});
    }
  }

  std::vector<OverlapFlag> flags;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      double sim = ngram_jaccard(*all[i].prompt, *all[j].prompt);
      if (sim >= threshold) {
        flags.push_back(OverlapFlag{*all[i].task_id, *all[i].instance_id, *all[j].task_id,
                                    *all[j].instance_id, sim});
      }
    }
  }
  return flags;
}

}  // namespace sealev
