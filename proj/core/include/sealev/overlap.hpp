#pragma once

#include "sealev/types.hpp"

#include <string>
#include <vector>

namespace sealev {

struct OverlapFlag {
  std::string task_a;
  std::string instance_a;
  std::string task_b;
  std::string instance_b;
  double similarity = 0.0;
};

// Curation-time near-duplicate screen: every instance pair (within and across
// tasks) whose character 5-gram Jaccard similarity >= threshold, each
// unordered pair reported once. threshold must lie in [0,1].
std::vector<OverlapFlag> check_overlap(const std::vector<TaskDefinition>& tasks,
                                       double threshold);

}  // namespace sealev
