#pragma once

#include "sealev/types.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sealev {

struct ToolCallRecord {
  int sequence_number = 0;  // 1-based
  std::string query;
  std::int64_t response_chars = 0;
  double duration_seconds = 0.0;
  bool allowed = false;  // calls beyond the cap are logged with allowed=false
};

// Organizer-controlled retrieval gateway. All system-track tool access passes
// through here: per-item call caps, context-budget accounting, full logging.
// The corpus is organizer-provided; ranking reuses the curation overlap
// similarity.
class ToolProxy {
 public:
  explicit ToolProxy(std::vector<std::string> corpus, int top_k = 3);

  const std::vector<std::string>& corpus() const { return corpus_; }
  int top_k() const { return top_k_; }

 private:
  std::vector<std::string> corpus_;
  int top_k_;
};

// Per-item session: call counter, remaining context budget, call log.
// Sessions are item-local and therefore uncontended.
class ToolSession {
 public:
  struct Reply {
    bool allowed = false;
    std::string response;  // passages joined by newlines, or the refusal code
  };

  ToolSession(const ToolProxy* proxy, const BudgetClass& budget, bool tools_allowed,
              std::int64_t prompt_chars);

  // Answers with top-k passages while under the cap; refuses with
  // "TOOL_BUDGET_EXCEEDED" beyond it and with "TOOLS_FORBIDDEN" on tracks
  // without tool access (the latter also counts as a policy violation).
  // Responses are truncated to the remaining context budget.
  Reply retrieve(const std::string& query);

  const std::vector<ToolCallRecord>& log() const { return log_; }
  int policy_violations() const { return policy_violations_; }
  std::int64_t remaining_context_chars() const { return remaining_context_; }

 private:
  const ToolProxy* proxy_;
  std::int64_t call_cap_;
  bool tools_allowed_;
  std::int64_t remaining_context_;
  std::vector<ToolCallRecord> log_;
  int calls_made_ = 0;
  int policy_violations_ = 0;
};

}  // namespace sealev
