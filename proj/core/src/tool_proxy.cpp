#include "sealev/tool_proxy.hpp"

#include "sealev/text.hpp"

#include <algorithm>
#include <utility>

namespace sealev {

ToolProxy::ToolProxy(std::vector<std::string> corpus, int top_k)
    : corpus_(std::move(corpus)), top_k_(top_k) {}

ToolSession::ToolSession(const ToolProxy* proxy, const BudgetClass& budget, bool tools_allowed,
                         std::int64_t prompt_chars)
    : proxy_(proxy),
      call_cap_(budget.max_tool_calls_per_item),
      tools_allowed_(tools_allowed && budget.max_tool_calls_per_item > 0),
      remaining_context_(std::max<std::int64_t>(0, budget.max_input_chars - prompt_chars)) {}

ToolSession::Reply ToolSession::retrieve(const std::string& query) {
  ToolCallRecord record;
  record.sequence_number = ++calls_made_;
  record.query = query;

  if (!tools_allowed_) {
    ++policy_violations_;
    record.allowed = false;
    log_.push_back(record);
    return Reply{false, "TOOLS_FORBIDDEN"};
  }
  if (calls_made_ > call_cap_) {
    ++policy_violations_;
    record.allowed = false;
    log_.push_back(record);
    return Reply{false, "TOOL_BUDGET_EXCEEDED"};
  }

  // Rank corpus passages by overlap similarity with the query.
  std::vector<std::pair<double, std::size_t>> ranked;
  if (proxy_ != nullptr) {
    ranked.reserve(proxy_->corpus().size());
    for (std::size_t i = 0; i < proxy_->corpus().size(); ++i) {
      ranked.emplace_back(ngram_jaccard(query, proxy_->corpus()[i]), i);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.first > b.first;
    });
  }

  std::string response;
  const int k = proxy_ != nullptr ? proxy_->top_k() : 0;
  for (int i = 0; i < k && i < static_cast<int>(ranked.size()); ++i) {
    if (!response.empty()) response.push_back('\n');
    response += proxy_->corpus()[ranked[static_cast<std::size_t>(i)].second];
  }

  // Retrieval output counts toward the context budget; truncate to what is
  // left and charge for what was delivered.
  if (static_cast<std::int64_t>(response.size()) > remaining_context_) {
    response.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, remaining_context_)));
  }
  remaining_context_ -= static_cast<std::int64_t>(response.size());

  record.allowed = true;
  record.response_chars = static_cast<std::int64_t>(response.size());
  log_.push_back(record);
  return Reply{true, std::move(response)};
}

}  // namespace sealev
