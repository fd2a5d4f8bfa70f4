#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace sealev {

// Unix epoch milliseconds. Injected everywhere a decision depends on time so
// freeze-boundary and separation tests are deterministic.
using Timestamp = std::int64_t;

using Clock = std::function<Timestamp()>;

Clock system_clock();
Clock fixed_clock(Timestamp at);

// Deterministic clock for scenarios: starts at `origin`, advances `step_ms`
// on every reading.
class StepClock {
 public:
  explicit StepClock(Timestamp origin, Timestamp step_ms = 1000)
      : now_(origin), step_(step_ms) {}

  Timestamp operator()() {
    Timestamp t = now_;
    now_ += step_;
    return t;
  }

  Timestamp peek() const { return now_; }

 private:
  Timestamp now_;
  Timestamp step_;
};

// "2026-03-01T12:00:00.000Z" style rendering for logs and manifests.
std::string format_timestamp(Timestamp at);

}  // namespace sealev
