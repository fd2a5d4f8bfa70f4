#pragma once

#include "sealev/schema.hpp"
#include "sealev/tool_proxy.hpp"
#include "sealev/types.hpp"

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace sealev {

// One-item wire request: line-delimited {id, prompt} for subprocess
// artifacts, POST /infer {id, prompt} for endpoints.
struct ItemRequest {
  std::string id;
  std::string prompt;
};

struct AdapterResult {
  enum class Outcome {
    ok,               // raw_output holds the matching output record
    timeout,          // wall-clock cap hit (never retried)
    transient_error,  // spawn failure / connection failure / HTTP 5xx
    permanent_error,  // nonzero exit / HTTP 4xx
    format_error      // no matching output id, unreadable wire payload
  };

  Outcome outcome = Outcome::permanent_error;
  std::string raw_output;
  double duration_seconds = 0.0;
  // True when duration was measured against the real clock (subprocess,
  // HTTP); false for declared virtual latencies from simulated in-process
  // solvers. Measured durations get a small slack before a post-hoc timeout
  // reclassification; virtual ones are compared exactly.
  bool measured = true;
  std::string detail;
};

// In-process tool access for simulated solvers, or bridge coordinates for
// out-of-process ones (exported as SEALEV_TOOL_URL / SEALEV_TOOL_TOKEN).
struct InvokeContext {
  ToolSession* tools = nullptr;
  std::string tool_url;
  std::string tool_token;
};

class Adapter {
 public:
  virtual ~Adapter() = default;
  virtual AdapterResult invoke(const ItemRequest& item, const BudgetClass& budget,
                               const InvokeContext& ctx) = 0;
};

// Open-weights: spawns the declared subprocess contract once per item with a
// one-record input file, collects the matching output record, and kills the
// process group at the wall-clock cap. Command templates are whitespace-split
// with {artifact}, {input}, {output} placeholders.
class SubprocessAdapter : public Adapter {
 public:
  SubprocessAdapter(std::string command_template, std::filesystem::path artifact_path);
  AdapterResult invoke(const ItemRequest& item, const BudgetClass& budget,
                       const InvokeContext& ctx) override;

 private:
  std::string command_template_;
  std::filesystem::path artifact_path_;
};

// Closed-weights: one POST /infer per item (plus the permitted retry),
// responses after the cap discarded as timeouts, 5xx transient, 4xx
// permanent.
class HttpAdapter : public Adapter {
 public:
  explicit HttpAdapter(const std::string& endpoint);
  AdapterResult invoke(const ItemRequest& item, const BudgetClass& budget,
                       const InvokeContext& ctx) override;

 private:
  std::string host_;
  int port_ = 80;
  std::string base_path_;
};

// Maps interface-descriptor schemes ("cmd", "http", "sim", ...) onto adapter
// factories. Unknown scheme is a configuration error.
class AdapterRegistry {
 public:
  using Factory = std::function<std::unique_ptr<Adapter>(
      const SubmissionCard& card, const std::filesystem::path& artifact_path)>;

  void register_scheme(const std::string& scheme, Factory factory);
  std::unique_ptr<Adapter> create(const SubmissionCard& card,
                                  const std::filesystem::path& artifact_path) const;

  static std::string scheme_of(const std::string& interface_descriptor);

 private:
  std::map<std::string, Factory> factories_;
};

// "cmd" and "http"/"https" schemes.
AdapterRegistry default_adapter_registry();

// The published wire output contract: every output record carries id and
// answer.
OutputSchema wire_output_schema();

}  // namespace sealev
