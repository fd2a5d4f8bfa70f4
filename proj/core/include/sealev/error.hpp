#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sealev {

// Domain failure with a stable machine-readable code ("FREEZE_WINDOW_CLOSED",
// "TAMPERED", ...). Codes are part of the published rulebook; the CLI maps
// them onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  explicit Error(std::string code) : std::runtime_error(code), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace sealev
