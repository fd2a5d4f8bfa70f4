#pragma once

#include "sealev/clock.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sealev {

// One event in the public audit trail. Hash chaining is per artifact name:
// an entry's before-hash must equal the previous entry's after-hash for the
// same artifact.
struct ChangeEntry {
  Timestamp at = 0;
  std::string actor;
  std::string description;
  std::string artifact;     // "bundle", "harness", ...
  std::string before_hash;
  std::string after_hash;
  bool requires_full_rerun = false;
  // "change" | "rerun_completed" | "unseal". Unseal events feed the
  // freeze-before-unseal separation check; rerun_completed clears the
  // release gate opened by requires_full_rerun.
  std::string kind = "change";
};

// Append-only; entries are never reordered or removed. Single-writer
// contract: callers serialize mutation externally (the CLI process is the
// only writer).
class ChangeControlLog {
 public:
  // Appends after checking the chain: entry.before_hash must match the
  // current head for entry.artifact. Throws Error("STALE_CHANGE") otherwise.
  void record_change(ChangeEntry entry);

  void record_unseal(Timestamp at, const std::string& actor, const std::string& fingerprint);
  void record_rerun_completed(Timestamp at, const std::string& actor,
                              const std::string& description);

  const std::vector<ChangeEntry>& entries() const { return entries_; }
  std::string current_hash(const std::string& artifact) const;

  // True while some requires_full_rerun change has no later rerun_completed
  // entry. release stage 2 is blocked while this holds.
  bool rerun_pending() const;

  std::optional<Timestamp> first_unseal_at() const;

  void save(const std::filesystem::path& path) const;
  static ChangeControlLog load(const std::filesystem::path& path);
  void append_to_file(const std::filesystem::path& path, const ChangeEntry& entry) const;

 private:
  std::vector<ChangeEntry> entries_;
};

}  // namespace sealev
