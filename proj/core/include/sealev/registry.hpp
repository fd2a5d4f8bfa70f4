#pragma once

#include "sealev/clock.hpp"
#include "sealev/hashing.hpp"
#include "sealev/types.hpp"

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace sealev {

struct FrozenSubmission {
  SubmissionCard card;
  // open_weights: recomputable content hash of the artifact bytes.
  // closed_weights: provider version identifier (lower assurance tier).
  std::string commitment;
  Timestamp frozen_at = 0;
  Timestamp freeze_deadline = 0;
  bool dry_run_passed = false;
  bool withdrawn = false;  // tombstone; never deleted
};

// The submission freeze. Accepts cards before the deadline, commits artifact
// hashes/endpoint versions, and rejects everything after. Append-only with
// tombstones; uniqueness and deadline checks are atomic per submission id.
class Registry {
 public:
  Registry() = default;

  // Errors: "FREEZE_WINDOW_CLOSED" (clock past deadline), "ALREADY_FROZEN"
  // (duplicate id), "MISSING_ARTIFACT" (open-weights without bytes),
  // "INVALID_CARD" (card fails validation; detail names the first code).
  FrozenSubmission freeze_submission(const SubmissionCard& card,
                                     const std::optional<Bytes>& artifact_bytes,
                                     Timestamp deadline, const Clock& clock,
                                     const Syllabus& syllabus);

  void mark_dry_run(const std::string& submission_id, bool passed);
  void withdraw(const std::string& submission_id);

  const FrozenSubmission& get(const std::string& submission_id) const;
  bool contains(const std::string& submission_id) const;
  // Active (non-withdrawn) submissions, ordered by id.
  std::vector<FrozenSubmission> active() const;

  // Line-delimited append-only persistence; load() folds the record stream.
  void save(const std::filesystem::path& path) const;
  static Registry load(const std::filesystem::path& path);

 private:
  mutable std::mutex mutex_;
  std::map<std::string, FrozenSubmission> entries_;
};

// True iff sha256(artifact_bytes) equals the recorded commitment. Only
// meaningful for open-weights; closed endpoints are verified by version-string
// echo, a lower assurance tier, and raise Error("NOT_APPLICABLE") here.
bool verify_commitment(const FrozenSubmission& frozen, const Bytes& artifact_bytes);

void to_json(nlohmann::json& j, const FrozenSubmission& v);
void from_json(const nlohmann::json& j, FrozenSubmission& v);

}  // namespace sealev
