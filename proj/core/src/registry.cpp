#include "sealev/registry.hpp"

#include "sealev/error.hpp"
#include "sealev/task_io.hpp"
#include "sealev/validation.hpp"

#include <sstream>

namespace sealev {

FrozenSubmission Registry::freeze_submission(const SubmissionCard& card,
                                             const std::optional<Bytes>& artifact_bytes,
                                             Timestamp deadline, const Clock& clock,
                                             const Syllabus& syllabus) {
  auto violations = validate_submission_card(card, syllabus);
  if (!violations.empty()) {
    throw Error("INVALID_CARD", violations.front().code + " (" + card.submission_id + ")");
  }
  if (card.access_mode == AccessMode::open_weights && !artifact_bytes.has_value()) {
    throw Error("MISSING_ARTIFACT", card.submission_id);
  }

  FrozenSubmission frozen;
  frozen.card = card;
  frozen.freeze_deadline = deadline;
  if (card.access_mode == AccessMode::open_weights) {
    frozen.commitment = sha256_hex(*artifact_bytes);
  } else {
    frozen.commitment = card.version_identifier;
  }

  // Deadline check and uniqueness commit under one lock: compare-and-commit.
  std::lock_guard<std::mutex> lock(mutex_);
  const Timestamp now = clock();
  if (now > deadline) {
    throw Error("FREEZE_WINDOW_CLOSED", card.submission_id + " at " + format_timestamp(now));
  }
  frozen.frozen_at = now;
  auto [it, inserted] = entries_.emplace(card.submission_id, frozen);
  if (!inserted) {
    throw Error("ALREADY_FROZEN", card.submission_id);
  }
  return it->second;
}

void Registry::mark_dry_run(const std::string& submission_id, bool passed) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(submission_id);
  if (it == entries_.end()) throw Error("UNKNOWN_SUBMISSION", submission_id);
  it->second.dry_run_passed = passed;
}

void Registry::withdraw(const std::string& submission_id) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(submission_id);
  if (it == entries_.end()) throw Error("UNKNOWN_SUBMISSION", submission_id);
  it->second.withdrawn = true;
}

const FrozenSubmission& Registry::get(const std::string& submission_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(submission_id);
  if (it == entries_.end()) throw Error("UNKNOWN_SUBMISSION", submission_id);
  return it->second;
}

bool Registry::contains(const std::string& submission_id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return entries_.count(submission_id) != 0;
}

std::vector<FrozenSubmission> Registry::active() const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::vector<FrozenSubmission> out;
  for (const auto& [id, frozen] : entries_) {
    if (!frozen.withdrawn) out.push_back(frozen);
  }
  return out;
}

void Registry::save(const std::filesystem::path& path) const {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ostringstream out;
  for (const auto& [id, frozen] : entries_) {
    nlohmann::json record = {{"kind", "freeze"}, {"record", frozen}};
    out << record.dump() << "\n";
    if (frozen.dry_run_passed) {
      out << nlohmann::json({{"kind", "dry_run"}, {"submission_id", id}, {"passed", true}}).dump()
          << "\n";
    }
    if (frozen.withdrawn) {
      out << nlohmann::json({{"kind", "withdraw"}, {"submission_id", id}}).dump() << "\n";
    }
  }
  write_file(path, out.str());
}

Registry Registry::load(const std::filesystem::path& path) {
  Registry registry;
  if (!std::filesystem::exists(path)) return registry;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error("FORMAT_ERROR", path.string() + ":" + std::to_string(line_no));
    }
    const std::string kind = j.value("kind", "");
    if (kind == "freeze") {
      FrozenSubmission frozen = j.at("record").get<FrozenSubmission>();
      registry.entries_[frozen.card.submission_id] = frozen;
    } else if (kind == "dry_run") {
      auto it = registry.entries_.find(j.at("submission_id").get<std::string>());
      if (it != registry.entries_.end()) it->second.dry_run_passed = j.value("passed", false);
    } else if (kind == "withdraw") {
      auto it = registry.entries_.find(j.at("submission_id").get<std::string>());
      if (it != registry.entries_.end()) it->second.withdrawn = true;
    }
  }
  return registry;
}

bool verify_commitment(const FrozenSubmission& frozen, const Bytes& artifact_bytes) {
  if (frozen.card.access_mode != AccessMode::open_weights) {
    throw Error("NOT_APPLICABLE", "closed endpoints are verified by version echo only");
  }
  return sha256_hex(artifact_bytes) == frozen.commitment;
}

void to_json(nlohmann::json& j, const FrozenSubmission& v) {
  j = {{"card", v.card},
       {"commitment", v.commitment},
       {"frozen_at", v.frozen_at},
       {"freeze_deadline", v.freeze_deadline},
       {"dry_run_passed", v.dry_run_passed},
       {"withdrawn", v.withdrawn}};
}

void from_json(const nlohmann::json& j, FrozenSubmission& v) {
  v.card = j.at("card").get<SubmissionCard>();
  v.commitment = j.at("commitment").get<std::string>();
  v.frozen_at = j.at("frozen_at").get<Timestamp>();
  v.freeze_deadline = j.at("freeze_deadline").get<Timestamp>();
  v.dry_run_passed = j.value("dry_run_passed", false);
  v.withdrawn = j.value("withdrawn", false);
}

}  // namespace sealev
