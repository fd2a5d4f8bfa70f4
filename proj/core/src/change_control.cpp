#include "sealev/change_control.hpp"

#include "sealev/error.hpp"
#include "sealev/task_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <sstream>

namespace sealev {

namespace {

nlohmann::json entry_to_json(const ChangeEntry& e) {
  return {{"at", e.at},
          {"actor", e.actor},
          {"description", e.description},
          {"artifact", e.artifact},
          {"before_hash", e.before_hash},
          {"after_hash", e.after_hash},
          {"requires_full_rerun", e.requires_full_rerun},
          {"kind", e.kind}};
}

ChangeEntry entry_from_json(const nlohmann::json& j) {
  ChangeEntry e;
  e.at = j.at("at").get<Timestamp>();
  e.actor = j.value("actor", std::string{});
  e.description = j.value("description", std::string{});
  e.artifact = j.value("artifact", std::string{});
  e.before_hash = j.value("before_hash", std::string{});
  e.after_hash = j.value("after_hash", std::string{});
  e.requires_full_rerun = j.value("requires_full_rerun", false);
  e.kind = j.value("kind", "change");
  return e;
}

}  // namespace

void ChangeControlLog::record_change(ChangeEntry entry) {
  if (entry.kind == "change") {
    const std::string head = current_hash(entry.artifact);
    if (entry.before_hash != head) {
      throw Error("STALE_CHANGE", "before-hash does not match current state of '" +
                                      entry.artifact + "' (concurrent modification?)");
    }
  }
  entries_.push_back(std::move(entry));
}

void ChangeControlLog::record_unseal(Timestamp at, const std::string& actor,
                                     const std::string& fingerprint) {
  ChangeEntry e;
  e.at = at;
  e.actor = actor;
  e.description = "bundle unsealed";
  e.artifact = "bundle";
  e.before_hash = fingerprint;
  e.after_hash = fingerprint;
  e.kind = "unseal";
  entries_.push_back(std::move(e));
}

void ChangeControlLog::record_rerun_completed(Timestamp at, const std::string& actor,
                                              const std::string& description) {
  ChangeEntry e;
  e.at = at;
  e.actor = actor;
  e.description = description;
  e.artifact = "harness";
  e.kind = "rerun_completed";
  entries_.push_back(std::move(e));
}

std::string ChangeControlLog::current_hash(const std::string& artifact) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->artifact == artifact && it->kind == "change") return it->after_hash;
  }
  return "";
}

bool ChangeControlLog::rerun_pending() const {
  bool pending = false;
  for (const auto& e : entries_) {
    if (e.kind == "change" && e.requires_full_rerun) pending = true;
    if (e.kind == "rerun_completed") pending = false;
  }
  return pending;
}

std::optional<Timestamp> ChangeControlLog::first_unseal_at() const {
  for (const auto& e : entries_) {
    if (e.kind == "unseal") return e.at;
  }
  return std::nullopt;
}

void ChangeControlLog::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  for (const auto& e : entries_) out << entry_to_json(e).dump() << "\n";
  write_file(path, out.str());
}

ChangeControlLog ChangeControlLog::load(const std::filesystem::path& path) {
  ChangeControlLog log;
  if (!std::filesystem::exists(path)) return log;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error("FORMAT_ERROR", path.string() + ":" + std::to_string(line_no));
    }
    log.entries_.push_back(entry_from_json(j));
  }
  return log;
}

void ChangeControlLog::append_to_file(const std::filesystem::path& path,
                                      const ChangeEntry& entry) const {
  append_line(path, entry_to_json(entry).dump());
}

}  // namespace sealev
