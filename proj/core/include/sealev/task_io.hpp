#pragma once

#include "sealev/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sealev {

// Proposal/task file format (also the post-release plaintext layout):
//   <task_id>.task.json       task metadata (header document)
//   <task_id>.instances.jsonl one instance record per line
// Parse errors carry the failing line number.

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
void append_line(const std::filesystem::path& path, std::string_view line);
std::vector<std::string> read_lines(const std::filesystem::path& path);

TaskDefinition load_task(const std::filesystem::path& header_path,
                         const std::filesystem::path& instances_path);
void save_task(const TaskDefinition& task, const std::filesystem::path& dir);

// Loads every *.task.json (+ its instance file) under dir, sorted by task id.
std::vector<TaskDefinition> load_task_dir(const std::filesystem::path& dir);
void save_task_dir(const std::vector<TaskDefinition>& tasks,
                   const std::filesystem::path& dir);

// Canonical plaintext archive of a task set: tasks sorted by id, each as one
// header line ("T <json>") followed by its instance lines ("I <json>") in
// order. Deterministic bytes so sealing is reproducible given the nonce.
std::string encode_task_archive(std::vector<TaskDefinition> tasks);
std::vector<TaskDefinition> decode_task_archive(const std::string& archive);

}  // namespace sealev
