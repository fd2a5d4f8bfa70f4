#include "sealev/task_io.hpp"

#include "sealev/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sealev {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FILE_NOT_FOUND", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("FILE_WRITE_FAILED", path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("FILE_WRITE_FAILED", path.string());
}

void append_line(const fs::path& path, std::string_view line) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error("FILE_WRITE_FAILED", path.string());
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.put('\n');
  if (!out) throw Error("FILE_WRITE_FAILED", path.string());
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FILE_NOT_FOUND", path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

namespace {

nlohmann::json parse_or_format_error(const std::string& text, const std::string& where,
                                     std::size_t line_no) {
  nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    std::ostringstream msg;
    msg << where << ":" << line_no << ": unparseable record";
    throw Error("FORMAT_ERROR", msg.str());
  }
  return parsed;
}

}  // namespace

TaskDefinition load_task(const fs::path& header_path, const fs::path& instances_path) {
  TaskDefinition task =
      parse_or_format_error(read_file(header_path), header_path.string(), 1)
          .get<TaskDefinition>();
  task.instances.clear();
  std::size_t line_no = 0;
  for (const auto& line : read_lines(instances_path)) {
    ++line_no;
    if (line.empty()) continue;
    task.instances.push_back(
        parse_or_format_error(line, instances_path.string(), line_no).get<TaskInstance>());
  }
  return task;
}

void save_task(const TaskDefinition& task, const fs::path& dir) {
  fs::create_directories(dir);
  TaskDefinition header = task;
  header.instances.clear();
  nlohmann::json hj = header;
  hj.erase("instances");
  write_file(dir / (task.task_id + ".task.json"), hj.dump(2) + "\n");

  std::ostringstream lines;
  for (const auto& inst : task.instances) {
    lines << nlohmann::json(inst).dump() << "\n";
  }
  write_file(dir / (task.task_id + ".instances.jsonl"), lines.str());
}

std::vector<TaskDefinition> load_task_dir(const fs::path& dir) {
  std::vector<TaskDefinition> tasks;
  if (!fs::is_directory(dir)) throw Error("FILE_NOT_FOUND", dir.string());
  std::vector<fs::path> headers;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.substr(name.size() - 10) == ".task.json") {
      headers.push_back(entry.path());
    }
  }
  std::sort(headers.begin(), headers.end());
  for (const auto& header : headers) {
    std::string stem = header.filename().string();
    stem = stem.substr(0, stem.size() - 10);
    tasks.push_back(load_task(header, dir / (stem + ".instances.jsonl")));
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskDefinition& a, const TaskDefinition& b) { return a.task_id < b.task_id; });
  return tasks;
}

void save_task_dir(const std::vector<TaskDefinition>& tasks, const fs::path& dir) {
  for (const auto& task : tasks) save_task(task, dir);
}

std::string encode_task_archive(std::vector<TaskDefinition> tasks) {
  std::sort(tasks.begin(), tasks.end(),
            [](const TaskDefinition& a, const TaskDefinition& b) { return a.task_id < b.task_id; });
  std::ostringstream out;
  for (const auto& task : tasks) {
    TaskDefinition header = task;
    header.instances.clear();
    nlohmann::json hj = header;
    hj.erase("instances");
    out << "T " << hj.dump() << "\n";
    for (const auto& inst : task.instances) {
      out << "I " << nlohmann::json(inst).dump() << "\n";
    }
  }
  return out.str();
}

std::vector<TaskDefinition> decode_task_archive(const std::string& archive) {
  std::vector<TaskDefinition> tasks;
  std::istringstream in(archive);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.size() < 2 || (line[0] != 'T' && line[0] != 'I') || line[1] != ' ') {
      throw Error("FORMAT_ERROR", "archive:" + std::to_string(line_no) + ": bad record tag");
    }
    nlohmann::json record = parse_or_format_error(line.substr(2), "archive", line_no);
    if (line[0] == 'T') {
      tasks.push_back(record.get<TaskDefinition>());
      tasks.back().instances.clear();
    } else {
      if (tasks.empty()) {
        throw Error("FORMAT_ERROR", "archive:" + std::to_string(line_no) +
                                        ": instance before any task header");
      }
      tasks.back().instances.push_back(record.get<TaskInstance>());
    }
  }
  return tasks;
}

}  // namespace sealev
