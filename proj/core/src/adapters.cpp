#include "sealev/adapters.hpp"

#include "sealev/error.hpp"
#include "sealev/task_io.hpp"

#include <httplib.h>

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <random>
#include <sstream>
#include <thread>

extern char** environ;

namespace sealev {

namespace fs = std::filesystem;

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> split_command(const std::string& templ,
                                       const std::map<std::string, std::string>& subs) {
  std::string expanded = templ;
  for (const auto& [key, value] : subs) {
    std::string token = "{" + key + "}";
    std::size_t pos = 0;
    while ((pos = expanded.find(token, pos)) != std::string::npos) {
      expanded.replace(pos, token.size(), value);
      pos += value.size();
    }
  }
  std::vector<std::string> argv;
  std::istringstream in(expanded);
  std::string word;
  while (in >> word) argv.push_back(word);
  return argv;
}

fs::path make_scratch_dir() {
  static std::atomic<std::uint64_t> counter{0};
  std::random_device rd;
  std::ostringstream name;
  name << "sealev-" << ::getpid() << "-" << counter.fetch_add(1) << "-" << std::hex << rd();
  fs::path dir = fs::temp_directory_path() / name.str();
  fs::create_directories(dir);
  return dir;
}

// Scans line-delimited output for the record whose id matches. Returns the
// matching raw line, or empty when absent.
std::string find_output_record(const fs::path& path, const std::string& id) {
  if (!fs::exists(path)) return "";
  for (const auto& line : read_lines(path)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    auto it = j.find("id");
    if (it != j.end() && it->is_string() && it->get_ref<const std::string&>() == id) {
      return line;
    }
  }
  return "";
}

}  // namespace

SubprocessAdapter::SubprocessAdapter(std::string command_template, fs::path artifact_path)
    : command_template_(std::move(command_template)), artifact_path_(std::move(artifact_path)) {}

AdapterResult SubprocessAdapter::invoke(const ItemRequest& item, const BudgetClass& budget,
                                        const InvokeContext& ctx) {
  AdapterResult result;
  const fs::path scratch = make_scratch_dir();
  const fs::path input_path = scratch / "input.jsonl";
  const fs::path output_path = scratch / "output.jsonl";
  const fs::path stderr_path = scratch / "stderr.log";

  nlohmann::json request = {{"id", item.id}, {"prompt", item.prompt}};
  write_file(input_path, request.dump() + "\n");

  std::vector<std::string> argv_strings =
      split_command(command_template_, {{"artifact", artifact_path_.string()},
                                        {"input", input_path.string()},
                                        {"output", output_path.string()}});
  if (argv_strings.empty()) {
    result.outcome = AdapterResult::Outcome::permanent_error;
    result.detail = "EMPTY_COMMAND";
    fs::remove_all(scratch);
    return result;
  }

  std::vector<char*> argv;
  argv.reserve(argv_strings.size() + 1);
  for (auto& s : argv_strings) argv.push_back(s.data());
  argv.push_back(nullptr);

  std::vector<std::string> env_strings;
  for (char** e = environ; *e != nullptr; ++e) env_strings.emplace_back(*e);
  if (!ctx.tool_url.empty()) {
    env_strings.push_back("SEALEV_TOOL_URL=" + ctx.tool_url);
    env_strings.push_back("SEALEV_TOOL_TOKEN=" + ctx.tool_token);
  }
  std::vector<char*> envp;
  envp.reserve(env_strings.size() + 1);
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, stderr_path.c_str(),
                                   O_WRONLY | O_CREAT | O_APPEND, 0644);
  posix_spawn_file_actions_adddup2(&actions, STDOUT_FILENO, STDERR_FILENO);

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const auto start = std::chrono::steady_clock::now();
  pid_t pid = -1;
  const int spawn_rc =
      posix_spawnp(&pid, argv[0], &actions, &attr, argv.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);

  if (spawn_rc != 0) {
    result.outcome = AdapterResult::Outcome::transient_error;
    result.detail = std::string("SPAWN_FAILED: ") + std::strerror(spawn_rc);
    result.duration_seconds = elapsed_seconds(start);
    fs::remove_all(scratch);
    return result;
  }

  int status = 0;
  bool killed = false;
  for (;;) {
    const pid_t waited = ::waitpid(pid, &status, WNOHANG);
    if (waited == pid) break;
    if (waited < 0) {
      status = 0;
      break;
    }
    if (elapsed_seconds(start) > budget.max_wall_clock_per_item) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      killed = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  result.duration_seconds = elapsed_seconds(start);

  if (killed) {
    result.outcome = AdapterResult::Outcome::timeout;
    result.detail = "KILLED_AT_WALL_CLOCK_CAP";
  } else if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
    result.raw_output = find_output_record(output_path, item.id);
    if (result.raw_output.empty()) {
      result.outcome = AdapterResult::Outcome::format_error;
      result.detail = fs::exists(output_path) ? "ID_MISMATCH" : "NO_OUTPUT";
    } else {
      result.outcome = AdapterResult::Outcome::ok;
    }
  } else {
    result.outcome = AdapterResult::Outcome::permanent_error;
    result.detail = WIFEXITED(status)
                        ? "NONZERO_EXIT:" + std::to_string(WEXITSTATUS(status))
                        : "SIGNALED:" + std::to_string(WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  }

  std::error_code ec;
  fs::remove_all(scratch, ec);
  return result;
}

HttpAdapter::HttpAdapter(const std::string& endpoint) {
  std::string rest;
  if (endpoint.rfind("http://", 0) == 0) {
    rest = endpoint.substr(7);
  } else if (endpoint.rfind("https://", 0) == 0) {
    rest = endpoint.substr(8);
  } else {
    throw Error("BAD_ENDPOINT", endpoint);
  }
  const std::size_t slash = rest.find('/');
  std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
  base_path_ = slash == std::string::npos ? "" : rest.substr(slash);
  if (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
  const std::size_t colon = hostport.find(':');
  if (colon == std::string::npos) {
    host_ = hostport;
    port_ = 80;
  } else {
    host_ = hostport.substr(0, colon);
    port_ = std::stoi(hostport.substr(colon + 1));
  }
}

AdapterResult HttpAdapter::invoke(const ItemRequest& item, const BudgetClass& budget,
                                  const InvokeContext&) {
  AdapterResult result;
  httplib::Client client(host_, port_);
  const auto cap = std::chrono::duration<double>(budget.max_wall_clock_per_item);
  const auto cap_ms = std::chrono::duration_cast<std::chrono::milliseconds>(cap);
  client.set_connection_timeout(cap_ms);
  client.set_read_timeout(cap_ms);
  client.set_write_timeout(cap_ms);

  nlohmann::json body = {{"id", item.id}, {"prompt", item.prompt}};
  const auto start = std::chrono::steady_clock::now();
  httplib::Result response = client.Post(base_path_ + "/infer", body.dump(), "application/json");
  result.duration_seconds = elapsed_seconds(start);

  if (!response) {
    // Responses that never arrived inside the cap are timeouts; everything
    // else at the connection level is transient infrastructure failure.
    if (result.duration_seconds >= budget.max_wall_clock_per_item) {
      result.outcome = AdapterResult::Outcome::timeout;
      result.detail = "NO_RESPONSE_WITHIN_CAP";
    } else {
      result.outcome = AdapterResult::Outcome::transient_error;
      result.detail = "CONNECTION_FAILED:" + std::string(httplib::to_string(response.error()));
    }
    return result;
  }
  if (result.duration_seconds > budget.max_wall_clock_per_item) {
    result.outcome = AdapterResult::Outcome::timeout;
    result.detail = "RESPONSE_AFTER_CAP";
    return result;
  }
  if (response->status >= 500) {
    result.outcome = AdapterResult::Outcome::transient_error;
    result.detail = "HTTP_" + std::to_string(response->status);
    return result;
  }
  if (response->status >= 400) {
    result.outcome = AdapterResult::Outcome::permanent_error;
    result.detail = "HTTP_" + std::to_string(response->status);
    return result;
  }

  nlohmann::json parsed = nlohmann::json::parse(response->body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("id") ||
      !parsed["id"].is_string()) {
    result.outcome = AdapterResult::Outcome::format_error;
    result.detail = "UNREADABLE_RESPONSE";
    result.raw_output = response->body;
    return result;
  }
  if (parsed["id"].get_ref<const std::string&>() != item.id) {
    result.outcome = AdapterResult::Outcome::format_error;
    result.detail = "ID_MISMATCH";
    result.raw_output = response->body;
    return result;
  }
  result.outcome = AdapterResult::Outcome::ok;
  result.raw_output = response->body;
  return result;
}

void AdapterRegistry::register_scheme(const std::string& scheme, Factory factory) {
  factories_[scheme] = std::move(factory);
}

std::string AdapterRegistry::scheme_of(const std::string& interface_descriptor) {
  const std::size_t colon = interface_descriptor.find(':');
  if (colon == std::string::npos) return "";
  return interface_descriptor.substr(0, colon);
}

std::unique_ptr<Adapter> AdapterRegistry::create(const SubmissionCard& card,
                                                 const fs::path& artifact_path) const {
  const std::string scheme = scheme_of(card.interface_descriptor);
  auto it = factories_.find(scheme);
  if (it == factories_.end()) {
    throw Error("UNKNOWN_ADAPTER", "no adapter for scheme '" + scheme + "' (" +
                                       card.submission_id + ")");
  }
  return it->second(card, artifact_path);
}

AdapterRegistry default_adapter_registry() {
  AdapterRegistry registry;
  registry.register_scheme("cmd", [](const SubmissionCard& card, const fs::path& artifact) {
    return std::make_unique<SubprocessAdapter>(card.interface_descriptor.substr(4), artifact);
  });
  auto http_factory = [](const SubmissionCard& card, const fs::path&) {
    return std::make_unique<HttpAdapter>(card.interface_descriptor);
  };
  registry.register_scheme("http", http_factory);
  registry.register_scheme("https", http_factory);
  return registry;
}

OutputSchema wire_output_schema() {
  OutputSchema schema;
  schema.fields = {{"id", FieldType::text, true, {}}, {"answer", FieldType::text, true, {}}};
  return schema;
}

}  // namespace sealev
