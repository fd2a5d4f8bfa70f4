#include "sealev/release.hpp"

#include "sealev/error.hpp"
#include "sealev/task_io.hpp"
#include "sealev/version.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sealev {

namespace fs = std::filesystem;

namespace {

std::string counter(std::int64_t count, std::int64_t total) {
  return std::to_string(count) + "/" + std::to_string(total);
}

std::pair<std::int64_t, std::int64_t> parse_counter(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) throw Error("FORMAT_ERROR", "bad counter: " + text);
  return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
}

std::vector<double> quartiles(std::vector<double> xs) {
  if (xs.empty()) return {0, 0, 0, 0, 0};
  std::sort(xs.begin(), xs.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] * (1.0 - frac) + xs[hi] * frac;
  };
  return {xs.front(), at(0.25), at(0.5), at(0.75), xs.back()};
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

nlohmann::json load_json(const fs::path& path) {
  nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw Error("FORMAT_ERROR", path.string());
  return j;
}

nlohmann::json analysis_summary(const ReleaseInputs& inputs) {
  nlohmann::json failure_patterns = nlohmann::json::object();
  nlohmann::json tool_stats = nlohmann::json::object();
  for (const auto& [id, manifest] : inputs.manifests) {
    failure_patterns[id] = {{"ok", manifest.ok_count},
                            {"timeouts", manifest.timeout_count},
                            {"format_errors", manifest.format_error_count},
                            {"adapter_errors", manifest.adapter_error_count},
                            {"budget_exceeded", manifest.budget_exceeded_count}};
  }
  for (const auto& [id, results] : inputs.results_by_submission) {
    std::int64_t calls = 0;
    std::int64_t violations = 0;
    for (const auto& r : results) {
      calls += static_cast<std::int64_t>(r.tool_calls.size());
      violations += r.policy_violations;
    }
    tool_stats[id] = {{"tool_calls", calls}, {"policy_violations", violations}};
  }
  nlohmann::json flagged = nlohmann::json::object();
  for (const auto& [id, report] : inputs.stability) {
    nlohmann::json examples = nlohmann::json::array();
    for (const auto& [origin, probe] : report.inconsistency_examples) {
      examples.push_back({{"origin", origin}, {"probe", probe}});
    }
    flagged[id] = {{"probes_total", report.probes_total},
                   {"probes_consistent", report.probes_consistent},
                   {"examples", examples}};
  }
  return {{"failure_patterns", failure_patterns},
          {"tool_use", tool_stats},
          {"top_flagged_probes", flagged},
          {"budgets", inputs.syllabus.budget_classes},
          {"harness_version", inputs.harness_version}};
}

}  // namespace

std::string RunManifest::timeouts_counter() const { return counter(timeout_count, total_items); }

std::string RunManifest::format_errors_counter() const {
  return counter(format_error_count, total_items);
}

void to_json(nlohmann::json& j, const RunManifest& v) {
  j = {{"submission_id", v.submission_id},
       {"track", track_kind_name(v.track)},
       {"mode", access_mode_name(v.mode)},
       {"commitment", v.commitment},
       {"budget_class", v.budget_class},
       {"decoding", v.decoding},
       {"max_output_chars", v.max_output_chars},
       {"total_items", v.total_items},
       {"ok", counter(v.ok_count, v.total_items)},
       {"timeouts", v.timeouts_counter()},
       {"format_errors", v.format_errors_counter()},
       {"adapter_errors", counter(v.adapter_error_count, v.total_items)},
       {"budget_exceeded", counter(v.budget_exceeded_count, v.total_items)},
       {"runtime_quartiles", v.runtime_quartiles},
       {"notes", v.notes}};
}

void from_json(const nlohmann::json& j, RunManifest& v) {
  v.submission_id = j.at("submission_id").get<std::string>();
  v.track = track_kind_from_name(j.at("track").get<std::string>());
  v.mode = access_mode_from_name(j.at("mode").get<std::string>());
  v.commitment = j.value("commitment", std::string{});
  v.budget_class = j.value("budget_class", std::string{});
  v.decoding = j.value("decoding", std::string{});
  v.max_output_chars = j.value("max_output_chars", std::int64_t{0});
  v.total_items = j.value("total_items", std::int64_t{0});
  v.ok_count = parse_counter(j.at("ok").get<std::string>()).first;
  v.timeout_count = parse_counter(j.at("timeouts").get<std::string>()).first;
  v.format_error_count = parse_counter(j.at("format_errors").get<std::string>()).first;
  v.adapter_error_count = parse_counter(j.at("adapter_errors").get<std::string>()).first;
  v.budget_exceeded_count = parse_counter(j.at("budget_exceeded").get<std::string>()).first;
  v.runtime_quartiles = j.value("runtime_quartiles", std::vector<double>{});
  v.notes = j.value("notes", std::string{"none"});
}

RunManifest emit_manifest(const std::vector<ItemResult>& results,
                          const FrozenSubmission& frozen,
                          const std::vector<TaskDefinition>& instrumented_tasks,
                          const Syllabus& syllabus) {
  const std::string& id = frozen.card.submission_id;
  const int runs = required_runs(syllabus, frozen.card);

  std::set<std::pair<std::string, int>> expected;  // (task/instance key, run)
  for (const auto& task : instrumented_tasks) {
    for (const auto& inst : task.instances) {
      for (int r = 0; r < runs; ++r) {
        expected.insert({task.task_id + "/" + inst.instance_id, r});
      }
    }
  }

  RunManifest manifest;
  manifest.submission_id = id;
  manifest.track = frozen.card.track.kind;
  manifest.mode = frozen.card.access_mode;
  manifest.commitment = frozen.commitment;
  manifest.budget_class = frozen.card.budget_class_id;
  manifest.decoding = frozen.card.decoding_policy.description;
  manifest.max_output_chars = frozen.card.declared_limits.max_output_chars;
  manifest.total_items = static_cast<std::int64_t>(expected.size());

  std::vector<double> durations;
  for (const auto& r : results) {
    if (r.submission_id != id) continue;
    const auto key = std::make_pair(r.task_id + "/" + r.instance_id, r.run_index);
    if (expected.erase(key) == 0) continue;  // unknown/duplicate record: ignore
    durations.push_back(r.wall_clock_seconds);
    switch (r.status) {
      case ItemStatus::ok: ++manifest.ok_count; break;
      case ItemStatus::timeout: ++manifest.timeout_count; break;
      case ItemStatus::format_error: ++manifest.format_error_count; break;
      case ItemStatus::adapter_error: ++manifest.adapter_error_count; break;
      case ItemStatus::budget_exceeded: ++manifest.budget_exceeded_count; break;
    }
  }

  if (!expected.empty()) {
    std::ostringstream missing;
    std::size_t shown = 0;
    for (const auto& [key, run] : expected) {
      if (shown++ == 10) {
        missing << " ... (" << expected.size() << " total)";
        break;
      }
      missing << key << "#" << run << " ";
    }
    throw Error("INCOMPLETE_RESULTS", id + " missing: " + missing.str());
  }

  manifest.runtime_quartiles = quartiles(std::move(durations));
  return manifest;
}

void build_release(int stage, const ReleaseInputs& inputs, const fs::path& out_dir) {
  if (stage != 1 && stage != 2) throw Error("BAD_STAGE", std::to_string(stage));

  if (stage == 1) {
    const fs::path dir = out_dir / "stage1";
    fs::create_directories(dir);
    write_json(dir / "leaderboards.json", inputs.leaderboards);
    write_file(dir / "leaderboards.txt", render_leaderboard_table(inputs.leaderboards));
    write_json(dir / "analysis.json", analysis_summary(inputs));
    write_json(dir / "sensitivity.json", inputs.sensitivity);
    write_json(dir / "syllabus.json", inputs.syllabus);
    write_json(dir / "hash_index.json", compute_hash_index(dir));
    return;
  }

  // Stage 2 preconditions: stage 1 published, change control clean.
  if (!fs::exists(out_dir / "stage1" / "hash_index.json")) {
    throw Error("STAGE_ORDER_VIOLATION", "stage 1 has not been published");
  }
  if (inputs.change_log.rerun_pending()) {
    throw Error("BLOCKED_BY_CHANGE_CONTROL",
                "a requires_full_rerun change has no completed-rerun marker");
  }

  const fs::path dir = out_dir / "stage2";
  fs::create_directories(dir);
  save_task_dir(inputs.tasks, dir / "tasks");
  write_json(dir / "syllabus.json", inputs.syllabus);

  {
    std::ostringstream lines;
    for (const auto& frozen : inputs.submissions) {
      lines << nlohmann::json({{"kind", "freeze"}, {"record", frozen}}).dump() << "\n";
    }
    write_file(dir / "registry.jsonl", lines.str());
  }

  for (const auto& [id, scores] : inputs.scores) {
    write_json(dir / "scores" / (id + ".json"), scores);
  }
  for (const auto& [id, report] : inputs.stability) {
    write_json(dir / "stability" / (id + ".json"), report);
  }
  for (const auto& [id, manifest] : inputs.manifests) {
    write_json(dir / "manifests" / (id + ".json"), manifest);
  }
  for (const auto& [id, results] : inputs.results_by_submission) {
    std::ostringstream lines;
    for (const auto& r : results) lines << nlohmann::json(r).dump() << "\n";
    write_file(dir / "results" / (id + ".jsonl"), lines.str());
  }
  write_json(dir / "leaderboards.json", inputs.leaderboards);
  inputs.change_log.save(dir / "change_control.jsonl");

  write_json(dir / "sealing.json",
             {{"fingerprint", inputs.sealed_fingerprint},
              {"nonce", to_hex(inputs.nonce.data(), inputs.nonce.size())},
              {"key", to_hex(inputs.key.data(), inputs.key.size())}});
  write_json(dir / "run_config.json", {{"seed", inputs.run_seed},
                                       {"probe_plan", inputs.probe_plan},
                                       {"workers", inputs.workers},
                                       {"unseal_time", inputs.unseal_time},
                                       {"harness_version", inputs.harness_version}});
  write_json(dir / "hash_index.json", compute_hash_index(dir));
}

bool AuditReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const AuditCheck& c) { return c.passed; });
}

AuditReport verify_release(const fs::path& stage2_dir, const std::string& published_fingerprint) {
  AuditReport report;
  auto add = [&report](const std::string& name, bool passed, std::string detail) {
    report.checks.push_back(AuditCheck{name, passed, std::move(detail)});
  };

  std::vector<TaskDefinition> tasks;
  Syllabus syllabus;
  nlohmann::json sealing_info;
  nlohmann::json run_config;
  try {
    tasks = load_task_dir(stage2_dir / "tasks");
    syllabus = load_json(stage2_dir / "syllabus.json").get<Syllabus>();
    sealing_info = load_json(stage2_dir / "sealing.json");
    run_config = load_json(stage2_dir / "run_config.json");
  } catch (const std::exception& e) {
    add("reseal", false, std::string("bundle unreadable: ") + e.what());
    return report;
  }

  // (a) task set re-seals to the published fingerprint.
  try {
    const Bytes key_bytes = from_hex(sealing_info.at("key").get<std::string>());
    const Bytes nonce_bytes = from_hex(sealing_info.at("nonce").get<std::string>());
    SealNonce nonce{};
    if (nonce_bytes.size() != nonce.size()) throw Error("FORMAT_ERROR", "bad nonce length");
    std::copy(nonce_bytes.begin(), nonce_bytes.end(), nonce.begin());
    const SealedBundle resealed =
        seal_bundle(tasks, key_bytes, fixed_clock(0), syllabus, fixed_nonce(nonce));
    const bool match = resealed.fingerprint == published_fingerprint;
    add("reseal", match,
        match ? "re-derived ciphertext matches the published fingerprint"
              : "fingerprint mismatch: " + resealed.fingerprint);
  } catch (const std::exception& e) {
    add("reseal", false, e.what());
  }

  // (b) manifest counters internally consistent and conserved.
  try {
    ProbePlan plan = run_config.at("probe_plan").get<ProbePlan>();
    const auto instrumented = inject_probes(tasks, plan);
    std::int64_t instrumented_count = 0;
    for (const auto& task : instrumented) {
      instrumented_count += static_cast<std::int64_t>(task.instances.size());
    }

    bool ok = true;
    std::string detail = "all manifests conserved";
    if (fs::is_directory(stage2_dir / "manifests")) {
      for (const auto& entry : fs::directory_iterator(stage2_dir / "manifests")) {
        const RunManifest manifest = load_json(entry.path()).get<RunManifest>();
        const std::int64_t sum = manifest.ok_count + manifest.timeout_count +
                                 manifest.format_error_count + manifest.adapter_error_count +
                                 manifest.budget_exceeded_count;
        if (sum != manifest.total_items) {
          ok = false;
          detail = manifest.submission_id + ": counters sum to " + std::to_string(sum) +
                   ", total " + std::to_string(manifest.total_items);
          break;
        }
        if (manifest.total_items % instrumented_count != 0) {
          ok = false;
          detail = manifest.submission_id + ": total not a run-multiple of the bundle size";
          break;
        }
      }
    }
    add("manifests", ok, detail);
  } catch (const std::exception& e) {
    add("manifests", false, e.what());
  }

  // (c) leaderboard recomputable from released per-task scores.
  try {
    const auto released =
        load_json(stage2_dir / "leaderboards.json").get<std::vector<Leaderboard>>();
    std::vector<std::string> task_ids;
    for (const auto& task : tasks) task_ids.push_back(task.task_id);

    bool ok = true;
    std::string detail = "overall scores and ordering reproduce";
    for (const auto& board : released) {
      std::vector<LeaderboardRow> recomputed = board.rows;
      for (auto& row : recomputed) {
        const auto scores = load_json(stage2_dir / "scores" / (row.submission_id + ".json"))
                                .get<std::vector<TaskScore>>();
        const double overall = aggregate(scores, task_ids, syllabus.scoring_policy.aggregation);
        if (std::abs(overall - row.overall_score) > 1e-12) {
          ok = false;
          detail = row.submission_id + ": released overall " + std::to_string(row.overall_score) +
                   " != recomputed " + std::to_string(overall);
        }
        row.overall_score = overall;
      }
      std::sort(recomputed.begin(), recomputed.end(),
                [](const LeaderboardRow& a, const LeaderboardRow& b) {
                  if (a.overall_score != b.overall_score) return a.overall_score > b.overall_score;
                  if (a.timeout_count != b.timeout_count) return a.timeout_count < b.timeout_count;
                  return a.submission_id < b.submission_id;
                });
      for (std::size_t i = 0; ok && i < recomputed.size(); ++i) {
        if (recomputed[i].submission_id != board.rows[i].submission_id) {
          ok = false;
          detail = "ordering differs at rank " + std::to_string(i + 1);
        }
      }
    }
    add("leaderboard", ok, detail);
  } catch (const std::exception& e) {
    add("leaderboard", false, e.what());
  }

  // (d) every file matches the recorded hash index.
  try {
    const nlohmann::json recorded = load_json(stage2_dir / "hash_index.json");
    const nlohmann::json actual = compute_hash_index(stage2_dir);
    const bool ok = recorded == actual;
    add("hash_index", ok, ok ? "all file hashes match" : "hash index drift detected");
  } catch (const std::exception& e) {
    add("hash_index", false, e.what());
  }

  return report;
}

bool ReplayReport::all_replayed_match() const {
  return std::all_of(outcomes.begin(), outcomes.end(), [](const ReplayOutcome& o) {
    return !o.replayed || o.scores_match;
  });
}

ReplayReport replay(const fs::path& stage2_dir, const fs::path& artifacts_dir,
                    const AdapterRegistry& adapters) {
  ReplayReport report;

  const auto tasks = load_task_dir(stage2_dir / "tasks");
  const Syllabus syllabus = load_json(stage2_dir / "syllabus.json").get<Syllabus>();
  const nlohmann::json run_config = load_json(stage2_dir / "run_config.json");
  const ProbePlan plan = run_config.at("probe_plan").get<ProbePlan>();
  const auto instrumented = inject_probes(tasks, plan);
  std::vector<std::string> task_ids;
  for (const auto& task : tasks) task_ids.push_back(task.task_id);

  std::vector<FrozenSubmission> submissions;
  for (const auto& line : read_lines(stage2_dir / "registry.jsonl")) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || j.value("kind", "") != "freeze") continue;
    submissions.push_back(j.at("record").get<FrozenSubmission>());
  }

  for (const auto& frozen : submissions) {
    ReplayOutcome outcome;
    outcome.submission_id = frozen.card.submission_id;

    const fs::path artifact_path = artifacts_dir / (frozen.card.submission_id + ".artifact");
    if (frozen.card.access_mode == AccessMode::open_weights) {
      if (!fs::exists(artifact_path)) {
        outcome.reason = "ARTIFACT_MISSING";
        report.outcomes.push_back(outcome);
        continue;
      }
      const std::string bytes = read_file(artifact_path);
      if (!verify_commitment(frozen, Bytes(bytes.begin(), bytes.end()))) {
        outcome.reason = "COMMITMENT_VIOLATION";
        report.outcomes.push_back(outcome);
        continue;
      }
    } else {
      // Connectivity probe; closed endpoints may be long gone post-event.
      try {
        auto adapter = adapters.create(frozen.card, artifact_path);
        const BudgetClass* budget = syllabus.find_budget_class(frozen.card.budget_class_id);
        DryRunReport ping = dry_run(frozen, *adapter, *budget);
        if (!ping.passed && ping.code == "ADAPTER_UNREACHABLE") {
          outcome.reason = "ENDPOINT_UNAVAILABLE";
          report.outcomes.push_back(outcome);
          continue;
        }
      } catch (const std::exception&) {
        outcome.reason = "ENDPOINT_UNAVAILABLE";
        report.outcomes.push_back(outcome);
        continue;
      }
    }

    try {
      RunConfig config;
      config.workers = run_config.value("workers", 1);
      config.seed = run_config.value("seed", std::uint64_t{0});
      config.unseal_time = run_config.value("unseal_time", frozen.frozen_at + 1);
      config.artifacts_dir = artifacts_dir;
      const RunOutput output =
          run_evaluation(instrumented, {frozen}, syllabus, adapters, nullptr, config);

      std::vector<TaskScore> recomputed;
      for (const auto& task : instrumented) {
        recomputed.push_back(score_task(task, output.results, frozen.card.submission_id));
      }
      const auto released =
          load_json(stage2_dir / "scores" / (frozen.card.submission_id + ".json"))
              .get<std::vector<TaskScore>>();

      outcome.replayed = true;
      outcome.scores_match =
          nlohmann::json(recomputed).dump() == nlohmann::json(released).dump();
      outcome.reason = outcome.scores_match ? "ok" : "SCORE_MISMATCH";
    } catch (const Error& e) {
      outcome.reason = e.code();
    }
    report.outcomes.push_back(outcome);
  }
  return report;
}

nlohmann::json compute_hash_index(const fs::path& dir) {
  nlohmann::json files = nlohmann::json::object();
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "hash_index.json") continue;
    paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    files[fs::relative(path, dir).generic_string()] = sha256_hex(read_file(path));
  }
  return {{"files", files}};
}

}  // namespace sealev
