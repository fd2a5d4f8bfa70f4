#include "sealev/scoring.hpp"

#include "sealev/error.hpp"
#include "sealev/text.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sealev {

namespace {

using ResultIndex = std::map<std::pair<std::string, int>, const ItemResult*>;

// (instance_id, run_index) -> result, for one submission and task.
ResultIndex index_results(const std::vector<ItemResult>& results, const std::string& submission_id,
                          const std::string& task_id, int& max_run) {
  ResultIndex index;
  max_run = 0;
  for (const auto& r : results) {
    if (r.submission_id != submission_id || r.task_id != task_id) continue;
    index[{r.instance_id, r.run_index}] = &r;
    max_run = std::max(max_run, r.run_index);
  }
  return index;
}

std::string normalized_string_field(const nlohmann::json& record, const std::string& key) {
  auto it = record.find(key);
  if (it == record.end() || !it->is_string()) return std::string{};
  return normalize_answer(it->get_ref<const std::string&>());
}

void normalize_leaves(nlohmann::json& node) {
  if (node.is_string()) {
    node = normalize_answer(node.get_ref<const std::string&>());
  } else if (node.is_object() || node.is_array()) {
    for (auto& child : node) normalize_leaves(child);
  }
}

struct RunScore {
  double score = 0.0;
  std::map<std::string, double> breakdown;
};

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

RunScore score_extraction_run(const TaskDefinition& task, const ResultIndex& index, int run) {
  std::vector<double> items;
  double valid = 0.0;
  std::vector<double> scalar_components;
  std::vector<double> entity_components;
  for (const auto& inst : task.instances) {
    if (inst.is_probe) continue;
    const auto* gold = std::get_if<ExtractionGold>(&inst.gold);
    if (gold == nullptr) throw Error("GOLD_FAMILY_MISMATCH", inst.instance_id);
    auto it = index.find({inst.instance_id, run});
    if (it == index.end() || it->second->status != ItemStatus::ok ||
        !it->second->parsed_answer.has_value()) {
      items.push_back(0.0);
      continue;
    }
    valid += 1.0;
    const nlohmann::json& answer = *it->second->parsed_answer;
    double components = 0.0;
    double total = 0.0;
    for (const auto& [field, expected] : gold->fields) {
      const double match =
          normalized_string_field(answer, field) == normalize_answer(expected) ? 1.0 : 0.0;
      components += match;
      total += 1.0;
      scalar_components.push_back(match);
    }
    if (!gold->entities.empty()) {
      std::vector<std::string> predicted;
      auto ent = answer.find("entities");
      if (ent != answer.end() && ent->is_array()) {
        for (const auto& e : *ent) {
          if (e.is_string()) predicted.push_back(e.get<std::string>());
        }
      }
      const double f1 = entity_set_f1(gold->entities, predicted);
      components += f1;
      total += 1.0;
      entity_components.push_back(f1);
    }
    items.push_back(total > 0.0 ? components / total : 0.0);
  }
  RunScore out;
  out.score = mean(items);
  out.breakdown["schema_validity_rate"] =
      items.empty() ? 0.0 : valid / static_cast<double>(items.size());
  out.breakdown["scalar_exact_match_rate"] = mean(scalar_components);
  if (!entity_components.empty()) out.breakdown["entity_f1_mean"] = mean(entity_components);
  return out;
}

RunScore score_evidence_run(const TaskDefinition& task, const ResultIndex& index, int run) {
  const ScoringPlan& plan = task.scoring_plan;
  std::vector<double> items;
  std::map<std::string, double> counts = {{"correct", 0},        {"correct_abstain", 0},
                                          {"unsupported", 0},    {"wrong_answer", 0},
                                          {"wrong_abstain", 0},  {"hallucinated", 0},
                                          {"invalid", 0}};
  for (const auto& inst : task.instances) {
    if (inst.is_probe) continue;
    const auto* gold = std::get_if<EvidenceGold>(&inst.gold);
    if (gold == nullptr) throw Error("GOLD_FAMILY_MISMATCH", inst.instance_id);
    auto it = index.find({inst.instance_id, run});
    if (it == index.end() || it->second->status != ItemStatus::ok ||
        !it->second->parsed_answer.has_value()) {
      items.push_back(0.0);
      counts["invalid"] += 1;
      continue;
    }
    items.push_back(evidence_item_score(*gold, *it->second->parsed_answer, plan));
    // Re-derive the outcome label for the breakdown.
    const nlohmann::json& answer = *it->second->parsed_answer;
    const bool abstained = normalized_string_field(answer, "answer") == "abstain";
    if (!gold->answerable) {
      counts[abstained ? "correct_abstain" : "hallucinated"] += 1;
    } else if (abstained) {
      counts["wrong_abstain"] += 1;
    } else if (normalized_string_field(answer, "answer") != normalize_answer(gold->answer)) {
      counts["wrong_answer"] += 1;
    } else {
      const bool supported = [&] {
        auto b = answer.find("support_begin");
        auto e = answer.find("support_end");
        if (b == answer.end() || e == answer.end() || !b->is_number() || !e->is_number()) {
          return false;
        }
        const double lo = std::max(b->get<double>(), static_cast<double>(gold->span_begin));
        const double hi = std::min(e->get<double>(), static_cast<double>(gold->span_end));
        return hi - lo >= 1.0;
      }();
      counts[supported ? "correct" : "unsupported"] += 1;
    }
  }
  RunScore out;
  out.score = mean(items);
  out.breakdown = counts;
  return out;
}

RunScore score_stability_run(const TaskDefinition& task, const ResultIndex& index, int run) {
  const ScoringPlan& plan = task.scoring_plan;
  const double w_correct = plan.param("correctness_weight", 0.5);
  const double w_consistent = plan.param("consistency_weight", 0.5);

  std::map<std::string, std::vector<const TaskInstance*>> families;
  for (const auto& inst : task.instances) {
    if (inst.is_probe) continue;
    families[inst.family_id].push_back(&inst);
  }
  if (families.empty()) return RunScore{};

  std::vector<double> family_scores;
  std::vector<double> correctness_means;
  std::vector<double> consistency_values;
  for (const auto& [fid, variants] : families) {
    std::vector<std::string> decisions;
    double correct = 0.0;
    for (const TaskInstance* inst : variants) {
      const auto* gold = std::get_if<StabilityGold>(&inst->gold);
      if (gold == nullptr) throw Error("GOLD_FAMILY_MISMATCH", inst->instance_id);
      auto it = index.find({inst->instance_id, run});
      if (it == index.end() || it->second->status != ItemStatus::ok ||
          !it->second->parsed_answer.has_value()) {
        // Unique sentinel: an unreadable decision matches nothing.
        decisions.push_back("\x01invalid:" + inst->instance_id);
        continue;
      }
      const std::string decision = normalized_string_field(*it->second->parsed_answer, "decision");
      decisions.push_back(decision);
      if (decision == normalize_answer(gold->decision)) correct += 1.0;
    }
    const double v = static_cast<double>(variants.size());
    const double correctness = correct / v;

    std::int64_t modal = 0;
    std::map<std::string, std::int64_t> tally;
    for (const auto& d : decisions) modal = std::max(modal, ++tally[d]);
    const double consistency =
        variants.size() > 1 ? static_cast<double>(modal - 1) / (v - 1.0) : 1.0;

    family_scores.push_back(w_correct * correctness + w_consistent * consistency);
    correctness_means.push_back(correctness);
    consistency_values.push_back(consistency);
  }

  RunScore out;
  out.score = std::clamp(mean(family_scores), 0.0, 1.0);
  out.breakdown["family_count"] = static_cast<double>(families.size());
  out.breakdown["correctness_mean"] = mean(correctness_means);
  out.breakdown["consistency_mean"] = mean(consistency_values);
  out.breakdown["correctness_weight"] = w_correct;
  out.breakdown["consistency_weight"] = w_consistent;
  return out;
}

RunScore score_custom_run(const TaskDefinition& task, const ResultIndex& index, int run) {
  std::vector<double> items;
  for (const auto& inst : task.instances) {
    if (inst.is_probe) continue;
    const auto* gold = std::get_if<CustomGold>(&inst.gold);
    if (gold == nullptr) throw Error("GOLD_FAMILY_MISMATCH", inst.instance_id);
    auto it = index.find({inst.instance_id, run});
    if (it == index.end() || it->second->status != ItemStatus::ok ||
        !it->second->parsed_answer.has_value()) {
      items.push_back(0.0);
      continue;
    }
    const std::string expected =
        gold->value.is_string() ? normalize_answer(gold->value.get_ref<const std::string&>())
                                : gold->value.dump();
    items.push_back(normalized_string_field(*it->second->parsed_answer, "answer") == expected
                        ? 1.0
                        : 0.0);
  }
  RunScore out;
  out.score = mean(items);
  return out;
}

}  // namespace

double entity_set_f1(const std::vector<std::string>& gold,
                     const std::vector<std::string>& predicted) {
  std::set<std::string> gs;
  for (const auto& g : gold) gs.insert(normalize_answer(g));
  std::set<std::string> ps;
  for (const auto& p : predicted) ps.insert(normalize_answer(p));
  if (gs.empty() && ps.empty()) return 1.0;
  if (gs.empty() || ps.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& p : ps) {
    if (gs.count(p) != 0) ++hit;
  }
  if (hit == 0) return 0.0;
  const double precision = static_cast<double>(hit) / static_cast<double>(ps.size());
  const double recall = static_cast<double>(hit) / static_cast<double>(gs.size());
  return 2.0 * precision * recall / (precision + recall);
}

double extraction_item_score(const ExtractionGold& gold, const nlohmann::json& answer,
                             const ScoringPlan&) {
  double components = 0.0;
  double total = 0.0;
  for (const auto& [field, expected] : gold.fields) {
    components +=
        normalized_string_field(answer, field) == normalize_answer(expected) ? 1.0 : 0.0;
    total += 1.0;
  }
  if (!gold.entities.empty()) {
    std::vector<std::string> predicted;
    auto ent = answer.find("entities");
    if (ent != answer.end() && ent->is_array()) {
      for (const auto& e : *ent) {
        if (e.is_string()) predicted.push_back(e.get<std::string>());
      }
    }
    components += entity_set_f1(gold.entities, predicted);
    total += 1.0;
  }
  return total > 0.0 ? components / total : 0.0;
}

double evidence_item_score(const EvidenceGold& gold, const nlohmann::json& answer,
                           const ScoringPlan& plan) {
  const double correct = plan.param("correct", 1.0);
  const double correct_abstain = plan.param("correct_abstain", 1.0);
  const double wrong_answer = plan.param("wrong_answer", 0.0);
  const double wrong_abstain = plan.param("wrong_abstain", 0.0);
  const double hallucinated = plan.param("hallucinated_answer", 0.0);
  const double unsupported_penalty = plan.param("unsupported_answer_penalty", 0.5);

  const std::string predicted = normalized_string_field(answer, "answer");
  const bool abstained = predicted == "abstain";
  if (!gold.answerable) {
    return abstained ? correct_abstain : hallucinated;
  }
  if (abstained) return wrong_abstain;
  if (predicted != normalize_answer(gold.answer)) return wrong_answer;

  auto b = answer.find("support_begin");
  auto e = answer.find("support_end");
  bool supported = false;
  if (b != answer.end() && e != answer.end() && b->is_number() && e->is_number()) {
    // Any character overlap with the gold span counts as supported.
    const double lo = std::max(b->get<double>(), static_cast<double>(gold.span_begin));
    const double hi = std::min(e->get<double>(), static_cast<double>(gold.span_end));
    supported = hi - lo >= 1.0;
  }
  return supported ? correct : std::clamp(correct - unsupported_penalty, 0.0, 1.0);
}

std::string canonical_answer_form(const nlohmann::json& parsed_answer) {
  if (!parsed_answer.is_object()) {
    return parsed_answer.is_string() ? normalize_answer(parsed_answer.get_ref<const std::string&>())
                                     : parsed_answer.dump();
  }
  nlohmann::json copy = parsed_answer;
  copy.erase("id");
  normalize_leaves(copy);
  return copy.dump();
}

TaskScore score_task(const TaskDefinition& task, const std::vector<ItemResult>& results,
                     const std::string& submission_id) {
  int max_run = 0;
  const ResultIndex index = index_results(results, submission_id, task.task_id, max_run);

  std::vector<RunScore> runs;
  for (int run = 0; run <= max_run; ++run) {
    switch (task.family) {
      case TaskFamily::extraction:
        runs.push_back(score_extraction_run(task, index, run));
        break;
      case TaskFamily::evidence_qa:
        runs.push_back(score_evidence_run(task, index, run));
        break;
      case TaskFamily::stability:
        runs.push_back(score_stability_run(task, index, run));
        break;
      case TaskFamily::custom:
        runs.push_back(score_custom_run(task, index, run));
        break;
    }
  }

  TaskScore score;
  score.submission_id = submission_id;
  score.task_id = task.task_id;
  score.metric_id = task.scoring_plan.metric_id;
  score.item_count = task.non_probe_count();

  std::vector<double> run_scores;
  std::map<std::string, double> breakdown_sums;
  for (const auto& run : runs) {
    run_scores.push_back(run.score);
    for (const auto& [key, value] : run.breakdown) breakdown_sums[key] += value;
  }
  score.score = std::clamp(mean(run_scores), 0.0, 1.0);
  for (const auto& [key, sum] : breakdown_sums) {
    score.breakdown[key] = sum / static_cast<double>(runs.size());
  }
  score.breakdown["runs"] = static_cast<double>(runs.size());
  return score;
}

StabilityReport stability_report(const std::vector<TaskDefinition>& tasks,
                                 const std::vector<ItemResult>& results,
                                 const std::string& submission_id, std::size_t max_examples) {
  StabilityReport report;
  report.submission_id = submission_id;

  for (const auto& task : tasks) {
    int max_run = 0;
    const ResultIndex index = index_results(results, submission_id, task.task_id, max_run);
    for (const auto& inst : task.instances) {
      if (!inst.is_probe) continue;
      for (int run = 0; run <= max_run; ++run) {
        auto probe_it = index.find({inst.instance_id, run});
        auto origin_it = index.find({inst.probe_origin, run});
        if (probe_it == index.end() && origin_it == index.end()) continue;
        ++report.probes_total;

        auto answer_form = [](const ItemResult* r) -> std::optional<std::string> {
          if (r == nullptr || r->status != ItemStatus::ok || !r->parsed_answer.has_value()) {
            return std::nullopt;
          }
          return canonical_answer_form(*r->parsed_answer);
        };
        const auto probe_form =
            answer_form(probe_it == index.end() ? nullptr : probe_it->second);
        const auto origin_form =
            answer_form(origin_it == index.end() ? nullptr : origin_it->second);

        if (probe_form.has_value() && origin_form.has_value() && *probe_form == *origin_form) {
          ++report.probes_consistent;
        } else if (report.inconsistency_examples.size() < max_examples) {
          report.inconsistency_examples.emplace_back(
              origin_form.value_or("<" + std::string(origin_it == index.end()
                                                         ? "missing"
                                                         : item_status_name(
                                                               origin_it->second->status)) +
                                   ">"),
              probe_form.value_or("<" + std::string(probe_it == index.end()
                                                        ? "missing"
                                                        : item_status_name(
                                                              probe_it->second->status)) +
                                  ">"));
        }
      }
    }
  }
  if (report.probes_total > 0) {
    report.stability_rate = static_cast<double>(report.probes_consistent) /
                            static_cast<double>(report.probes_total);
  }
  return report;
}

double aggregate(const std::vector<TaskScore>& per_task,
                 const std::vector<std::string>& expected_task_ids, const std::string& policy) {
  std::map<std::string, const TaskScore*> by_task;
  for (const auto& score : per_task) by_task[score.task_id] = &score;
  for (const auto& id : expected_task_ids) {
    if (by_task.count(id) == 0) throw Error("MISSING_TASK_SCORE", id);
  }
  if (expected_task_ids.empty()) throw Error("MISSING_TASK_SCORE", "no tasks");

  if (policy == "macro") {
    double sum = 0.0;
    for (const auto& id : expected_task_ids) sum += by_task[id]->score;
    return sum / static_cast<double>(expected_task_ids.size());
  }
  if (policy == "micro") {
    double weighted = 0.0;
    double items = 0.0;
    for (const auto& id : expected_task_ids) {
      weighted += by_task[id]->score * static_cast<double>(by_task[id]->item_count);
      items += static_cast<double>(by_task[id]->item_count);
    }
    return items > 0.0 ? weighted / items : 0.0;
  }
  throw Error("UNKNOWN_AGGREGATION", policy);
}

std::vector<Leaderboard> build_leaderboard(
    const std::vector<TaskDefinition>& tasks,
    const std::vector<FrozenSubmission>& submissions,
    const std::map<std::string, std::vector<TaskScore>>& scores_by_submission,
    const std::vector<ItemResult>& all_results, const Syllabus& syllabus) {
  std::vector<std::string> task_ids;
  for (const auto& task : tasks) task_ids.push_back(task.task_id);

  std::map<std::pair<TrackKind, AccessMode>, Leaderboard> boards;
  for (const auto& frozen : submissions) {
    const std::string& id = frozen.card.submission_id;
    auto scores_it = scores_by_submission.find(id);
    if (scores_it == scores_by_submission.end()) throw Error("MISSING_TASK_SCORE", id);

    LeaderboardRow row;
    row.submission_id = id;
    row.track = frozen.card.track.kind;
    row.access_mode = frozen.card.access_mode;
    row.budget_class = frozen.card.budget_class_id;
    row.overall_score = aggregate(scores_it->second, task_ids, syllabus.scoring_policy.aggregation);
    for (const auto& score : scores_it->second) {
      row.per_task_scores[score.task_id] = score.score;
    }
    row.run_count = required_runs(syllabus, frozen.card);

    std::vector<double> durations;
    std::int64_t errors = 0;
    std::int64_t total = 0;
    for (const auto& r : all_results) {
      if (r.submission_id != id) continue;
      ++total;
      durations.push_back(r.wall_clock_seconds);
      if (r.status == ItemStatus::timeout) ++row.timeout_count;
      if (r.status == ItemStatus::format_error || r.status == ItemStatus::adapter_error ||
          r.status == ItemStatus::budget_exceeded) {
        ++errors;
      }
    }
    if (!durations.empty()) {
      std::sort(durations.begin(), durations.end());
      const std::size_t mid = durations.size() / 2;
      row.runtime_median_seconds = durations.size() % 2 == 1
                                       ? durations[mid]
                                       : 0.5 * (durations[mid - 1] + durations[mid]);
    }
    row.error_rate = total > 0 ? static_cast<double>(errors) / static_cast<double>(total) : 0.0;

    auto& board = boards[{row.track, row.access_mode}];
    board.track = row.track;
    board.access_mode = row.access_mode;
    board.rows.push_back(std::move(row));
  }

  std::vector<Leaderboard> out;
  for (auto& [key, board] : boards) {
    std::sort(board.rows.begin(), board.rows.end(),
              [](const LeaderboardRow& a, const LeaderboardRow& b) {
                if (a.overall_score != b.overall_score) return a.overall_score > b.overall_score;
                if (a.timeout_count != b.timeout_count) return a.timeout_count < b.timeout_count;
                return a.submission_id < b.submission_id;
              });
    out.push_back(std::move(board));
  }
  return out;
}

std::string render_leaderboard_table(const std::vector<Leaderboard>& boards) {
  std::ostringstream out;
  for (const auto& board : boards) {
    out << "== track=" << track_kind_name(board.track)
        << " access=" << access_mode_name(board.access_mode) << " ==\n";
    out << "rank  submission      overall  budget  runtime_med  err_rate  timeouts\n";
    int rank = 1;
    for (const auto& row : board.rows) {
      char line[160];
      std::snprintf(line, sizeof(line), "%-5d %-15s %7.4f  %-6s %10.3fs  %8.4f  %8lld\n", rank++,
                    row.submission_id.c_str(), row.overall_score, row.budget_class.c_str(),
                    row.runtime_median_seconds, row.error_rate,
                    static_cast<long long>(row.timeout_count));
      out << line;
    }
    out << "\n";
  }
  return out.str();
}

SensitivityReport aggregation_sensitivity(
    const std::map<std::string, std::vector<TaskScore>>& scores_by_submission,
    const std::vector<std::string>& expected_task_ids) {
  SensitivityReport report;
  if (scores_by_submission.size() < 2) {
    report.degenerate = true;
    return report;
  }

  std::vector<std::string> ids;
  std::vector<double> macro;
  std::vector<double> micro;
  for (const auto& [id, scores] : scores_by_submission) {
    ids.push_back(id);
    macro.push_back(aggregate(scores, expected_task_ids, "macro"));
    micro.push_back(aggregate(scores, expected_task_ids, "micro"));
  }

  auto order_by = [&](const std::vector<double>& values) {
    std::vector<std::size_t> idx(ids.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (values[a] != values[b]) return values[a] > values[b];
      return ids[a] < ids[b];
    });
    std::vector<std::string> out;
    for (std::size_t i : idx) out.push_back(ids[i]);
    return out;
  };
  report.macro_order = order_by(macro);
  report.micro_order = order_by(micro);

  // Kendall tau-b over the paired score vectors.
  const std::size_t n = ids.size();
  double concordant = 0.0;
  double discordant = 0.0;
  double ties_macro = 0.0;
  double ties_micro = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pairs += 1.0;
      const double dm = macro[i] - macro[j];
      const double du = micro[i] - micro[j];
      if (dm == 0.0) ties_macro += 1.0;
      if (du == 0.0) ties_micro += 1.0;
      if (dm * du > 0.0) concordant += 1.0;
      if (dm * du < 0.0) discordant += 1.0;
    }
  }
  const double denom = std::sqrt((pairs - ties_macro) * (pairs - ties_micro));
  if (denom == 0.0) {
    report.degenerate = true;
    return report;
  }
  report.kendall_tau = (concordant - discordant) / denom;
  return report;
}

// --- serialization ----------------------------------------------------------

void to_json(nlohmann::json& j, const TaskScore& v) {
  j = {{"submission_id", v.submission_id}, {"task_id", v.task_id},
       {"metric_id", v.metric_id},         {"score", v.score},
       {"item_count", v.item_count},       {"breakdown", v.breakdown}};
}

void from_json(const nlohmann::json& j, TaskScore& v) {
  v.submission_id = j.at("submission_id").get<std::string>();
  v.task_id = j.at("task_id").get<std::string>();
  v.metric_id = j.at("metric_id").get<std::string>();
  v.score = j.at("score").get<double>();
  v.item_count = j.at("item_count").get<std::int64_t>();
  v.breakdown = j.value("breakdown", nlohmann::json::object());
}

void to_json(nlohmann::json& j, const StabilityReport& v) {
  j = {{"submission_id", v.submission_id},
       {"probes_total", v.probes_total},
       {"probes_consistent", v.probes_consistent}};
  nlohmann::json examples = nlohmann::json::array();
  for (const auto& [origin, probe] : v.inconsistency_examples) {
    examples.push_back({{"origin", origin}, {"probe", probe}});
  }
  j["inconsistency_examples"] = examples;
  if (v.stability_rate.has_value()) {
    j["stability_rate"] = *v.stability_rate;
  } else {
    j["stability_rate"] = "not_applicable";
  }
}

void from_json(const nlohmann::json& j, StabilityReport& v) {
  v.submission_id = j.at("submission_id").get<std::string>();
  v.probes_total = j.at("probes_total").get<std::int64_t>();
  v.probes_consistent = j.at("probes_consistent").get<std::int64_t>();
  v.inconsistency_examples.clear();
  for (const auto& e : j.value("inconsistency_examples", nlohmann::json::array())) {
    v.inconsistency_examples.emplace_back(e.value("origin", ""), e.value("probe", ""));
  }
  if (j.contains("stability_rate") && j["stability_rate"].is_number()) {
    v.stability_rate = j["stability_rate"].get<double>();
  } else {
    v.stability_rate.reset();
  }
}

void to_json(nlohmann::json& j, const LeaderboardRow& v) {
  j = {{"submission_id", v.submission_id},
       {"track", track_kind_name(v.track)},
       {"access_mode", access_mode_name(v.access_mode)},
       {"overall_score", v.overall_score},
       {"per_task_scores", v.per_task_scores},
       {"budget_class", v.budget_class},
       {"runtime_median_seconds", v.runtime_median_seconds},
       {"error_rate", v.error_rate},
       {"timeout_count", v.timeout_count},
       {"run_count", v.run_count}};
}

void from_json(const nlohmann::json& j, LeaderboardRow& v) {
  v.submission_id = j.at("submission_id").get<std::string>();
  v.track = track_kind_from_name(j.at("track").get<std::string>());
  v.access_mode = access_mode_from_name(j.at("access_mode").get<std::string>());
  v.overall_score = j.at("overall_score").get<double>();
  v.per_task_scores = j.at("per_task_scores").get<std::map<std::string, double>>();
  v.budget_class = j.value("budget_class", std::string{});
  v.runtime_median_seconds = j.value("runtime_median_seconds", 0.0);
  v.error_rate = j.value("error_rate", 0.0);
  v.timeout_count = j.value("timeout_count", std::int64_t{0});
  v.run_count = j.value("run_count", 1);
}

void to_json(nlohmann::json& j, const Leaderboard& v) {
  j = {{"track", track_kind_name(v.track)},
       {"access_mode", access_mode_name(v.access_mode)},
       {"rows", v.rows}};
}

void from_json(const nlohmann::json& j, Leaderboard& v) {
  v.track = track_kind_from_name(j.at("track").get<std::string>());
  v.access_mode = access_mode_from_name(j.at("access_mode").get<std::string>());
  v.rows = j.at("rows").get<std::vector<LeaderboardRow>>();
}

void to_json(nlohmann::json& j, const SensitivityReport& v) {
  j = {{"macro_order", v.macro_order},
       {"micro_order", v.micro_order},
       {"degenerate", v.degenerate}};
  if (v.kendall_tau.has_value()) {
    j["kendall_tau"] = *v.kendall_tau;
  } else {
    j["kendall_tau"] = "undefined";
  }
}

}  // namespace sealev
