#include "sealev/sim.hpp"

#include "sealev/error.hpp"
#include "sealev/rng.hpp"

#include <cstdio>

namespace sealev {

namespace {

const std::vector<std::string> kCategories = {"fire",   "flood",     "burglary",
                                              "outage", "collision", "spill"};
const std::vector<std::string> kLocations = {"Harbor District", "North Bridge", "Mill Lane",
                                             "Central Depot",   "Old Market",   "River Road"};
const std::vector<std::string> kPeople = {"Ana Petrov",  "Luis Ortega", "Mara Chen",
                                          "Omar Haddad", "Ivy Clarke",  "Theo Brandt",
                                          "Nadia Rossi", "Karl Jensen"};
const std::vector<std::string> kNouns = {"capacity",  "elevation", "frequency",
                                         "inventory", "voltage",   "staff count"};
const std::vector<std::string> kPlaces = {"Aldervale", "Brimholt", "Cresting",
                                          "Dunmoor",   "Eastfall", "Farrowgate"};

std::string zero_padded(int value, int width) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%0*d", width, value);
  return buf;
}

std::string clock_time(Rng& rng) {
  return zero_padded(static_cast<int>(rng.below(24)), 2) + ":" +
         zero_padded(static_cast<int>(rng.below(60)), 2);
}

std::string join_people(const std::vector<std::string>& names) {
  if (names.empty()) return "none";
  if (names.size() == 1) return names[0];
  std::string out;
  for (std::size_t i = 0; i + 1 < names.size(); ++i) {
    if (!out.empty()) out += ", ";
    out += names[i];
  }
  return out + " and " + names.back();
}

OutputSchema extraction_schema(bool with_entities) {
  OutputSchema schema;
  schema.fields.push_back({"id", FieldType::text, true, {}});
  schema.fields.push_back({"category", FieldType::enumeration, true, kCategories});
  schema.fields.push_back({"location", FieldType::text, true, {}});
  schema.fields.push_back({"time", FieldType::text, true, {}});
  if (with_entities) schema.fields.push_back({"entities", FieldType::list, true, {}});
  return schema;
}

TaskDefinition make_extraction_task(const std::string& task_id, int instances, bool scalar_only,
                                    std::uint64_t seed, const std::string& budget_class) {
  TaskDefinition task;
  task.task_id = task_id;
  task.title = "Structured extraction from short incident reports";
  task.family = TaskFamily::extraction;
  task.budget_class_id = budget_class;
  task.scoring_plan = {"exact_match_schema", nlohmann::json::object()};
  task.io_contract.output_schema = extraction_schema(!scalar_only);

  for (int i = 0; i < instances; ++i) {
    Rng rng(SeedMixer(seed).mix(task_id).mix(i).value());
    TaskInstance inst;
    inst.instance_id = "e" + zero_padded(i, 5);

    const std::string category = kCategories[rng.below(kCategories.size())];
    const std::string location = kLocations[rng.below(kLocations.size())];
    const std::string time = clock_time(rng);
    std::vector<std::string> entities;
    if (!scalar_only) {
      std::vector<std::string> pool = kPeople;
      rng.shuffle(pool);
      pool.resize(1 + rng.below(3));
      entities = pool;
    }

    inst.prompt = "Incident report. On " + time + ", a " + category +
                  " incident occurred at " + location + ". Involved parties: " +
                  join_people(entities) + ". Dispatch closed the case.";

    ExtractionGold gold;
    gold.fields = {{"category", category}, {"location", location}, {"time", time}};
    gold.entities = entities;
    inst.gold = gold;
    task.instances.push_back(std::move(inst));
  }
  return task;
}

TaskDefinition make_evidence_task(const std::string& task_id, int instances, std::uint64_t seed,
                                  const std::string& budget_class) {
  TaskDefinition task;
  task.task_id = task_id;
  task.title = "Evidence-grounded QA with abstention";
  task.family = TaskFamily::evidence_qa;
  task.budget_class_id = budget_class;
  task.scoring_plan = {"evidence_abstention",
                       nlohmann::json{{"unsupported_answer_penalty", 0.5}}};
  task.io_contract.output_schema.fields = {
      {"id", FieldType::text, true, {}},
      {"answer", FieldType::text, true, {}},
      {"support_begin", FieldType::number, false, {}},
      {"support_end", FieldType::number, false, {}}};

  for (int i = 0; i < instances; ++i) {
    Rng rng(SeedMixer(seed).mix(task_id).mix(i).value());
    TaskInstance inst;
    inst.instance_id = "q" + zero_padded(i, 5);

    std::vector<std::string> nouns = kNouns;
    rng.shuffle(nouns);
    const std::string place = kPlaces[rng.below(kPlaces.size())];
    const std::size_t fact_count = 3 + rng.below(2);

    std::string passage;
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;
    std::vector<std::string> values;
    for (std::size_t f = 0; f < fact_count; ++f) {
      const std::string value = std::to_string(10 + rng.below(890)) + " units";
      const std::string sentence =
          "The " + nouns[f] + " of the " + place + " station is " + value + ".";
      const std::int64_t begin = static_cast<std::int64_t>(passage.size());
      passage += sentence;
      spans.emplace_back(begin, static_cast<std::int64_t>(passage.size()));
      values.push_back(value);
      passage += " ";
    }
    if (!passage.empty() && passage.back() == ' ') passage.pop_back();

    const bool answerable = rng.unit() >= 0.4;
    EvidenceGold gold;
    std::string question_noun;
    if (answerable) {
      const std::size_t pick = rng.below(fact_count);
      question_noun = nouns[pick];
      gold.answerable = true;
      gold.answer = values[pick];
      gold.span_begin = spans[pick].first;
      gold.span_end = spans[pick].second;
    } else {
      question_noun = nouns[fact_count];  // a noun absent from the passage
      gold.answerable = false;
    }

    inst.prompt = "Passage: " + passage + "\nQuestion: What is the " + question_noun +
                  " of the " + place +
                  " station?\nAnswer with JSON fields id, answer, support_begin, support_end "
                  "(character offsets into the passage); answer ABSTAIN if the passage does "
                  "not say.";
    inst.gold = gold;
    task.instances.push_back(std::move(inst));
  }
  return task;
}

TaskDefinition make_stability_task(const std::string& task_id, int instances, std::uint64_t seed,
                                   const std::string& budget_class) {
  TaskDefinition task;
  task.task_id = task_id;
  task.title = "Decision stability under innocuous rephrasing";
  task.family = TaskFamily::stability;
  task.budget_class_id = budget_class;
  task.scoring_plan = {"stability", nlohmann::json{{"correctness_weight", 0.5},
                                                   {"consistency_weight", 0.5}}};
  task.io_contract.output_schema.fields = {{"id", FieldType::text, true, {}},
                                           {"decision", FieldType::enumeration, true,
                                            {"yes", "no"}},
                                           {"rationale", FieldType::text, false, {}}};

  const int families = (instances + 2) / 3;
  for (int f = 0; f < families; ++f) {
    Rng rng(SeedMixer(seed).mix(task_id).mix(f).value());
    const int a = 10 + static_cast<int>(rng.below(90));
    int b = 10 + static_cast<int>(rng.below(90));
    if (b == a) b = a == 99 ? 98 : a + 1;
    const int c = 10 + static_cast<int>(rng.below(90));  // distractor value
    const std::string sa = std::to_string(a);
    const std::string sb = std::to_string(b);
    const std::string family_id = "fam" + zero_padded(f, 4);

    const std::string ask =
        " Reply with JSON fields id, decision (yes or no) and rationale.";
    const std::vector<std::string> variants = {
        "Consider the values " + sa + " and " + sb +
            ". Is the first strictly greater than the second?" + ask,
        "Two readings were logged: " + sa + " and then " + sb +
            ". Determine whether the earlier reading exceeds the later one." + ask,
        "A sensor reported " + sa + " while the backup reported " + sb +
            "; ignore the calibration constant " + std::to_string(c) +
            ". Does the primary value surpass the backup value?" + ask};

    for (std::size_t v = 0; v < variants.size(); ++v) {
      TaskInstance inst;
      inst.instance_id = "s" + zero_padded(f, 4) + "v" + std::to_string(v);
      inst.family_id = family_id;
      inst.prompt = variants[v];
      inst.gold = StabilityGold{a > b ? "yes" : "no"};
      task.instances.push_back(std::move(inst));
    }
  }
  return task;
}

}  // namespace

std::vector<TaskDefinition> generate_tasks(const ScenarioConfig& config) {
  if (config.syllabus.budget_classes.empty()) {
    throw Error("INVALID_SYLLABUS", "scenario syllabus has no budget classes");
  }
  const std::string budget_class = config.syllabus.budget_classes.front().id;

  std::vector<TaskDefinition> tasks;
  int index = 0;
  for (const auto& spec : config.tasks) {
    const std::string task_id = task_family_name(spec.family).substr(0, 3) + "-" +
                                zero_padded(index++, 2);
    const std::uint64_t seed = SeedMixer(config.seed).mix(task_id).value();
    switch (spec.family) {
      case TaskFamily::extraction:
        tasks.push_back(
            make_extraction_task(task_id, spec.instances, spec.scalar_only, seed, budget_class));
        break;
      case TaskFamily::evidence_qa:
        tasks.push_back(make_evidence_task(task_id, spec.instances, seed, budget_class));
        break;
      case TaskFamily::stability:
        tasks.push_back(make_stability_task(task_id, spec.instances, seed, budget_class));
        break;
      case TaskFamily::custom:
        throw Error("UNKNOWN_FAMILY", "the simulator generates the three standard families");
    }
  }
  return tasks;
}

}  // namespace sealev
