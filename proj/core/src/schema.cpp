#include "sealev/schema.hpp"

#include "sealev/error.hpp"

#include <algorithm>

namespace sealev {

std::string field_type_name(FieldType type) {
  switch (type) {
    case FieldType::text: return "text";
    case FieldType::number: return "number";
    case FieldType::enumeration: return "enum";
    case FieldType::list: return "list";
  }
  return "text";
}

FieldType field_type_from_name(std::string_view name) {
  if (name == "text") return FieldType::text;
  if (name == "number") return FieldType::number;
  if (name == "enum") return FieldType::enumeration;
  if (name == "list") return FieldType::list;
  throw Error("UNKNOWN_FIELD_TYPE", std::string(name));
}

const SchemaField* OutputSchema::find(std::string_view name) const {
  for (const auto& f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

void to_json(nlohmann::json& j, const SchemaField& f) {
  j = nlohmann::json{{"name", f.name}, {"type", field_type_name(f.type)}};
  if (!f.required) j["required"] = false;
  if (!f.enum_values.empty()) j["values"] = f.enum_values;
}

void from_json(const nlohmann::json& j, SchemaField& f) {
  f.name = j.at("name").get<std::string>();
  f.type = field_type_from_name(j.at("type").get<std::string>());
  f.required = j.value("required", true);
  f.enum_values = j.value("values", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const OutputSchema& s) {
  j = nlohmann::json{{"fields", s.fields}};
}

void from_json(const nlohmann::json& j, OutputSchema& s) {
  s.fields = j.at("fields").get<std::vector<SchemaField>>();
}

namespace {

bool type_matches(const nlohmann::json& value, const SchemaField& field) {
  switch (field.type) {
    case FieldType::text:
      return value.is_string();
    case FieldType::number:
      return value.is_number();
    case FieldType::enumeration: {
      if (!value.is_string()) return false;
      const auto& v = value.get_ref<const std::string&>();
      return std::find(field.enum_values.begin(), field.enum_values.end(), v) !=
             field.enum_values.end();
    }
    case FieldType::list: {
      if (!value.is_array()) return false;
      return std::all_of(value.begin(), value.end(),
                         [](const nlohmann::json& e) { return e.is_string(); });
    }
  }
  return false;
}

}  // namespace

RecordCheck validate_output_record(std::string_view raw, const OutputSchema& contract) {
  nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    return RecordCheck{std::nullopt, "NOT_PARSEABLE"};
  }
  for (const auto& field : contract.fields) {
    auto it = parsed.find(field.name);
    if (it == parsed.end()) {
      if (!field.required) continue;
      return RecordCheck{std::nullopt, "MISSING_FIELD:" + field.name};
    }
    if (!type_matches(*it, field)) {
      if (field.type == FieldType::enumeration && it->is_string()) {
        return RecordCheck{std::nullopt, "INVALID_ENUM:" + field.name};
      }
      return RecordCheck{std::nullopt, "WRONG_TYPE:" + field.name};
    }
  }
  return RecordCheck{std::move(parsed), ""};
}

}  // namespace sealev
