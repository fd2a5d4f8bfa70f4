#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sealev {

// Restricted structural output schema: required fields with one of four
// types. Deliberately not a general-purpose schema language; this covers
// every supported task family.
enum class FieldType { text, number, enumeration, list };

std::string field_type_name(FieldType type);
FieldType field_type_from_name(std::string_view name);

struct SchemaField {
  std::string name;
  FieldType type = FieldType::text;
  bool required = true;
  std::vector<std::string> enum_values;  // enumeration only
};

struct OutputSchema {
  std::vector<SchemaField> fields;

  const SchemaField* find(std::string_view name) const;
};

void to_json(nlohmann::json& j, const SchemaField& f);
void from_json(const nlohmann::json& j, SchemaField& f);
void to_json(nlohmann::json& j, const OutputSchema& s);
void from_json(const nlohmann::json& j, OutputSchema& s);

// Outcome of checking one raw model output against a schema. Violations are
// scorable events, not failures; the first failing field (in schema order)
// names the violation.
struct RecordCheck {
  std::optional<nlohmann::json> record;
  std::string violation;  // "NOT_PARSEABLE", "MISSING_FIELD:answer", "WRONG_TYPE:x", "INVALID_ENUM:x"

  bool ok() const { return record.has_value(); }
};

RecordCheck validate_output_record(std::string_view raw, const OutputSchema& contract);

}  // namespace sealev
