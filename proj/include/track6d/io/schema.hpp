#pragma once

#include <filesystem>
#include <string>

#include "track6d/io/json_util.hpp"

namespace track6d {

// Validator for the schema subset the on-disk formats use: type, properties,
// required, additionalProperties (boolean), items (one schema), enum
// (strings), minimum/maximum, minItems/maxItems. "number" accepts integers.
// Failures name the offending path from the document root.
inline void validate_schema(const Json& doc, const Json& schema,
                            const std::string& where = "$") {
  const auto fail = [&](const std::string& msg) {
    throw ValidationError(where + ": " + msg);
  };

  if (schema.contains("type")) {
    const std::string type = schema.at("type").get<std::string>();
    const bool ok =
        (type == "object" && doc.is_object()) ||
        (type == "array" && doc.is_array()) ||
        (type == "string" && doc.is_string()) ||
        (type == "number" && doc.is_number()) ||
        (type == "integer" && doc.is_number_integer()) ||
        (type == "boolean" && doc.is_boolean());
    if (!ok) fail("expected " + type);
  }

  if (schema.contains("enum")) {
    bool hit = false;
    for (const auto& v : schema.at("enum"))
      if (doc == v) hit = true;
    if (!hit) fail("value not in enum");
  }

  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (schema.contains("minimum") &&
        v < schema.at("minimum").get<double>())
      fail("below minimum");
    if (schema.contains("maximum") &&
        v > schema.at("maximum").get<double>())
      fail("above maximum");
  }

  if (doc.is_object()) {
    if (schema.contains("required"))
      for (const auto& name : schema.at("required")) {
        const std::string key = name.get<std::string>();
        if (!doc.contains(key)) fail("missing required field \"" + key + "\"");
      }
    const Json props =
        schema.contains("properties") ? schema.at("properties") : Json::object();
    const bool extra_ok = !schema.contains("additionalProperties") ||
                          schema.at("additionalProperties").get<bool>();
    for (const auto& [key, value] : doc.items()) {
      if (props.contains(key)) {
        validate_schema(value, props.at(key), where + "." + key);
      } else if (!extra_ok) {
        fail("unexpected field \"" + key + "\"");
      }
    }
  }

  if (doc.is_array()) {
    const std::size_t n = doc.size();
    if (schema.contains("minItems") &&
        n < schema.at("minItems").get<std::size_t>())
      fail("too few items");
    if (schema.contains("maxItems") &&
        n > schema.at("maxItems").get<std::size_t>())
      fail("too many items");
    if (schema.contains("items")) {
      const Json& item_schema = schema.at("items");
      for (std::size_t i = 0; i < n; ++i)
        validate_schema(doc.at(i), item_schema,
                        where + "[" + std::to_string(i) + "]");
    }
  }
}

// Load + validate, with the file path prefixed onto any schema failure.
inline Json load_validated(const std::filesystem::path& path,
                           const Json& schema) {
  const Json doc = load_json(path.string());
  try {
    validate_schema(doc, schema);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return doc;
}

}  // namespace track6d
