#include "schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bladegauge::app {

namespace {

const std::set<std::string>& supported() {
  static const std::set<std::string> keys = {
      "type", "enum", "properties", "required", "additionalProperties", "items", "minItems", "maxItems",
      "minimum", "maximum", "exclusiveMinimum", "exclusiveMaximum", "minLength",
      "$schema", "$id", "title", "description"};
  return keys;
}

bool has_type(const json& doc, const std::string& t) {
  if (t == "object") return doc.is_object();
  if (t == "array") return doc.is_array();
  if (t == "string") return doc.is_string();
  if (t == "boolean") return doc.is_boolean();
  if (t == "null") return doc.is_null();
  if (t == "number") return doc.is_number();
  if (t == "integer") {
    if (doc.is_number_integer()) return true;
    return doc.is_number_float() && std::floor(doc.get<double>()) == doc.get<double>();
  }
  throw std::logic_error("schema: unknown type '" + t + "'");
}

std::string type_name(const json& doc) {
  if (doc.is_number_integer()) return "integer";
  if (doc.is_number()) return "number";
  return doc.type_name();
}

void walk(const json& schema, const json& doc, const std::string& ptr, std::vector<SchemaViolation>& out) {
  auto fail = [&](std::string msg) { out.push_back({ptr, std::move(msg)}); };

  if (auto t = schema.find("type"); t != schema.end()) {
    std::vector<std::string> allowed;
    if (t->is_array()) {
      for (const json& x : *t) allowed.push_back(x.get<std::string>());
    } else {
      allowed.push_back(t->get<std::string>());
    }
    if (std::none_of(allowed.begin(), allowed.end(), [&](const std::string& a) { return has_type(doc, a); })) {
      std::string want;
      for (const std::string& a : allowed) want += (want.empty() ? "" : " or ") + a;
      fail("expected " + want + ", got " + type_name(doc));
      return;
    }
  }
  if (auto e = schema.find("enum"); e != schema.end()) {
    if (std::find(e->begin(), e->end(), doc) == e->end()) fail("value " + doc.dump() + " is not one of " + e->dump());
  }
  if (doc.is_number()) {
    const double v = doc.get<double>();
    if (auto m = schema.find("minimum"); m != schema.end() && v < m->get<double>()) fail("must be >= " + m->dump());
    if (auto m = schema.find("maximum"); m != schema.end() && v > m->get<double>()) fail("must be <= " + m->dump());
    if (auto m = schema.find("exclusiveMinimum"); m != schema.end() && v <= m->get<double>()) fail("must be > " + m->dump());
    if (auto m = schema.find("exclusiveMaximum"); m != schema.end() && v >= m->get<double>()) fail("must be < " + m->dump());
  }
  if (doc.is_string()) {
    if (auto m = schema.find("minLength"); m != schema.end() && doc.get<std::string>().size() < m->get<std::size_t>())
      fail("string shorter than " + m->dump());
  }
  if (doc.is_array()) {
    if (auto m = schema.find("minItems"); m != schema.end() && doc.size() < m->get<std::size_t>())
      fail("needs at least " + m->dump() + " items, got " + std::to_string(doc.size()));
    if (auto m = schema.find("maxItems"); m != schema.end() && doc.size() > m->get<std::size_t>())
      fail("allows at most " + m->dump() + " items, got " + std::to_string(doc.size()));
    if (auto items = schema.find("items"); items != schema.end()) {
      for (std::size_t i = 0; i < doc.size(); ++i) walk(*items, doc[i], ptr + "/" + std::to_string(i), out);
    }
  }
  if (doc.is_object()) {
    const json props = schema.value("properties", json::object());
    if (auto r = schema.find("required"); r != schema.end()) {
      for (const json& key : *r)
        if (!doc.contains(key.get<std::string>())) fail("missing required property '" + key.get<std::string>() + "'");
    }
    const bool closed = schema.value("additionalProperties", true) == false;
    for (const auto& [key, value] : doc.items()) {
      const std::string child = ptr + "/" + escape_pointer_token(key);
      if (auto p = props.find(key); p != props.end()) {
        walk(*p, value, child, out);
      } else if (closed) {
        out.push_back({child, "unknown property"});
      }
    }
  }
}

}  // namespace

std::vector<SchemaViolation> validate(const json& schema, const json& doc) {
  std::vector<SchemaViolation> out;
  walk(schema, doc, "", out);
  return out;
}

void check_schema_keywords(const json& schema, const std::string& where) {
  if (!schema.is_object()) throw std::logic_error("schema at '" + where + "' is not an object");
  for (const auto& [key, value] : schema.items()) {
    if (!supported().count(key)) throw std::logic_error("schema keyword '" + key + "' at '" + where + "' is not supported");
    if (key == "additionalProperties" && !value.is_boolean())
      throw std::logic_error("schema at '" + where + "': only boolean additionalProperties is supported");
  }
  if (auto p = schema.find("properties"); p != schema.end())
    for (const auto& [key, sub] : p->items()) check_schema_keywords(sub, where + "/properties/" + escape_pointer_token(key));
  if (auto i = schema.find("items"); i != schema.end()) check_schema_keywords(*i, where + "/items");
}

std::string escape_pointer_token(const std::string& token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace bladegauge::app
