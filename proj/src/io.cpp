#include "acel/io.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>

#include "acel/error.hpp"

namespace acel {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Non-finite floats have no JSON literal; they travel as {"float": "inf"}.
ordered_json to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null:
      return nullptr;
    case Value::Kind::Integer:
      return v.as_integer();
    case Value::Kind::Float:
      if (std::isfinite(v.as_float())) return v.as_float();
      return ordered_json{{"float", v.to_string()}};
    case Value::Kind::Text:
      return v.as_text();
  }
  return nullptr;
}

template <typename Json>
Value from_json(const Json& j, bool allow_special) {
  if (j.is_null()) return Value::null();
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.template get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
      throw ValidationError("integer out of range");
    }
    return j.template get<std::int64_t>();
  }
  if (j.is_number_float()) return j.template get<double>();
  if (j.is_string()) return j.template get<std::string>();
  if (allow_special && j.is_object() && j.size() == 1 && j.contains("float") && j["float"].is_string()) {
    const auto s = j["float"].template get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ValidationError("unsupported value " + j.dump());
}

}  // namespace

Stream read_stream(std::istream& in) {
  Stream s;
  std::string line;
  std::size_t number = 0;
  std::vector<std::size_t> blank;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      blank.push_back(number);
      continue;
    }
    if (!blank.empty()) throw StreamFormatError("blank line inside the stream", blank.front());
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw StreamFormatError(std::string("not valid JSON: ") + e.what(), number);
    }
    if (!j.is_object()) throw StreamFormatError("expected a JSON object", number);
    AttrMap attrs;
    for (const auto& [key, value] : j.items()) {
      try {
        attrs[key] = from_json(value, false);
      } catch (const ValidationError& e) {
        throw StreamFormatError("attribute " + key + ": " + e.what(), number);
      }
    }
    if (!attrs.count("type") || !attrs["type"].is_text()) {
      throw StreamFormatError("missing string attribute \"type\"", number);
    }
    if (attrs.count("time")) throw StreamFormatError("attribute \"time\" is reserved for the event position", number);
    s.emplace_back(std::move(attrs), static_cast<std::int64_t>(s.size()));
  }
  return s;
}

Schema read_schema(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("schema must be a JSON object");
  std::map<std::string, std::set<std::string>> types;
  for (const auto& [type, attrs] : j.items()) {
    if (!attrs.is_array()) throw ValidationError("schema entry " + type + " must be an array of names");
    auto& set = types[type];
    for (const auto& a : attrs) {
      if (!a.is_string()) throw ValidationError("schema entry " + type + " lists a non-string name");
      set.insert(a.get<std::string>());
    }
  }
  return Schema(std::move(types));
}

std::string write_schema(const Schema& sch) {
  json j = json::object();
  for (const auto& [type, attrs] : sch.types()) j[type] = std::vector<std::string>(attrs.begin(), attrs.end());
  return j.dump();
}

std::string serialize(const ComplexEvent& c) {
  ordered_json valuation = ordered_json::object();
  for (const auto& [var, bag] : c.valuation()) {
    ordered_json members = ordered_json::array();
    for (const auto& e : bag) {
      ordered_json attrs = ordered_json::object();
      for (const auto& [name, value] : e.attrs()) attrs[name] = to_json(value);
      members.push_back(ordered_json{{"time", e.time()}, {"attrs", std::move(attrs)}});
    }
    valuation[var] = std::move(members);
  }
  ordered_json line{{"start", c.start()}, {"end", c.end()}, {"valuation", std::move(valuation)}};
  return line.dump();
}

ComplexEvent parse_result_line(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("result line is not valid JSON: ") + e.what());
  }
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(std::string("result line: ") + what);
  };
  require(j.is_object() && j.contains("start") && j.contains("end") && j.contains("valuation"),
          "expected start, end and valuation");
  require(j["start"].is_number_integer() && j["end"].is_number_integer(), "start and end must be integers");
  require(j["valuation"].is_object(), "valuation must be an object");
  Valuation v;
  for (const auto& [var, members] : j["valuation"].items()) {
    require(members.is_array(), "bag must be an array");
    std::vector<Event> events;
    for (const auto& m : members) {
      require(m.is_object() && m.contains("time") && m["time"].is_number_integer() && m.contains("attrs") &&
                  m["attrs"].is_object(),
              "bag member needs integer time and attrs object");
      AttrMap attrs;
      for (const auto& [name, value] : m["attrs"].items()) attrs[name] = from_json(value, true);
      events.emplace_back(std::move(attrs), m["time"].get<std::int64_t>());
    }
    v.emplace(var, EventBag(std::move(events)));
  }
  const auto start = j["start"].get<std::int64_t>();
  const auto end = j["end"].get<std::int64_t>();
  require(start <= end, "start after end");
  return ComplexEvent(start, end, std::move(v));
}

std::vector<std::string> serialize_results(const ResultSet& results) {
  std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, std::string>> keyed;
  keyed.reserve(results.size());
  for (const auto& c : results) keyed.push_back({{c.start(), c.end()}, serialize(c)});
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  out.reserve(keyed.size());
  for (auto& k : keyed) out.push_back(std::move(k.second));
  return out;
}

}  // namespace acel
