#include "acel/random.hpp"

#include <cstdlib>
#include <json.hpp>

#include "acel/error.hpp"

namespace acel {

StreamShape read_stream_shape(std::istream& in, Schema schema) {
  StreamShape shape;
  shape.schema = std::move(schema);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("generator file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("generator file must be a JSON object");
  if (j.contains("max_length")) shape.max_length = j["max_length"].get<std::size_t>();
  if (j.contains("null_rate")) shape.null_rate = j["null_rate"].get<double>();
  if (j.contains("pools")) {
    for (const auto& [attr, values] : j["pools"].items()) {
      auto& pool = shape.pools[attr];
      for (const auto& v : values) {
        if (v.is_number_integer()) {
          pool.emplace_back(v.get<std::int64_t>());
        } else if (v.is_number_float()) {
          pool.emplace_back(v.get<double>());
        } else if (v.is_string()) {
          pool.emplace_back(v.get<std::string>());
        } else if (v.is_null()) {
          pool.push_back(Value::null());
        } else {
          throw ValidationError("pool for " + attr + " holds an unsupported value");
        }
      }
      if (pool.empty()) throw ValidationError("pool for " + attr + " is empty");
    }
  }
  if (j.contains("type_weights")) {
    for (const auto& [type, w] : j["type_weights"].items()) {
      if (!shape.schema.has_type(type)) throw ValidationError("type_weights names unknown type " + type);
      shape.type_weights[type] = w.get<double>();
    }
  }
  return shape;
}

Stream random_stream(const StreamShape& shape, std::mt19937_64& rng) {
  const auto types = shape.schema.type_names();
  if (types.empty()) return {};
  std::uniform_int_distribution<std::size_t> length(0, shape.max_length);
  std::vector<double> weights;
  for (const auto& t : types) {
    auto w = shape.type_weights.find(t);
    weights.push_back(w == shape.type_weights.end() ? 1.0 : w->second);
  }
  std::discrete_distribution<std::size_t> pick_type(weights.begin(), weights.end());
  std::uniform_int_distribution<std::int64_t> digit(0, 9);
  std::bernoulli_distribution null(shape.null_rate);
  std::vector<AttrMap> events(length(rng));
  for (auto& attrs : events) {
    const auto& type = types[pick_type(rng)];
    attrs["type"] = Value(type);
    for (const auto& a : shape.schema.attributes(type)) {
      if (null(rng)) {
        attrs[a] = Value::null();
        continue;
      }
      auto pool = shape.pools.find(a);
      if (pool == shape.pools.end()) {
        attrs[a] = Value(digit(rng));
      } else {
        std::uniform_int_distribution<std::size_t> at(0, pool->second.size() - 1);
        attrs[a] = pool->second[at(rng)];
      }
    }
  }
  return make_stream(std::move(events));
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* raw = std::getenv("ACEL_SEED");
  if (!raw || !*raw) return fallback;
  char* end = nullptr;
  const auto v = std::strtoull(raw, &end, 10);
  return (end && *end == '\0') ? v : fallback;
}

}  // namespace acel
