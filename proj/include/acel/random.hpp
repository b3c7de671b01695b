#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "acel/event.hpp"

namespace acel {

/// Shape of generated streams. Attributes without a pool draw integers 0..9.
struct StreamShape {
  Schema schema;
  std::size_t max_length = 8;
  double null_rate = 0.1;
  std::map<std::string, std::vector<Value>> pools;
  /// Relative type frequencies; types left out weigh 1.
  std::map<std::string, double> type_weights;
};

/// Reads {"max_length": n, "null_rate": p, "pools": {"attr": [v, ...]},
/// "type_weights": {"TYPE": w}}; every key is optional.
StreamShape read_stream_shape(std::istream& in, Schema schema);

/// Length is uniform in 0..max_length.
Stream random_stream(const StreamShape& shape, std::mt19937_64& rng);

/// ACEL_SEED if set and numeric, otherwise `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace acel
