#pragma once

#include <concepts>
#include <cstdint>
#include <map>
#include <string>
#include <variant>

namespace acel {

/// Scalar attribute value: Null, 64-bit Integer, Float, or Text.
class Value {
 public:
  enum class Kind { Null, Integer, Float, Text };

  Value() = default;
  template <std::integral T>
    requires(!std::same_as<T, bool>)
  Value(T v) : data_(static_cast<std::int64_t>(v)) {}
  Value(double v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char* v) : data_(std::string(v)) {}

  static Value null() { return Value(); }

  Kind kind() const noexcept { return static_cast<Kind>(data_.index()); }
  bool is_null() const noexcept { return kind() == Kind::Null; }
  bool is_numeric() const noexcept { return kind() == Kind::Integer || kind() == Kind::Float; }
  bool is_text() const noexcept { return kind() == Kind::Text; }

  std::int64_t as_integer() const { return std::get<std::int64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  const std::string& as_text() const { return std::get<std::string>(data_); }

  /// Numeric value widened to double. Throws EvaluationError if not numeric.
  double to_double() const;

  /// Literal rendering that the query parser reads back to the same value.
  std::string to_string() const;

  /// Strict equality: same kind and same payload. Agrees with
  /// canonical_compare, so NaN equals NaN and -0.0 differs from 0.0.
  friend bool operator==(const Value& a, const Value& b);

 private:
  std::variant<std::monostate, std::int64_t, double, std::string> data_;
};

/// Total order used for canonical sorting: Null < numbers < Text.
/// Numbers compare numerically; an Integer sorts before an equal Float.
int canonical_compare(const Value& a, const Value& b);

inline bool operator==(const Value& a, const Value& b) { return canonical_compare(a, b) == 0; }

/// Attribute name to value.
using AttrMap = std::map<std::string, Value>;

int canonical_compare(const AttrMap& a, const AttrMap& b);

std::string to_string(const AttrMap& attrs);

}  // namespace acel
