#include "acel/aggregate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "acel/error.hpp"

namespace acel {

namespace {

void require_numeric(const Value& v, std::string_view op) {
  if (!v.is_numeric()) {
    throw EvaluationError(std::string(op) + " expects numbers, got " + v.to_string());
  }
}

Value add(const Value& a, const Value& b) {
  if (a.kind() == Value::Kind::Integer && b.kind() == Value::Kind::Integer) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a.as_integer(), b.as_integer(), &out)) {
      throw EvaluationError("integer overflow in sum");
    }
    return out;
  }
  return a.to_double() + b.to_double();
}

// Picks the smaller (or larger) operand; on numeric ties an Integer wins so
// the result does not depend on operand order.
Value pick(const Value& a, const Value& b, bool smaller) {
  if (a.kind() == Value::Kind::Integer && b.kind() == Value::Kind::Integer) {
    return (a.as_integer() < b.as_integer()) == smaller ? a : b;
  }
  const double x = a.to_double();
  const double y = b.to_double();
  if (x == y) {
    if (a.kind() != b.kind()) return a.kind() == Value::Kind::Integer ? a : b;
    return std::signbit(x) == smaller ? a : b;
  }
  return (x < y) == smaller ? a : b;
}

}  // namespace

std::string_view Monoid::name() const noexcept {
  switch (kind_) {
    case MonoidKind::Sum:
      return "sum";
    case MonoidKind::Min:
      return "min";
    case MonoidKind::Max:
      return "max";
  }
  return "?";
}

Value Monoid::identity() const {
  switch (kind_) {
    case MonoidKind::Sum:
      return std::int64_t{0};
    case MonoidKind::Min:
      return std::numeric_limits<double>::infinity();
    case MonoidKind::Max:
      return -std::numeric_limits<double>::infinity();
  }
  return {};
}

Value Monoid::combine(const Value& a, const Value& b) const {
  if (a.is_null() || b.is_null()) {
    if (!a.is_null()) require_numeric(a, name());
    if (!b.is_null()) require_numeric(b, name());
    return Value::null();
  }
  require_numeric(a, name());
  require_numeric(b, name());
  switch (kind_) {
    case MonoidKind::Sum:
      return add(a, b);
    case MonoidKind::Min:
      return pick(a, b, true);
    case MonoidKind::Max:
      return pick(a, b, false);
  }
  return {};
}

Value monoid_fold(const Monoid& m, std::span<const Value> values) {
  Value acc = m.identity();
  for (const Value& v : values) acc = m.combine(acc, v);
  return acc;
}

Value map_element(ElementMap map, const Value& v) {
  switch (map) {
    case ElementMap::Identity:
      return v;
    case ElementMap::Unit:
      return v.is_null() ? Value::null() : Value(1);
  }
  return v;
}

Value finalize(Finalizer g, std::span<const Value> folded) {
  switch (g) {
    case Finalizer::Identity:
      return folded[0];
    case Finalizer::Divide: {
      const Value& s = folded[0];
      const Value& c = folded[1];
      if (s.is_null() || c.is_null()) return Value::null();
      if (c.to_double() == 0.0) throw EvaluationError("average of an empty bag");
      return s.to_double() / c.to_double();
    }
    case Finalizer::Subtract: {
      const Value& hi = folded[0];
      const Value& lo = folded[1];
      if (hi.is_null() || lo.is_null()) return Value::null();
      if (hi.kind() == Value::Kind::Integer && lo.kind() == Value::Kind::Integer) {
        std::int64_t out = 0;
        if (__builtin_sub_overflow(hi.as_integer(), lo.as_integer(), &out)) {
          throw EvaluationError("integer overflow in range");
        }
        return out;
      }
      return hi.to_double() - lo.to_double();
    }
  }
  return {};
}

Value aggregate_apply(const AggregateFunction& f, std::span<const Value> values) {
  std::vector<Value> folded;
  folded.reserve(f.components.size());
  for (const auto& component : f.components) {
    Value acc = component.monoid.identity();
    for (const Value& v : values) acc = component.monoid.combine(acc, map_element(component.map, v));
    folded.push_back(std::move(acc));
  }
  return finalize(f.finalizer, folded);
}

const std::vector<AggregateFunction>& builtin_aggregates() {
  using K = AggregateFunction::Kind;
  static const std::vector<AggregateFunction> catalog = {
      {"sum", K::StrongSelfDecomposable, {{Monoid(MonoidKind::Sum), ElementMap::Identity}}, Finalizer::Identity},
      {"count", K::Decomposable, {{Monoid(MonoidKind::Sum), ElementMap::Unit}}, Finalizer::Identity},
      {"min", K::StrongSelfDecomposable, {{Monoid(MonoidKind::Min), ElementMap::Identity}}, Finalizer::Identity},
      {"max", K::StrongSelfDecomposable, {{Monoid(MonoidKind::Max), ElementMap::Identity}}, Finalizer::Identity},
      {"avg",
       K::Decomposable,
       {{Monoid(MonoidKind::Sum), ElementMap::Identity}, {Monoid(MonoidKind::Sum), ElementMap::Unit}},
       Finalizer::Divide},
      {"range",
       K::Decomposable,
       {{Monoid(MonoidKind::Max), ElementMap::Identity}, {Monoid(MonoidKind::Min), ElementMap::Identity}},
       Finalizer::Subtract},
  };
  return catalog;
}

std::optional<AggregateFunction> find_aggregate(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& f : builtin_aggregates()) {
    if (f.name == lower) return f;
  }
  return std::nullopt;
}

}  // namespace acel
