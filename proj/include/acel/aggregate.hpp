#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acel/value.hpp"

namespace acel {

enum class MonoidKind { Sum, Min, Max };

/// Commutative monoid over numeric Values with Null as an absorbing element.
class Monoid {
 public:
  explicit Monoid(MonoidKind kind) : kind_(kind) {}

  MonoidKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept;
  /// 0 for sum, +inf for min, -inf for max.
  Value identity() const;
  /// Throws EvaluationError on non-numeric operands.
  Value combine(const Value& a, const Value& b) const;

  friend bool operator==(const Monoid&, const Monoid&) = default;

 private:
  MonoidKind kind_;
};

Value monoid_fold(const Monoid& m, std::span<const Value> values);

/// Per-element map applied before folding.
enum class ElementMap {
  Identity,
  Unit,  ///< every non-Null element becomes 1
};

/// Scalar post-operation over the folded components.
enum class Finalizer {
  Identity,  ///< single component, returned as is
  Divide,    ///< component0 / component1, always Float
  Subtract,  ///< component0 - component1
};

Value map_element(ElementMap map, const Value& v);

/// Throws EvaluationError when dividing by a zero count.
Value finalize(Finalizer g, std::span<const Value> folded);

/// One folded component of an aggregate: a monoid applied after an element map.
struct AggregateComponent {
  Monoid monoid;
  ElementMap map;
};

/// An aggregate f = g . h where h folds one or more components and g finalizes.
/// Strong self-decomposable functions have one identity-mapped component and no finalizer.
struct AggregateFunction {
  enum class Kind { StrongSelfDecomposable, Decomposable };

  std::string name;
  Kind kind;
  std::vector<AggregateComponent> components;
  Finalizer finalizer;
};

/// Folds each component of f over values and applies the finalizer.
Value aggregate_apply(const AggregateFunction& f, std::span<const Value> values);

/// sum, count, min, max, avg, range.
const std::vector<AggregateFunction>& builtin_aggregates();

/// Case-insensitive lookup in the builtin catalog.
std::optional<AggregateFunction> find_aggregate(std::string_view name);

}  // namespace acel
