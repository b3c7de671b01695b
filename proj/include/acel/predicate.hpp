#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "acel/expression.hpp"
#include "acel/value.hpp"

namespace acel {

/// Comparison operators. Identical is engine-internal: strict Value equality
/// with Null equal to Null and no Integer/Float promotion.
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge, Identical };

std::string_view to_string(CmpOp op);

/// Applies op under the Null rules: ordering with a Null operand is false,
/// equality holds for two Nulls, Integer and Float compare numerically.
/// Throws EvaluationError when ordering Text.
bool compare_values(const Value& lhs, CmpOp op, const Value& rhs);

/// Boolean combination of comparisons between expressions over one event.
class Predicate {
 public:
  enum class Kind { True, Compare, And, Or, Not };

  /// TRUE.
  Predicate();

  static Predicate truth() { return Predicate(); }
  static Predicate compare(Expression lhs, CmpOp op, Expression rhs);
  static Predicate attr_cmp(std::string attr, CmpOp op, Value literal);
  static Predicate attr_attr(std::string lhs, CmpOp op, std::string rhs);
  static Predicate type_is(std::string type);
  static Predicate conj(Predicate a, Predicate b);
  static Predicate disj(Predicate a, Predicate b);
  static Predicate negate(Predicate p);
  /// Conjunction of all, TRUE when empty.
  static Predicate all_of(const std::vector<Predicate>& ps);
  /// Disjunction of all, FALSE (NOT TRUE) when empty.
  static Predicate any_of(const std::vector<Predicate>& ps);

  Kind kind() const;
  const Expression& lhs() const;
  CmpOp op() const;
  const Expression& rhs() const;
  const std::vector<Predicate>& children() const;

  friend bool operator==(const Predicate& a, const Predicate& b);

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Evaluates p against attrs; missing attributes read as Null.
bool satisfies(const AttrMap& attrs, const Predicate& p);

/// Substitutes every attribute read; attributes without an entry become Null.
Predicate substitute(const Predicate& p, const std::map<std::string, Expression>& subst);

std::set<std::string> attributes_of(const Predicate& p);

std::string to_string(const Predicate& p);

/// A test over a whole bag of events.
struct MultisetPredicate {
  enum class Kind {
    SameAttr,    ///< all members agree on attr
    Increasing,  ///< strictly increasing along time successors
    Decreasing,  ///< strictly decreasing along time successors
  };
  Kind kind;
  std::string attr;

  friend bool operator==(const MultisetPredicate&, const MultisetPredicate&) = default;
};

std::string to_string(const MultisetPredicate& mp);

}  // namespace acel
