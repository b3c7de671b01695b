#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acel/aggregate.hpp"
#include "acel/value.hpp"

namespace acel {

/// Operators available inside expressions. Sum, Min and Max are the monoid
/// operations; Unit maps a value to 1 (Null stays Null) for counting; Div and
/// Sub finalize decomposable aggregates when an output event is emitted.
enum class Op { Sum, Min, Max, Unit, Div, Sub };

/// Immutable expression tree over attribute names: constants, attribute
/// reads, and operator applications. Copies share structure.
class Expression {
 public:
  enum class Kind { Const, Attr, Apply };

  /// Null constant.
  Expression();

  static Expression constant(Value v);
  static Expression attr(std::string name);
  static Expression apply(Op op, std::vector<Expression> args);
  static Expression binary(Op op, Expression lhs, Expression rhs);
  static Expression monoid(MonoidKind kind, Expression lhs, Expression rhs);

  Kind kind() const;
  const Value& value() const;
  const std::string& name() const;
  Op op() const;
  const std::vector<Expression>& args() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Op op_of(MonoidKind kind);

/// Applies an operator to already evaluated operands.
Value apply_op(Op op, const std::vector<Value>& args);

/// Evaluates x against attrs. Returns nullopt when x reads an attribute
/// missing from attrs. Throws EvaluationError on ill-typed operands.
std::optional<Value> try_evaluate(const Expression& x, const AttrMap& attrs);

/// Like try_evaluate, but a missing attribute reads as Null.
Value evaluate_lenient(const Expression& x, const AttrMap& attrs);

/// Attributes read by x.
std::set<std::string> attributes_of(const Expression& x);

enum class MissingAttr { Keep, Null };

/// Replaces each attribute read `a` by subst[a]. Attributes without an entry
/// are kept or replaced by the Null constant, per `missing`.
Expression substitute(const Expression& x, const std::map<std::string, Expression>& subst,
                      MissingAttr missing = MissingAttr::Keep);

std::string to_string(const Expression& x);

}  // namespace acel
