#pragma once

#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "acel/predicate.hpp"

namespace acel {

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Filter payload on one variable: a per-event predicate applied to every
/// member of the bag, or a test over the bag as a whole.
struct FilterAtom {
  std::string var;
  std::variant<Predicate, MultisetPredicate> test;

  bool is_multiset() const { return std::holds_alternative<MultisetPredicate>(test); }
  friend bool operator==(const FilterAtom&, const FilterAtom&) = default;
};

/// Filter condition: an atom, or a conjunction/disjunction of conditions.
class FilterExpr {
 public:
  enum class Kind { Atom, And, Or };

  FilterExpr(FilterAtom atom);
  static FilterExpr conj(FilterExpr a, FilterExpr b);
  static FilterExpr disj(FilterExpr a, FilterExpr b);

  Kind kind() const noexcept { return kind_; }
  const FilterAtom& atom() const { return *atom_; }
  const FilterExpr& lhs() const { return (*children_)[0]; }
  const FilterExpr& rhs() const { return (*children_)[1]; }

  friend bool operator==(const FilterExpr& a, const FilterExpr& b);

 private:
  FilterExpr() = default;
  Kind kind_ = Kind::Atom;
  std::shared_ptr<const FilterAtom> atom_;
  std::shared_ptr<const std::vector<FilterExpr>> children_;
};

/// One `target <- function source(attr)` binding of an aggregation.
struct AggBinding {
  std::string target;
  std::string function;
  std::string source_var;
  std::string source_attr;

  friend bool operator==(const AggBinding&, const AggBinding&) = default;
};

namespace ast {

struct EventType {
  std::string type;
};
struct As {
  FormulaPtr inner;
  std::string var;
};
struct Filter {
  FormulaPtr inner;
  FilterExpr condition;
};
struct ProjectVars {
  FormulaPtr inner;
  std::vector<std::string> vars;
};
struct ProjectAttrs {
  FormulaPtr inner;
  std::string var;
  std::vector<std::string> attrs;
};
struct Or {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
struct And {
  FormulaPtr lhs;
  FormulaPtr rhs;
};
/// `;` when not contiguous, `:` when contiguous.
struct Seq {
  FormulaPtr lhs;
  FormulaPtr rhs;
  bool contiguous;
};
/// `+` when not contiguous, `(+)` when contiguous.
struct Iter {
  FormulaPtr inner;
  bool contiguous;
};
struct Agg {
  FormulaPtr inner;
  std::string target;
  std::vector<AggBinding> bindings;
};
/// NEXT(type): sugar for an event of the type, optionally after other events.
struct Next {
  std::string type;
};

}  // namespace ast

/// Immutable query AST node.
class Formula {
 public:
  using Node = std::variant<ast::EventType, ast::As, ast::Filter, ast::ProjectVars, ast::ProjectAttrs, ast::Or,
                            ast::And, ast::Seq, ast::Iter, ast::Agg, ast::Next>;

  explicit Formula(Node node) : node_(std::move(node)) {}

  const Node& node() const noexcept { return node_; }
  template <typename T>
  const T* as() const noexcept {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
};

FormulaPtr event_type(std::string type);
FormulaPtr as(FormulaPtr inner, std::string var);
FormulaPtr filter(FormulaPtr inner, FilterExpr condition);
FormulaPtr filter(FormulaPtr inner, std::string var, Predicate p);
FormulaPtr filter(FormulaPtr inner, std::string var, MultisetPredicate mp);
FormulaPtr project_vars(FormulaPtr inner, std::vector<std::string> vars);
FormulaPtr project_attrs(FormulaPtr inner, std::string var, std::vector<std::string> attrs);
FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr seq(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr seq_contig(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr iter(FormulaPtr inner);
FormulaPtr iter_contig(FormulaPtr inner);
/// Throws Error when bindings are empty or repeat a target attribute.
FormulaPtr agg(FormulaPtr inner, std::string target, std::vector<AggBinding> bindings);
FormulaPtr next(std::string type);

/// Deep structural equality.
bool equal(const Formula& a, const Formula& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Fully parenthesized text that parses back to an equal AST.
std::string to_string(const Formula& f);
std::string to_string(const FilterExpr& f);

/// Variables bound by AS, Agg targets, event types used, filter and projection subjects.
std::set<std::string> variables_of(const Formula& f);

/// True if f contains NEXT or a compound filter condition.
bool has_sugar(const Formula& f);
/// True if f filters on a multiset predicate.
bool has_multiset_filter(const Formula& f);

}  // namespace acel
