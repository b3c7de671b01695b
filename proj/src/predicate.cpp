#include "acel/predicate.hpp"

#include "acel/error.hpp"

namespace acel {

struct Predicate::Node {
  Kind kind = Kind::True;
  Expression lhs;
  CmpOp op = CmpOp::Eq;
  Expression rhs;
  std::vector<Predicate> children;
};

std::string_view to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq:
      return "=";
    case CmpOp::Ne:
      return "!=";
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
    case CmpOp::Identical:
      return "===";
  }
  return "?";
}

namespace {

bool loosely_equal(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return a.is_null() && b.is_null();
  if (a.is_numeric() && b.is_numeric()) {
    if (a.kind() == Value::Kind::Integer && b.kind() == Value::Kind::Integer) {
      return a.as_integer() == b.as_integer();
    }
    return a.to_double() == b.to_double();
  }
  return a == b;
}

}  // namespace

bool compare_values(const Value& lhs, CmpOp op, const Value& rhs) {
  switch (op) {
    case CmpOp::Identical:
      return lhs == rhs;
    case CmpOp::Eq:
      return loosely_equal(lhs, rhs);
    case CmpOp::Ne:
      return !loosely_equal(lhs, rhs);
    default:
      break;
  }
  if (lhs.is_null() || rhs.is_null()) return false;
  if (!lhs.is_numeric() || !rhs.is_numeric()) {
    throw EvaluationError("cannot order " + lhs.to_string() + " " + std::string(to_string(op)) + " " +
                          rhs.to_string());
  }
  int c = 0;
  if (lhs.kind() == Value::Kind::Integer && rhs.kind() == Value::Kind::Integer) {
    c = lhs.as_integer() < rhs.as_integer() ? -1 : (lhs.as_integer() > rhs.as_integer() ? 1 : 0);
  } else {
    const double x = lhs.to_double();
    const double y = rhs.to_double();
    if (x < y) {
      c = -1;
    } else if (x > y) {
      c = 1;
    } else if (x != y) {
      return false;  // NaN
    }
  }
  switch (op) {
    case CmpOp::Lt:
      return c < 0;
    case CmpOp::Le:
      return c <= 0;
    case CmpOp::Gt:
      return c > 0;
    case CmpOp::Ge:
      return c >= 0;
    default:
      return false;
  }
}

Predicate::Predicate() : node_(std::make_shared<Node>()) {}

Predicate::Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Predicate Predicate::compare(Expression lhs, CmpOp op, Expression rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compare;
  n->lhs = std::move(lhs);
  n->op = op;
  n->rhs = std::move(rhs);
  return Predicate(std::move(n));
}

Predicate Predicate::attr_cmp(std::string attr, CmpOp op, Value literal) {
  return compare(Expression::attr(std::move(attr)), op, Expression::constant(std::move(literal)));
}

Predicate Predicate::attr_attr(std::string lhs, CmpOp op, std::string rhs) {
  return compare(Expression::attr(std::move(lhs)), op, Expression::attr(std::move(rhs)));
}

Predicate Predicate::type_is(std::string type) { return attr_cmp("type", CmpOp::Eq, Value(std::move(type))); }

Predicate Predicate::conj(Predicate a, Predicate b) {
  if (a.kind() == Kind::True) return b;
  if (b.kind() == Kind::True) return a;
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = {std::move(a), std::move(b)};
  return Predicate(std::move(n));
}

Predicate Predicate::disj(Predicate a, Predicate b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = {std::move(a), std::move(b)};
  return Predicate(std::move(n));
}

Predicate Predicate::negate(Predicate p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children = {std::move(p)};
  return Predicate(std::move(n));
}

Predicate Predicate::all_of(const std::vector<Predicate>& ps) {
  Predicate out;
  for (const auto& p : ps) out = conj(out, p);
  return out;
}

Predicate Predicate::any_of(const std::vector<Predicate>& ps) {
  if (ps.empty()) return negate(truth());
  Predicate out = ps.front();
  for (std::size_t i = 1; i < ps.size(); ++i) out = disj(out, ps[i]);
  return out;
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
const Expression& Predicate::lhs() const { return node_->lhs; }
CmpOp Predicate::op() const { return node_->op; }
const Expression& Predicate::rhs() const { return node_->rhs; }
const std::vector<Predicate>& Predicate::children() const { return node_->children; }

bool operator==(const Predicate& a, const Predicate& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (a.kind() == Predicate::Kind::Compare) {
    return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return a.children() == b.children();
}

bool satisfies(const AttrMap& attrs, const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::True:
      return true;
    case Predicate::Kind::Compare:
      return compare_values(evaluate_lenient(p.lhs(), attrs), p.op(), evaluate_lenient(p.rhs(), attrs));
    case Predicate::Kind::And:
      for (const auto& c : p.children()) {
        if (!satisfies(attrs, c)) return false;
      }
      return true;
    case Predicate::Kind::Or:
      for (const auto& c : p.children()) {
        if (satisfies(attrs, c)) return true;
      }
      return false;
    case Predicate::Kind::Not:
      return !satisfies(attrs, p.children()[0]);
  }
  return false;
}

Predicate substitute(const Predicate& p, const std::map<std::string, Expression>& subst) {
  switch (p.kind()) {
    case Predicate::Kind::True:
      return p;
    case Predicate::Kind::Compare:
      return Predicate::compare(substitute(p.lhs(), subst, MissingAttr::Null), p.op(),
                                substitute(p.rhs(), subst, MissingAttr::Null));
    case Predicate::Kind::And:
      return Predicate::conj(substitute(p.children()[0], subst), substitute(p.children()[1], subst));
    case Predicate::Kind::Or:
      return Predicate::disj(substitute(p.children()[0], subst), substitute(p.children()[1], subst));
    case Predicate::Kind::Not:
      return Predicate::negate(substitute(p.children()[0], subst));
  }
  return p;
}

std::set<std::string> attributes_of(const Predicate& p) {
  std::set<std::string> out;
  if (p.kind() == Predicate::Kind::Compare) {
    out = attributes_of(p.lhs());
    out.merge(attributes_of(p.rhs()));
  }
  for (const auto& c : p.children()) out.merge(attributes_of(c));
  return out;
}

std::string to_string(const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::True:
      return "TRUE";
    case Predicate::Kind::Compare:
      return to_string(p.lhs()) + " " + std::string(to_string(p.op())) + " " + to_string(p.rhs());
    case Predicate::Kind::And:
      return "(" + to_string(p.children()[0]) + " AND " + to_string(p.children()[1]) + ")";
    case Predicate::Kind::Or:
      return "(" + to_string(p.children()[0]) + " OR " + to_string(p.children()[1]) + ")";
    case Predicate::Kind::Not:
      return "NOT " + to_string(p.children()[0]);
  }
  return "?";
}

std::string to_string(const MultisetPredicate& mp) {
  switch (mp.kind) {
    case MultisetPredicate::Kind::SameAttr:
      return mp.attr;
    case MultisetPredicate::Kind::Increasing:
      return "increasing(" + mp.attr + ")";
    case MultisetPredicate::Kind::Decreasing:
      return "decreasing(" + mp.attr + ")";
  }
  return "?";
}

}  // namespace acel
