#include "acel/expression.hpp"

#include "acel/error.hpp"

namespace acel {

struct Expression::Node {
  Kind kind = Kind::Const;
  Value value;
  std::string name;
  Op op = Op::Sum;
  std::vector<Expression> args;
};

Expression::Expression() : Expression(constant(Value::null())) {}

Expression::Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expression Expression::constant(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = std::move(v);
  return Expression(std::move(n));
}

Expression Expression::attr(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Attr;
  n->name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::apply(Op op, std::vector<Expression> args) {
  const std::size_t arity = op == Op::Unit ? 1 : 2;
  if (args.size() != arity) throw Error("wrong operand count for expression operator");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->op = op;
  n->args = std::move(args);
  return Expression(std::move(n));
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
  return apply(op, {std::move(lhs), std::move(rhs)});
}

Expression Expression::monoid(MonoidKind kind, Expression lhs, Expression rhs) {
  return binary(op_of(kind), std::move(lhs), std::move(rhs));
}

Expression::Kind Expression::kind() const { return node_->kind; }
const Value& Expression::value() const { return node_->value; }
const std::string& Expression::name() const { return node_->name; }
Op Expression::op() const { return node_->op; }
const std::vector<Expression>& Expression::args() const { return node_->args; }

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expression::Kind::Const:
      return a.value() == b.value();
    case Expression::Kind::Attr:
      return a.name() == b.name();
    case Expression::Kind::Apply:
      return a.op() == b.op() && a.args() == b.args();
  }
  return false;
}

Op op_of(MonoidKind kind) {
  switch (kind) {
    case MonoidKind::Sum:
      return Op::Sum;
    case MonoidKind::Min:
      return Op::Min;
    case MonoidKind::Max:
      return Op::Max;
  }
  return Op::Sum;
}

Value apply_op(Op op, const std::vector<Value>& args) {
  switch (op) {
    case Op::Sum:
      return Monoid(MonoidKind::Sum).combine(args[0], args[1]);
    case Op::Min:
      return Monoid(MonoidKind::Min).combine(args[0], args[1]);
    case Op::Max:
      return Monoid(MonoidKind::Max).combine(args[0], args[1]);
    case Op::Unit:
      return map_element(ElementMap::Unit, args[0]);
    case Op::Div:
      return finalize(Finalizer::Divide, args);
    case Op::Sub:
      return finalize(Finalizer::Subtract, args);
  }
  return {};
}

namespace {

template <typename Lookup>
std::optional<Value> eval(const Expression& x, const Lookup& lookup) {
  switch (x.kind()) {
    case Expression::Kind::Const:
      return x.value();
    case Expression::Kind::Attr:
      return lookup(x.name());
    case Expression::Kind::Apply: {
      std::vector<Value> operands;
      operands.reserve(x.args().size());
      for (const auto& arg : x.args()) {
        auto v = eval(arg, lookup);
        if (!v) return std::nullopt;
        operands.push_back(std::move(*v));
      }
      return apply_op(x.op(), operands);
    }
  }
  return std::nullopt;
}

void collect(const Expression& x, std::set<std::string>& out) {
  if (x.kind() == Expression::Kind::Attr) out.insert(x.name());
  if (x.kind() == Expression::Kind::Apply) {
    for (const auto& arg : x.args()) collect(arg, out);
  }
}

}  // namespace

std::optional<Value> try_evaluate(const Expression& x, const AttrMap& attrs) {
  return eval(x, [&](const std::string& name) -> std::optional<Value> {
    auto it = attrs.find(name);
    if (it == attrs.end()) return std::nullopt;
    return it->second;
  });
}

Value evaluate_lenient(const Expression& x, const AttrMap& attrs) {
  return *eval(x, [&](const std::string& name) -> std::optional<Value> {
    auto it = attrs.find(name);
    return it == attrs.end() ? Value::null() : it->second;
  });
}

std::set<std::string> attributes_of(const Expression& x) {
  std::set<std::string> out;
  collect(x, out);
  return out;
}

Expression substitute(const Expression& x, const std::map<std::string, Expression>& subst,
                      MissingAttr missing) {
  switch (x.kind()) {
    case Expression::Kind::Const:
      return x;
    case Expression::Kind::Attr: {
      auto it = subst.find(x.name());
      if (it != subst.end()) return it->second;
      return missing == MissingAttr::Keep ? x : Expression::constant(Value::null());
    }
    case Expression::Kind::Apply: {
      std::vector<Expression> args;
      args.reserve(x.args().size());
      for (const auto& arg : x.args()) args.push_back(substitute(arg, subst, missing));
      return Expression::apply(x.op(), std::move(args));
    }
  }
  return x;
}

std::string to_string(const Expression& x) {
  switch (x.kind()) {
    case Expression::Kind::Const:
      return x.value().to_string();
    case Expression::Kind::Attr:
      return x.name();
    case Expression::Kind::Apply:
      break;
  }
  const auto& a = x.args();
  switch (x.op()) {
    case Op::Sum:
      return "(" + to_string(a[0]) + " + " + to_string(a[1]) + ")";
    case Op::Min:
      return "min(" + to_string(a[0]) + ", " + to_string(a[1]) + ")";
    case Op::Max:
      return "max(" + to_string(a[0]) + ", " + to_string(a[1]) + ")";
    case Op::Unit:
      return "unit(" + to_string(a[0]) + ")";
    case Op::Div:
      return "(" + to_string(a[0]) + " / " + to_string(a[1]) + ")";
    case Op::Sub:
      return "(" + to_string(a[0]) + " - " + to_string(a[1]) + ")";
  }
  return "?";
}

}  // namespace acel
