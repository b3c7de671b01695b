#include "acel/formula.hpp"

#include "acel/error.hpp"

namespace acel {

FilterExpr::FilterExpr(FilterAtom atom) : atom_(std::make_shared<const FilterAtom>(std::move(atom))) {}

FilterExpr FilterExpr::conj(FilterExpr a, FilterExpr b) {
  FilterExpr out;
  out.kind_ = Kind::And;
  out.children_ = std::make_shared<const std::vector<FilterExpr>>(std::vector<FilterExpr>{std::move(a), std::move(b)});
  return out;
}

FilterExpr FilterExpr::disj(FilterExpr a, FilterExpr b) {
  FilterExpr out;
  out.kind_ = Kind::Or;
  out.children_ = std::make_shared<const std::vector<FilterExpr>>(std::vector<FilterExpr>{std::move(a), std::move(b)});
  return out;
}

bool operator==(const FilterExpr& a, const FilterExpr& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == FilterExpr::Kind::Atom) return *a.atom_ == *b.atom_;
  return a.lhs() == b.lhs() && a.rhs() == b.rhs();
}

namespace {

FormulaPtr make(Formula::Node node) { return std::make_shared<const Formula>(std::move(node)); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

void collect_filter_vars(const FilterExpr& f, std::set<std::string>& out) {
  if (f.kind() == FilterExpr::Kind::Atom) {
    out.insert(f.atom().var);
    return;
  }
  collect_filter_vars(f.lhs(), out);
  collect_filter_vars(f.rhs(), out);
}

bool filter_has_multiset(const FilterExpr& f) {
  if (f.kind() == FilterExpr::Kind::Atom) return f.atom().is_multiset();
  return filter_has_multiset(f.lhs()) || filter_has_multiset(f.rhs());
}

// Visits f and all subformulas until pred returns true.
template <typename Pred>
bool any_node(const Formula& f, const Pred& pred) {
  if (pred(f)) return true;
  return std::visit(overloaded{
                        [](const ast::EventType&) { return false; },
                        [](const ast::Next&) { return false; },
                        [&](const ast::Or& n) { return any_node(*n.lhs, pred) || any_node(*n.rhs, pred); },
                        [&](const ast::And& n) { return any_node(*n.lhs, pred) || any_node(*n.rhs, pred); },
                        [&](const ast::Seq& n) { return any_node(*n.lhs, pred) || any_node(*n.rhs, pred); },
                        [&](const auto& n) { return any_node(*n.inner, pred); },
                    },
                    f.node());
}

}  // namespace

FormulaPtr event_type(std::string type) { return make(ast::EventType{std::move(type)}); }
FormulaPtr as(FormulaPtr inner, std::string var) { return make(ast::As{std::move(inner), std::move(var)}); }
FormulaPtr filter(FormulaPtr inner, FilterExpr condition) {
  return make(ast::Filter{std::move(inner), std::move(condition)});
}
FormulaPtr filter(FormulaPtr inner, std::string var, Predicate p) {
  return filter(std::move(inner), FilterExpr(FilterAtom{std::move(var), std::move(p)}));
}
FormulaPtr filter(FormulaPtr inner, std::string var, MultisetPredicate mp) {
  return filter(std::move(inner), FilterExpr(FilterAtom{std::move(var), std::move(mp)}));
}
FormulaPtr project_vars(FormulaPtr inner, std::vector<std::string> vars) {
  return make(ast::ProjectVars{std::move(inner), std::move(vars)});
}
FormulaPtr project_attrs(FormulaPtr inner, std::string var, std::vector<std::string> attrs) {
  return make(ast::ProjectAttrs{std::move(inner), std::move(var), std::move(attrs)});
}
FormulaPtr disj(FormulaPtr lhs, FormulaPtr rhs) { return make(ast::Or{std::move(lhs), std::move(rhs)}); }
FormulaPtr conj(FormulaPtr lhs, FormulaPtr rhs) { return make(ast::And{std::move(lhs), std::move(rhs)}); }
FormulaPtr seq(FormulaPtr lhs, FormulaPtr rhs) { return make(ast::Seq{std::move(lhs), std::move(rhs), false}); }
FormulaPtr seq_contig(FormulaPtr lhs, FormulaPtr rhs) {
  return make(ast::Seq{std::move(lhs), std::move(rhs), true});
}
FormulaPtr iter(FormulaPtr inner) { return make(ast::Iter{std::move(inner), false}); }
FormulaPtr iter_contig(FormulaPtr inner) { return make(ast::Iter{std::move(inner), true}); }

FormulaPtr agg(FormulaPtr inner, std::string target, std::vector<AggBinding> bindings) {
  if (bindings.empty()) throw Error("aggregation without bindings");
  std::set<std::string> seen;
  for (const auto& b : bindings) {
    if (!seen.insert(b.target).second) throw Error("aggregation binds attribute " + b.target + " twice");
  }
  return make(ast::Agg{std::move(inner), std::move(target), std::move(bindings)});
}

FormulaPtr next(std::string type) { return make(ast::Next{std::move(type)}); }

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}

bool equal(const Formula& a, const Formula& b) {
  if (a.node().index() != b.node().index()) return false;
  return std::visit(
      overloaded{
          [&](const ast::EventType& x) { return x.type == b.as<ast::EventType>()->type; },
          [&](const ast::Next& x) { return x.type == b.as<ast::Next>()->type; },
          [&](const ast::As& x) {
            const auto* y = b.as<ast::As>();
            return x.var == y->var && equal(x.inner, y->inner);
          },
          [&](const ast::Filter& x) {
            const auto* y = b.as<ast::Filter>();
            return x.condition == y->condition && equal(x.inner, y->inner);
          },
          [&](const ast::ProjectVars& x) {
            const auto* y = b.as<ast::ProjectVars>();
            return x.vars == y->vars && equal(x.inner, y->inner);
          },
          [&](const ast::ProjectAttrs& x) {
            const auto* y = b.as<ast::ProjectAttrs>();
            return x.var == y->var && x.attrs == y->attrs && equal(x.inner, y->inner);
          },
          [&](const ast::Or& x) {
            const auto* y = b.as<ast::Or>();
            return equal(x.lhs, y->lhs) && equal(x.rhs, y->rhs);
          },
          [&](const ast::And& x) {
            const auto* y = b.as<ast::And>();
            return equal(x.lhs, y->lhs) && equal(x.rhs, y->rhs);
          },
          [&](const ast::Seq& x) {
            const auto* y = b.as<ast::Seq>();
            return x.contiguous == y->contiguous && equal(x.lhs, y->lhs) && equal(x.rhs, y->rhs);
          },
          [&](const ast::Iter& x) {
            const auto* y = b.as<ast::Iter>();
            return x.contiguous == y->contiguous && equal(x.inner, y->inner);
          },
          [&](const ast::Agg& x) {
            const auto* y = b.as<ast::Agg>();
            return x.target == y->target && x.bindings == y->bindings && equal(x.inner, y->inner);
          },
      },
      a.node());
}

std::string to_string(const FilterExpr& f) {
  switch (f.kind()) {
    case FilterExpr::Kind::Atom: {
      const auto& atom = f.atom();
      const std::string body = std::visit([](const auto& t) { return to_string(t); }, atom.test);
      return atom.var + "[" + body + "]";
    }
    case FilterExpr::Kind::And:
      return "(" + to_string(f.lhs()) + " AND " + to_string(f.rhs()) + ")";
    case FilterExpr::Kind::Or:
      return "(" + to_string(f.lhs()) + " OR " + to_string(f.rhs()) + ")";
  }
  return "?";
}

std::string to_string(const Formula& f) {
  return std::visit(
      overloaded{
          [](const ast::EventType& x) { return x.type; },
          [](const ast::Next& x) { return "NEXT(" + x.type + ")"; },
          [](const ast::As& x) { return "(" + to_string(*x.inner) + " AS " + x.var + ")"; },
          [](const ast::Filter& x) { return "(" + to_string(*x.inner) + " FILTER " + to_string(x.condition) + ")"; },
          [](const ast::ProjectVars& x) { return "PROJ[" + join(x.vars) + "](" + to_string(*x.inner) + ")"; },
          [](const ast::ProjectAttrs& x) {
            return "PROJ " + x.var + "(" + join(x.attrs) + ")(" + to_string(*x.inner) + ")";
          },
          [](const ast::Or& x) { return "(" + to_string(*x.lhs) + " OR " + to_string(*x.rhs) + ")"; },
          [](const ast::And& x) { return "(" + to_string(*x.lhs) + " AND " + to_string(*x.rhs) + ")"; },
          [](const ast::Seq& x) {
            return "(" + to_string(*x.lhs) + (x.contiguous ? " : " : " ; ") + to_string(*x.rhs) + ")";
          },
          [](const ast::Iter& x) { return "(" + to_string(*x.inner) + (x.contiguous ? "(+))" : "+)"); },
          [](const ast::Agg& x) {
            std::vector<std::string> parts;
            for (const auto& b : x.bindings) {
              parts.push_back(b.target + " <- " + b.function + " " + b.source_var + "(" + b.source_attr + ")");
            }
            return "AGG " + x.target + "[" + join(parts) + "](" + to_string(*x.inner) + ")";
          },
      },
      f.node());
}

std::set<std::string> variables_of(const Formula& f) {
  std::set<std::string> out;
  any_node(f, [&](const Formula& n) {
    std::visit(overloaded{
                   [&](const ast::EventType& x) { out.insert(x.type); },
                   [&](const ast::Next& x) { out.insert(x.type); },
                   [&](const ast::As& x) { out.insert(x.var); },
                   [&](const ast::Filter& x) { collect_filter_vars(x.condition, out); },
                   [&](const ast::ProjectVars& x) { out.insert(x.vars.begin(), x.vars.end()); },
                   [&](const ast::ProjectAttrs& x) { out.insert(x.var); },
                   [&](const ast::Agg& x) {
                     out.insert(x.target);
                     for (const auto& b : x.bindings) out.insert(b.source_var);
                   },
                   [](const auto&) {},
               },
               n.node());
    return false;
  });
  return out;
}

bool has_sugar(const Formula& f) {
  return any_node(f, [](const Formula& n) {
    if (n.as<ast::Next>()) return true;
    const auto* fl = n.as<ast::Filter>();
    return fl && fl->condition.kind() != FilterExpr::Kind::Atom;
  });
}

bool has_multiset_filter(const Formula& f) {
  return any_node(f, [](const Formula& n) {
    const auto* fl = n.as<ast::Filter>();
    return fl && filter_has_multiset(fl->condition);
  });
}

}  // namespace acel
