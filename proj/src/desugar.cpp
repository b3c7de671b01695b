#include "acel/desugar.hpp"

#include "acel/error.hpp"

namespace acel {

namespace {

class Desugarer {
 public:
  explicit Desugarer(const std::vector<std::string>& types) : types_(types) {}

  FormulaPtr run(const FormulaPtr& f) {
    const Formula& n = *f;
    if (const auto* x = n.as<ast::Next>()) return expand_next(x->type);
    if (const auto* x = n.as<ast::Filter>()) {
      FormulaPtr inner = run(x->inner);
      if (inner == x->inner && x->condition.kind() == FilterExpr::Kind::Atom) return f;
      return apply_filter(inner, x->condition);
    }
    if (const auto* x = n.as<ast::As>()) return rebuild(f, x->inner, [&](auto i) { return as(i, x->var); });
    if (const auto* x = n.as<ast::ProjectVars>()) {
      return rebuild(f, x->inner, [&](auto i) { return project_vars(i, x->vars); });
    }
    if (const auto* x = n.as<ast::ProjectAttrs>()) {
      return rebuild(f, x->inner, [&](auto i) { return project_attrs(i, x->var, x->attrs); });
    }
    if (const auto* x = n.as<ast::Iter>()) {
      return rebuild(f, x->inner, [&](auto i) { return x->contiguous ? iter_contig(i) : iter(i); });
    }
    if (const auto* x = n.as<ast::Agg>()) {
      return rebuild(f, x->inner, [&](auto i) { return agg(i, x->target, x->bindings); });
    }
    if (const auto* x = n.as<ast::Or>()) return rebuild2(f, x->lhs, x->rhs, [](auto l, auto r) { return disj(l, r); });
    if (const auto* x = n.as<ast::And>()) return rebuild2(f, x->lhs, x->rhs, [](auto l, auto r) { return conj(l, r); });
    if (const auto* x = n.as<ast::Seq>()) {
      return rebuild2(f, x->lhs, x->rhs,
                      [&](auto l, auto r) { return x->contiguous ? seq_contig(l, r) : seq(l, r); });
    }
    return f;
  }

 private:
  template <typename Make>
  FormulaPtr rebuild(const FormulaPtr& self, const FormulaPtr& inner, Make make) {
    FormulaPtr i = run(inner);
    return i == inner ? self : make(i);
  }

  template <typename Make>
  FormulaPtr rebuild2(const FormulaPtr& self, const FormulaPtr& lhs, const FormulaPtr& rhs, Make make) {
    FormulaPtr l = run(lhs);
    FormulaPtr r = run(rhs);
    return l == lhs && r == rhs ? self : make(l, r);
  }

  FormulaPtr apply_filter(const FormulaPtr& inner, const FilterExpr& cond) {
    switch (cond.kind()) {
      case FilterExpr::Kind::Atom:
        return filter(inner, cond);
      case FilterExpr::Kind::And:
        return apply_filter(apply_filter(inner, cond.lhs()), cond.rhs());
      case FilterExpr::Kind::Or:
        return disj(apply_filter(inner, cond.lhs()), apply_filter(inner, cond.rhs()));
    }
    return inner;
  }

  FormulaPtr expand_next(const std::string& type) {
    const std::string var = "$next" + std::to_string(counter_++);
    FormulaPtr any;
    for (const auto& t : types_) any = any ? disj(any, event_type(t)) : event_type(t);
    if (!any) return event_type(type);
    FormulaPtr skipped = seq_contig(iter(as(any, var)), event_type(type));
    FormulaPtr guarded = filter(skipped, var, Predicate::attr_cmp("type", CmpOp::Ne, Value(type)));
    return disj(project_vars(guarded, {type}), event_type(type));
  }

  const std::vector<std::string>& types_;
  int counter_ = 0;
};

}  // namespace

FormulaPtr desugar(const FormulaPtr& f, const std::vector<std::string>& types) { return Desugarer(types).run(f); }

}  // namespace acel
