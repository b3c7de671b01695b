#include "acel/compiler.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "acel/aggregate.hpp"
#include "acel/desugar.hpp"
#include "acel/error.hpp"

namespace acel {

namespace {

Transition with_source(Transition t, StateId q) {
  t.source = q;
  return t;
}

Transition with_target(Transition t, StateId q) {
  t.target = q;
  return t;
}

Transition wait_loop(StateId q) { return Transition{q, {}, Predicate::truth(), {}, q}; }

std::set<StateId> merged(const std::set<StateId>& a, const std::set<StateId>& b) {
  std::set<StateId> out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::set<std::string> domain_of(const OutputAssignment& r) {
  std::set<std::string> out;
  for (const auto& kv : r.fields) out.insert(kv.first);
  return out;
}

// Same variables with nonempty bags, and per variable the same bag of output schemas.
bool equivalent_outputs(const OutputMapping& a, const OutputMapping& b) {
  if (a.size() != b.size()) return false;
  for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
    if (ia->first != ib->first || ia->second.size() != ib->second.size()) return false;
    std::vector<std::set<std::string>> da;
    std::vector<std::set<std::string>> db;
    for (const auto& r : ia->second) da.push_back(domain_of(r));
    for (const auto& r : ib->second) db.push_back(domain_of(r));
    std::sort(da.begin(), da.end());
    std::sort(db.begin(), db.end());
    if (da != db) return false;
  }
  return true;
}

// Holds iff some schema-preserving bijection between the two bags emits
// pairwise identical events.
Predicate bag_isomorphism(const std::vector<OutputAssignment>& a, const std::vector<OutputAssignment>& b) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Predicate> options;
  do {
    bool schemas_match = true;
    for (std::size_t i = 0; i < a.size() && schemas_match; ++i) schemas_match = domain_of(a[i]) == domain_of(b[perm[i]]);
    if (!schemas_match) continue;
    std::vector<Predicate> equalities;
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (const auto& [attr, x] : a[i].fields) {
        equalities.push_back(Predicate::compare(x, CmpOp::Identical, b[perm[i]].fields.at(attr)));
      }
    }
    options.push_back(Predicate::all_of(equalities));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return Predicate::any_of(options);
}

Expression map_expression(ElementMap map, Expression x) {
  return map == ElementMap::Unit ? Expression::apply(Op::Unit, {std::move(x)}) : x;
}

Expression finalizer_expression(Finalizer g, const std::vector<std::string>& regs) {
  switch (g) {
    case Finalizer::Identity:
      return Expression::attr(regs[0]);
    case Finalizer::Divide:
      return Expression::binary(Op::Div, Expression::attr(regs[0]), Expression::attr(regs[1]));
    case Finalizer::Subtract:
      return Expression::binary(Op::Sub, Expression::attr(regs[0]), Expression::attr(regs[1]));
  }
  return Expression::attr(regs[0]);
}

class Builder {
 public:
  explicit Builder(CompilationContext& ctx) : ctx_(ctx) {}

  Acea build(const Formula& f) {
    if (const auto* x = f.as<ast::EventType>()) return base(x->type);
    if (const auto* x = f.as<ast::As>()) return bind(build(*x->inner), x->var);
    if (const auto* x = f.as<ast::Filter>()) return restrict(build(*x->inner), x->condition);
    if (const auto* x = f.as<ast::ProjectVars>()) {
      Acea a = build(*x->inner);
      const std::set<std::string> keep(x->vars.begin(), x->vars.end());
      for (auto& t : a.transitions) std::erase_if(t.output, [&](const auto& kv) { return !keep.count(kv.first); });
      return a;
    }
    if (const auto* x = f.as<ast::ProjectAttrs>()) return project_attrs(build(*x->inner), f, *x);
    if (const auto* x = f.as<ast::Or>()) return disjunction(build(*x->lhs), build(*x->rhs));
    if (const auto* x = f.as<ast::And>()) return product(trim(build(*x->lhs)), trim(build(*x->rhs)));
    if (const auto* x = f.as<ast::Seq>()) return sequence(build(*x->lhs), build(*x->rhs), x->contiguous);
    if (const auto* x = f.as<ast::Iter>()) return iterate(build(*x->inner), x->contiguous);
    if (const auto* x = f.as<ast::Agg>()) return aggregate(trim(normalize_acea(trim(build(*x->inner)), ctx_)), f, *x);
    throw UnsupportedError("NEXT must be desugared before compilation");
  }

 private:
  Acea base(const std::string& type) {
    const StateId p1 = ctx_.fresh_state();
    const StateId p2 = ctx_.fresh_state();
    const std::string group = ctx_.fresh_register_group();
    std::set<std::string> attrs = ctx_.schema().attributes(type);
    attrs.insert("type");
    Transition t;
    t.source = p1;
    t.target = p2;
    OutputAssignment inverse;
    for (const auto& a : attrs) {
      const std::string reg = group + "." + a;
      t.assignment[reg] = Expression::attr(a);
      inverse.fields[a] = Expression::attr(reg);
    }
    t.guard = Predicate::compare(Expression::attr(group + ".type"), CmpOp::Eq, Expression::constant(Value(type)));
    t.output[type] = {std::move(inverse)};
    return Acea{{p1, p2}, {std::move(t)}, p1, {p2}};
  }

  static Acea bind(Acea a, const std::string& var) {
    for (auto& t : a.transitions) {
      if (t.output.empty()) continue;
      std::vector<OutputAssignment> all;
      std::set<std::uint64_t> seen;
      for (const auto& [name, bag] : t.output) {
        for (const auto& r : bag) {
          if (seen.insert(r.tag).second) all.push_back(r);
        }
      }
      t.output[var] = std::move(all);
    }
    return a;
  }

  Acea restrict(Acea a, const FilterExpr& cond) {
    if (cond.kind() != FilterExpr::Kind::Atom) throw UnsupportedError("compound filters must be desugared");
    const auto& atom = cond.atom();
    if (const auto* mp = std::get_if<MultisetPredicate>(&atom.test)) {
      throw UnsupportedError("bag predicate " + atom.var + "[" + to_string(*mp) +
                             "] has no automaton translation; use the oracle engine");
    }
    const auto& p = std::get<Predicate>(atom.test);
    for (auto& t : a.transitions) {
      auto it = t.output.find(atom.var);
      if (it == t.output.end()) continue;
      for (const auto& r : it->second) t.guard = Predicate::conj(t.guard, substitute(p, r.fields));
    }
    return a;
  }

  static Acea project_attrs(Acea a, const Formula& node, const ast::ProjectAttrs& x) {
    const std::set<std::string> keep(x.attrs.begin(), x.attrs.end());
    const std::uint64_t tag = origin_of(&node);
    for (auto& t : a.transitions) {
      auto it = t.output.find(x.var);
      if (it == t.output.end()) continue;
      for (auto& r : it->second) {
        std::erase_if(r.fields, [&](const auto& kv) { return !keep.count(kv.first); });
        r.tag = combine_origin(tag, r.tag);
      }
    }
    return a;
  }

  Acea disjunction(const Acea& a, const Acea& b) {
    const StateId q = ctx_.fresh_state();
    Acea out{merged(a.states, b.states), a.transitions, q, merged(a.finals, b.finals)};
    out.states.insert(q);
    out.transitions.insert(out.transitions.end(), b.transitions.begin(), b.transitions.end());
    for (const auto* side : {&a, &b}) {
      for (const auto& t : side->transitions) {
        if (t.source == side->initial) out.transitions.push_back(with_source(t, q));
      }
    }
    return out;
  }

  Acea product(const Acea& a, const Acea& b) {
    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::deque<std::pair<StateId, StateId>> pending;
    auto id_of = [&](StateId p, StateId q) {
      auto [it, inserted] = ids.emplace(std::make_pair(p, q), 0);
      if (inserted) {
        it->second = ctx_.fresh_state();
        pending.emplace_back(p, q);
      }
      return it->second;
    };
    Acea out;
    out.initial = id_of(a.initial, b.initial);
    while (!pending.empty()) {
      const auto [p, q] = pending.front();
      pending.pop_front();
      const StateId from = ids.at({p, q});
      if (a.finals.count(p) && b.finals.count(q)) out.finals.insert(from);
      for (const auto& t1 : a.transitions) {
        if (t1.source != p) continue;
        for (const auto& t2 : b.transitions) {
          if (t2.source != q || !equivalent_outputs(t1.output, t2.output)) continue;
          Transition t;
          t.source = from;
          t.assignment = t1.assignment;
          t.assignment.insert(t2.assignment.begin(), t2.assignment.end());
          t.guard = Predicate::conj(t1.guard, t2.guard);
          for (const auto& [var, bag] : t1.output) {
            t.guard = Predicate::conj(t.guard, bag_isomorphism(bag, t2.output.at(var)));
          }
          t.output = t1.output;
          t.target = id_of(t1.target, t2.target);
          out.transitions.push_back(std::move(t));
        }
      }
    }
    for (const auto& kv : ids) out.states.insert(kv.second);
    return out;
  }

  static Acea sequence(const Acea& a, const Acea& b, bool contiguous) {
    Acea out{merged(a.states, b.states), a.transitions, a.initial, b.finals};
    out.transitions.insert(out.transitions.end(), b.transitions.begin(), b.transitions.end());
    for (const auto& t : a.transitions) {
      if (a.finals.count(t.target)) out.transitions.push_back(with_target(t, b.initial));
    }
    if (!contiguous) out.transitions.push_back(wait_loop(b.initial));
    return out;
  }

  Acea iterate(const Acea& a, bool contiguous) {
    const StateId q = ctx_.fresh_state();
    Acea out = a;
    out.states.insert(q);
    for (const auto& t : a.transitions) {
      if (a.finals.count(t.target)) out.transitions.push_back(with_target(t, q));
      if (t.source == a.initial) out.transitions.push_back(with_source(t, q));
      // A block that matches in one step may repeat right away.
      if (t.source == a.initial && a.finals.count(t.target)) {
        out.transitions.push_back(with_target(with_source(t, q), q));
      }
    }
    if (!contiguous) out.transitions.push_back(wait_loop(q));
    return out;
  }

  Acea aggregate(Acea a, const Formula& node, const ast::Agg& x) {
    struct Group {
      const AggBinding* binding;
      AggregateFunction function;
      std::vector<std::string> registers;
    };
    std::vector<Group> groups;
    for (const auto& b : x.bindings) {
      auto f = find_aggregate(b.function);
      if (!f) throw UnsupportedError("unknown aggregate function " + b.function);
      if (f->finalizer != Finalizer::Identity) {
        ctx_.warn(f->name + " is emitted through an output expression rather than a plain renaming");
      }
      Group g{&b, *f, {}};
      const std::string prefix = ctx_.fresh_register_group();
      for (std::size_t k = 0; k < f->components.size(); ++k) {
        g.registers.push_back(f->components.size() == 1 ? prefix : prefix + "." + std::to_string(k));
      }
      groups.push_back(std::move(g));
    }
    const std::uint64_t tag = origin_of(&node);
    for (auto& t : a.transitions) {
      const Assignment before = t.assignment;
      const bool starts = t.source == a.initial;
      for (const auto& g : groups) {
        auto marked = t.output.find(g.binding->source_var);
        for (std::size_t k = 0; k < g.registers.size(); ++k) {
          const auto& component = g.function.components[k];
          Expression acc = starts ? Expression::constant(component.monoid.identity())
                                  : Expression::attr(g.registers[k]);
          if (marked != t.output.end()) {
            for (const auto& r : marked->second) {
              auto field = r.fields.find(g.binding->source_attr);
              Expression contribution = field == r.fields.end()
                                            ? Expression::constant(Value::null())
                                            : substitute(field->second, before, MissingAttr::Keep);
              acc = Expression::monoid(component.monoid.kind(), acc,
                                       map_expression(component.map, std::move(contribution)));
            }
          }
          t.assignment[g.registers[k]] = std::move(acc);
        }
      }
      if (a.finals.count(t.target)) {
        OutputAssignment emitted;
        emitted.tag = tag;
        for (const auto& g : groups) {
          emitted.fields[g.binding->target] = finalizer_expression(g.function.finalizer, g.registers);
        }
        t.output[x.target].push_back(std::move(emitted));
      }
    }
    return a;
  }

  CompilationContext& ctx_;
};

}  // namespace

Acea compile(const FormulaPtr& f, CompilationContext& ctx) {
  const FormulaPtr core = has_sugar(*f) ? desugar(f, ctx.schema().type_names()) : f;
  Acea a = trim(Builder(ctx).build(*core));
  a.check();
  return a;
}

Acea compile(const FormulaPtr& f, const Schema& sch) {
  CompilationContext ctx(sch);
  return compile(f, ctx);
}

Acea normalize_acea(const Acea& a, CompilationContext& ctx) {
  const StateId start = ctx.fresh_state();
  const StateId finish = ctx.fresh_state();
  Acea out{a.states, a.transitions, start, {finish}};
  out.states.insert(start);
  out.states.insert(finish);
  for (const auto& t : a.transitions) {
    if (t.source == a.initial) out.transitions.push_back(with_source(t, start));
  }
  const std::size_t count = out.transitions.size();
  for (std::size_t i = 0; i < count; ++i) {
    if (a.finals.count(out.transitions[i].target)) out.transitions.push_back(with_target(out.transitions[i], finish));
  }
  return out;
}

Acea normalize_acea(const Acea& a) {
  CompilationContext ctx{Schema()};
  ctx.reserve_states(a.states.empty() ? 0 : *a.states.rbegin() + 1);
  return normalize_acea(a, ctx);
}

Acea trim(const Acea& a) {
  std::set<StateId> forward{a.initial};
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& t : a.transitions) {
      if (forward.count(t.source) && forward.insert(t.target).second) grew = true;
    }
  }
  std::set<StateId> backward(a.finals.begin(), a.finals.end());
  for (bool grew = true; grew;) {
    grew = false;
    for (const auto& t : a.transitions) {
      if (backward.count(t.target) && backward.insert(t.source).second) grew = true;
    }
  }
  Acea out;
  out.initial = a.initial;
  out.states.insert(a.initial);
  for (StateId q : a.states) {
    if (forward.count(q) && backward.count(q)) out.states.insert(q);
  }
  for (StateId f : a.finals) {
    if (out.states.count(f)) out.finals.insert(f);
  }
  for (const auto& t : a.transitions) {
    if (out.states.count(t.source) && out.states.count(t.target) && backward.count(t.target) &&
        forward.count(t.source)) {
      out.transitions.push_back(t);
    }
  }
  return out;
}

Acea cea_to_acea(const Cea& a, const Schema& sch) {
  Acea out{a.states, {}, a.initial, a.finals};
  for (const auto& t : a.transitions) {
    for (const auto& type : sch.type_names()) {
      std::set<std::string> attrs = sch.attributes(type);
      attrs.insert("type");
      Transition u;
      u.source = t.source;
      u.target = t.target;
      std::map<std::string, Expression> copies;
      OutputAssignment inverse;
      for (const auto& attr : attrs) {
        const std::string reg = "$" + attr;
        u.assignment[reg] = Expression::attr(attr);
        copies[attr] = Expression::attr(reg);
        inverse.fields[attr] = Expression::attr(reg);
      }
      u.guard = Predicate::conj(substitute(t.guard, copies),
                                Predicate::compare(Expression::attr("$type"), CmpOp::Eq, Expression::constant(type)));
      for (const auto& var : t.marks) u.output[var].push_back(inverse);
      out.transitions.push_back(std::move(u));
    }
  }
  return out;
}

}  // namespace acel
