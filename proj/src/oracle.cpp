#include "acel/oracle.hpp"

#include <algorithm>

#include "acel/aggregate.hpp"
#include "acel/error.hpp"

namespace acel {

namespace {

// Complex events kept apart by event origin, so that later AS steps can tell
// one shared event from two equal-looking ones.
using TaggedSet = std::set<ComplexEvent, IdentityLess>;

bool filter_holds(const FilterExpr& cond, const ComplexEvent& c) {
  switch (cond.kind()) {
    case FilterExpr::Kind::Atom: {
      const auto& atom = cond.atom();
      const EventBag& bag = c.bag(atom.var);
      if (const auto* mp = std::get_if<MultisetPredicate>(&atom.test)) return bag_satisfies_multiset(bag, *mp);
      return bag_satisfies(bag, std::get<Predicate>(atom.test));
    }
    case FilterExpr::Kind::And:
      return filter_holds(cond.lhs(), c) && filter_holds(cond.rhs(), c);
    case FilterExpr::Kind::Or:
      return filter_holds(cond.lhs(), c) || filter_holds(cond.rhs(), c);
  }
  return false;
}

template <typename Set, typename Make>
void for_each_starting_from(const Set& set, std::int64_t first_start, Make&& visit) {
  for (auto it = set.lower_bound(ComplexEvent(first_start, first_start)); it != set.end(); ++it) {
    if (!visit(*it)) break;
  }
}

class Evaluator {
 public:
  explicit Evaluator(const Stream& s) : s_(s) {}

  TaggedSet eval(const Formula& f) {
    if (const auto* x = f.as<ast::EventType>()) return event_type(x->type);
    if (const auto* x = f.as<ast::As>()) return as(eval(*x->inner), x->var);
    if (const auto* x = f.as<ast::Filter>()) {
      TaggedSet out;
      for (const auto& c : eval(*x->inner)) {
        if (filter_holds(x->condition, c)) out.insert(c);
      }
      return out;
    }
    if (const auto* x = f.as<ast::ProjectVars>()) {
      const std::set<std::string> vars(x->vars.begin(), x->vars.end());
      TaggedSet out;
      for (const auto& c : eval(*x->inner)) out.insert(ce_project_vars(c, vars));
      return out;
    }
    if (const auto* x = f.as<ast::ProjectAttrs>()) return project_attrs(f, *x);
    if (const auto* x = f.as<ast::Or>()) {
      TaggedSet out = eval(*x->lhs);
      out.merge(eval(*x->rhs));
      return out;
    }
    if (const auto* x = f.as<ast::And>()) {
      const TaggedSet lhs = eval(*x->lhs);
      const TaggedSet rhs_tagged = eval(*x->rhs);
      const ResultSet rhs(rhs_tagged.begin(), rhs_tagged.end());
      TaggedSet out;
      for (const auto& c : lhs) {
        if (rhs.count(c)) out.insert(c);
      }
      return out;
    }
    if (const auto* x = f.as<ast::Seq>()) return sequence(eval(*x->lhs), eval(*x->rhs), x->contiguous);
    if (const auto* x = f.as<ast::Iter>()) return iterate(eval(*x->inner), x->contiguous);
    if (const auto* x = f.as<ast::Agg>()) return aggregate(f, *x);
    if (const auto* x = f.as<ast::Next>()) return next(x->type);
    throw Error("unknown formula node");
  }

 private:
  TaggedSet event_type(const std::string& type) {
    TaggedSet out;
    for (const auto& e : s_) {
      const Value t = e.type();
      if (t.is_text() && t.as_text() == type) out.insert(ComplexEvent(e.time(), e.time(), {{type, EventBag{e}}}));
    }
    return out;
  }

  static TaggedSet as(const TaggedSet& in, const std::string& var) {
    TaggedSet out;
    for (const auto& c : in) {
      std::vector<Event> all;
      for (const auto& [name, bag] : c.valuation()) all.insert(all.end(), bag.begin(), bag.end());
      std::sort(all.begin(), all.end(), [](const Event& a, const Event& b) { return identity_less(a, b); });
      all.erase(std::unique(all.begin(), all.end(),
                            [](const Event& a, const Event& b) { return !identity_less(a, b) && !identity_less(b, a); }),
                all.end());
      ComplexEvent d = c;
      d.set_bag(var, EventBag(std::move(all)));
      out.insert(std::move(d));
    }
    return out;
  }

  TaggedSet project_attrs(const Formula& node, const ast::ProjectAttrs& x) {
    const std::set<std::string> attrs(x.attrs.begin(), x.attrs.end());
    const std::uint64_t tag = origin_of(&node);
    TaggedSet out;
    for (const auto& c : eval(*x.inner)) {
      std::vector<Event> projected;
      for (const auto& e : c.bag(x.var)) {
        projected.push_back(project_event_attrs(e, attrs).with_origin(combine_origin(tag, e.origin())));
      }
      ComplexEvent d = c;
      d.set_bag(x.var, EventBag(std::move(projected)));
      out.insert(std::move(d));
    }
    return out;
  }

  static TaggedSet sequence(const TaggedSet& lhs, const TaggedSet& rhs, bool contiguous) {
    TaggedSet out;
    for (const auto& c1 : lhs) {
      for_each_starting_from(rhs, c1.end() + 1, [&](const ComplexEvent& c2) {
        if (contiguous && c2.start() != c1.end() + 1) return false;
        out.insert(ce_union(c1, c2));
        return true;
      });
    }
    return out;
  }

  static TaggedSet iterate(const TaggedSet& base, bool contiguous) {
    TaggedSet all = base;
    TaggedSet frontier = base;
    while (!frontier.empty()) {
      TaggedSet fresh;
      for (const auto& c : sequence(base, frontier, contiguous)) {
        if (!all.count(c)) fresh.insert(c);
      }
      all.insert(fresh.begin(), fresh.end());
      frontier = std::move(fresh);
    }
    return all;
  }

  TaggedSet aggregate(const Formula& node, const ast::Agg& x) {
    std::vector<AggregateFunction> functions;
    for (const auto& b : x.bindings) {
      auto f = find_aggregate(b.function);
      if (!f) throw EvaluationError("unknown aggregate function " + b.function);
      functions.push_back(*f);
    }
    const std::uint64_t tag = origin_of(&node);
    TaggedSet out;
    for (const auto& c : eval(*x.inner)) {
      AttrMap attrs;
      for (std::size_t i = 0; i < x.bindings.size(); ++i) {
        const auto& b = x.bindings[i];
        std::vector<Value> values;
        for (const auto& e : c.bag(b.source_var)) values.push_back(e.get(b.source_attr));
        attrs[b.target] = aggregate_apply(functions[i], values);
      }
      ComplexEvent d = c;
      d.add_event(x.target, Event(std::move(attrs), c.end(), tag));
      out.insert(std::move(d));
    }
    return out;
  }

  TaggedSet next(const std::string& type) {
    auto is_type = [&](std::size_t k) {
      const Value t = s_[k].type();
      return t.is_text() && t.as_text() == type;
    };
    TaggedSet out;
    for (std::size_t j = 0; j < s_.size(); ++j) {
      if (!is_type(j)) continue;
      const EventBag bag{s_[j]};
      out.insert(ComplexEvent(s_[j].time(), s_[j].time(), {{type, bag}}));
      if (j == 0 || is_type(j - 1)) continue;
      for (std::size_t i = 0; i < j; ++i) {
        if (!is_type(i)) out.insert(ComplexEvent(s_[i].time(), s_[j].time(), {{type, bag}}));
      }
    }
    return out;
  }

  const Stream& s_;
};

ComplexEvent strip_origins(const ComplexEvent& c) {
  Valuation v;
  for (const auto& [var, bag] : c.valuation()) {
    std::vector<Event> events;
    for (const auto& e : bag) events.push_back(e.with_origin(0));
    v.emplace(var, EventBag(std::move(events)));
  }
  return ComplexEvent(c.start(), c.end(), std::move(v));
}

using PositionSet = std::set<PositionComplexEvent>;

PositionComplexEvent merge(const PositionComplexEvent& a, const PositionComplexEvent& b) {
  PositionComplexEvent out{std::min(a.start, b.start), std::max(a.end, b.end), a.valuation};
  for (const auto& [var, ps] : b.valuation) out.valuation[var].insert(ps.begin(), ps.end());
  return out;
}

class PositionEvaluator {
 public:
  explicit PositionEvaluator(const Stream& s) : s_(s) {}

  PositionSet eval(const Formula& f) {
    if (const auto* x = f.as<ast::EventType>()) {
      PositionSet out;
      for (std::size_t i = 0; i < s_.size(); ++i) {
        const Value t = s_[i].type();
        const auto k = static_cast<std::int64_t>(i);
        if (t.is_text() && t.as_text() == x->type) out.insert({k, k, {{x->type, {k}}}});
      }
      return out;
    }
    if (const auto* x = f.as<ast::As>()) {
      PositionSet out;
      for (auto p : eval(*x->inner)) {
        std::set<std::int64_t> all;
        for (const auto& kv : p.valuation) all.insert(kv.second.begin(), kv.second.end());
        if (!all.empty()) p.valuation[x->var] = std::move(all);
        out.insert(std::move(p));
      }
      return out;
    }
    if (const auto* x = f.as<ast::Filter>()) {
      PositionSet out;
      for (const auto& p : eval(*x->inner)) {
        if (holds(x->condition, p)) out.insert(p);
      }
      return out;
    }
    if (const auto* x = f.as<ast::ProjectVars>()) {
      PositionSet out;
      for (auto p : eval(*x->inner)) {
        std::erase_if(p.valuation, [&](const auto& kv) {
          return std::find(x->vars.begin(), x->vars.end(), kv.first) == x->vars.end();
        });
        out.insert(std::move(p));
      }
      return out;
    }
    if (const auto* x = f.as<ast::Or>()) {
      PositionSet out = eval(*x->lhs);
      out.merge(eval(*x->rhs));
      return out;
    }
    if (const auto* x = f.as<ast::And>()) {
      const PositionSet lhs = eval(*x->lhs);
      const PositionSet rhs = eval(*x->rhs);
      PositionSet out;
      std::set_intersection(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::inserter(out, out.end()));
      return out;
    }
    if (const auto* x = f.as<ast::Seq>()) return sequence(eval(*x->lhs), eval(*x->rhs), x->contiguous);
    if (const auto* x = f.as<ast::Iter>()) {
      const PositionSet base = eval(*x->inner);
      PositionSet all = base;
      PositionSet frontier = base;
      while (!frontier.empty()) {
        PositionSet fresh;
        for (const auto& p : sequence(base, frontier, x->contiguous)) {
          if (!all.count(p)) fresh.insert(p);
        }
        all.insert(fresh.begin(), fresh.end());
        frontier = std::move(fresh);
      }
      return all;
    }
    throw UnsupportedError("position semantics covers only the fragment without aggregation, attribute "
                           "projection, bag predicates, and NEXT");
  }

 private:
  bool holds(const FilterExpr& cond, const PositionComplexEvent& p) const {
    switch (cond.kind()) {
      case FilterExpr::Kind::Atom: {
        const auto& atom = cond.atom();
        if (atom.is_multiset()) throw UnsupportedError("bag predicates are outside the position semantics");
        auto it = p.valuation.find(atom.var);
        if (it == p.valuation.end()) return true;
        const auto& pred = std::get<Predicate>(atom.test);
        return std::all_of(it->second.begin(), it->second.end(),
                           [&](std::int64_t k) { return event_satisfies(s_[static_cast<std::size_t>(k)], pred); });
      }
      case FilterExpr::Kind::And:
        return holds(cond.lhs(), p) && holds(cond.rhs(), p);
      case FilterExpr::Kind::Or:
        return holds(cond.lhs(), p) || holds(cond.rhs(), p);
    }
    return false;
  }

  static PositionSet sequence(const PositionSet& lhs, const PositionSet& rhs, bool contiguous) {
    PositionSet out;
    for (const auto& a : lhs) {
      for (const auto& b : rhs) {
        if (contiguous ? b.start == a.end + 1 : b.start > a.end) out.insert(merge(a, b));
      }
    }
    return out;
  }

  const Stream& s_;
};

}  // namespace

ResultSet evaluate(const Formula& f, const Stream& s) {
  ResultSet out;
  for (const auto& c : Evaluator(s).eval(f)) out.insert(strip_origins(c));
  return out;
}

std::string to_string(const PositionComplexEvent& p) {
  std::string out = "(" + std::to_string(p.start) + ", " + std::to_string(p.end) + ", {";
  bool first = true;
  for (const auto& [var, ps] : p.valuation) {
    if (!first) out += ", ";
    first = false;
    out += var + " -> {";
    bool first_pos = true;
    for (auto k : ps) {
      out += (first_pos ? "" : ", ") + std::to_string(k);
      first_pos = false;
    }
    out += "}";
  }
  return out + "})";
}

std::set<PositionComplexEvent> evaluate_positions(const Formula& f, const Stream& s) {
  if (has_multiset_filter(f)) throw UnsupportedError("bag predicates are outside the position semantics");
  return PositionEvaluator(s).eval(f);
}

ComplexEvent positions_to_events(const PositionComplexEvent& p, const Stream& s) {
  Valuation v;
  for (const auto& [var, ps] : p.valuation) {
    std::vector<Event> events;
    for (auto k : ps) {
      if (k < 0 || static_cast<std::size_t>(k) >= s.size()) {
        throw Error("position " + std::to_string(k) + " outside the stream");
      }
      events.push_back(s[static_cast<std::size_t>(k)]);
    }
    v.emplace(var, EventBag(std::move(events)));
  }
  return ComplexEvent(p.start, p.end, std::move(v));
}

ResultSet positions_to_events(const std::set<PositionComplexEvent>& ps, const Stream& s) {
  ResultSet out;
  for (const auto& p : ps) out.insert(positions_to_events(p, s));
  return out;
}

}  // namespace acel
