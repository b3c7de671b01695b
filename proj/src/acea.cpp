#include "acel/acea.hpp"

#include <sstream>
#include <unordered_map>

#include "acel/error.hpp"

namespace acel {

void Acea::check() const {
  auto known = [&](StateId q) { return states.count(q) != 0; };
  if (!known(initial)) throw Error("initial state is not a state");
  for (StateId f : finals) {
    if (!known(f)) throw Error("final state q" + std::to_string(f) + " is not a state");
  }
  for (const auto& t : transitions) {
    if (!known(t.source) || !known(t.target)) throw Error("transition endpoint is not a state");
    for (const auto& [var, bag] : t.output) {
      for (const auto& r : bag) {
        for (const auto& [out, x] : r.fields) {
          for (const auto& reg : attributes_of(x)) {
            if (!t.assignment.count(reg)) {
              throw Error("output " + var + "." + out + " reads register " + reg + " that the transition does not assign");
            }
          }
        }
      }
    }
  }
}

Value eval_expression(const Expression& x, const Event& e) {
  auto v = try_evaluate(x, e.attrs());
  if (!v) throw EvaluationError("expression " + to_string(x) + " reads an unbound attribute");
  return *v;
}

Event apply_assignment(const Assignment& sigma, const Event& e) {
  AttrMap out;
  for (const auto& [reg, x] : sigma) out.emplace(reg, eval_expression(x, e));
  return Event(std::move(out), 0);
}

namespace {

std::optional<AttrMap> assign(const Assignment& sigma, const AttrMap& input) {
  AttrMap out;
  for (const auto& [reg, x] : sigma) {
    auto v = try_evaluate(x, input);
    if (!v) return std::nullopt;
    out.emplace_hint(out.end(), reg, std::move(*v));
  }
  return out;
}

}  // namespace

std::optional<Configuration> acea_step(const Configuration& c, const Event& e, const Transition& t) {
  try {
    AttrMap input = e.attrs();
    for (const auto& kv : c.registers) input.emplace(kv.first, kv.second);
    auto next = assign(t.assignment, input);
    if (!next || !satisfies(*next, t.guard)) return std::nullopt;
    return Configuration{t.target, std::move(*next)};
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
}

std::optional<std::vector<std::pair<std::string, Event>>> emit_outputs(const Transition& t, const AttrMap& registers,
                                                                       std::int64_t time) {
  std::vector<std::pair<std::string, Event>> out;
  try {
    for (const auto& [var, bag] : t.output) {
      for (const auto& r : bag) {
        auto attrs = assign(r.fields, registers);
        if (!attrs) return std::nullopt;
        out.emplace_back(var, Event(std::move(*attrs), time));
      }
    }
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
  return out;
}

namespace {

struct RunState {
  StateId state;
  AttrMap registers;
  Valuation marks;
};

struct RunStateLess {
  bool operator()(const RunState& a, const RunState& b) const {
    if (a.state != b.state) return a.state < b.state;
    if (int c = canonical_compare(a.registers, b.registers); c != 0) return c < 0;
    return (a.marks <=> b.marks) < 0;
  }
};

template <typename T>
std::unordered_map<StateId, std::vector<const T*>> by_source(const std::vector<T>& transitions) {
  std::unordered_map<StateId, std::vector<const T*>> out;
  for (const auto& t : transitions) out[t.source].push_back(&t);
  return out;
}

}  // namespace

ResultSet acea_enumerate(const Acea& a, const Stream& s) {
  const auto outgoing = by_source(a.transitions);
  ResultSet results;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::set<RunState, RunStateLess> frontier{{a.initial, {}, {}}};
    for (std::size_t k = i; k < s.size() && !frontier.empty(); ++k) {
      const Event& e = s[k];
      std::set<RunState, RunStateLess> next;
      for (const auto& rs : frontier) {
        auto it = outgoing.find(rs.state);
        if (it == outgoing.end()) continue;
        const Configuration current{rs.state, rs.registers};
        for (const Transition* t : it->second) {
          auto cfg = acea_step(current, e, *t);
          if (!cfg) continue;
          auto emitted = emit_outputs(*t, cfg->registers, e.time());
          if (!emitted) continue;
          RunState moved{cfg->state, std::move(cfg->registers), rs.marks};
          for (auto& [var, ev] : *emitted) moved.marks[var].add(std::move(ev));
          if (a.finals.count(moved.state)) results.insert(ComplexEvent(s[i].time(), e.time(), moved.marks));
          next.insert(std::move(moved));
        }
      }
      frontier = std::move(next);
    }
  }
  return results;
}

namespace {

std::string state_name(StateId q) { return "q" + std::to_string(q); }

std::string state_list(const std::set<StateId>& qs) {
  std::string out;
  for (StateId q : qs) out += (out.empty() ? "" : ", ") + state_name(q);
  return out;
}

}  // namespace

std::string dump(const Acea& a) {
  std::ostringstream out;
  out << "states " << state_list(a.states) << "\n";
  out << "initial " << state_name(a.initial) << "\n";
  out << "finals " << state_list(a.finals) << "\n";
  for (const auto& t : a.transitions) {
    out << "transition " << state_name(t.source) << " -> " << state_name(t.target) << "\n";
    for (const auto& [reg, x] : t.assignment) out << "  " << reg << " <- " << to_string(x) << "\n";
    out << "  guard " << to_string(t.guard) << "\n";
    for (const auto& [var, bag] : t.output) {
      for (const auto& r : bag) {
        out << "  " << var << " += {";
        bool first = true;
        for (const auto& [attr, x] : r.fields) {
          out << (first ? "" : ", ") << attr << "<-" << to_string(x);
          first = false;
        }
        out << "}\n";
      }
    }
  }
  return out.str();
}

std::set<PositionComplexEvent> cea_enumerate(const Cea& a, const Stream& s) {
  struct Run {
    StateId state;
    std::map<std::string, std::set<std::int64_t>> marks;
    auto operator<=>(const Run&) const = default;
  };
  const auto outgoing = by_source(a.transitions);
  std::set<PositionComplexEvent> results;
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::set<Run> frontier{{a.initial, {}}};
    for (std::size_t k = i; k < s.size() && !frontier.empty(); ++k) {
      const Event& e = s[k];
      std::set<Run> next;
      for (const auto& run : frontier) {
        auto it = outgoing.find(run.state);
        if (it == outgoing.end()) continue;
        for (const CeaTransition* t : it->second) {
          bool ok = false;
          try {
            ok = event_satisfies(e, t->guard);
          } catch (const EvaluationError&) {
            ok = false;
          }
          if (!ok) continue;
          Run moved{t->target, run.marks};
          for (const auto& var : t->marks) moved.marks[var].insert(e.time());
          if (a.finals.count(moved.state)) results.insert({s[i].time(), e.time(), moved.marks});
          next.insert(std::move(moved));
        }
      }
      frontier = std::move(next);
    }
  }
  return results;
}

}  // namespace acel
