#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acel/event.hpp"
#include "acel/expression.hpp"
#include "acel/oracle.hpp"
#include "acel/predicate.hpp"

namespace acel {

using StateId = std::uint32_t;

/// Register name to the expression computing its next value.
using Assignment = std::map<std::string, Expression>;

/// Output attribute to expression over registers. A renaming is the special
/// case where every expression is a register read. The tag identifies the
/// operator that emits the event.
struct OutputAssignment {
  std::map<std::string, Expression> fields;
  std::uint64_t tag = 0;

  friend bool operator==(const OutputAssignment&, const OutputAssignment&) = default;
};

/// Variable to the bag of output assignments fired on a transition.
using OutputMapping = std::map<std::string, std::vector<OutputAssignment>>;

struct Transition {
  StateId source = 0;
  Assignment assignment;
  Predicate guard;
  OutputMapping output;
  StateId target = 0;
};

/// Aggregation complex event automaton.
struct Acea {
  std::set<StateId> states;
  std::vector<Transition> transitions;
  StateId initial = 0;
  std::set<StateId> finals;

  /// Throws Error unless the initial state, finals and transition endpoints
  /// are states and every register an output reads is assigned.
  void check() const;
};

struct Configuration {
  StateId state = 0;
  AttrMap registers;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Throws EvaluationError when x reads an attribute missing from e.
Value eval_expression(const Expression& x, const Event& e);

/// Result carries the assigned registers only. Throws as eval_expression.
Event apply_assignment(const Assignment& sigma, const Event& e);

/// One run step on e; nullopt when the transition does not apply.
std::optional<Configuration> acea_step(const Configuration& c, const Event& e, const Transition& t);

/// Events emitted by t's outputs over the registers after the step, stamped
/// with the given time. nullopt when an output cannot be evaluated.
std::optional<std::vector<std::pair<std::string, Event>>> emit_outputs(const Transition& t, const AttrMap& registers,
                                                                       std::int64_t time);

/// All complex events of accepting runs, over every start position.
ResultSet acea_enumerate(const Acea& a, const Stream& s);

/// Deterministic text listing of states and transitions.
std::string dump(const Acea& a);

/// Complex event automaton: transitions test the raw event and mark variables.
struct CeaTransition {
  StateId source = 0;
  Predicate guard;
  std::set<std::string> marks;
  StateId target = 0;
};

struct Cea {
  std::set<StateId> states;
  std::vector<CeaTransition> transitions;
  StateId initial = 0;
  std::set<StateId> finals;
};

std::set<PositionComplexEvent> cea_enumerate(const Cea& a, const Stream& s);

}  // namespace acel
