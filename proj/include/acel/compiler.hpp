#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "acel/acea.hpp"
#include "acel/event.hpp"
#include "acel/formula.hpp"

namespace acel {

/// Allocates fresh states and registers for one compilation so that
/// sub-automata never share either.
class CompilationContext {
 public:
  explicit CompilationContext(Schema schema) : schema_(std::move(schema)) {}

  const Schema& schema() const noexcept { return schema_; }
  StateId fresh_state() { return next_state_++; }
  /// Makes later fresh states start at `first_free` or above.
  void reserve_states(StateId first_free) { next_state_ = std::max(next_state_, first_free); }
  /// "$r0", "$r1", ...; a group prefixes related registers as "$r3.price".
  std::string fresh_register_group() { return "$r" + std::to_string(next_group_++); }

  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  Schema schema_;
  StateId next_state_ = 0;
  unsigned next_group_ = 0;
  std::vector<std::string> warnings_;
};

/// Builds an automaton whose enumerated complex events equal the formula's.
/// Sugar is desugared first over the schema's types. Throws UnsupportedError
/// for bag predicates in filters.
Acea compile(const FormulaPtr& f, CompilationContext& ctx);
Acea compile(const FormulaPtr& f, const Schema& sch);

/// Equivalent automaton whose initial state has no incoming transitions and
/// whose single final state has no outgoing ones.
Acea normalize_acea(const Acea& a, CompilationContext& ctx);
Acea normalize_acea(const Acea& a);

/// Drops states that are unreachable from the initial state or cannot reach
/// a final state, with their transitions.
Acea trim(const Acea& a);

/// Automaton that copies each event into registers and re-emits it under the
/// marked variables; results equal the CEA's with positions replaced by events.
Acea cea_to_acea(const Cea& a, const Schema& sch);

}  // namespace acel
