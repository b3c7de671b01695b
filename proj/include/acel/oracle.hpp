#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "acel/event.hpp"
#include "acel/formula.hpp"

namespace acel {

/// Reference semantics of f over s, computed by enumerating every complex
/// event bottom-up. Exponential in the worst case.
///
/// AS gathers the events of all variables into the new variable, keeping one
/// copy of an event that several variables share. NEXT and compound filter
/// conditions are evaluated directly, without desugaring.
///
/// Throws EvaluationError on ill-typed aggregation or comparison data.
ResultSet evaluate(const Formula& f, const Stream& s);

/// Complex event over stream positions rather than events.
struct PositionComplexEvent {
  std::int64_t start = 0;
  std::int64_t end = 0;
  std::map<std::string, std::set<std::int64_t>> valuation;

  friend bool operator==(const PositionComplexEvent&, const PositionComplexEvent&) = default;
  friend auto operator<=>(const PositionComplexEvent&, const PositionComplexEvent&) = default;
};

std::string to_string(const PositionComplexEvent& p);

/// Position-based semantics of the fragment without aggregation, attribute
/// projection, bag predicates, and NEXT. Throws UnsupportedError otherwise.
std::set<PositionComplexEvent> evaluate_positions(const Formula& f, const Stream& s);

/// Replaces each position by the stream event there. Throws Error when a
/// position lies outside the stream.
ComplexEvent positions_to_events(const PositionComplexEvent& p, const Stream& s);

ResultSet positions_to_events(const std::set<PositionComplexEvent>& ps, const Stream& s);

}  // namespace acel
