#pragma once

#include <string>
#include <vector>

#include "acel/formula.hpp"

namespace acel {

/// Rewrites sugar into core constructors:
///   φ FILTER (A AND B)  becomes  (φ FILTER A) FILTER B
///   φ FILTER (A OR B)   becomes  (φ FILTER A) OR (φ FILTER B)
///   NEXT(R)             becomes  PROJ[R](((T1 OR ... OR Tn) AS $x)+ : R) FILTER $x[type != R]) OR R
/// where T1..Tn are `types`, the event types a wildcard event may have.
/// Unchanged subtrees are shared with the input.
FormulaPtr desugar(const FormulaPtr& f, const std::vector<std::string>& types);

}  // namespace acel
