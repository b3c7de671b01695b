#pragma once

#include <string_view>

#include "acel/formula.hpp"

namespace acel {

/// Parses query text. Throws ParseError with a 1-based line and column.
///
/// Precedence, tightest first: postfix `+` and `(+)`; `AS` and `FILTER`;
/// `;` and `:` (left associative); `AND`; `OR`. `--` starts a line comment.
FormulaPtr parse_query(std::string_view text);

}  // namespace acel
