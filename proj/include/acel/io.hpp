#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "acel/error.hpp"
#include "acel/event.hpp"

namespace acel {

/// Malformed stream input, with the 1-based line it was found on.
class StreamFormatError : public ValidationError {
 public:
  StreamFormatError(const std::string& message, std::size_t line)
      : ValidationError("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// One JSON object per line; values are numbers, strings or null. The event
/// on line n (1-based) gets time n-1. A trailing newline is allowed.
Stream read_stream(std::istream& in);

/// {"TYPE": ["attr", ...], ...}
Schema read_schema(std::istream& in);
std::string write_schema(const Schema& sch);

/// {"start":i,"end":j,"valuation":{"X":[{"time":k,"attrs":{...}}, ...]}}
std::string serialize(const ComplexEvent& c);

/// Inverse of serialize. Throws ValidationError on malformed input.
ComplexEvent parse_result_line(std::string_view line);

/// One line per complex event, ordered by start, end, then serialized text.
std::vector<std::string> serialize_results(const ResultSet& results);

}  // namespace acel
