#include "acel/value.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "acel/error.hpp"

namespace acel {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      detail_(message),
      line_(line),
      column_(column) {}

double Value::to_double() const {
  switch (kind()) {
    case Kind::Integer:
      return static_cast<double>(as_integer());
    case Kind::Float:
      return as_float();
    default:
      throw EvaluationError("expected a number, got " + to_string());
  }
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  std::string s(buf.data(), end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

int rank(Value::Kind k) {
  switch (k) {
    case Value::Kind::Null:
      return 0;
    case Value::Kind::Integer:
    case Value::Kind::Float:
      return 1;
    case Value::Kind::Text:
      return 2;
  }
  return 3;
}

}  // namespace

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::Null:
      return "NULL";
    case Kind::Integer:
      return std::to_string(as_integer());
    case Kind::Float:
      return format_float(as_float());
    case Kind::Text:
      return quote(as_text());
  }
  return {};
}

int canonical_compare(const Value& a, const Value& b) {
  const int ra = rank(a.kind());
  const int rb = rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case Value::Kind::Null:
      return 0;
    case Value::Kind::Text:
      return a.as_text().compare(b.as_text()) < 0 ? -1 : (a.as_text() == b.as_text() ? 0 : 1);
    default:
      break;
  }
  if (a.kind() == Value::Kind::Integer && b.kind() == Value::Kind::Integer) {
    return a.as_integer() < b.as_integer() ? -1 : (a.as_integer() > b.as_integer() ? 1 : 0);
  }
  const double x = a.to_double();
  const double y = b.to_double();
  if (std::isnan(x) || std::isnan(y)) {
    if (std::isnan(x) && std::isnan(y)) return 0;
    return std::isnan(x) ? 1 : -1;
  }
  if (x < y) return -1;
  if (y < x) return 1;
  if (a.kind() != b.kind()) return a.kind() == Value::Kind::Integer ? -1 : 1;
  // Equal doubles, possibly +0/-0: fall back to the sign bit.
  const bool sa = std::signbit(x);
  const bool sb = std::signbit(y);
  if (sa != sb) return sa ? -1 : 1;
  return 0;
}

int canonical_compare(const AttrMap& a, const AttrMap& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (int c = ia->first.compare(ib->first); c != 0) return c < 0 ? -1 : 1;
    if (int c = canonical_compare(ia->second, ib->second); c != 0) return c;
  }
  if (ia == a.end() && ib == b.end()) return 0;
  return ia == a.end() ? -1 : 1;
}

std::string to_string(const AttrMap& attrs) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : attrs) {
    if (!first) out += ", ";
    first = false;
    out += name + ":" + value.to_string();
  }
  return out + "}";
}

}  // namespace acel
