#include "acel/parser.hpp"

#include <cctype>
#include <charconv>
#include <optional>
#include <set>

#include "acel/aggregate.hpp"
#include "acel/error.hpp"

namespace acel {

namespace {

enum class Tok { Ident, Integer, Float, String, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  Value literal;
  int line;
  int column;
};

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"AS", "FILTER", "OR", "AND", "NOT", "PROJ", "AGG", "NEXT", "TRUE", "NULL"};
  return k;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      const int line = line_;
      const int col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "end of input", {}, line, col});
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          word += advance();
        }
        out.push_back({Tok::Ident, word, {}, line, col});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        out.push_back(number(line, col));
      } else if (c == '"' || c == '\'') {
        out.push_back(string(line, col));
      } else {
        out.push_back(symbol(line, col));
      }
    }
  }

 private:
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  bool starts_with(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

  void skip_blank() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else if (starts_with("--")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token number(int line, int col) {
    std::string s;
    if (text_[pos_] == '-') s += advance();
    bool is_float = false;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) s += advance();
    };
    digits();
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      is_float = true;
      s += advance();
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        is_float = true;
        while (pos_ < look) s += advance();
        digits();
      }
    }
    if (is_float) {
      double d = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
      if (ec != std::errc()) throw ParseError("bad number " + s, line, col);
      return {Tok::Float, s, Value(d), line, col};
    }
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc()) throw ParseError("integer out of range: " + s, line, col);
    return {Tok::Integer, s, Value(v), line, col};
  }

  Token string(int line, int col) {
    const char quote = advance();
    std::string s;
    for (;;) {
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
      char c = advance();
      if (c == quote) break;
      if (c == '\\') {
        if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
        c = advance();
        if (c == 'n') c = '\n';
      }
      s += c;
    }
    return {Tok::String, s, Value(s), line, col};
  }

  Token symbol(int line, int col) {
    static const char* const symbols[] = {"(+)", "<-", "<=", ">=", "!=", "(", ")", "[", "]",
                                          ",",   ";",  ":",  "+",  "=",  "<", ">"};
    for (const char* s : symbols) {
      if (starts_with(s)) {
        const std::string text(s);
        for (std::size_t i = 0; i < text.size(); ++i) advance();
        return {Tok::Symbol, text, {}, line, col};
      }
    }
    throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", line, col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Pieces of a bracketed filter predicate: the per-event part and any bag tests.
struct PredParts {
  std::optional<Predicate> event;
  std::vector<MultisetPredicate> multiset;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  FormulaPtr run() {
    FormulaPtr f = formula();
    if (peek().kind != Tok::End) fail("unexpected " + describe(peek()));
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  bool is_symbol(const Token& t, std::string_view s) const { return t.kind == Tok::Symbol && t.text == s; }
  bool is_keyword(const Token& t, std::string_view k) const { return t.kind == Tok::Ident && t.text == k; }
  bool is_name(const Token& t) const { return t.kind == Tok::Ident && !keywords().count(t.text); }

  bool accept_symbol(std::string_view s) {
    if (!is_symbol(peek(), s)) return false;
    ++pos_;
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!is_keyword(peek(), k)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(peek(), message); }
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw ParseError(message, t.line, t.column);
  }

  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return t.text;
    return "'" + t.text + "'";
  }

  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
  }

  std::string name(std::string_view what) {
    if (!is_name(peek())) fail("expected " + std::string(what) + ", found " + describe(peek()));
    return take().text;
  }

  FormulaPtr formula() {
    FormulaPtr lhs = conjunction();
    while (accept_keyword("OR")) lhs = disj(lhs, conjunction());
    return lhs;
  }

  FormulaPtr conjunction() {
    FormulaPtr lhs = sequence();
    while (accept_keyword("AND")) lhs = conj(lhs, sequence());
    return lhs;
  }

  FormulaPtr sequence() {
    FormulaPtr lhs = contig();
    for (;;) {
      if (accept_symbol(";")) {
        lhs = seq(lhs, contig());
      } else if (accept_symbol(":")) {
        lhs = seq_contig(lhs, contig());
      } else {
        return lhs;
      }
    }
  }

  FormulaPtr contig() {
    FormulaPtr f = postfix();
    for (;;) {
      if (accept_keyword("AS")) {
        f = as(f, name("variable name after AS"));
      } else if (accept_keyword("FILTER")) {
        f = filter(f, filter_disjunction());
      } else {
        return f;
      }
    }
  }

  FormulaPtr postfix() {
    FormulaPtr f = primary();
    for (;;) {
      if (accept_symbol("+")) {
        f = iter(f);
      } else if (accept_symbol("(+)")) {
        f = iter_contig(f);
      } else {
        return f;
      }
    }
  }

  FormulaPtr primary() {
    if (accept_symbol("(")) {
      FormulaPtr f = formula();
      expect_symbol(")");
      return f;
    }
    if (accept_keyword("PROJ")) return projection();
    if (accept_keyword("AGG")) return aggregation();
    if (accept_keyword("NEXT")) {
      expect_symbol("(");
      std::string type = name("event type");
      expect_symbol(")");
      return next(std::move(type));
    }
    if (is_name(peek())) return event_type(take().text);
    fail("expected a formula, found " + describe(peek()));
  }

  FormulaPtr projection() {
    if (accept_symbol("[")) {
      std::vector<std::string> vars;
      if (!is_symbol(peek(), "]")) {
        vars.push_back(name("variable"));
        while (accept_symbol(",")) vars.push_back(name("variable"));
      }
      expect_symbol("]");
      expect_symbol("(");
      FormulaPtr inner = formula();
      expect_symbol(")");
      return project_vars(inner, std::move(vars));
    }
    std::string var = name("'[' or a variable after PROJ");
    expect_symbol("(");
    std::vector<std::string> attrs;
    if (!is_symbol(peek(), ")")) {
      attrs.push_back(name("attribute"));
      while (accept_symbol(",")) attrs.push_back(name("attribute"));
    }
    expect_symbol(")");
    expect_symbol("(");
    FormulaPtr inner = formula();
    expect_symbol(")");
    return project_attrs(inner, std::move(var), std::move(attrs));
  }

  FormulaPtr aggregation() {
    std::string target = name("aggregation target variable");
    expect_symbol("[");
    std::vector<AggBinding> bindings;
    std::set<std::string> targets;
    do {
      const Token& at = peek();
      AggBinding b;
      b.target = name("target attribute");
      if (!targets.insert(b.target).second) fail_at(at, "attribute " + b.target + " is bound twice");
      expect_symbol("<-");
      const Token& fn = peek();
      const std::string fname = name("aggregate function");
      auto found = find_aggregate(fname);
      if (!found) fail_at(fn, "unknown aggregate function " + fname);
      b.function = found->name;
      b.source_var = name("source variable");
      expect_symbol("(");
      b.source_attr = name("source attribute");
      expect_symbol(")");
      bindings.push_back(std::move(b));
    } while (accept_symbol(","));
    expect_symbol("]");
    expect_symbol("(");
    FormulaPtr inner = formula();
    expect_symbol(")");
    return agg(inner, std::move(target), std::move(bindings));
  }

  // A filter term starts with `X[` or with `(` leading to one.
  bool filter_term_ahead(std::size_t ahead) const {
    const Token& t = peek(ahead);
    if (is_name(t)) return is_symbol(peek(ahead + 1), "[");
    if (is_symbol(t, "(")) return filter_term_ahead(ahead + 1);
    return false;
  }

  FilterExpr filter_disjunction() {
    FilterExpr lhs = filter_conjunction();
    while (is_keyword(peek(), "OR") && filter_term_ahead(1)) {
      ++pos_;
      lhs = FilterExpr::disj(lhs, filter_conjunction());
    }
    return lhs;
  }

  FilterExpr filter_conjunction() {
    FilterExpr lhs = filter_term();
    while (is_keyword(peek(), "AND") && filter_term_ahead(1)) {
      ++pos_;
      lhs = FilterExpr::conj(lhs, filter_term());
    }
    return lhs;
  }

  FilterExpr filter_term() {
    if (!filter_term_ahead(0)) fail("expected a filter such as X[...], found " + describe(peek()));
    if (accept_symbol("(")) {
      FilterExpr f = filter_disjunction();
      expect_symbol(")");
      return f;
    }
    std::string var = take().text;
    expect_symbol("[");
    PredParts parts = pred_disjunction();
    expect_symbol("]");
    std::optional<FilterExpr> out;
    auto push = [&](FilterAtom atom) {
      FilterExpr e(std::move(atom));
      out = out ? FilterExpr::conj(*out, e) : e;
    };
    if (parts.event || parts.multiset.empty()) push({var, parts.event.value_or(Predicate::truth())});
    for (auto& mp : parts.multiset) push({var, mp});
    return *out;
  }

  PredParts pred_disjunction() {
    const Token& start = peek();
    PredParts lhs = pred_conjunction();
    while (accept_keyword("OR")) {
      PredParts rhs = pred_conjunction();
      lhs = PredParts{Predicate::disj(event_only(lhs, start), event_only(rhs, start)), {}};
    }
    return lhs;
  }

  PredParts pred_conjunction() {
    PredParts lhs = pred_unary();
    while (accept_keyword("AND")) {
      PredParts rhs = pred_unary();
      if (rhs.event) lhs.event = lhs.event ? Predicate::conj(*lhs.event, *rhs.event) : *rhs.event;
      lhs.multiset.insert(lhs.multiset.end(), rhs.multiset.begin(), rhs.multiset.end());
    }
    return lhs;
  }

  PredParts pred_unary() {
    const Token& start = peek();
    if (accept_keyword("NOT")) {
      PredParts inner = pred_unary();
      return {Predicate::negate(event_only(inner, start)), {}};
    }
    if (accept_symbol("(")) {
      PredParts inner = pred_disjunction();
      expect_symbol(")");
      return inner;
    }
    return pred_atom();
  }

  Predicate event_only(const PredParts& p, const Token& at) const {
    if (!p.multiset.empty()) fail_at(at, "bag predicates may only be combined with AND");
    return p.event.value_or(Predicate::truth());
  }

  static std::optional<CmpOp> comparison(const Token& t) {
    if (t.kind != Tok::Symbol) return std::nullopt;
    if (t.text == "=") return CmpOp::Eq;
    if (t.text == "!=") return CmpOp::Ne;
    if (t.text == "<") return CmpOp::Lt;
    if (t.text == "<=") return CmpOp::Le;
    if (t.text == ">") return CmpOp::Gt;
    if (t.text == ">=") return CmpOp::Ge;
    return std::nullopt;
  }

  PredParts pred_atom() {
    if (accept_keyword("TRUE")) return {Predicate::truth(), {}};
    const Token& t = peek();
    if (is_name(t) && (t.text == "increasing" || t.text == "decreasing") && is_symbol(peek(1), "(")) {
      take();
      take();
      std::string attr = name("attribute");
      expect_symbol(")");
      const auto kind = t.text == "increasing" ? MultisetPredicate::Kind::Increasing
                                               : MultisetPredicate::Kind::Decreasing;
      return {std::nullopt, {MultisetPredicate{kind, std::move(attr)}}};
    }
    std::string attr = name("attribute, TRUE, or NOT");
    auto op = comparison(peek());
    if (!op) return {std::nullopt, {MultisetPredicate{MultisetPredicate::Kind::SameAttr, std::move(attr)}}};
    take();
    const Token& rhs = peek();
    if (rhs.kind == Tok::Integer || rhs.kind == Tok::Float || rhs.kind == Tok::String) {
      take();
      return {Predicate::attr_cmp(std::move(attr), *op, rhs.literal), {}};
    }
    if (accept_keyword("NULL")) return {Predicate::attr_cmp(std::move(attr), *op, Value::null()), {}};
    return {Predicate::attr_attr(std::move(attr), *op, name("literal or attribute")), {}};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_query(std::string_view text) { return Parser(Lexer(text).run()).run(); }

}  // namespace acel
