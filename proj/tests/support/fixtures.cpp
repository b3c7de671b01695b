#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "acel/error.hpp"
#include "acel/parser.hpp"

namespace acel::testing {

namespace {

Expression reg(const std::string& name) { return Expression::attr(name); }
Expression lit(Value v) { return Expression::constant(std::move(v)); }

Predicate eq(const std::string& attr, Value v) { return Predicate::attr_cmp(attr, CmpOp::Eq, std::move(v)); }

OutputAssignment fields(std::map<std::string, Expression> f) { return OutputAssignment{std::move(f), 0}; }

}  // namespace

Stream stocks_stream() {
  auto ev = [](const char* type, const char* name, std::int64_t price) {
    return AttrMap{{"type", type}, {"name", name}, {"price", price}};
  };
  return make_stream({
      ev("SELL", "MSFT", 101),
      ev("SELL", "MSFT", 102),
      ev("SELL", "INTL", 80),
      ev("BUY", "INTL", 80),
      ev("SELL", "AMZN", 1900),
      ev("SELL", "INTL", 81),
      ev("BUY", "AMZN", 1920),
      ev("BUY", "MSFT", 101),
      ev("BUY", "INTL", 79),
      ev("SELL", "INTL", 80),
  });
}

Schema stocks_schema() { return Schema({{"BUY", {"name", "price"}}, {"SELL", {"name", "price"}}}); }

Acea max_price_drawn_automaton() {
  const auto np = fields({{"name", reg("n")}, {"price", reg("p")}});
  Acea a;
  a.states = {1, 2, 3};
  a.initial = 1;
  a.finals = {3};
  a.transitions.push_back(
      {1,
       {{"m", lit(0)}, {"n", reg("name")}, {"p", reg("price")}},
       Predicate::conj(eq("n", "MSFT"), Predicate::attr_cmp("p", CmpOp::Gt, 100)),
       {{"msft", {np}}},
       2});
  a.transitions.push_back({2,
                           {{"m", Expression::monoid(MonoidKind::Max, reg("m"), reg("price"))},
                            {"n", reg("name")},
                            {"p", reg("price")}},
                           eq("n", "INTL"),
                           {{"intel", {np}}},
                           2});
  a.transitions.push_back(
      {2,
       {{"m", reg("m")}, {"n", reg("name")}, {"p", reg("price")}},
       Predicate::conj(eq("n", "AMZN"), Predicate::attr_cmp("p", CmpOp::Lt, 2000)),
       {{"amzn", {np}}, {"M", {fields({{"MAX", reg("m")}})}}},
       3});
  return a;
}

Acea max_price_automaton() {
  const auto event = fields({{"type", reg("t")}, {"name", reg("n")}, {"price", reg("p")}});
  const Assignment keep{{"m", reg("m")}};
  const Assignment read_max{{"m", Expression::monoid(MonoidKind::Max, reg("m"), reg("price"))},
                            {"t", reg("type")},
                            {"n", reg("name")},
                            {"p", reg("price")}};
  const auto intel_guard = Predicate::conj(eq("t", "SELL"), eq("n", "INTL"));
  Acea a;
  a.states = {1, 2, 3, 4};
  a.initial = 1;
  a.finals = {4};
  a.transitions.push_back(
      {1,
       {{"m", lit(0)}, {"t", reg("type")}, {"n", reg("name")}, {"p", reg("price")}},
       Predicate::all_of({eq("t", "SELL"), eq("n", "MSFT"), Predicate::attr_cmp("p", CmpOp::Gt, 100)}),
       {{"msft", {event}}, {"SELL", {event}}},
       2});
  a.transitions.push_back({2, keep, Predicate::truth(), {}, 2});
  a.transitions.push_back({2, read_max, intel_guard, {{"intel", {event}}, {"SELL", {event}}}, 3});
  a.transitions.push_back({3, keep, Predicate::truth(), {}, 3});
  a.transitions.push_back({3, read_max, intel_guard, {{"intel", {event}}, {"SELL", {event}}}, 3});
  a.transitions.push_back(
      {3,
       {{"m", reg("m")}, {"t", reg("type")}, {"n", reg("name")}, {"p", reg("price")}},
       Predicate::all_of({eq("t", "SELL"), eq("n", "AMZN"), Predicate::attr_cmp("p", CmpOp::Lt, 2000)}),
       {{"amzn", {event}}, {"SELL", {event}}, {"M", {fields({{"MAX", reg("m")}})}}},
       4});
  return a;
}

Stream unit_stream(std::size_t n) {
  std::vector<AttrMap> events(n, AttrMap{{"type", "R"}, {"a", 1}});
  return make_stream(std::move(events));
}

Acea doubling_automaton() {
  const auto twice_a = Expression::binary(Op::Sum, reg("a"), reg("a"));
  const auto twice_r = Expression::binary(Op::Sum, reg("r"), reg("r"));
  const auto out = fields({{"b", reg("r")}});
  Acea a;
  a.states = {0, 1, 2};
  a.initial = 0;
  a.finals = {2};
  a.transitions.push_back({0, {{"r", twice_a}}, Predicate::truth(), {{"B", {out}}}, 2});
  a.transitions.push_back({0, {{"r", twice_a}}, Predicate::truth(), {}, 1});
  a.transitions.push_back({1, {{"r", twice_r}}, Predicate::truth(), {}, 1});
  a.transitions.push_back({1, {{"r", twice_r}}, Predicate::truth(), {{"B", {out}}}, 2});
  return a;
}

Acea running_sum_automaton() {
  const auto out = fields({{"b", reg("r")}});
  Acea a;
  a.states = {0, 1};
  a.initial = 0;
  a.finals = {1};
  a.transitions.push_back({0, {{"r", reg("a")}}, Predicate::truth(), {{"B", {out}}}, 1});
  a.transitions.push_back(
      {1, {{"r", Expression::binary(Op::Sum, reg("r"), reg("a"))}}, Predicate::truth(), {{"B", {out}}}, 1});
  return a;
}

namespace {

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& xs) {
  return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
std::vector<T> nonempty_subset(std::mt19937_64& rng, const std::vector<T>& xs) {
  std::vector<T> out;
  for (const auto& x : xs) {
    if (coin(rng, 0.5)) out.push_back(x);
  }
  if (out.empty()) out.push_back(pick(rng, xs));
  return out;
}

const std::vector<CmpOp> kOps{CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge};

class FormulaGen {
 public:
  FormulaGen(std::mt19937_64& rng, const FormulaOptions& opt) : rng_(rng), opt_(opt) {
    subjects_ = opt.vars;
    subjects_.insert(subjects_.end(), opt.types.begin(), opt.types.end());
  }

  FormulaPtr formula(int depth) {
    if (depth <= 0 || coin(rng_, 0.2)) return leaf();
    std::vector<int> kinds{0, 1, 2, 3, 4, 5, 6, 7, 8};
    if (opt_.aggregation) kinds.insert(kinds.end(), {9, 10, 9});
    if (opt_.sugar) kinds.insert(kinds.end(), {11, 11});
    switch (pick(rng_, kinds)) {
      case 0:
        return as(formula(depth - 1), pick(rng_, opt_.vars));
      case 1:
        return filter(formula(depth - 1), condition());
      case 2:
        return project_vars(formula(depth - 1), nonempty_subset(rng_, subjects_));
      case 3:
        return disj(formula(depth - 1), formula(depth - 1));
      case 4:
        return conj(formula(depth - 1), formula(depth - 1));
      case 5:
        return seq(formula(depth - 1), formula(depth - 1));
      case 6:
        return seq_contig(formula(depth - 1), formula(depth - 1));
      case 7:
        return iter(formula(depth - 1));
      case 8:
        return iter_contig(formula(depth - 1));
      case 9:
        return aggregation(formula(depth - 1));
      case 10: {
        auto attrs = opt_.attrs;
        attrs.push_back("type");
        return project_attrs(formula(depth - 1), pick(rng_, subjects_), nonempty_subset(rng_, attrs));
      }
      default:
        return filter(formula(depth - 1), compound_condition());
    }
  }

 private:
  FormulaPtr leaf() {
    if (opt_.sugar && coin(rng_, 0.2)) return next(pick(rng_, opt_.types));
    return event_type(pick(rng_, opt_.types));
  }

  Predicate atom_predicate() {
    switch (std::uniform_int_distribution<int>(0, 5)(rng_)) {
      case 0:
        return Predicate::attr_attr(pick(rng_, opt_.attrs), pick(rng_, kOps), pick(rng_, opt_.attrs));
      case 1:
        return Predicate::truth();
      default:
        return Predicate::attr_cmp(pick(rng_, opt_.attrs), pick(rng_, kOps),
                                   Value(std::uniform_int_distribution<std::int64_t>(0, 9)(rng_)));
    }
  }

  Predicate predicate() {
    switch (std::uniform_int_distribution<int>(0, 7)(rng_)) {
      case 0:
        return Predicate::conj(atom_predicate(), atom_predicate());
      case 1:
        return Predicate::disj(atom_predicate(), atom_predicate());
      case 2:
        return Predicate::negate(atom_predicate());
      default:
        return atom_predicate();
    }
  }

  FilterExpr condition() {
    const auto& var = pick(rng_, subjects_);
    if (opt_.bag_predicates && coin(rng_, 0.3)) {
      static const std::vector<MultisetPredicate::Kind> kinds{
          MultisetPredicate::Kind::SameAttr, MultisetPredicate::Kind::Increasing, MultisetPredicate::Kind::Decreasing};
      return FilterAtom{var, MultisetPredicate{pick(rng_, kinds), pick(rng_, opt_.attrs)}};
    }
    return FilterAtom{var, predicate()};
  }

  FilterExpr compound_condition() {
    auto lhs = condition();
    auto rhs = coin(rng_, 0.3) ? compound_condition() : condition();
    return coin(rng_, 0.5) ? FilterExpr::conj(std::move(lhs), std::move(rhs))
                           : FilterExpr::disj(std::move(lhs), std::move(rhs));
  }

  FormulaPtr aggregation(FormulaPtr inner) {
    static const std::vector<std::string> functions{"sum", "min", "max", "count", "avg", "range"};
    auto targets = nonempty_subset(rng_, opt_.attrs);
    if (targets.size() > 2) targets.resize(2);
    std::vector<AggBinding> bindings;
    for (const auto& t : targets) {
      bindings.push_back({t, pick(rng_, functions), pick(rng_, subjects_), pick(rng_, opt_.attrs)});
    }
    return agg(std::move(inner), pick(rng_, opt_.vars), std::move(bindings));
  }

  std::mt19937_64& rng_;
  const FormulaOptions& opt_;
  std::vector<std::string> subjects_;
};

}  // namespace

FormulaPtr random_formula(std::mt19937_64& rng, const FormulaOptions& opt) {
  return FormulaGen(rng, opt).formula(opt.max_depth);
}

Schema schema_for(const FormulaOptions& opt) {
  std::map<std::string, std::set<std::string>> types;
  for (const auto& t : opt.types) types[t] = std::set<std::string>(opt.attrs.begin(), opt.attrs.end());
  return Schema(std::move(types));
}

Cea random_cea(std::mt19937_64& rng, const std::vector<std::string>& types, std::uint32_t max_states) {
  Cea a;
  const auto n = std::uniform_int_distribution<std::uint32_t>(1, max_states)(rng);
  for (std::uint32_t q = 0; q < n; ++q) a.states.insert(q);
  a.initial = 0;
  for (std::uint32_t q = 0; q < n; ++q) {
    if (coin(rng, 0.4)) a.finals.insert(q);
  }
  if (a.finals.empty()) a.finals.insert(n - 1);
  std::uniform_int_distribution<std::uint32_t> state(0, n - 1);
  const auto count = std::uniform_int_distribution<int>(1, 2 * static_cast<int>(n) + 1)(rng);
  for (int i = 0; i < count; ++i) {
    CeaTransition t;
    t.source = state(rng);
    t.target = state(rng);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0:
        t.guard = Predicate::truth();
        break;
      case 1:
        t.guard = Predicate::type_is(pick(rng, types));
        break;
      default:
        t.guard = Predicate::conj(Predicate::type_is(pick(rng, types)),
                                  Predicate::attr_cmp("v", pick(rng, kOps),
                                                      Value(std::uniform_int_distribution<std::int64_t>(0, 9)(rng))));
        break;
    }
    if (coin(rng, 0.5)) t.marks.insert("X");
    if (coin(rng, 0.3)) t.marks.insert("Y");
    a.transitions.push_back(std::move(t));
  }
  return a;
}

std::filesystem::path corpus_dir() { return ACEL_CORPUS_DIR; }

FormulaPtr corpus_query(const std::string& fixture) {
  std::ifstream in(corpus_dir() / fixture / "query.acel");
  if (!in) throw Error("missing corpus fixture " + fixture);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_query(text.str());
}

}  // namespace acel::testing
