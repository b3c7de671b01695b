#include <doctest.h>

#include "acel/desugar.hpp"
#include "acel/error.hpp"
#include "acel/oracle.hpp"
#include "acel/parser.hpp"
#include "acel/random.hpp"
#include "fixtures.hpp"

using namespace acel;

namespace {

const char* kSellTriple = R"((SELL AS msft ; SELL AS intel ; SELL AS amzn)
FILTER msft[name = "MSFT"] AND msft[price > 100] AND intel[name = "INTL"]
   AND amzn[name = "AMZN"] AND amzn[price < 2000])";

}  // namespace

TEST_CASE("parse event type") {
  auto f = parse_query("SELL");
  REQUIRE(f->as<ast::EventType>());
  CHECK(f->as<ast::EventType>()->type == "SELL");
}

TEST_CASE("parse a filtered sequence chain") {
  auto f = parse_query(kSellTriple);
  const auto* filter = f->as<ast::Filter>();
  REQUIRE(filter);
  const auto* outer = filter->inner->as<ast::Seq>();
  REQUIRE(outer);
  CHECK_FALSE(outer->contiguous);
  CHECK(outer->lhs->as<ast::Seq>());
  CHECK(outer->rhs->as<ast::As>()->var == "amzn");
  CHECK(variables_of(*f) == std::set<std::string>{"SELL", "msft", "intel", "amzn"});
}

TEST_CASE("parse a single-binding aggregation") {
  auto f = parse_query("AGG M[MAX <- max intel(price)]((SELL AS msft ; (SELL AS intel)+ ; SELL AS amzn))");
  const auto* a = f->as<ast::Agg>();
  REQUIRE(a);
  CHECK(a->target == "M");
  REQUIRE(a->bindings.size() == 1);
  CHECK(a->bindings[0] == AggBinding{"MAX", "max", "intel", "price"});
  CHECK(variables_of(*f).count("M"));
}

TEST_CASE("precedence") {
  CHECK(to_string(*parse_query("A ; B : C OR D AND E")) == "(((A ; B) : C) OR (D AND E))");
  CHECK(to_string(*parse_query("A : B ; C")) == "((A : B) ; C)");
  CHECK(to_string(*parse_query("A+ AS X")) == "((A+) AS X)");
  CHECK(to_string(*parse_query("A (+) (+)")) == "((A(+))(+))");
  CHECK(to_string(*parse_query("A AS X FILTER X[v > 1] ; B")) == "(((A AS X) FILTER X[v > 1]) ; B)");
  CHECK(to_string(*parse_query("A FILTER X[v = 1] OR Y[v = 2] AND Z[v = 3]")) ==
        "(A FILTER (X[v = 1] OR (Y[v = 2] AND Z[v = 3])))");
}

TEST_CASE("comments, literals and keywords") {
  auto f = parse_query("-- leading comment\nA FILTER A[v = -2.5 AND w != NULL AND name = 'x'] -- trailing");
  CHECK(to_string(*f) == "(A FILTER A[((v = -2.5 AND w != NULL) AND name = \"x\")])");
  CHECK(to_string(*parse_query("PROJ[X, Y](A AS X)")) == "PROJ[X, Y]((A AS X))");
  CHECK(to_string(*parse_query("PROJ X(a, b)(A AS X)")) == "PROJ X(a, b)((A AS X))");
  CHECK(to_string(*parse_query("S : NEXT(R)")) == "(S : NEXT(R))");
}

TEST_CASE("parse errors carry positions") {
  auto fails_at = [](const char* text, int line, int column) {
    try {
      parse_query(text);
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
      return;
    }
    FAIL("no parse error for " << text);
  };
  fails_at("A ;", 1, 4);
  fails_at("A\n  AS", 2, 5);
  fails_at("A $ B", 1, 3);
  fails_at("(A", 1, 3);
  CHECK_THROWS_AS(parse_query("AGG Y[b <- median X(a)](A)"), ParseError);
  CHECK_THROWS_AS(parse_query("AGG Y[b <- sum X(a), b <- max X(a)](A)"), ParseError);
  CHECK_THROWS_AS(parse_query("A FILTER X[increasing(a) OR b = 1]"), ParseError);
  CHECK_THROWS_AS(parse_query(""), ParseError);
}

TEST_CASE("bag predicates parse as filter payloads") {
  auto f = parse_query("(M AS M)(+) FILTER M[patient] AND M[increasing(rate)] AND M[activity = \"passive\"]");
  CHECK(has_multiset_filter(*f));
  auto g = parse_query("A FILTER A[decreasing(v) AND v > 1]");
  CHECK(has_multiset_filter(*g));
}

TEST_CASE("print then parse is the identity on random formulas") {
  std::mt19937_64 rng(seed_from_env(11));
  testing::FormulaOptions opt;
  opt.aggregation = opt.sugar = opt.bag_predicates = true;
  for (int i = 0; i < 500; ++i) {
    const auto f = random_formula(rng, opt);
    const auto text = to_string(*f);
    FormulaPtr back;
    REQUIRE_NOTHROW(back = parse_query(text));
    CHECK_MESSAGE(equal(*f, *back), text);
  }
}

TEST_CASE("desugar filter connectives") {
  const std::vector<std::string> types{"A", "B"};
  auto f = parse_query("A AS X FILTER X[v = 1] AND Y[v = 2]");
  CHECK(to_string(*desugar(f, types)) == "(((A AS X) FILTER X[v = 1]) FILTER Y[v = 2])");
  auto g = parse_query("A AS X FILTER X[v = 1] OR Y[v = 2]");
  CHECK(to_string(*desugar(g, types)) == "(((A AS X) FILTER X[v = 1]) OR ((A AS X) FILTER Y[v = 2]))");
  auto core = parse_query("(A ; B)+ AS X");
  CHECK(desugar(core, types) == core);
}

TEST_CASE("desugar NEXT follows the expansion") {
  const auto got = desugar(next("STOCK"), {"NEWS", "STOCK"});
  const auto skipped = seq_contig(iter(as(disj(event_type("NEWS"), event_type("STOCK")), "$next0")),
                                  event_type("STOCK"));
  const auto want = disj(project_vars(filter(skipped, "$next0", Predicate::attr_cmp("type", CmpOp::Ne, "STOCK")),
                                      {"STOCK"}),
                         event_type("STOCK"));
  CHECK(equal(*got, *want));
  CHECK_FALSE(has_sugar(*got));
}

TEST_CASE("desugar is idempotent and preserves meaning") {
  std::mt19937_64 rng(seed_from_env(12));
  testing::FormulaOptions opt;
  opt.sugar = true;
  opt.aggregation = true;
  opt.max_depth = 3;
  StreamShape shape;
  shape.schema = testing::schema_for(opt);
  shape.max_length = 5;
  for (int i = 0; i < 150; ++i) {
    const auto f = random_formula(rng, opt);
    const auto once = desugar(f, opt.types);
    CHECK_FALSE(has_sugar(*once));
    CHECK(equal(*desugar(once, opt.types), *once));
    const auto s = random_stream(shape, rng);
    ResultSet expected;
    try {
      expected = evaluate(*f, s);
    } catch (const EvaluationError&) {
      // avg over an empty bag; the desugared query must raise it too
      CHECK_THROWS_AS(evaluate(*once, s), EvaluationError);
      continue;
    }
    CHECK_MESSAGE(evaluate(*once, s) == expected, to_string(*f));
  }
}
