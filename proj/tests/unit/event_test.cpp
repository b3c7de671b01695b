#include <doctest.h>

#include "acel/error.hpp"
#include "acel/event.hpp"
#include "fixtures.hpp"

using namespace acel;

namespace {

EventBag bag(std::vector<Event> events) { return EventBag(std::move(events)); }

}  // namespace

TEST_CASE("event predicates over bags") {
  const auto s = testing::stocks_stream();
  CHECK(event_satisfies(s[0], Predicate::attr_cmp("price", CmpOp::Gt, 100)));
  CHECK(bag_satisfies(bag({s[2], s[5]}), Predicate::attr_cmp("name", CmpOp::Eq, "INTL")));
  CHECK(bag_satisfies(EventBag{}, Predicate::attr_cmp("name", CmpOp::Eq, "nobody")));
  CHECK_FALSE(bag_satisfies(bag({Event({{"a", 1}}, 0), Event({{"a", 2}}, 1)}), Predicate::attr_cmp("a", CmpOp::Eq, 1)));
}

TEST_CASE("bag predicates") {
  using K = MultisetPredicate::Kind;
  const Event r60({{"rate", 60}}, 2), r70({{"rate", 70}}, 5);
  CHECK(bag_satisfies_multiset(bag({r60, r70}), {K::Increasing, "rate"}));
  CHECK_FALSE(bag_satisfies_multiset(bag({r60, r70}), {K::Decreasing, "rate"}));
  CHECK(bag_satisfies_multiset(bag({r60}), {K::Decreasing, "rate"}));
  CHECK(bag_satisfies_multiset(bag({r60}), {K::SameAttr, "job"}));
  CHECK_FALSE(bag_satisfies_multiset(bag({Event({{"job", 1}}, 0), Event({{"job", 2}}, 3)}), {K::SameAttr, "job"}));
  CHECK(bag_satisfies_multiset(bag({Event({{"job", 1}}, 0), Event({{"job", 1}}, 3)}), {K::SameAttr, "job"}));
  CHECK_FALSE(bag_satisfies_multiset(bag({Event({{"rate", Value::null()}}, 0), r70}), {K::Increasing, "rate"}));
}

TEST_CASE("renaming, update and projection") {
  const Event regs({{"n", "MSFT"}, {"p", 101}}, 0);
  CHECK(rename_event({{"n", "name"}, {"p", "price"}}, regs) == Event({{"name", "MSFT"}, {"price", 101}}, 0));
  CHECK(rename_event({{"n", "n"}, {"p", "p"}}, regs) == regs);
  CHECK_THROWS_AS((void)rename_event({{"a", "c"}, {"b", "c"}}, Event({{"a", 1}, {"b", 2}}, 0)), EvaluationError);

  CHECK(update_event(Event({{"a", 1}}, 0), Event({{"a", 2}, {"b", 3}}, 0)).attrs() == AttrMap{{"a", 1}, {"b", 3}});
  CHECK(update_event(Event({}, 0), Event({{"b", 3}}, 0)).attrs() == AttrMap{{"b", 3}});
  CHECK(update_event(Event({{"a", 1}, {"c", 4}}, 0), Event({}, 0)).attrs() == AttrMap{{"a", 1}, {"c", 4}});

  const auto s = testing::stocks_stream();
  CHECK(project_event_attrs(s[2], {"price"}) == Event({{"price", 80}}, 2));
  CHECK(project_event_attrs(s[2], {"type", "name", "price"}) == s[2]);
  CHECK(project_event_attrs(s[2], {"missing"}) == Event({}, 2));
}

TEST_CASE("complex event union and variable projection") {
  const auto s = testing::stocks_stream();
  const ComplexEvent c1(0, 2, {{"X", bag({s[0]})}});
  const ComplexEvent c2(4, 4, {{"Y", bag({s[4]})}});
  CHECK(ce_union(c1, c2) == ComplexEvent(0, 4, {{"X", bag({s[0]})}, {"Y", bag({s[4]})}}));
  CHECK(ce_union(c1, ComplexEvent(0, 2)) == c1);
  const ComplexEvent one(1, 1, {{"X", bag({s[1]})}});
  CHECK(ce_union(one, one).bag("X").size() == 2);

  const ComplexEvent both = ce_union(c1, c2);
  CHECK(ce_project_vars(both, {"X", "Y"}) == both);
  CHECK(ce_project_vars(both, {}) == ComplexEvent(0, 4));
  CHECK(ce_project_vars(both, {"Y"}) == ComplexEvent(0, 4, {{"Y", bag({s[4]})}}));
  CHECK_THROWS_AS(ComplexEvent(3, 2), Error);
}

TEST_CASE("stream validation") {
  CHECK_FALSE(validate_stream(testing::stocks_stream(), testing::stocks_schema()).has_value());
  CHECK_FALSE(validate_stream({}, testing::stocks_schema()).has_value());
  auto s = testing::stocks_stream();
  s[3] = Event({{"type", "BUY"}, {"name", "INTL"}}, 3);
  const auto v = validate_stream(s, testing::stocks_schema());
  REQUIRE(v.has_value());
  CHECK(v->index == 3);
  CHECK(infer_schema(testing::stocks_stream()) == testing::stocks_schema());
  CHECK_THROWS_AS(Schema(std::map<std::string, std::set<std::string>>{{"T", {"time"}}}), ValidationError);
}

TEST_CASE("event order ignores origin") {
  const Event a({{"v", 1}}, 0, 7), b({{"v", 1}}, 0, 9);
  CHECK(a == b);
  CHECK(identity_less(a, b));
  EventBag x, y;
  x.add(a);
  y.add(b);
  CHECK(x == y);
}
