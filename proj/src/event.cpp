#include "acel/event.hpp"

#include <algorithm>
#include <functional>

#include "acel/error.hpp"

namespace acel {

namespace {

std::weak_ordering to_ordering(int c) {
  if (c < 0) return std::weak_ordering::less;
  if (c > 0) return std::weak_ordering::greater;
  return std::weak_ordering::equivalent;
}

template <typename BagCompare>
std::weak_ordering compare_ce(const ComplexEvent& a, const ComplexEvent& b, BagCompare bag_compare) {
  if (auto c = a.start() <=> b.start(); c != 0) return c;
  if (auto c = a.end() <=> b.end(); c != 0) return c;
  auto ia = a.valuation().begin();
  auto ib = b.valuation().begin();
  for (; ia != a.valuation().end() && ib != b.valuation().end(); ++ia, ++ib) {
    if (int c = ia->first.compare(ib->first); c != 0) return to_ordering(c);
    if (auto c = bag_compare(ia->second, ib->second); c != 0) return c;
  }
  if (ia == a.valuation().end() && ib == b.valuation().end()) return std::weak_ordering::equivalent;
  return ia == a.valuation().end() ? std::weak_ordering::less : std::weak_ordering::greater;
}

std::weak_ordering identity_order(const Event& a, const Event& b) {
  if (auto c = a <=> b; c != 0) return c;
  return a.origin() <=> b.origin();
}

std::weak_ordering identity_order(const EventBag& a, const EventBag& b) {
  return std::lexicographical_compare_three_way(
      a.begin(), a.end(), b.begin(), b.end(),
      [](const Event& x, const Event& y) { return identity_order(x, y); });
}

}  // namespace

Value Event::get(const std::string& attr) const {
  auto it = attrs_.find(attr);
  return it == attrs_.end() ? Value::null() : it->second;
}

std::weak_ordering operator<=>(const Event& a, const Event& b) {
  if (auto c = a.time_ <=> b.time_; c != 0) return c;
  return to_ordering(canonical_compare(a.attrs_, b.attrs_));
}

std::string to_string(const Event& e) { return "@" + std::to_string(e.time()) + to_string(e.attrs()); }

bool identity_less(const Event& a, const Event& b) { return identity_order(a, b) < 0; }

EventBag::EventBag(std::initializer_list<Event> events) : EventBag(std::vector<Event>(events)) {}

EventBag::EventBag(std::vector<Event> events) : events_(std::move(events)) {
  std::sort(events_.begin(), events_.end(), [](const Event& a, const Event& b) { return identity_less(a, b); });
}

void EventBag::add(Event e) {
  auto pos = std::upper_bound(events_.begin(), events_.end(), e,
                              [](const Event& a, const Event& b) { return identity_less(a, b); });
  events_.insert(pos, std::move(e));
}

void EventBag::merge(const EventBag& other) {
  std::vector<Event> out;
  out.reserve(events_.size() + other.events_.size());
  std::merge(events_.begin(), events_.end(), other.events_.begin(), other.events_.end(), std::back_inserter(out),
             [](const Event& a, const Event& b) { return identity_less(a, b); });
  events_ = std::move(out);
}

bool operator==(const EventBag& a, const EventBag& b) { return a.events_ == b.events_; }

std::weak_ordering operator<=>(const EventBag& a, const EventBag& b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

bool identity_less(const EventBag& a, const EventBag& b) { return identity_order(a, b) < 0; }

ComplexEvent::ComplexEvent(std::int64_t start, std::int64_t end, Valuation valuation)
    : start_(start), end_(end), valuation_(std::move(valuation)) {
  if (start > end) throw Error("complex event with start after end");
  std::erase_if(valuation_, [](const auto& kv) { return kv.second.empty(); });
}

const EventBag& ComplexEvent::bag(const std::string& var) const {
  static const EventBag empty;
  auto it = valuation_.find(var);
  return it == valuation_.end() ? empty : it->second;
}

void ComplexEvent::set_bag(const std::string& var, EventBag bag) {
  if (bag.empty()) {
    valuation_.erase(var);
  } else {
    valuation_[var] = std::move(bag);
  }
}

void ComplexEvent::add_event(const std::string& var, Event e) { valuation_[var].add(std::move(e)); }

std::weak_ordering operator<=>(const ComplexEvent& a, const ComplexEvent& b) {
  return compare_ce(a, b, [](const EventBag& x, const EventBag& y) { return x <=> y; });
}

bool IdentityLess::operator()(const ComplexEvent& a, const ComplexEvent& b) const {
  return compare_ce(a, b, [](const EventBag& x, const EventBag& y) { return identity_order(x, y); }) < 0;
}

std::string to_string(const ComplexEvent& c) {
  std::string out = "(" + std::to_string(c.start()) + ", " + std::to_string(c.end()) + ", {";
  bool first_var = true;
  for (const auto& [var, bag] : c.valuation()) {
    if (!first_var) out += ", ";
    first_var = false;
    out += var + " -> {{";
    bool first = true;
    for (const auto& e : bag) {
      if (!first) out += ", ";
      first = false;
      out += to_string(e);
    }
    out += "}}";
  }
  return out + "})";
}

Schema::Schema(std::map<std::string, std::set<std::string>> types) : types_(std::move(types)) {
  for (const auto& [type, attrs] : types_) {
    if (attrs.count("type") || attrs.count("time")) {
      throw ValidationError("schema for " + type + " lists a reserved attribute");
    }
  }
}

const std::set<std::string>& Schema::attributes(const std::string& type) const {
  static const std::set<std::string> empty;
  auto it = types_.find(type);
  return it == types_.end() ? empty : it->second;
}

std::vector<std::string> Schema::type_names() const {
  std::vector<std::string> out;
  for (const auto& kv : types_) out.push_back(kv.first);
  return out;
}

Stream make_stream(std::vector<AttrMap> events) {
  Stream s;
  s.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) s.emplace_back(std::move(events[i]), static_cast<std::int64_t>(i));
  return s;
}

namespace {

std::set<std::string> attribute_names(const Event& e) {
  std::set<std::string> out;
  for (const auto& kv : e.attrs()) {
    if (kv.first != "type") out.insert(kv.first);
  }
  return out;
}

std::string join(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return "{" + out + "}";
}

}  // namespace

std::optional<StreamViolation> validate_stream(const Stream& s, const Schema& sch) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Event& e = s[i];
    if (e.time() != static_cast<std::int64_t>(i)) {
      return StreamViolation{i, "event time " + std::to_string(e.time()) + " at index " + std::to_string(i)};
    }
    const Value type = e.type();
    if (!type.is_text()) return StreamViolation{i, "event has no textual type"};
    if (!sch.has_type(type.as_text())) return StreamViolation{i, "unknown event type " + type.as_text()};
    for (const auto& kv : e.attrs()) {
      if (!kv.first.empty() && kv.first[0] == '$') {
        return StreamViolation{i, "attribute name " + kv.first + " uses the reserved prefix"};
      }
    }
    const auto& expected = sch.attributes(type.as_text());
    const auto actual = attribute_names(e);
    if (actual != expected) {
      return StreamViolation{i, type.as_text() + " has attributes " + join(actual) + ", schema expects " +
                                    join(expected)};
    }
  }
  return std::nullopt;
}

Schema infer_schema(const Stream& s) {
  std::map<std::string, std::set<std::string>> types;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Value type = s[i].type();
    if (!type.is_text()) throw ValidationError("event " + std::to_string(i) + " has no textual type");
    auto [it, inserted] = types.emplace(type.as_text(), attribute_names(s[i]));
    if (!inserted && it->second != attribute_names(s[i])) {
      throw ValidationError("event " + std::to_string(i) + " of type " + type.as_text() +
                            " does not match the attributes first seen for that type");
    }
  }
  return Schema(std::move(types));
}

bool event_satisfies(const Event& e, const Predicate& p) { return satisfies(e.attrs(), p); }

bool bag_satisfies(const EventBag& b, const Predicate& p) {
  return std::all_of(b.begin(), b.end(), [&](const Event& e) { return event_satisfies(e, p); });
}

bool bag_satisfies_multiset(const EventBag& b, const MultisetPredicate& mp) {
  if (b.size() <= 1) return true;
  const auto& events = b.events();
  if (mp.kind == MultisetPredicate::Kind::SameAttr) {
    const Value first = events.front().get(mp.attr);
    if (first.is_null()) return false;
    return std::all_of(events.begin(), events.end(), [&](const Event& e) {
      const Value v = e.get(mp.attr);
      return !v.is_null() && compare_values(first, CmpOp::Eq, v);
    });
  }
  const CmpOp op = mp.kind == MultisetPredicate::Kind::Increasing ? CmpOp::Lt : CmpOp::Gt;
  // Events are sorted by time; group them and compare adjacent groups pairwise.
  std::size_t group = 0;
  while (group < events.size()) {
    std::size_t next = group;
    while (next < events.size() && events[next].time() == events[group].time()) ++next;
    std::size_t after = next;
    while (after < events.size() && events[after].time() == events[next].time()) ++after;
    for (std::size_t i = group; i < next; ++i) {
      for (std::size_t j = next; j < after; ++j) {
        if (!compare_values(events[i].get(mp.attr), op, events[j].get(mp.attr))) return false;
      }
    }
    group = next;
  }
  return true;
}

Event rename_event(const Renaming& r, const Event& e) {
  AttrMap out;
  for (const auto& [source, target] : r) {
    const Value v = e.get(source);
    auto [it, inserted] = out.emplace(target, v);
    if (!inserted && !(it->second == v)) {
      throw EvaluationError("event " + to_string(e) + " is inconsistent with the renaming onto " + target);
    }
  }
  return Event(std::move(out), e.time(), e.origin());
}

Event update_event(const Event& e, const Event& base) {
  AttrMap out = e.attrs();
  for (const auto& kv : base.attrs()) out.emplace(kv.first, kv.second);
  return Event(std::move(out), e.time(), e.origin());
}

Event project_event_attrs(const Event& e, const std::set<std::string>& attrs) {
  AttrMap out;
  for (const auto& kv : e.attrs()) {
    if (attrs.count(kv.first)) out.insert(kv);
  }
  return Event(std::move(out), e.time(), e.origin());
}

ComplexEvent ce_union(const ComplexEvent& c1, const ComplexEvent& c2) {
  Valuation v = c1.valuation();
  for (const auto& [var, bag] : c2.valuation()) v[var].merge(bag);
  return ComplexEvent(std::min(c1.start(), c2.start()), std::max(c1.end(), c2.end()), std::move(v));
}

ComplexEvent ce_project_vars(const ComplexEvent& c, const std::set<std::string>& vars) {
  Valuation v;
  for (const auto& [var, bag] : c.valuation()) {
    if (vars.count(var)) v.emplace(var, bag);
  }
  return ComplexEvent(c.start(), c.end(), std::move(v));
}

std::uint64_t combine_origin(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a boost-style combine
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t origin_of(const void* node) {
  return combine_origin(0x6163656c6f726967ULL, static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(node)));
}

}  // namespace acel
