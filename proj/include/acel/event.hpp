#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acel/predicate.hpp"
#include "acel/value.hpp"

namespace acel {

/// An attribute map with a time. The origin is an evaluation-internal tag
/// telling apart events created by different operators; it never takes part
/// in equality or ordering.
class Event {
 public:
  Event() = default;
  Event(AttrMap attrs, std::int64_t time, std::uint64_t origin = 0)
      : attrs_(std::move(attrs)), time_(time), origin_(origin) {}

  const AttrMap& attrs() const noexcept { return attrs_; }
  std::int64_t time() const noexcept { return time_; }
  std::uint64_t origin() const noexcept { return origin_; }

  /// Null when absent.
  Value get(const std::string& attr) const;
  bool has(const std::string& attr) const { return attrs_.count(attr) != 0; }
  /// The "type" attribute, Null for untyped events.
  Value type() const { return get("type"); }

  Event with_origin(std::uint64_t origin) const { return Event(attrs_, time_, origin); }

  friend bool operator==(const Event& a, const Event& b) { return a.time_ == b.time_ && a.attrs_ == b.attrs_; }
  /// Orders by time, then attributes canonically.
  friend std::weak_ordering operator<=>(const Event& a, const Event& b);

 private:
  AttrMap attrs_;
  std::int64_t time_ = 0;
  std::uint64_t origin_ = 0;
};

std::string to_string(const Event& e);

/// Orders by (time, attrs, origin). Used where origins must stay apart.
bool identity_less(const Event& a, const Event& b);

/// Multiset of events kept in canonical order. Equality ignores origins.
class EventBag {
 public:
  EventBag() = default;
  EventBag(std::initializer_list<Event> events);
  explicit EventBag(std::vector<Event> events);

  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }
  auto begin() const noexcept { return events_.begin(); }
  auto end() const noexcept { return events_.end(); }
  const std::vector<Event>& events() const noexcept { return events_; }

  void add(Event e);
  /// Bag union; duplicates are kept.
  void merge(const EventBag& other);

  friend bool operator==(const EventBag& a, const EventBag& b);
  friend std::weak_ordering operator<=>(const EventBag& a, const EventBag& b);

 private:
  std::vector<Event> events_;
};

bool identity_less(const EventBag& a, const EventBag& b);

using Valuation = std::map<std::string, EventBag>;

/// Interval [start..end] plus a valuation. Variables with empty bags are not
/// stored, so structural equality is plain map equality.
class ComplexEvent {
 public:
  ComplexEvent() = default;
  ComplexEvent(std::int64_t start, std::int64_t end, Valuation valuation = {});

  std::int64_t start() const noexcept { return start_; }
  std::int64_t end() const noexcept { return end_; }
  const Valuation& valuation() const noexcept { return valuation_; }
  /// Empty bag for unmentioned variables.
  const EventBag& bag(const std::string& var) const;

  void set_bag(const std::string& var, EventBag bag);
  void add_event(const std::string& var, Event e);

  friend bool operator==(const ComplexEvent& a, const ComplexEvent& b) = default;
  friend std::weak_ordering operator<=>(const ComplexEvent& a, const ComplexEvent& b);

 private:
  std::int64_t start_ = 0;
  std::int64_t end_ = 0;
  Valuation valuation_;
};

/// Structural order extended with event origins.
struct IdentityLess {
  bool operator()(const ComplexEvent& a, const ComplexEvent& b) const;
};

std::string to_string(const ComplexEvent& c);

/// Deduplicated set of complex events under structural equality.
using ResultSet = std::set<ComplexEvent>;

/// Attribute-to-attribute renaming: source name to target name.
using Renaming = std::map<std::string, std::string>;

/// Event type name to its attribute names ("type" excluded).
class Schema {
 public:
  Schema() = default;
  /// Throws ValidationError if a set names "type" or "time".
  explicit Schema(std::map<std::string, std::set<std::string>> types);

  const std::map<std::string, std::set<std::string>>& types() const noexcept { return types_; }
  bool has_type(const std::string& type) const { return types_.count(type) != 0; }
  /// Empty set for unknown types.
  const std::set<std::string>& attributes(const std::string& type) const;
  std::vector<std::string> type_names() const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::map<std::string, std::set<std::string>> types_;
};

using Stream = std::vector<Event>;

/// Builds a stream from attribute maps, assigning times 0, 1, 2, ...
Stream make_stream(std::vector<AttrMap> events);

struct StreamViolation {
  std::size_t index;
  std::string reason;
};

std::optional<StreamViolation> validate_stream(const Stream& s, const Schema& sch);

/// First occurrence of each type fixes its attributes. Throws ValidationError
/// on a later mismatch or an untyped event.
Schema infer_schema(const Stream& s);

bool event_satisfies(const Event& e, const Predicate& p);
bool bag_satisfies(const EventBag& b, const Predicate& p);
bool bag_satisfies_multiset(const EventBag& b, const MultisetPredicate& mp);

/// Throws EvaluationError if two source attributes share a target but differ.
Event rename_event(const Renaming& r, const Event& e);
/// e >> base: attributes of e override those of base; time from e.
Event update_event(const Event& e, const Event& base);
Event project_event_attrs(const Event& e, const std::set<std::string>& attrs);

ComplexEvent ce_union(const ComplexEvent& c1, const ComplexEvent& c2);
ComplexEvent ce_project_vars(const ComplexEvent& c, const std::set<std::string>& vars);

/// Mixes two origin tags into a new one.
std::uint64_t combine_origin(std::uint64_t a, std::uint64_t b);
/// Origin tag for events created by the operator at `node`.
std::uint64_t origin_of(const void* node);

}  // namespace acel
