#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "acel/acea.hpp"
#include "acel/event.hpp"
#include "acel/formula.hpp"

namespace acel::testing {

/// The ten-event stock stream and its schema.
Stream stocks_stream();
Schema stocks_schema();

/// Three-state contiguous automaton as drawn for the max-Intel-price query:
/// registers m, n, p; emitted events carry name and price only.
Acea max_price_drawn_automaton();
/// Typed variant agreeing with the query under the oracle: skip loops for
/// `;` and `+`, full events emitted to the AS variables and to SELL.
Acea max_price_automaton();

/// n events R{a: 1}.
Stream unit_stream(std::size_t n);
/// One register doubled per event; the single output {b: 2^len} fires on the
/// last transition of a run.
Acea doubling_automaton();
/// Running sum emitted after every event: {b: 1}, {b: 2}, ... under B.
Acea running_sum_automaton();

struct FormulaOptions {
  std::vector<std::string> types{"A", "B", "C"};
  std::vector<std::string> vars{"X", "Y"};
  std::vector<std::string> attrs{"v", "w"};
  int max_depth = 4;
  bool aggregation = false;   // Agg and attribute projection
  bool sugar = false;         // NEXT and compound filter conditions
  bool bag_predicates = false;
};

FormulaPtr random_formula(std::mt19937_64& rng, const FormulaOptions& opt);

/// Schema with every type carrying the option attributes.
Schema schema_for(const FormulaOptions& opt);

/// Up to `max_states` states, guards on type and attribute v, marks from
/// {X, Y}.
Cea random_cea(std::mt19937_64& rng, const std::vector<std::string>& types, std::uint32_t max_states);

std::filesystem::path corpus_dir();
/// Parsed query.acel of a corpus fixture.
FormulaPtr corpus_query(const std::string& fixture);

}  // namespace acel::testing
