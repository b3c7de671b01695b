#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace acel {

enum class Engine { Oracle, Acea, Diff };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int invalid_stream = 2;
inline constexpr int mismatch = 3;
inline constexpr int unsupported = 4;
}  // namespace exit_code

struct RunConfig {
  std::filesystem::path query;
  std::filesystem::path stream;
  std::optional<std::filesystem::path> schema;
  Engine engine = Engine::Oracle;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> emit_automaton;
  std::optional<std::size_t> max_results;
};

/// Evaluates the query on the stream and writes one result per line to the
/// output file or `out`. Diagnostics go to `err`. Returns an exit_code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Prints the compiled automaton of the query. The schema comes from the
/// schema file, or is inferred from the stream file when only that is given.
int compile_query(const std::filesystem::path& query, const std::optional<std::filesystem::path>& schema,
                  const std::optional<std::filesystem::path>& stream, std::ostream& out, std::ostream& err);

/// Checks a stream file against a schema file (or against the schema
/// inferred from the stream itself).
int validate(const std::filesystem::path& stream, const std::optional<std::filesystem::path>& schema,
             std::ostream& out, std::ostream& err);

/// Runs every fixture directory below `dir`. A fixture holds query.acel,
/// stream.jsonl, expected.jsonl and optionally schema.json. Under
/// Engine::Diff both engines must reproduce the expected lines; fixtures the
/// compiler rejects are checked with the oracle alone.
int run_corpus(const std::filesystem::path& dir, Engine engine, std::ostream& out, std::ostream& err);

/// Differential run of both engines on `count` random streams shaped by the
/// schema and optional generator file.
int fuzz(const std::filesystem::path& query, const std::filesystem::path& schema,
         const std::optional<std::filesystem::path>& generator, std::size_t count, std::uint64_t seed,
         std::ostream& out, std::ostream& err);

}  // namespace acel
