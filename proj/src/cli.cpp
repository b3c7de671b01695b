#include "acel/cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>
#include <tuple>
#include <vector>

#include "acel/acea.hpp"
#include "acel/compiler.hpp"
#include "acel/error.hpp"
#include "acel/io.hpp"
#include "acel/oracle.hpp"
#include "acel/parser.hpp"
#include "acel/random.hpp"

namespace acel {

namespace {

namespace fs = std::filesystem;

// Carries an exit status out of nested helpers.
struct Exit {
  int code;
  std::string message;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Exit{exit_code::usage, "cannot read " + p.string()};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FormulaPtr load_query(const fs::path& p) {
  const auto text = read_file(p);
  try {
    return parse_query(text);
  } catch (const ParseError& e) {
    throw Exit{exit_code::usage, p.string() + ":" + e.what()};
  } catch (const ValidationError& e) {
    throw Exit{exit_code::usage, p.string() + ": " + e.what()};
  }
}

Schema load_schema(const fs::path& p) {
  std::istringstream in(read_file(p));
  try {
    return read_schema(in);
  } catch (const ValidationError& e) {
    throw Exit{exit_code::usage, p.string() + ": " + e.what()};
  }
}

// First occurrence of each type fixes its attribute set; validation then
// reports the first event that disagrees.
Schema first_occurrence_schema(const Stream& s) {
  std::map<std::string, std::set<std::string>> types;
  for (const auto& e : s) {
    if (!e.type().is_text()) continue;
    std::set<std::string> names;
    for (const auto& [name, value] : e.attrs()) {
      if (name != "type") names.insert(name);
    }
    types.emplace(e.type().as_text(), std::move(names));
  }
  return Schema(std::move(types));
}

struct Input {
  Stream stream;
  Schema schema;
};

Input load_input(const fs::path& stream_path, const std::optional<fs::path>& schema_path) {
  Input in;
  {
    std::istringstream text(read_file(stream_path));
    try {
      in.stream = read_stream(text);
    } catch (const StreamFormatError& e) {
      throw Exit{exit_code::invalid_stream, stream_path.string() + ": " + e.what()};
    }
  }
  try {
    in.schema = schema_path ? load_schema(*schema_path) : first_occurrence_schema(in.stream);
  } catch (const ValidationError& e) {
    throw Exit{exit_code::invalid_stream, stream_path.string() + ": " + e.what()};
  }
  if (auto v = validate_stream(in.stream, in.schema)) {
    throw Exit{exit_code::invalid_stream,
               stream_path.string() + ": line " + std::to_string(v->index + 1) + ": " + v->reason};
  }
  return in;
}

Acea compile_or_exit(const FormulaPtr& f, const Schema& sch) {
  try {
    return compile(f, sch);
  } catch (const UnsupportedError& e) {
    throw Exit{exit_code::unsupported, std::string("unsupported by the automaton engine: ") + e.what()};
  }
}

ResultSet oracle_or_exit(const FormulaPtr& f, const Stream& s) {
  try {
    return evaluate(*f, s);
  } catch (const EvaluationError& e) {
    throw Exit{exit_code::usage, std::string("evaluation failed: ") + e.what()};
  }
}

bool compilable(const FormulaPtr& f, const Schema& sch) {
  try {
    compile(f, sch);
    return true;
  } catch (const UnsupportedError&) {
    return false;
  }
}

struct Divergence {
  std::size_t only_left = 0;
  std::size_t only_right = 0;
  bool first_in_left = true;
  std::string first;
};

// Symmetric difference, with the divergent event that sorts first.
std::optional<Divergence> compare(const ResultSet& left, const ResultSet& right) {
  ResultSet l, r;
  std::set_difference(left.begin(), left.end(), right.begin(), right.end(), std::inserter(l, l.end()));
  std::set_difference(right.begin(), right.end(), left.begin(), left.end(), std::inserter(r, r.end()));
  if (l.empty() && r.empty()) return std::nullopt;
  Divergence d{l.size(), r.size(), true, {}};
  std::optional<std::tuple<std::int64_t, std::int64_t, std::string, bool>> best;
  auto consider = [&](const ResultSet& side, bool in_left) {
    for (const auto& c : side) {
      std::tuple key{c.start(), c.end(), serialize(c), in_left};
      if (!best || key < *best) best = std::move(key);
    }
  };
  consider(l, true);
  consider(r, false);
  d.first = std::get<2>(*best);
  d.first_in_left = std::get<3>(*best);
  return d;
}

std::string describe(const Divergence& d, const std::string& left, const std::string& right) {
  return std::to_string(d.only_left) + " only in " + left + ", " + std::to_string(d.only_right) + " only in " +
         right + "; first divergent (" + (d.first_in_left ? left : right) + "): " + d.first;
}

void write_lines(const std::vector<std::string>& lines, const std::optional<fs::path>& path, std::ostream& out) {
  if (!path) {
    for (const auto& l : lines) out << l << '\n';
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) throw Exit{exit_code::usage, "cannot write " + path->string()};
  for (const auto& l : lines) file << l << '\n';
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Exit& e) {
    if (!e.message.empty()) err << "acel: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    err << "acel: " << e.what() << '\n';
    return exit_code::usage;
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto f = load_query(cfg.query);
    const auto in = load_input(cfg.stream, cfg.schema);

    std::optional<Acea> automaton;
    const bool wants_automaton = cfg.engine != Engine::Oracle || cfg.emit_automaton.has_value();
    if (wants_automaton) {
      if (cfg.engine == Engine::Diff && !cfg.emit_automaton && !compilable(f, in.schema)) {
        err << "acel: note: query uses features the automaton engine does not support; running the oracle only\n";
      } else {
        automaton = compile_or_exit(f, in.schema);
      }
    }
    if (automaton && cfg.emit_automaton) {
      std::ofstream file(*cfg.emit_automaton, std::ios::binary | std::ios::trunc);
      if (!file) throw Exit{exit_code::usage, "cannot write " + cfg.emit_automaton->string()};
      file << dump(*automaton);
    }

    ResultSet results;
    switch (cfg.engine) {
      case Engine::Oracle:
        results = oracle_or_exit(f, in.stream);
        break;
      case Engine::Acea:
        results = acea_enumerate(*automaton, in.stream);
        break;
      case Engine::Diff: {
        results = oracle_or_exit(f, in.stream);
        if (automaton) {
          const auto other = acea_enumerate(*automaton, in.stream);
          if (auto d = compare(results, other)) {
            throw Exit{exit_code::mismatch, "engines disagree: " + describe(*d, "oracle", "acea")};
          }
        }
        break;
      }
    }

    auto lines = serialize_results(results);
    if (cfg.max_results && lines.size() > *cfg.max_results) {
      err << "acel: note: " << lines.size() << " results, writing the first " << *cfg.max_results << '\n';
      lines.resize(*cfg.max_results);
    }
    write_lines(lines, cfg.out, out);
    return exit_code::ok;
  });
}

int compile_query(const fs::path& query, const std::optional<fs::path>& schema, const std::optional<fs::path>& stream,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto f = load_query(query);
    Schema sch;
    if (schema) {
      sch = load_schema(*schema);
    } else if (stream) {
      sch = load_input(*stream, std::nullopt).schema;
    } else {
      throw Exit{exit_code::usage, "compile needs --schema or --stream"};
    }
    CompilationContext ctx(sch);
    Acea a;
    try {
      a = compile(f, ctx);
    } catch (const UnsupportedError& e) {
      throw Exit{exit_code::unsupported, std::string("unsupported by the automaton engine: ") + e.what()};
    }
    for (const auto& w : ctx.warnings()) err << "acel: warning: " << w << '\n';
    out << dump(a);
    return exit_code::ok;
  });
}

int validate(const fs::path& stream, const std::optional<fs::path>& schema, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto in = load_input(stream, schema);
    out << stream.string() << ": " << in.stream.size() << " events valid\n";
    return exit_code::ok;
  });
}

namespace {

enum class Verdict { Pass, Fail, Error };

struct FixtureReport {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

ResultSet read_expected(const fs::path& p) {
  std::istringstream in(read_file(p));
  ResultSet out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.insert(parse_result_line(line));
    } catch (const Error& e) {
      throw Exit{exit_code::usage, p.filename().string() + " line " + std::to_string(number) + ": " + e.what()};
    }
  }
  return out;
}

FixtureReport run_fixture(const fs::path& dir, Engine engine) {
  FixtureReport r{dir.filename().string(), Verdict::Pass, {}};
  try {
    const auto f = load_query(dir / "query.acel");
    const fs::path schema_path = dir / "schema.json";
    const auto in = load_input(dir / "stream.jsonl",
                               fs::exists(schema_path) ? std::optional<fs::path>(schema_path) : std::nullopt);
    const auto expected = read_expected(dir / "expected.jsonl");
    std::vector<std::string> notes;
    if (engine != Engine::Acea) {
      const auto got = oracle_or_exit(f, in.stream);
      if (auto d = compare(expected, got)) {
        r.verdict = Verdict::Fail;
        r.detail = "oracle: " + describe(*d, "expected", "oracle");
        return r;
      }
      notes.push_back("oracle");
    }
    if (engine != Engine::Oracle) {
      std::optional<Acea> a;
      try {
        a = compile(f, in.schema);
      } catch (const UnsupportedError& e) {
        if (engine == Engine::Acea) {
          r.verdict = Verdict::Error;
          r.detail = std::string("unsupported by the automaton engine: ") + e.what();
          return r;
        }
      }
      if (a) {
        const auto got = acea_enumerate(*a, in.stream);
        if (auto d = compare(expected, got)) {
          r.verdict = Verdict::Fail;
          r.detail = "acea: " + describe(*d, "expected", "acea");
          return r;
        }
        notes.push_back("acea");
      }
    }
    r.detail = std::to_string(expected.size()) + " results;";
    for (const auto& n : notes) r.detail += " " + n;
  } catch (const Exit& e) {
    r.verdict = Verdict::Error;
    r.detail = e.message;
  } catch (const std::exception& e) {
    r.verdict = Verdict::Error;
    r.detail = e.what();
  }
  return r;
}

}  // namespace

int run_corpus(const fs::path& dir, Engine engine, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw Exit{exit_code::usage, dir.string() + " is not a directory"};
    std::vector<fs::path> fixtures;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && fs::exists(entry.path() / "query.acel")) fixtures.push_back(entry.path());
    }
    std::sort(fixtures.begin(), fixtures.end());

    std::vector<std::future<FixtureReport>> pending;
    pending.reserve(fixtures.size());
    for (const auto& f : fixtures) pending.push_back(std::async(std::launch::async, run_fixture, f, engine));

    std::size_t passed = 0, failed = 0, errors = 0;
    for (auto& p : pending) {
      const auto r = p.get();
      switch (r.verdict) {
        case Verdict::Pass:
          ++passed;
          out << "PASS  " << r.name << ": " << r.detail << '\n';
          break;
        case Verdict::Fail:
          ++failed;
          out << "FAIL  " << r.name << ": " << r.detail << '\n';
          break;
        case Verdict::Error:
          ++errors;
          out << "ERROR " << r.name << ": " << r.detail << '\n';
          break;
      }
    }
    out << fixtures.size() << " fixtures: " << passed << " passed, " << failed << " failed, " << errors
        << " errors\n";
    return failed + errors == 0 ? exit_code::ok : exit_code::mismatch;
  });
}

int fuzz(const fs::path& query, const fs::path& schema, const std::optional<fs::path>& generator, std::size_t count,
         std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto f = load_query(query);
    auto sch = load_schema(schema);
    StreamShape shape;
    if (generator) {
      std::istringstream in(read_file(*generator));
      try {
        shape = read_stream_shape(in, sch);
      } catch (const std::exception& e) {
        throw Exit{exit_code::usage, generator->string() + ": " + e.what()};
      }
    } else {
      shape.schema = sch;
    }
    const auto a = compile_or_exit(f, sch);
    std::mt19937_64 rng(seed);
    std::size_t skipped = 0, matched = 0, results = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const auto s = random_stream(shape, rng);
      ResultSet expected;
      try {
        expected = evaluate(*f, s);
      } catch (const EvaluationError&) {
        ++skipped;
        continue;
      }
      matched += expected.empty() ? 0 : 1;
      results += expected.size();
      if (auto d = compare(expected, acea_enumerate(a, s))) {
        std::ostringstream stream;
        for (const auto& e : s) stream << "  " << to_string(e) << '\n';
        throw Exit{exit_code::mismatch, "stream " + std::to_string(i) + " (seed " + std::to_string(seed) +
                                            "): " + describe(*d, "oracle", "acea") + "\n" + stream.str()};
      }
    }
    out << count - skipped << " streams agree (" << matched << " with results, " << results << " results)";
    if (skipped) out << ", " << skipped << " skipped on evaluation errors";
    out << '\n';
    return exit_code::ok;
  });
}

}  // namespace acel
