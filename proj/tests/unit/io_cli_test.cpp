#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "acel/cli.hpp"
#include "acel/error.hpp"
#include "acel/io.hpp"
#include "acel/oracle.hpp"
#include "fixtures.hpp"

using namespace acel;
namespace fs = std::filesystem;

namespace {

// Scratch directory removed when the test ends.
class Scratch {
 public:
  explicit Scratch(const std::string& name) : dir_(fs::temp_directory_path() / ("acel-" + name)) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  fs::path write(const std::string& file, const std::string& text) const {
    const auto p = dir_ / file;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
    return p;
  }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
};

Stream parse_stream(const std::string& text) {
  std::istringstream in(text);
  return read_stream(in);
}

std::size_t failing_line(const std::string& text) {
  try {
    parse_stream(text);
  } catch (const StreamFormatError& e) {
    return e.line();
  }
  return 0;
}

const char* kRates =
    "{\"type\":\"Measurement\",\"patient\":1,\"rate\":60,\"activity\":\"passive\"}\n"
    "{\"type\":\"Measurement\",\"patient\":1,\"rate\":72,\"activity\":\"passive\"}\n";

}  // namespace

TEST_CASE("stream files") {
  const auto s = parse_stream("{\"type\":\"A\",\"v\":1}\n{\"type\":\"B\",\"v\":2.5,\"w\":null}\n\n");
  REQUIRE(s.size() == 2);
  CHECK(s[1].time() == 1);
  CHECK(s[1].attrs() == AttrMap{{"type", "B"}, {"v", 2.5}, {"w", Value::null()}});
  CHECK(parse_stream("").empty());

  CHECK(failing_line("{\"type\":\"A\"}\n{\"v\":1}\n") == 2);
  CHECK(failing_line("{\"type\":\"A\"}\nnot json\n") == 2);
  CHECK(failing_line("{\"type\":\"A\"}\n\n{\"type\":\"A\"}\n") == 2);
  CHECK(failing_line("{\"type\":\"A\",\"v\":[1]}\n") == 1);
  CHECK(failing_line("{\"type\":\"A\",\"v\":18446744073709551615}\n") == 1);
  CHECK(failing_line("{\"type\":\"A\",\"time\":3}\n") == 1);
}

TEST_CASE("schema files") {
  std::istringstream in(write_schema(testing::stocks_schema()));
  CHECK(read_schema(in) == testing::stocks_schema());
  std::istringstream bad("{\"A\": \"v\"}");
  CHECK_THROWS_AS(read_schema(bad), ValidationError);
}

TEST_CASE("result lines round trip") {
  const auto s = testing::stocks_stream();
  for (const auto& c : evaluate(*testing::corpus_query("stocks_max_intel_price"), s))
    CHECK(parse_result_line(serialize(c)) == c);

  const ComplexEvent odd(0, 0, {{"Y", EventBag({Event({{"lo", std::numeric_limits<double>::infinity()},
                                                       {"hi", -std::numeric_limits<double>::infinity()},
                                                       {"s", "a\"b"}},
                                                      0)})}});
  const auto line = serialize(odd);
  CHECK(line.find("{\"float\":\"inf\"}") != std::string::npos);
  CHECK(parse_result_line(line) == odd);
  CHECK_THROWS_AS(parse_result_line("{\"start\":0}"), ValidationError);
  CHECK_THROWS_AS(parse_result_line("garbage"), ValidationError);
}

TEST_CASE("results are written in a fixed order") {
  const auto s = testing::stocks_stream();
  const auto lines = serialize_results(evaluate(*testing::corpus_query("stocks_sell_then_next_buy"), s));
  REQUIRE(lines.size() == 7);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto a = parse_result_line(lines[i - 1]), b = parse_result_line(lines[i]);
    CHECK(std::pair(a.start(), a.end()) <= std::pair(b.start(), b.end()));
  }
}

TEST_CASE("run exit codes") {
  Scratch tmp("run");
  const auto stocks = testing::corpus_dir() / "stocks_max_intel_price";
  RunConfig cfg;
  cfg.query = stocks / "query.acel";
  cfg.stream = stocks / "stream.jsonl";
  cfg.schema = stocks / "schema.json";
  std::ostringstream out, err;

  SUBCASE("both engines agree") {
    cfg.engine = Engine::Diff;
    CHECK(run(cfg, out, err) == exit_code::ok);
    std::ifstream expected(stocks / "expected.jsonl");
    std::ostringstream want;
    want << expected.rdbuf();
    CHECK(out.str() == want.str());
  }
  SUBCASE("output is deterministic") {
    cfg.engine = Engine::Acea;
    cfg.out = tmp.dir() / "a.jsonl";
    CHECK(run(cfg, out, err) == exit_code::ok);
    cfg.out = tmp.dir() / "b.jsonl";
    CHECK(run(cfg, out, err) == exit_code::ok);
    std::ifstream a(tmp.dir() / "a.jsonl"), b(tmp.dir() / "b.jsonl");
    std::ostringstream ta, tb;
    ta << a.rdbuf();
    tb << b.rdbuf();
    CHECK(ta.str() == tb.str());
    CHECK_FALSE(ta.str().empty());
  }
  SUBCASE("malformed stream") {
    cfg.stream = tmp.write("bad.jsonl", "{\"type\":\"SELL\",\"name\":\"MSFT\",\"price\":1}\n{\"type\":\n");
    CHECK(run(cfg, out, err) == exit_code::invalid_stream);
    CHECK(err.str().find("line 2") != std::string::npos);
  }
  SUBCASE("stream outside the schema") {
    cfg.stream = tmp.write("bad.jsonl", "{\"type\":\"SELL\",\"name\":\"MSFT\"}\n");
    CHECK(run(cfg, out, err) == exit_code::invalid_stream);
    CHECK(err.str().find("line 1") != std::string::npos);
  }
  SUBCASE("bad query") {
    cfg.query = tmp.write("q.acel", "SELL ;");
    CHECK(run(cfg, out, err) == exit_code::usage);
  }
  SUBCASE("bag predicates") {
    const auto rates = testing::corpus_dir() / "passive_rate_bounds";
    cfg.query = rates / "query.acel";
    cfg.stream = rates / "stream.jsonl";
    cfg.schema = rates / "schema.json";
    cfg.engine = Engine::Acea;
    CHECK(run(cfg, out, err) == exit_code::unsupported);
    cfg.engine = Engine::Diff;
    CHECK(run(cfg, out, err) == exit_code::ok);
    CHECK(err.str().find("oracle only") != std::string::npos);
  }
}

TEST_CASE("compile and validate commands") {
  const auto rates = testing::corpus_dir() / "passive_rate_bounds";
  const auto stocks = testing::corpus_dir() / "stocks_max_intel_price";
  std::ostringstream out, err;
  CHECK(compile_query(stocks / "query.acel", stocks / "schema.json", std::nullopt, out, err) == exit_code::ok);
  CHECK_FALSE(out.str().empty());
  CHECK(compile_query(rates / "query.acel", std::nullopt, rates / "stream.jsonl", out, err) == exit_code::unsupported);
  CHECK(validate(stocks / "stream.jsonl", stocks / "schema.json", out, err) == exit_code::ok);
  CHECK(out.str().find("10 events valid") != std::string::npos);
}

TEST_CASE("corpus runner") {
  std::ostringstream out, err;
  SUBCASE("empty corpus") {
    Scratch tmp("empty-corpus");
    CHECK(run_corpus(tmp.dir(), Engine::Diff, out, err) == exit_code::ok);
    CHECK(out.str().find("0 fixtures") != std::string::npos);
  }
  SUBCASE("wrong and unreadable expectations") {
    Scratch tmp("corpus");
    tmp.write("wrong/query.acel", "Measurement");
    tmp.write("wrong/stream.jsonl", kRates);
    tmp.write("wrong/expected.jsonl", "");
    tmp.write("corrupt/query.acel", "Measurement");
    tmp.write("corrupt/stream.jsonl", kRates);
    tmp.write("corrupt/expected.jsonl", "{\"start\": oops\n");
    CHECK(run_corpus(tmp.dir(), Engine::Diff, out, err) == exit_code::mismatch);
    CHECK(out.str().find("FAIL  wrong") != std::string::npos);
    CHECK(out.str().find("ERROR corrupt") != std::string::npos);
  }
  SUBCASE("automaton engine on a bag predicate") {
    Scratch tmp("corpus-acea");
    const auto rates = testing::corpus_dir() / "passive_rate_bounds";
    fs::copy(rates, tmp.dir() / "rates");
    CHECK(run_corpus(tmp.dir(), Engine::Oracle, out, err) == exit_code::ok);
    CHECK(run_corpus(tmp.dir(), Engine::Acea, out, err) == exit_code::mismatch);
  }
}
