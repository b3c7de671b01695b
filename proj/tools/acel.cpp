#include <CLI11.hpp>
#include <iostream>
#include <map>

#include "acel/cli.hpp"
#include "acel/random.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acel: complex event queries with aggregation"};
  app.require_subcommand(1);

  const std::map<std::string, acel::Engine> engines{
      {"oracle", acel::Engine::Oracle}, {"acea", acel::Engine::Acea}, {"diff", acel::Engine::Diff}};

  acel::RunConfig cfg;
  std::string query, stream, schema, out, emit;
  std::size_t max_results = 0;
  auto* run = app.add_subcommand("run", "Evaluate a query on a stream");
  run->add_option("--query,-q", query, "Query file")->required()->check(CLI::ExistingFile);
  run->add_option("--stream,-s", stream, "NDJSON stream file")->required()->check(CLI::ExistingFile);
  run->add_option("--schema,-c", schema, "Schema file (inferred from the stream when absent)")
      ->check(CLI::ExistingFile);
  run->add_option("--engine,-e", cfg.engine, "oracle, acea or diff")
      ->transform(CLI::CheckedTransformer(engines, CLI::ignore_case).description(""))
      ->option_text("ENGINE [oracle]");
  run->add_option("--out,-o", out, "Write results here instead of standard output");
  run->add_option("--emit-automaton", emit, "Write the compiled automaton here");
  run->add_option("--max-results", max_results, "Write at most this many results");

  std::string dir;
  acel::Engine corpus_engine = acel::Engine::Diff;
  auto* corpus = app.add_subcommand("corpus", "Run every fixture below a directory");
  corpus->add_option("dir", dir, "Corpus directory")->required();
  corpus->add_option("--engine,-e", corpus_engine, "oracle, acea or diff")
      ->transform(CLI::CheckedTransformer(engines, CLI::ignore_case).description(""))
      ->option_text("ENGINE [diff]");

  auto* validate = app.add_subcommand("validate", "Check a stream against a schema");
  validate->add_option("--stream,-s", stream, "NDJSON stream file")->required()->check(CLI::ExistingFile);
  validate->add_option("--schema,-c", schema, "Schema file")->check(CLI::ExistingFile);

  auto* compile = app.add_subcommand("compile", "Print the automaton compiled from a query");
  compile->add_option("--query,-q", query, "Query file")->required()->check(CLI::ExistingFile);
  auto* compile_schema = compile->add_option("--schema,-c", schema, "Schema file")->check(CLI::ExistingFile);
  compile->add_option("--stream,-s", stream, "Infer the schema from this stream")
      ->check(CLI::ExistingFile)
      ->excludes(compile_schema);

  std::string generator;
  std::size_t count = 200;
  std::uint64_t seed = 0;
  auto* fuzz = app.add_subcommand("fuzz", "Compare both engines on random streams");
  fuzz->add_option("--query,-q", query, "Query file")->required()->check(CLI::ExistingFile);
  fuzz->add_option("--schema,-c", schema, "Schema file")->required()->check(CLI::ExistingFile);
  fuzz->add_option("--gen,-g", generator, "Generator file with value pools")->check(CLI::ExistingFile);
  fuzz->add_option("--count,-n", count, "Number of streams");
  auto* seed_opt = fuzz->add_option("--seed", seed, "Random seed (default: ACEL_SEED or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : acel::exit_code::usage;
  }

  auto opt = [](const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s);
  };

  if (*run) {
    cfg.query = query;
    cfg.stream = stream;
    cfg.schema = opt(schema);
    cfg.out = opt(out);
    cfg.emit_automaton = opt(emit);
    if (run->count("--max-results")) cfg.max_results = max_results;
    return acel::run(cfg, std::cout, std::cerr);
  }
  if (*corpus) return acel::run_corpus(dir, corpus_engine, std::cout, std::cerr);
  if (*validate) return acel::validate(stream, opt(schema), std::cout, std::cerr);
  if (*compile) return acel::compile_query(query, opt(schema), opt(stream), std::cout, std::cerr);
  if (*fuzz) {
    if (!seed_opt->count()) seed = acel::seed_from_env(1);
    return acel::fuzz(query, schema, opt(generator), count, seed, std::cout, std::cerr);
  }
  return acel::exit_code::usage;
}
