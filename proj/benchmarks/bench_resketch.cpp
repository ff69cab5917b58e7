#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "resketch/automata.hpp"
#include "resketch/examplegen.hpp"
#include "resketch/grammar.hpp"
#include "resketch/parser.hpp"
#include "resketch/synth.hpp"

#ifndef RESKETCH_DATA_DIR
#error "benchmarks need RESKETCH_DATA_DIR pointing at the shipped grammar files"
#endif

using namespace resketch;

namespace {

// decimal(15,3)-style validator: digits, optionally a dot and up to 3 more
Regex decimal_regex() {
  return concat(repeat_at_least(cls(CharClass::Num), 1),
                optional(concat(lit('.'), repeat_range(cls(CharClass::Num), 1, 3))));
}

void BM_EngineLower(benchmark::State& state) {
  Regex r = decimal_regex();
  for (auto _ : state) {
    automata::Engine eng;
    benchmark::DoNotOptimize(eng.lower(r));
  }
}
BENCHMARK(BM_EngineLower);

void BM_EngineMatch(benchmark::State& state) {
  Regex r = decimal_regex();
  automata::Engine eng;
  automata::Engine::Id id = eng.lower(r);
  const std::vector<std::string> words = {"12345.678", "12345.6789", "0.5",
                                          "123456789012345", ".5", "1..2"};
  for (auto _ : state) {
    for (const std::string& w : words) benchmark::DoNotOptimize(eng.matches(id, w));
  }
}
BENCHMARK(BM_EngineMatch);

void BM_BuildDfa(benchmark::State& state) {
  Regex r = conj(starts_with(cls(CharClass::Vow)),
                 negate(contains(concat(cls(CharClass::Num), cls(CharClass::Num)))));
  for (auto _ : state) benchmark::DoNotOptimize(automata::build_dfa(r));
}
BENCHMARK(BM_BuildDfa);

void BM_DfaRun(benchmark::State& state) {
  automata::Dfa d = automata::build_dfa(decimal_regex());
  std::string w = "12345678901234.567";
  for (auto _ : state) benchmark::DoNotOptimize(d.run(w));
}
BENCHMARK(BM_DfaRun);

void BM_GenerateExamples(benchmark::State& state) {
  Regex r = decimal_regex();
  uint64_t seed = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_examples(r, 10, 10, 2, seed++));
}
BENCHMARK(BM_GenerateExamples);

void BM_Synthesize(benchmark::State& state) {
  Sketch s = hole({cls(CharClass::Num)});
  Examples ex;
  ex.positives = {"123", "456", "789"};
  ex.negatives = {"12", "1234", "", "abc"};
  SynthConfig cfg;
  cfg.depth = 3;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(s, ex, cfg));
}
BENCHMARK(BM_Synthesize);

void BM_Parse(benchmark::State& state) {
  Grammar g = load_grammar(RESKETCH_DATA_DIR "/grammar.rules",
                           RESKETCH_DATA_DIR "/lexicon.tsv");
  Weights w;
  std::vector<Token> toks = tokenize("lines that start with a capital letter");
  for (auto _ : state) benchmark::DoNotOptimize(parse(toks, g, w, 20));
}
BENCHMARK(BM_Parse);

}  // namespace

BENCHMARK_MAIN();
