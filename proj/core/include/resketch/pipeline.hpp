#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resketch/grammar.hpp"
#include "resketch/synth.hpp"
#include "resketch/weights.hpp"

namespace resketch {

struct Benchmark {
  std::string id;
  std::string description;
  std::optional<Regex> gold_regex;
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  std::optional<Sketch> gold_sketch;
};

// One Benchmark per line: {"id":..,"description":..,"gold_regex":..,
// "pos":[..],"neg":[..],"gold_sketch":..}. Regexes and sketches in the
// textual syntax. Gold/example mismatches and out-of-alphabet example
// characters are reported as warnings, never load failures.
struct LoadResult {
  std::vector<Benchmark> benchmarks;
  std::vector<std::string> warnings;
};
LoadResult load_jsonl(const std::string& path);
void save_jsonl(const std::string& path, const std::vector<Benchmark>& data);

struct PipelineConfig {
  int beam = 20;
  int timeout_ms = 2000;
  int depth = 4;
  int threads = 10;
  uint64_t seed = 0;
  bool rank_max_coverage = false;  // untrained ranking by token coverage
  int max_worklist = 500000;
};

// "turk": beam 20, 2s, depth 4. "stackoverflow": beam 25, 30s, depth 6.
PipelineConfig profile(const std::string& name);

struct SketchOutcome {
  Sketch sketch;
  SynthStatus status = SynthStatus::NotFound;
  std::optional<Regex> program;
  bool equivalent_gold = false;  // meaningful only when the item has a gold
  int64_t millis = 0;
};

struct RunOutcome {
  std::string id;
  bool solved = false;
  int rank = -1;  // minimal beam index whose synthesis is consistent
  std::optional<Regex> regex;
  bool contradictory = false;
  bool empty_beam = false;  // parse produced nothing; ran the bare-hole fallback
  std::vector<SketchOutcome> sketches;
  int64_t total_millis = 0;
};

// Parse a k-best beam, synthesize every sketch in parallel, return the
// highest-ranked consistent completion.
RunOutcome run_benchmark(const Benchmark& b, const Grammar& g, const Weights& w,
                         const PipelineConfig& cfg);

std::string run_outcome_json(const RunOutcome& it, bool with_times = false);
std::string run_outcome_text(const RunOutcome& it);

struct EvalReport {
  int total = 0;
  double semantic_accuracy = 0.0;  // chosen output equivalent to gold
  double consistency = 0.0;        // any non-success counts as inconsistent
  int topn = 1;
  double topn_accuracy = 0.0;  // any of the first N sketches hits the gold
  std::vector<RunOutcome> items;

  // Timing fields are opt-in so reports stay byte-stable across runs.
  std::string to_json(bool with_times = false) const;
  std::string to_text() const;
};

EvalReport evaluate(const std::vector<Benchmark>& data, const Grammar& g,
                    const Weights& w, const PipelineConfig& cfg, int topn = 1);

}  // namespace resketch
