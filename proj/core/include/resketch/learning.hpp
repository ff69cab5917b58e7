#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "resketch/examplegen.hpp"
#include "resketch/parser.hpp"
#include "resketch/synth.hpp"
#include "resketch/weights.hpp"

namespace resketch {

struct TrainConfig {
  enum class Objective { MLE, MML };
  int epochs = 5;
  int batch_size = 50;
  double learning_rate = 0.1;  // the CLI drops this to 0.01 for MML
  int beam_size = 200;
  Objective objective = Objective::MLE;
  uint64_t seed = 0;
  double l2 = 1e-4;
  int threads = 1;  // per-batch decode/synth parallelism (MML)
};

// Root operator replaced by a constrained hole; a depth-1 regex becomes the
// hole's single component. Always satisfies sketch_matches(result, r).
Sketch pseudogold_sketch(const Regex& r);

// Total skip count over a derivation tree.
int total_skipped(const DerivRef& d);

// Reorders a beam by descending token coverage (ascending total skips),
// stable within ties.
std::vector<ParseOutput> max_coverage_rank(std::vector<ParseOutput> beam);

// log p(candidate gold_idx) under a softmax over the fixed candidate set,
// scored as dot(w, features). Adds the analytic gradient into *grad when
// non-null. Pure in (feats, w): the finite-difference anchor for tests.
double mle_logprob(const std::vector<std::map<std::string, int>>& feats,
                   size_t gold_idx, const Weights& w,
                   std::map<std::string, double>* grad);

struct MleItem {
  std::vector<Token> tokens;
  Sketch gold;
};

struct MleStats {
  int skipped_items = 0;  // gold not derivable into the beam (first epoch)
  std::vector<double> epoch_objective;
};

Weights train_mle(const std::vector<MleItem>& data, const TrainConfig& cfg,
                  const Grammar& g, MleStats* stats = nullptr);

struct MmlItem {
  std::vector<Token> tokens;
  Regex gold;
  Examples examples;
};

struct MmlStats {
  int synth_timeouts = 0;
  int items_no_correct = 0;  // first epoch: beams with no correct sketch
  std::vector<double> epoch_objective;
};

// Maximum marginal likelihood: a decoded sketch counts as correct iff its
// synthesis result is equivalent to the gold regex. Synthesis outcomes are
// cached by sketch print across epochs (weights do not affect synthesis).
Weights train_mml(const std::vector<MmlItem>& data, const TrainConfig& cfg,
                  const Grammar& g, const SynthConfig& scfg,
                  MmlStats* stats = nullptr, const Weights* warm_start = nullptr);

}  // namespace resketch
