#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "resketch/ast.hpp"
#include "resketch/examplegen.hpp"

namespace resketch {

namespace automata {
class Engine;
}

enum class SynthStatus { Found, NotFound, Timeout };

struct SynthConfig {
  int depth = 4;
  int64_t timeout_ms = 2000;
  size_t max_worklist = 500000;
  // Terminal classes tried when filling a hole, in this order. <eps> and
  // <null> are deliberately absent: they never help satisfy examples.
  std::vector<CharClass> terminals = {
      CharClass::Let, CharClass::Vow,      CharClass::Cap,
      CharClass::Low, CharClass::Num,      CharClass::Alphanum,
      CharClass::Hex, CharClass::Spec,     CharClass::Any,
  };
  std::vector<Op> operators = {
      Op::StartsWith, Op::EndsWith,      Op::Contains, Op::Not,
      Op::Optional,   Op::KleeneStar,    Op::Concat,   Op::And,
      Op::Or,         Op::Repeat,        Op::RepeatAtLeast,
      Op::RepeatRange,
  };
  // Added to the repetition-count pool (integers in the sketch plus 1..9).
  std::vector<int> extra_ints;
};

// Deterministic stand-in for a wall-clock deadline: the worklist loop spends
// at most timeout_ms * kStepsPerMs expansions, so results are independent of
// machine load and thread count. Calibrated against measured release-build
// throughput, which sits between ~10 steps/ms (pathological example sets that
// defeat the length screen) and ~45 steps/ms (typical constrained sketches).
inline constexpr int64_t kStepsPerMs = 40;

struct SynthStats {
  uint64_t expanded = 0;   // worklist pops
  uint64_t completed = 0;  // concrete candidates reaching the consistency check
  uint64_t pruned = 0;     // children rejected by approximation
  bool worklist_overflow = false;
};

struct PartialProgram {
  Sketch tree;
  int overlap_score = 0;  // distinct sketch components realized in concrete subtrees
  int size = 0;           // node count, holes count as leaves
  uint64_t seq = 0;       // insertion order, the final tie-break
  uint64_t parent_seq = 0;
};

struct SynthResult {
  SynthStatus status = SynthStatus::NotFound;
  std::optional<Regex> program;
  SynthStats stats;
};

bool consistent(const Regex& r, const Examples& ex);
bool consistent(const Regex& r, const Examples& ex, automata::Engine& eng);

// All admissible single-step instantiations of p's leftmost-outermost hole:
// (a) each component substituted directly, (b) each terminal (restricted, for
// a constrained hole, to terminals matching some component), (c) each
// operator with fresh argument holes, the hole's components attached to one
// argument at a time. Children deeper than cfg.depth are dropped; duplicates
// (by printed form) are emitted once. origin supplies the literal and
// integer pools and the component set for overlap scoring.
std::vector<PartialProgram> expand(const PartialProgram& p, const Sketch& origin,
                                   const SynthConfig& cfg);

// Best-first completion of s into a regex consistent with ex. Order: highest
// overlap_score, then smallest size, then FIFO. Throws std::invalid_argument
// on contradictory examples or an invalid config.
SynthResult synthesize(const Sketch& s, const Examples& ex,
                       const SynthConfig& cfg = {});

}  // namespace resketch
