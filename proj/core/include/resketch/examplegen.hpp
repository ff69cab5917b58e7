#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "resketch/ast.hpp"

namespace resketch {

struct Examples {
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  bool positives_exhausted = false;
  bool negatives_exhausted = false;
};

// Thrown when one side has no strings at all: r is empty (no positives) or
// r accepts every string (no negatives).
struct EmptySideError : std::runtime_error {
  explicit EmptySideError(bool positive)
      : std::runtime_error(positive ? "regex accepts no strings; cannot draw positives"
                                    : "regex accepts all strings; cannot draw negatives"),
        positive_side(positive) {}
  bool positive_side;
};

// Draws n_pos strings from L(r) and n_neg from its complement, both by
// seeded DFA walks. Deterministic for a fixed seed.
Examples generate_examples(const Regex& r, int n_pos, int n_neg,
                           int visit_limit = 2, uint64_t seed = 0);

}  // namespace resketch
