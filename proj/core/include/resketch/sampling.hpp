#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "resketch/automata.hpp"

namespace resketch {
namespace automata {

struct EmptyLanguageError : std::runtime_error {
  EmptyLanguageError() : std::runtime_error("language is empty; nothing to sample") {}
};

struct SampleResult {
  std::vector<std::string> strings;
  // Set when the walk budget stagnated before n distinct strings were found;
  // the tail of `strings` is then filled with replacement.
  bool exhausted = false;
};

// Randomized accepting walks. Each walk uses every (state, class) transition
// at most visit_limit times and never exceeds max_len characters. Fully
// deterministic for a fixed seed.
SampleResult sample_strings(const Dfa& d, int n, int visit_limit, uint64_t seed,
                            int max_len = 50);

}  // namespace automata
}  // namespace resketch
