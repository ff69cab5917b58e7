#include "resketch/examplegen.hpp"

#include "resketch/automata.hpp"
#include "resketch/sampling.hpp"

namespace resketch {

Examples generate_examples(const Regex& r, int n_pos, int n_neg, int visit_limit,
                           uint64_t seed) {
  Examples ex;
  try {
    automata::Dfa pos = automata::build_dfa(r);
    automata::SampleResult sr = automata::sample_strings(pos, n_pos, visit_limit, seed);
    ex.positives = std::move(sr.strings);
    ex.positives_exhausted = sr.exhausted;
  } catch (const automata::EmptyLanguageError&) {
    throw EmptySideError(true);
  }
  try {
    // Decorrelate the negative stream from the positive one.
    uint64_t neg_seed = seed ^ 0x9e3779b97f4a7c15ull;
    automata::Dfa neg = automata::build_dfa(negate(r));
    automata::SampleResult sr = automata::sample_strings(neg, n_neg, visit_limit, neg_seed);
    ex.negatives = std::move(sr.strings);
    ex.negatives_exhausted = sr.exhausted;
  } catch (const automata::EmptyLanguageError&) {
    throw EmptySideError(false);
  }
  return ex;
}

}  // namespace resketch
