#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "resketch/grammar.hpp"
#include "resketch/weights.hpp"

namespace resketch {

struct Derivation;
using DerivRef = std::shared_ptr<const Derivation>;

// One rule application over a token span. score is the subtree total under
// the weights in effect when the derivation was built.
struct Derivation {
  std::string rule_id;
  int begin = 0;
  int end = 0;
  std::vector<DerivRef> children;  // category elements only, left to right
  SemValue value;
  int skipped = 0;  // tokens this node skipped (gaps, or outside-root tokens)
  double score = 0.0;
};

// Canonical printed form of a derivation tree; the deterministic tie-break.
std::string serialize(const DerivRef& d);

// Sum of the three feature templates (rule fired, rule x token-in-span,
// parent-child rule bigram) plus the skip count, over the whole tree.
// Int/Const tokens are abstracted to __int__/__const__.
std::map<std::string, int> extract_features(const DerivRef& d,
                                            const std::vector<Token>& tokens);

struct ParseOutput {
  Sketch sketch;
  double score = 0.0;
  DerivRef derivation;
};

// Chart parse: k-best $ROOT sketches over the whole token list, skipping
// tolerated between rule elements and around the matched span. Scores are
// non-increasing; ties are broken by serialization. Empty when nothing
// derives $ROOT.
std::vector<ParseOutput> parse(const std::vector<Token>& tokens, const Grammar& g,
                               const Weights& w, int beam);

}  // namespace resketch
