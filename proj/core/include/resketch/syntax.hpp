#pragma once

#include <stdexcept>
#include <string>

#include "resketch/ast.hpp"

namespace resketch {

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos(pos) {}
  size_t pos;
};

// Text syntax, round-trippable with print_*:
//   sketch  := op '(' args ')' | class | literal | '?' '{' [sketch,*] '}'
//   class   := '<' name '>'                  e.g. <num>, <let>, <eps>
//   literal := '<' single-char '>' | '"' escaped-chars '"'
// Repeat counts are decimal integers >= 1. RepAtLeast / RepRange are accepted
// as aliases for RepeatAtLeast / RepeatRange.
Regex parse_regex(const std::string& text);   // ParseError; holes rejected
Sketch parse_sketch(const std::string& text); // ParseError

std::string print_sketch(const Sketch& s);
inline std::string print_regex(const Regex& r) { return print_sketch(Sketch(r)); }

// Standard-notation translation (r.* / .*r / .*r.* / ~r / r? / r* / r1r2 /
// r1&r2 / r1|r2 / r{k} / r{k,} / r{k1,k2}), fully parenthesized to preserve
// structure. ~ and & have no standard-engine meaning; callers that feed the
// output to a real engine must avoid And/Not.
std::string to_standard_regex(const Regex& r);

}  // namespace resketch
