#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "resketch/ast.hpp"

namespace resketch {

// Tokens feeding the chart parser. Quoted spans survive as single Const
// tokens with their exact content; bare integers and the number words
// one..ten become Int tokens.
struct Token {
  enum class Kind : uint8_t { Word, Int, Const };
  Kind kind = Kind::Word;
  std::string text;  // lowercased lemma for words; raw content for Const
  long value = 0;    // Int only
};

// Lowercases, splits punctuation, folds plurals and verb forms by table.
// Throws std::invalid_argument on an unbalanced quote.
std::vector<Token> tokenize(const std::string& description);

// Value carried by a derivation: null (markers with no payload), an integer,
// a sketch, a constant set, or an operator-marker tag like "op.startwith".
using SemValue =
    std::variant<std::monostate, long, Sketch, std::vector<Sketch>, std::string>;

std::string print_value(const SemValue& v);

struct Selector {
  bool is_val = false;
  int arg = 0;   // position into the matched sequence
  long val = 0;  // literal payload for val:n
};

struct GrammarRule {
  std::vector<std::string> lhs;  // categories ($X) and literal words
  std::string target;
  std::string fn;  // semantic function name, "" for IdentityFn shorthand
  std::vector<Selector> selectors;
  std::string id;
};

struct LexEntry {
  std::string phrase;  // space-joined lowercase lemma tokens
  std::string category;
  SemValue value;
  std::string id;
  int phrase_len = 1;  // tokens in phrase
};

struct GrammarError : std::runtime_error {
  GrammarError(const std::string& what, int line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  int line;
};

struct Grammar {
  std::vector<GrammarRule> rules;
  std::vector<LexEntry> lexicon;
  std::unordered_map<std::string, std::vector<size_t>> lex_by_phrase;
  int max_phrase_len = 1;
  std::unordered_set<std::string> produced;  // categories with at least one producer

  bool empty() const { return rules.empty() && lexicon.empty(); }
};

// Rule file: one `lhs-seq -> $CAT [Fn arg:i ... val:n]` per line, `#`
// comments. Lexicon file: `phrase TAB category TAB value` where value is a
// regex/sketch literal (<num>, <,>), an op.* marker, or null.
Grammar parse_grammar(const std::string& rules_text, const std::string& lexicon_text);
Grammar load_grammar(const std::string& rules_path, const std::string& lexicon_path);

// Applies one semantic function. Throws std::invalid_argument on arity or
// type mismatch; the parser instead drops candidates via try_apply_semfn.
SemValue apply_semfn(const std::string& fn, const std::vector<SemValue>& args);
bool try_apply_semfn(const std::string& fn, const std::vector<SemValue>& args,
                     SemValue* out);

}  // namespace resketch
