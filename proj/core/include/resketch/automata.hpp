#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "resketch/ast.hpp"

namespace resketch {
namespace automata {

inline constexpr int kDefaultStateLimit = 20000;

struct StateLimitError : std::runtime_error {
  explicit StateLimitError(int limit)
      : std::runtime_error("automaton exceeded " + std::to_string(limit) + " states"),
        limit(limit) {}
  int limit;
};

// Hash-consed regex IR normalized for Brzozowski derivatives (flattened and
// sorted Or/And, unit laws for eps/null, merged character sets, collapsed
// Not/Star). Nodes and cached derivatives grow monotonically; an Engine is
// single-threaded, but cheap to create per thread or per task.
class Engine {
 public:
  using Id = uint32_t;

  Engine();

  Id lower(const Regex& r);
  // Bound on a sketch's completions: holes widen to sigma-star (over) or
  // narrow to the empty language (under); polarity flips beneath Not. Every
  // completion's language sits between the two.
  Id lower(const Sketch& s, bool over);

  Id empty() const { return empty_; }
  Id eps() const { return eps_; }
  Id top() const { return top_; }  // sigma-star

  Id chars(CharSet cs);
  Id concat(std::vector<Id> kids);
  Id alt(std::vector<Id> kids);
  Id conj(std::vector<Id> kids);
  Id negate(Id x);
  Id star(Id x);

  bool nullable(Id id) const { return nodes_[id].nullable; }
  Id derivative(Id id, char c);

  // Throws std::invalid_argument on characters outside the alphabet.
  bool matches(Id id, std::string_view w);

  // Character equivalence classes of the leaf sets reachable from id. Stable
  // under derivatives: derivatives never introduce new leaf sets.
  std::vector<CharSet> partition(Id id) const;

  size_t node_count() const { return nodes_.size(); }

 private:
  enum class Kind : uint8_t { Empty, Eps, Chars, Concat, Or, And, Not, Star };

  struct IrNode {
    Kind kind;
    bool nullable;
    CharSet cs;
    std::vector<Id> kids;
  };

  Id intern(Kind kind, CharSet cs, std::vector<Id> kids, bool nullable);
  static size_t node_hash(Kind kind, const CharSet& cs, const std::vector<Id>& kids);
  void collect_leaves(Id id, std::vector<CharSet>& out, std::vector<bool>& seen) const;

  std::vector<IrNode> nodes_;
  // structural hash -> candidate ids; equality resolved against nodes_, so
  // lookups never copy the kid list
  std::unordered_multimap<size_t, Id> interned_;
  std::unordered_map<uint64_t, Id> deriv_cache_;  // (id << 7) | char-index
  Id empty_ = 0, eps_ = 0, top_ = 0;
};

// One-shot convenience; synthesis and other hot paths hold an Engine instead.
bool matches(const Regex& r, std::string_view w);

// Explicit DFA over the partition classes of the source regex. Immutable
// after construction and safe to share across threads.
struct Dfa {
  std::vector<CharSet> classes;
  std::vector<uint8_t> char_class;          // alphabet index -> class index
  std::vector<std::vector<uint32_t>> next;  // [state][class] -> state
  std::vector<bool> accepting;
  uint32_t start = 0;

  size_t state_count() const { return next.size(); }
  int class_of(char c) const;
  bool run(std::string_view w) const;  // std::invalid_argument outside alphabet
  std::vector<bool> co_reachable() const;  // states that can reach an accepting state
};

Dfa build_dfa(const Regex& r, int state_limit = kDefaultStateLimit);

bool is_empty(const Regex& r, int state_limit = kDefaultStateLimit);

// Emptiness of the symmetric difference, explored as a derivative automaton
// (the product construction falls out of the Xor regex).
bool equivalent(const Regex& a, const Regex& b, int state_limit = kDefaultStateLimit);

std::string to_dot(const Dfa& d);

}  // namespace automata
}  // namespace resketch
