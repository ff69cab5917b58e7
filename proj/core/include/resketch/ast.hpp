#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

#include "resketch/chars.hpp"

namespace resketch {

enum class Op : uint8_t {
  Class,          // named character class leaf
  Literal,        // single-character leaf
  StartsWith,
  EndsWith,
  Contains,
  Not,
  Optional,
  KleeneStar,
  Concat,
  And,
  Or,
  Repeat,         // exactly min copies
  RepeatAtLeast,  // min or more copies
  RepeatRange,    // between min and max copies
  Hole,           // sketch hole; kids are the component sketches
};

struct Node;
using NodeRef = std::shared_ptr<const Node>;

// Immutable AST node shared between Regex and Sketch. Never mutate after
// construction; subtrees are freely shared across values and threads.
struct Node {
  Op op;
  CharClass cls = CharClass::Null;  // Op::Class
  char lit = 0;                     // Op::Literal
  int min = 0;                      // Repeat family
  int max = 0;                      // RepeatRange upper bound
  bool holey = false;               // any Hole in this subtree
  std::vector<NodeRef> kids;
};

bool node_equal(const NodeRef& a, const NodeRef& b);
size_t node_hash(const NodeRef& n);

// A sketch: regex AST that may contain holes.
class Sketch {
 public:
  explicit Sketch(NodeRef root);
  const Node& node() const { return *root_; }
  const NodeRef& ref() const { return root_; }
  bool concrete() const { return !root_->holey; }
  bool operator==(const Sketch& o) const { return node_equal(root_, o.root_); }

 private:
  NodeRef root_;
};

// A concrete regex: a sketch with no holes, enforced at construction.
class Regex {
 public:
  explicit Regex(NodeRef root);  // throws std::invalid_argument on holes
  const Node& node() const { return *root_; }
  const NodeRef& ref() const { return root_; }
  bool operator==(const Regex& o) const { return node_equal(root_, o.root_); }

  operator Sketch() const { return Sketch(root_); }

 private:
  NodeRef root_;
};

// Lossless in both directions for hole-free trees.
Sketch to_sketch(const Regex& r);
Regex to_regex(const Sketch& s);  // throws std::invalid_argument on holes

// Constructors. Repetition counts must satisfy k >= 1 and k1 <= k2; literal
// characters must lie in the alphabet (std::invalid_argument otherwise).
Regex cls(CharClass c);
Regex lit(char c);
Regex str(std::string_view text);  // right-folded Concat chain; "" is <eps>
Regex starts_with(const Regex& r);
Regex ends_with(const Regex& r);
Regex contains(const Regex& r);
Regex negate(const Regex& r);
Regex optional(const Regex& r);
Regex star(const Regex& r);
Regex concat(const Regex& a, const Regex& b);
Regex conj(const Regex& a, const Regex& b);
Regex alt(const Regex& a, const Regex& b);
Regex repeat(const Regex& r, int k);
Regex repeat_at_least(const Regex& r, int k);
Regex repeat_range(const Regex& r, int k1, int k2);

Sketch hole(std::vector<Sketch> components = {});
Sketch starts_with(const Sketch& s);
Sketch ends_with(const Sketch& s);
Sketch contains(const Sketch& s);
Sketch negate(const Sketch& s);
Sketch optional(const Sketch& s);
Sketch star(const Sketch& s);
Sketch concat(const Sketch& a, const Sketch& b);
Sketch conj(const Sketch& a, const Sketch& b);
Sketch alt(const Sketch& a, const Sketch& b);
Sketch repeat(const Sketch& s, int k);
Sketch repeat_at_least(const Sketch& s, int k);
Sketch repeat_range(const Sketch& s, int k1, int k2);

// Node count / tree height. Hole components count as children, so
// size(Hole{<num>}) == 2 and depth(Hole{<num>}) == 2.
int size(const Sketch& s);
int depth(const Sketch& s);
inline int size(const Regex& r) { return size(Sketch(r)); }
inline int depth(const Regex& r) { return depth(Sketch(r)); }

// Preorder walk over every subtree, hole components included.
void for_each_subtree(const NodeRef& root, const std::function<void(const NodeRef&)>& fn);

// Membership of a concrete regex in the language of sketches: non-hole nodes
// must match positionally; a hole with components S1..Sm admits any regex that
// contains a subtree matching at least one Si (any regex at all when m == 0).
bool sketch_matches(const Sketch& s, const Regex& r);

}  // namespace resketch
