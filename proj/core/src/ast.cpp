#include "resketch/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace resketch {

namespace {

bool arity_fixed(Op op, size_t n) {
  switch (op) {
    case Op::Class:
    case Op::Literal: return n == 0;
    case Op::StartsWith:
    case Op::EndsWith:
    case Op::Contains:
    case Op::Not:
    case Op::Optional:
    case Op::KleeneStar:
    case Op::Repeat:
    case Op::RepeatAtLeast:
    case Op::RepeatRange: return n == 1;
    case Op::Concat:
    case Op::And:
    case Op::Or: return n == 2;
    case Op::Hole: return true;
  }
  return false;
}

NodeRef make(Op op, std::vector<NodeRef> kids, CharClass c = CharClass::Null,
             char lit = 0, int min = 0, int max = 0) {
  if (!arity_fixed(op, kids.size())) throw std::invalid_argument("bad arity");
  auto n = std::make_shared<Node>();
  n->op = op;
  n->cls = c;
  n->lit = lit;
  n->min = min;
  n->max = max;
  n->holey = op == Op::Hole;
  for (const NodeRef& k : kids) n->holey = n->holey || k->holey;
  n->kids = std::move(kids);
  return n;
}

void check_count(int k) {
  if (k < 1) throw std::invalid_argument("repetition count must be >= 1");
}

NodeRef unwrap(const Sketch& s) { return s.ref(); }

}  // namespace

Sketch::Sketch(NodeRef root) : root_(std::move(root)) {
  if (!root_) throw std::invalid_argument("null sketch");
}

Regex::Regex(NodeRef root) : root_(std::move(root)) {
  if (!root_) throw std::invalid_argument("null regex");
  if (root_->holey) throw std::invalid_argument("regex must not contain holes");
}

Sketch to_sketch(const Regex& r) { return Sketch(r.ref()); }
Regex to_regex(const Sketch& s) { return Regex(s.ref()); }

bool node_equal(const NodeRef& a, const NodeRef& b) {
  if (a.get() == b.get()) return true;
  if (a->op != b->op || a->cls != b->cls || a->lit != b->lit || a->min != b->min ||
      a->max != b->max || a->kids.size() != b->kids.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!node_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

size_t node_hash(const NodeRef& n) {
  size_t h = static_cast<size_t>(n->op);
  auto mix = [&h](size_t v) { h = h * 0x9e3779b97f4a7c15ull + v + 0x7f4a7c15; };
  mix(static_cast<size_t>(n->cls));
  mix(static_cast<size_t>(static_cast<unsigned char>(n->lit)));
  mix(static_cast<size_t>(n->min));
  mix(static_cast<size_t>(n->max));
  for (const NodeRef& k : n->kids) mix(node_hash(k));
  return h;
}

Regex cls(CharClass c) { return Regex(make(Op::Class, {}, c)); }

Regex lit(char c) {
  if (!in_alphabet(c)) throw std::invalid_argument("literal outside alphabet");
  return Regex(make(Op::Literal, {}, CharClass::Null, c));
}

Regex str(std::string_view text) {
  if (text.empty()) return cls(CharClass::Eps);
  Regex out = lit(text.back());
  for (size_t i = text.size() - 1; i-- > 0;) out = concat(lit(text[i]), out);
  return out;
}

Regex starts_with(const Regex& r) { return Regex(make(Op::StartsWith, {r.ref()})); }
Regex ends_with(const Regex& r) { return Regex(make(Op::EndsWith, {r.ref()})); }
Regex contains(const Regex& r) { return Regex(make(Op::Contains, {r.ref()})); }
Regex negate(const Regex& r) { return Regex(make(Op::Not, {r.ref()})); }
Regex optional(const Regex& r) { return Regex(make(Op::Optional, {r.ref()})); }
Regex star(const Regex& r) { return Regex(make(Op::KleeneStar, {r.ref()})); }
Regex concat(const Regex& a, const Regex& b) { return Regex(make(Op::Concat, {a.ref(), b.ref()})); }
Regex conj(const Regex& a, const Regex& b) { return Regex(make(Op::And, {a.ref(), b.ref()})); }
Regex alt(const Regex& a, const Regex& b) { return Regex(make(Op::Or, {a.ref(), b.ref()})); }

Regex repeat(const Regex& r, int k) {
  check_count(k);
  return Regex(make(Op::Repeat, {r.ref()}, CharClass::Null, 0, k, k));
}

Regex repeat_at_least(const Regex& r, int k) {
  check_count(k);
  return Regex(make(Op::RepeatAtLeast, {r.ref()}, CharClass::Null, 0, k, 0));
}

Regex repeat_range(const Regex& r, int k1, int k2) {
  check_count(k1);
  if (k1 > k2) throw std::invalid_argument("repetition range is inverted");
  return Regex(make(Op::RepeatRange, {r.ref()}, CharClass::Null, 0, k1, k2));
}

Sketch hole(std::vector<Sketch> components) {
  std::vector<NodeRef> kids;
  kids.reserve(components.size());
  for (const Sketch& s : components) kids.push_back(s.ref());
  return Sketch(make(Op::Hole, std::move(kids)));
}

Sketch starts_with(const Sketch& s) { return Sketch(make(Op::StartsWith, {unwrap(s)})); }
Sketch ends_with(const Sketch& s) { return Sketch(make(Op::EndsWith, {unwrap(s)})); }
Sketch contains(const Sketch& s) { return Sketch(make(Op::Contains, {unwrap(s)})); }
Sketch negate(const Sketch& s) { return Sketch(make(Op::Not, {unwrap(s)})); }
Sketch optional(const Sketch& s) { return Sketch(make(Op::Optional, {unwrap(s)})); }
Sketch star(const Sketch& s) { return Sketch(make(Op::KleeneStar, {unwrap(s)})); }
Sketch concat(const Sketch& a, const Sketch& b) { return Sketch(make(Op::Concat, {a.ref(), b.ref()})); }
Sketch conj(const Sketch& a, const Sketch& b) { return Sketch(make(Op::And, {a.ref(), b.ref()})); }
Sketch alt(const Sketch& a, const Sketch& b) { return Sketch(make(Op::Or, {a.ref(), b.ref()})); }

Sketch repeat(const Sketch& s, int k) {
  check_count(k);
  return Sketch(make(Op::Repeat, {s.ref()}, CharClass::Null, 0, k, k));
}

Sketch repeat_at_least(const Sketch& s, int k) {
  check_count(k);
  return Sketch(make(Op::RepeatAtLeast, {s.ref()}, CharClass::Null, 0, k, 0));
}

Sketch repeat_range(const Sketch& s, int k1, int k2) {
  check_count(k1);
  if (k1 > k2) throw std::invalid_argument("repetition range is inverted");
  return Sketch(make(Op::RepeatRange, {s.ref()}, CharClass::Null, 0, k1, k2));
}

namespace {

int size_of(const NodeRef& n) {
  int total = 1;
  for (const NodeRef& k : n->kids) total += size_of(k);
  return total;
}

int depth_of(const NodeRef& n) {
  int best = 0;
  for (const NodeRef& k : n->kids) best = std::max(best, depth_of(k));
  return best + 1;
}

}  // namespace

int size(const Sketch& s) { return size_of(s.ref()); }
int depth(const Sketch& s) { return depth_of(s.ref()); }

void for_each_subtree(const NodeRef& root, const std::function<void(const NodeRef&)>& fn) {
  fn(root);
  for (const NodeRef& k : root->kids) for_each_subtree(k, fn);
}

namespace {

bool matches_node(const NodeRef& s, const NodeRef& r);

// Does some subtree of r satisfy sketch s?
bool matches_somewhere(const NodeRef& s, const NodeRef& r) {
  if (matches_node(s, r)) return true;
  for (const NodeRef& k : r->kids)
    if (matches_somewhere(s, k)) return true;
  return false;
}

bool matches_node(const NodeRef& s, const NodeRef& r) {
  if (s->op == Op::Hole) {
    if (s->kids.empty()) return true;
    for (const NodeRef& comp : s->kids)
      if (matches_somewhere(comp, r)) return true;
    return false;
  }
  if (s->op != r->op || s->cls != r->cls || s->lit != r->lit || s->min != r->min ||
      s->max != r->max || s->kids.size() != r->kids.size())
    return false;
  for (size_t i = 0; i < s->kids.size(); ++i)
    if (!matches_node(s->kids[i], r->kids[i])) return false;
  return true;
}

}  // namespace

bool sketch_matches(const Sketch& s, const Regex& r) {
  return matches_node(s.ref(), r.ref());
}

}  // namespace resketch
