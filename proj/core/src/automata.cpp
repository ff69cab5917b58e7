#include "resketch/automata.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace resketch {
namespace automata {

size_t Engine::node_hash(Kind kind, const CharSet& cs, const std::vector<Id>& kids) {
  size_t h = static_cast<size_t>(kind);
  auto mix = [&h](size_t v) { h = h * 0x9e3779b97f4a7c15ull + v + 0x7f4a7c15; };
  mix(cs.lo);
  mix(cs.hi);
  for (Id id : kids) mix(id);
  return h;
}

Engine::Engine() {
  empty_ = intern(Kind::Empty, CharSet::none(), {}, false);
  eps_ = intern(Kind::Eps, CharSet::none(), {}, true);
  top_ = star(chars(CharSet::all()));
}

Engine::Id Engine::intern(Kind kind, CharSet cs, std::vector<Id> kids, bool nullable) {
  size_t h = node_hash(kind, cs, kids);
  auto [lo, hi] = interned_.equal_range(h);
  for (auto it = lo; it != hi; ++it) {
    const IrNode& n = nodes_[it->second];
    if (n.kind == kind && n.cs.lo == cs.lo && n.cs.hi == cs.hi && n.kids == kids)
      return it->second;
  }
  Id id = static_cast<Id>(nodes_.size());
  nodes_.push_back(IrNode{kind, nullable, cs, std::move(kids)});
  interned_.emplace(h, id);
  return id;
}

Engine::Id Engine::chars(CharSet cs) {
  if (cs.empty()) return empty_;
  return intern(Kind::Chars, cs, {}, false);
}

Engine::Id Engine::concat(std::vector<Id> kids) {
  std::vector<Id> flat;
  // adjacent sigma-stars absorb each other
  auto push = [&](Id k) {
    if (k == top_ && !flat.empty() && flat.back() == top_) return;
    flat.push_back(k);
  };
  for (Id k : kids) {
    if (k == empty_) return empty_;
    if (k == eps_) continue;
    if (nodes_[k].kind == Kind::Concat) {
      for (Id kk : nodes_[k].kids) push(kk);
    } else {
      push(k);
    }
  }
  if (flat.empty()) return eps_;
  if (flat.size() == 1) return flat[0];
  bool nullable = true;
  for (Id k : flat) nullable = nullable && nodes_[k].nullable;
  return intern(Kind::Concat, CharSet::none(), std::move(flat), nullable);
}

Engine::Id Engine::alt(std::vector<Id> kids) {
  std::vector<Id> flat;
  CharSet merged;
  for (Id k : kids) {
    if (k == empty_) continue;
    if (k == top_) return top_;
    if (nodes_[k].kind == Kind::Or) {
      for (Id kk : nodes_[k].kids) {
        if (nodes_[kk].kind == Kind::Chars)
          merged = merged | nodes_[kk].cs;
        else
          flat.push_back(kk);
      }
    } else if (nodes_[k].kind == Kind::Chars) {
      merged = merged | nodes_[k].cs;
    } else {
      flat.push_back(k);
    }
  }
  if (!merged.empty()) flat.push_back(chars(merged));
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return empty_;
  if (flat.size() == 1) return flat[0];
  bool nullable = false;
  for (Id k : flat) nullable = nullable || nodes_[k].nullable;
  return intern(Kind::Or, CharSet::none(), std::move(flat), nullable);
}

Engine::Id Engine::conj(std::vector<Id> kids) {
  std::vector<Id> flat;
  bool have_chars = false;
  CharSet merged = CharSet::all();
  for (Id k : kids) {
    if (k == empty_) return empty_;
    if (k == top_) continue;
    if (nodes_[k].kind == Kind::And) {
      for (Id kk : nodes_[k].kids) {
        if (nodes_[kk].kind == Kind::Chars) {
          merged = merged & nodes_[kk].cs;
          have_chars = true;
        } else {
          flat.push_back(kk);
        }
      }
    } else if (nodes_[k].kind == Kind::Chars) {
      merged = merged & nodes_[k].cs;
      have_chars = true;
    } else {
      flat.push_back(k);
    }
  }
  if (have_chars) {
    Id c = chars(merged);  // empty intersection collapses the whole And
    if (c == empty_) return empty_;
    flat.push_back(c);
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return top_;
  if (flat.size() == 1) return flat[0];
  bool nullable = true;
  for (Id k : flat) nullable = nullable && nodes_[k].nullable;
  return intern(Kind::And, CharSet::none(), std::move(flat), nullable);
}

Engine::Id Engine::negate(Id x) {
  if (x == empty_) return top_;
  if (x == top_) return empty_;
  if (nodes_[x].kind == Kind::Not) return nodes_[x].kids[0];
  return intern(Kind::Not, CharSet::none(), {x}, !nodes_[x].nullable);
}

Engine::Id Engine::star(Id x) {
  if (x == empty_ || x == eps_) return eps_;
  if (nodes_[x].kind == Kind::Star) return x;
  return intern(Kind::Star, CharSet::none(), {x}, true);
}

namespace {

// Recursive desugaring into the 8-kind IR. Holes are only legal in approx
// mode, where they become sigma-star or empty depending on polarity; `over`
// flips beneath Not and is ignored everywhere else.
struct Lowerer {
  Engine& e;
  bool approx;

  Engine::Id go(const NodeRef& n, bool over) {
    switch (n->op) {
      case Op::Class:
        if (n->cls == CharClass::Eps) return e.eps();
        if (n->cls == CharClass::Null) return e.empty();
        return e.chars(char_class_set(n->cls));
      case Op::Literal: return e.chars(CharSet::of({&n->lit, 1}));
      case Op::StartsWith: return e.concat({go(n->kids[0], over), e.top()});
      case Op::EndsWith: return e.concat({e.top(), go(n->kids[0], over)});
      case Op::Contains: return e.concat({e.top(), go(n->kids[0], over), e.top()});
      case Op::Not: return e.negate(go(n->kids[0], !over));
      case Op::Optional: return e.alt({go(n->kids[0], over), e.eps()});
      case Op::KleeneStar: return e.star(go(n->kids[0], over));
      case Op::Concat: return e.concat({go(n->kids[0], over), go(n->kids[1], over)});
      case Op::And: return e.conj({go(n->kids[0], over), go(n->kids[1], over)});
      case Op::Or: return e.alt({go(n->kids[0], over), go(n->kids[1], over)});
      case Op::Repeat: {
        Engine::Id x = go(n->kids[0], over);
        return e.concat(std::vector<Engine::Id>(n->min, x));
      }
      case Op::RepeatAtLeast: {
        Engine::Id x = go(n->kids[0], over);
        std::vector<Engine::Id> seq(n->min, x);
        seq.push_back(e.star(x));
        return e.concat(std::move(seq));
      }
      case Op::RepeatRange: {
        Engine::Id x = go(n->kids[0], over);
        std::vector<Engine::Id> seq(n->min, x);
        Engine::Id opt = e.alt({x, e.eps()});
        for (int i = n->min; i < n->max; ++i) seq.push_back(opt);
        return e.concat(std::move(seq));
      }
      case Op::Hole:
        if (approx) return over ? e.top() : e.empty();
        break;
    }
    throw std::invalid_argument("cannot lower a hole");
  }
};

}  // namespace

Engine::Id Engine::lower(const Regex& r) { return Lowerer{*this, false}.go(r.ref(), true); }

Engine::Id Engine::lower(const Sketch& s, bool over) {
  return Lowerer{*this, true}.go(s.ref(), over);
}

Engine::Id Engine::derivative(Id id, char c) {
  if (!in_alphabet(c)) throw std::invalid_argument("character outside alphabet");
  uint64_t key = (static_cast<uint64_t>(id) << 7) | static_cast<uint64_t>(c - kAlphabetFirst);
  auto it = deriv_cache_.find(key);
  if (it != deriv_cache_.end()) return it->second;

  const IrNode& n = nodes_[id];
  Id out = empty_;
  switch (n.kind) {
    case Kind::Empty:
    case Kind::Eps: out = empty_; break;
    case Kind::Chars: out = n.cs.contains(c) ? eps_ : empty_; break;
    case Kind::Concat: {
      // d(r1..rn) = d(r1) r2..rn  |  [nullable r1] d(r2) r3..rn  |  ...
      std::vector<Id> kids = n.kids;  // copy: derivative below may reallocate nodes_
      std::vector<Id> terms;
      for (size_t i = 0; i < kids.size(); ++i) {
        std::vector<Id> tail;
        tail.push_back(derivative(kids[i], c));
        tail.insert(tail.end(), kids.begin() + i + 1, kids.end());
        terms.push_back(concat(std::move(tail)));
        if (!nodes_[kids[i]].nullable) break;
      }
      out = alt(std::move(terms));
      break;
    }
    case Kind::Or: {
      std::vector<Id> kids = n.kids;
      std::vector<Id> terms;
      for (Id k : kids) terms.push_back(derivative(k, c));
      out = alt(std::move(terms));
      break;
    }
    case Kind::And: {
      std::vector<Id> kids = n.kids;
      std::vector<Id> terms;
      for (Id k : kids) terms.push_back(derivative(k, c));
      out = conj(std::move(terms));
      break;
    }
    case Kind::Not: {
      Id kid = n.kids[0];
      out = negate(derivative(kid, c));
      break;
    }
    case Kind::Star: {
      Id kid = n.kids[0];
      out = concat({derivative(kid, c), star(kid)});
      break;
    }
  }
  deriv_cache_.emplace(key, out);
  return out;
}

bool Engine::matches(Id id, std::string_view w) {
  Id cur = id;
  for (char c : w) {
    cur = derivative(cur, c);
    if (cur == empty_) return false;
  }
  return nullable(cur);
}

void Engine::collect_leaves(Id id, std::vector<CharSet>& out, std::vector<bool>& seen) const {
  if (seen[id]) return;
  seen[id] = true;
  const IrNode& n = nodes_[id];
  if (n.kind == Kind::Chars) out.push_back(n.cs);
  for (Id k : n.kids) collect_leaves(k, out, seen);
}

std::vector<CharSet> Engine::partition(Id id) const {
  std::vector<CharSet> leaves;
  std::vector<bool> seen(nodes_.size(), false);
  collect_leaves(id, leaves, seen);

  std::vector<CharSet> classes{CharSet::all()};
  for (const CharSet& leaf : leaves) {
    std::vector<CharSet> split;
    for (const CharSet& cl : classes) {
      CharSet inside = cl & leaf;
      CharSet outside = cl - leaf;
      if (!inside.empty()) split.push_back(inside);
      if (!outside.empty()) split.push_back(outside);
    }
    classes = std::move(split);
  }
  return classes;
}

bool matches(const Regex& r, std::string_view w) {
  Engine e;
  return e.matches(e.lower(r), w);
}

namespace {

// Shared BFS over the derivative automaton. Visits every reachable state,
// calling visit(id, state_index); expand fills per-class successors.
struct Explorer {
  Engine& e;
  std::vector<CharSet> classes;
  std::unordered_map<Engine::Id, uint32_t> index;
  std::deque<Engine::Id> frontier;
  int limit;

  explicit Explorer(Engine& e, Engine::Id root, int limit) : e(e), limit(limit) {
    classes = e.partition(root);
    add(root);
  }

  uint32_t add(Engine::Id id) {
    auto it = index.find(id);
    if (it != index.end()) return it->second;
    if (static_cast<int>(index.size()) >= limit) throw StateLimitError(limit);
    uint32_t ix = static_cast<uint32_t>(index.size());
    index.emplace(id, ix);
    frontier.push_back(id);
    return ix;
  }
};

}  // namespace

int Dfa::class_of(char c) const {
  if (!in_alphabet(c)) throw std::invalid_argument("character outside alphabet");
  return char_class[c - kAlphabetFirst];
}

bool Dfa::run(std::string_view w) const {
  uint32_t s = start;
  for (char c : w) s = next[s][class_of(c)];
  return accepting[s];
}

std::vector<bool> Dfa::co_reachable() const {
  std::vector<std::vector<uint32_t>> rev(state_count());
  for (uint32_t s = 0; s < state_count(); ++s)
    for (uint32_t t : next[s]) rev[t].push_back(s);
  std::vector<bool> can(state_count(), false);
  std::deque<uint32_t> work;
  for (uint32_t s = 0; s < state_count(); ++s)
    if (accepting[s]) {
      can[s] = true;
      work.push_back(s);
    }
  while (!work.empty()) {
    uint32_t s = work.front();
    work.pop_front();
    for (uint32_t p : rev[s])
      if (!can[p]) {
        can[p] = true;
        work.push_back(p);
      }
  }
  return can;
}

Dfa build_dfa(const Regex& r, int state_limit) {
  Engine e;
  Engine::Id root = e.lower(r);
  Explorer ex(e, root, state_limit);

  Dfa d;
  d.classes = ex.classes;
  d.char_class.assign(kAlphabetSize, 0);
  for (size_t ci = 0; ci < d.classes.size(); ++ci)
    for (int b = 0; b < kAlphabetSize; ++b)
      if (d.classes[ci].contains(static_cast<char>(kAlphabetFirst + b)))
        d.char_class[b] = static_cast<uint8_t>(ci);

  std::vector<Engine::Id> ids;
  while (!ex.frontier.empty()) {
    Engine::Id id = ex.frontier.front();
    ex.frontier.pop_front();
    ids.push_back(id);
    d.next.emplace_back();
    d.accepting.push_back(e.nullable(id));
    std::vector<uint32_t>& row = d.next.back();
    row.reserve(d.classes.size());
    for (const CharSet& cl : d.classes) row.push_back(ex.add(e.derivative(id, cl.first())));
  }
  d.start = 0;

  // BFS order means rows were appended in index order already.
  (void)ids;
  return d;
}

namespace {

bool ir_is_empty(Engine& e, Engine::Id root, int state_limit) {
  Explorer ex(e, root, state_limit);
  while (!ex.frontier.empty()) {
    Engine::Id id = ex.frontier.front();
    ex.frontier.pop_front();
    if (e.nullable(id)) return false;
    for (const CharSet& cl : ex.classes) ex.add(e.derivative(id, cl.first()));
  }
  return true;
}

}  // namespace

bool is_empty(const Regex& r, int state_limit) {
  Engine e;
  return ir_is_empty(e, e.lower(r), state_limit);
}

bool equivalent(const Regex& a, const Regex& b, int state_limit) {
  Engine e;
  Engine::Id ia = e.lower(a);
  Engine::Id ib = e.lower(b);
  if (ia == ib) return true;
  Engine::Id sym = e.alt({e.conj({ia, e.negate(ib)}), e.conj({ib, e.negate(ia)})});
  return ir_is_empty(e, sym, state_limit);
}

std::string to_dot(const Dfa& d) {
  std::string out = "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  out += "  __start [shape=point];\n";
  out += "  __start -> s" + std::to_string(d.start) + ";\n";
  for (uint32_t s = 0; s < d.state_count(); ++s) {
    out += "  s" + std::to_string(s);
    out += d.accepting[s] ? " [shape=doublecircle];\n" : ";\n";
  }
  for (uint32_t s = 0; s < d.state_count(); ++s) {
    for (size_t c = 0; c < d.classes.size(); ++c) {
      std::string label = d.classes[c].label();
      std::string esc;
      for (char ch : label) {
        if (ch == '"' || ch == '\\') esc += '\\';
        esc += ch;
      }
      out += "  s" + std::to_string(s) + " -> s" + std::to_string(d.next[s][c]) +
             " [label=\"" + esc + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace automata
}  // namespace resketch
