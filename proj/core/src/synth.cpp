#include "resketch/synth.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "resketch/automata.hpp"
#include "resketch/syntax.hpp"

namespace resketch {

namespace {

// Node builders local to the search; ast.hpp builders validate per call and
// wrap in Regex/Sketch, which is noise at this volume.
NodeRef mk(Op op, std::vector<NodeRef> kids, int min = 0, int max = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->min = min;
  n->max = max;
  n->holey = op == Op::Hole;
  for (const NodeRef& k : kids) n->holey = n->holey || k->holey;
  n->kids = std::move(kids);
  return n;
}

NodeRef mk_class(CharClass c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Class;
  n->cls = c;
  return n;
}

NodeRef mk_lit(char c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Literal;
  n->lit = c;
  return n;
}

// Hole components are constraint payload, not program structure: they are
// skipped by the traversals below and excluded from size and depth.
int prog_size(const NodeRef& n) {
  if (n->op == Op::Hole) return 1;
  int s = 1;
  for (const NodeRef& k : n->kids) s += prog_size(k);
  return s;
}

int prog_depth(const NodeRef& n) {
  if (n->op == Op::Hole || n->kids.empty()) return 1;
  int d = 0;
  for (const NodeRef& k : n->kids) d = std::max(d, prog_depth(k));
  return d + 1;
}

const Node* first_hole(const NodeRef& n) {
  if (n->op == Op::Hole) return n.get();
  if (!n->holey) return nullptr;
  for (const NodeRef& k : n->kids)
    if (const Node* h = first_hole(k)) return h;
  return nullptr;
}

// 128-bit structural identity, standing in for the printed form at a fraction
// of the cost. Two independent lanes; a collision needs both to agree.
struct Fp {
  uint64_t a = 0xcbf29ce484222325ull;
  uint64_t b = 0x84222325cbf29ce4ull;
  bool operator==(const Fp&) const = default;
};

struct FpHash {
  size_t operator()(const Fp& f) const { return f.a ^ (f.b * 0x9e3779b97f4a7c15ull); }
};

void fp_mix(Fp& h, uint64_t v) {
  h.a = h.a * 0x100000001b3ull + (v ^ 0x9e3779b97f4a7c15ull);
  h.b = h.b * 0xc6a4a7935bd1e995ull + (v ^ 0xff51afd7ed558ccdull);
}

Fp fingerprint(const NodeRef& n) {
  Fp h;
  fp_mix(h, static_cast<uint64_t>(n->op));
  fp_mix(h, static_cast<uint64_t>(n->cls));
  fp_mix(h, static_cast<uint8_t>(n->lit));
  fp_mix(h, static_cast<uint64_t>(n->min) << 32 | static_cast<uint32_t>(n->max));
  fp_mix(h, n->kids.size());
  for (const NodeRef& k : n->kids) {
    Fp c = fingerprint(k);
    fp_mix(h, c.a);
    fp_mix(h, c.b);
  }
  return h;
}

// Word-length interval containing the over-approximation's language (holes as
// sigma-star, Not opaque). A positive outside the interval dooms the program
// without touching the engine.
constexpr int kLenInf = 1 << 28;

struct LenBounds {
  int lo = 0, hi = 0;
  bool none = false;  // language known empty
};

int sat_add(int a, int b) { return std::min(a + b, kLenInf); }
int sat_mul(int k, int a) { return a >= kLenInf || k * static_cast<int64_t>(a) >= kLenInf ? kLenInf : k * a; }

LenBounds len_bounds(const NodeRef& n) {
  switch (n->op) {
    case Op::Hole:
    case Op::Not: return {0, kLenInf, false};
    case Op::Class:
      if (n->cls == CharClass::Eps) return {0, 0, false};
      if (n->cls == CharClass::Null) return {0, 0, true};
      return {1, 1, false};
    case Op::Literal: return {1, 1, false};
    case Op::StartsWith:
    case Op::EndsWith:
    case Op::Contains: {
      LenBounds k = len_bounds(n->kids[0]);
      return {k.lo, kLenInf, k.none};
    }
    case Op::Optional: {
      LenBounds k = len_bounds(n->kids[0]);
      return {0, k.none ? 0 : k.hi, false};
    }
    case Op::KleeneStar: {
      LenBounds k = len_bounds(n->kids[0]);
      return {0, k.none || k.hi == 0 ? 0 : kLenInf, false};
    }
    case Op::Concat: {
      LenBounds a = len_bounds(n->kids[0]);
      LenBounds b = len_bounds(n->kids[1]);
      return {sat_add(a.lo, b.lo), sat_add(a.hi, b.hi), a.none || b.none};
    }
    case Op::And: {
      LenBounds a = len_bounds(n->kids[0]);
      LenBounds b = len_bounds(n->kids[1]);
      int lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
      return {lo, hi, a.none || b.none || lo > hi};
    }
    case Op::Or: {
      LenBounds a = len_bounds(n->kids[0]);
      LenBounds b = len_bounds(n->kids[1]);
      if (a.none) return b;
      if (b.none) return a;
      return {std::min(a.lo, b.lo), std::max(a.hi, b.hi), false};
    }
    case Op::Repeat: {
      LenBounds k = len_bounds(n->kids[0]);
      if (n->min == 0) return {0, 0, false};
      return {sat_mul(n->min, k.lo), sat_mul(n->min, k.hi), k.none};
    }
    case Op::RepeatAtLeast: {
      LenBounds k = len_bounds(n->kids[0]);
      if (n->min == 0) return {0, k.none || k.hi == 0 ? 0 : kLenInf, false};
      return {sat_mul(n->min, k.lo), k.hi == 0 ? 0 : kLenInf, k.none};
    }
    case Op::RepeatRange: {
      LenBounds k = len_bounds(n->kids[0]);
      if (k.none) return {0, 0, n->min > 0};
      return {sat_mul(n->min, k.lo), sat_mul(n->max, k.hi), false};
    }
    default: return {0, kLenInf, false};
  }
}

NodeRef replace_first_hole(const NodeRef& n, const NodeRef& repl, bool& done) {
  if (n->op == Op::Hole) {
    done = true;
    return repl;
  }
  if (!n->holey) return n;
  std::vector<NodeRef> kids;
  kids.reserve(n->kids.size());
  for (const NodeRef& k : n->kids) kids.push_back(done ? k : replace_first_hole(k, repl, done));
  auto m = std::make_shared<Node>();
  m->op = n->op;
  m->cls = n->cls;
  m->lit = n->lit;
  m->min = n->min;
  m->max = n->max;
  for (const NodeRef& k : kids) m->holey = m->holey || k->holey;
  m->kids = std::move(kids);
  return m;
}

void concrete_subtrees(const NodeRef& n, std::vector<NodeRef>& out) {
  if (n->op == Op::Hole) return;
  if (!n->holey) out.push_back(n);
  for (const NodeRef& k : n->kids) concrete_subtrees(k, out);
}

// Everything derived from the origin sketch once per search.
struct OriginInfo {
  std::vector<Sketch> components;  // distinct across all holes, by printed form
  std::vector<char> literal_pool;  // first-encounter order
  std::vector<int> int_pool;       // ascending
};

OriginInfo scan_origin(const Sketch& origin, const SynthConfig& cfg) {
  OriginInfo info;
  std::unordered_set<std::string> comp_seen;
  bool lit_seen[256] = {};
  std::unordered_set<int> ints(cfg.extra_ints.begin(), cfg.extra_ints.end());
  for (int k = 1; k <= 9; ++k) ints.insert(k);
  for_each_subtree(origin.ref(), [&](const NodeRef& n) {
    if (n->op == Op::Hole) {
      for (const NodeRef& c : n->kids) {
        Sketch s(c);
        if (comp_seen.insert(print_sketch(s)).second) info.components.push_back(s);
      }
    } else if (n->op == Op::Literal) {
      if (!lit_seen[static_cast<unsigned char>(n->lit)]) {
        lit_seen[static_cast<unsigned char>(n->lit)] = true;
        info.literal_pool.push_back(n->lit);
      }
    } else if (n->op == Op::Repeat || n->op == Op::RepeatAtLeast) {
      ints.insert(n->min);
    } else if (n->op == Op::RepeatRange) {
      ints.insert(n->min);
      ints.insert(n->max);
    }
  });
  info.int_pool.assign(ints.begin(), ints.end());
  std::sort(info.int_pool.begin(), info.int_pool.end());
  return info;
}

int overlap_score(const NodeRef& tree, const std::vector<Sketch>& components) {
  if (components.empty()) return 0;
  std::vector<NodeRef> concrete;
  concrete_subtrees(tree, concrete);
  int score = 0;
  for (const Sketch& c : components) {
    for (const NodeRef& t : concrete) {
      if (sketch_matches(c, Regex(t))) {
        ++score;
        break;
      }
    }
  }
  return score;
}

bool terminal_admissible(const NodeRef& term, const std::vector<NodeRef>& comps) {
  if (comps.empty()) return true;
  Regex t(term);
  for (const NodeRef& c : comps)
    if (sketch_matches(Sketch(c), t)) return true;
  return false;
}

// Depth headroom at the leftmost hole: it sits below `ancestors` nodes, and
// `rest` is the deepest node on any path avoiding it, so substituting a
// replacement of depth d yields a tree of depth max(rest, ancestors + d).
// Candidate shapes have known depth up front (terminals 1, operator shells 2),
// which lets expansion drop bound-busting children without building them.
struct HoleRoom {
  const Node* hole = nullptr;
  int ancestors = 0;
  int rest = 0;
};

HoleRoom hole_room(const NodeRef& n, int above) {
  if (n->op == Op::Hole) return {n.get(), above, 0};
  HoleRoom r;
  if (!n->holey) {
    r.rest = above + prog_depth(n);
    return r;
  }
  r.rest = above + 1;
  for (const NodeRef& k : n->kids) {
    if (r.hole == nullptr && k->holey) {
      HoleRoom sub = hole_room(k, above + 1);
      r.hole = sub.hole;
      r.ancestors = sub.ancestors;
      r.rest = std::max(r.rest, sub.rest);
    } else {
      // later holes stay put and count as depth-1 leaves
      r.rest = std::max(r.rest, above + 1 + prog_depth(k));
    }
  }
  return r;
}

std::vector<PartialProgram> expand_with(const PartialProgram& p, const OriginInfo& info,
                                        const SynthConfig& cfg, std::vector<Fp>* fps) {
  std::vector<PartialProgram> out;
  HoleRoom room = hole_room(p.tree.ref(), 0);
  if (room.hole == nullptr) return out;
  const std::vector<NodeRef>& comps = room.hole->kids;
  // any replacement deeper than this busts cfg.depth; the popped tree already
  // honored the bound, so dmax >= 1 and bare terminals always fit
  const int dmax = cfg.depth - room.ancestors;

  std::unordered_set<Fp, FpHash> emitted;
  auto emit = [&](const NodeRef& repl) {
    bool done = false;
    NodeRef tree = replace_first_hole(p.tree.ref(), repl, done);
    if (prog_depth(tree) > cfg.depth) return;
    Fp fp = fingerprint(tree);
    if (!emitted.insert(fp).second) return;
    if (fps != nullptr) fps->push_back(fp);
    out.push_back(PartialProgram{Sketch(tree), overlap_score(tree, info.components),
                                 prog_size(tree), 0, p.seq});
  };

  // (a) the hole's own components
  for (const NodeRef& c : comps)
    if (prog_depth(c) <= dmax) emit(c);

  // (b) terminals; a constrained hole only admits terminals that already
  // discharge the component requirement by themselves
  for (CharClass c : cfg.terminals) {
    NodeRef t = mk_class(c);
    if (terminal_admissible(t, comps)) emit(t);
  }
  for (char c : info.literal_pool) {
    NodeRef t = mk_lit(c);
    if (terminal_admissible(t, comps)) emit(t);
  }

  // (c) operators over fresh holes; the component set rides along on exactly
  // one argument, one child per choice of receiving argument
  if (dmax >= 2) {
    NodeRef constrained = mk(Op::Hole, comps);
    NodeRef free = mk(Op::Hole, {});
    int receivers = comps.empty() ? 1 : 2;
    for (Op op : cfg.operators) {
      switch (op) {
        case Op::StartsWith:
        case Op::EndsWith:
        case Op::Contains:
        case Op::Not:
        case Op::Optional:
        case Op::KleeneStar:
          emit(mk(op, {constrained}));
          break;
        case Op::Concat:
        case Op::And:
        case Op::Or:
          for (int r = 0; r < receivers; ++r)
            emit(mk(op, {r == 0 ? constrained : free, r == 0 ? free : constrained}));
          break;
        case Op::Repeat:
        case Op::RepeatAtLeast:
          for (int k : info.int_pool) emit(mk(op, {constrained}, k, 0));
          break;
        case Op::RepeatRange:
          for (size_t i = 0; i < info.int_pool.size(); ++i)
            for (size_t j = i + 1; j < info.int_pool.size(); ++j)
              emit(mk(op, {constrained}, info.int_pool[i], info.int_pool[j]));
          break;
        default:
          break;  // Class/Literal/Hole are not operators
      }
    }
  }
  return out;
}

// True when no completion of tree can be consistent: the over-approximation
// (holes as sigma-star, flipped under Not) already rejects a positive, or the
// under-approximation (holes as the empty language) accepts a negative. The
// length interval screens most rejects before any engine work, and verdicts
// are cached per lowered id: hash-consing maps the many shells whose bound
// collapses to the same language onto one entry.
struct Doomer {
  automata::Engine& eng;
  const Examples& ex;
  std::unordered_map<automata::Engine::Id, bool> over_rejects, under_accepts;

  void reset() {
    over_rejects.clear();
    under_accepts.clear();
  }

  bool operator()(const Sketch& tree) {
    if (!ex.positives.empty()) {
      LenBounds lb = len_bounds(tree.ref());
      for (const std::string& s : ex.positives) {
        int len = static_cast<int>(s.size());
        if (lb.none || len < lb.lo || len > lb.hi) return true;
      }
      automata::Engine::Id over = eng.lower(tree, true);
      auto [it, fresh] = over_rejects.try_emplace(over, false);
      if (fresh)
        for (const std::string& s : ex.positives)
          if (!eng.matches(over, s)) {
            it->second = true;
            break;
          }
      if (it->second) return true;
    }
    if (!ex.negatives.empty()) {
      automata::Engine::Id under = eng.lower(tree, false);
      if (under != eng.empty()) {
        auto [it, fresh] = under_accepts.try_emplace(under, false);
        if (fresh)
          for (const std::string& s : ex.negatives)
            if (eng.matches(under, s)) {
              it->second = true;
              break;
            }
        if (it->second) return true;
      }
    }
    return false;
  }
};

struct WorseThan {
  bool operator()(const PartialProgram& a, const PartialProgram& b) const {
    if (a.overlap_score != b.overlap_score) return a.overlap_score < b.overlap_score;
    if (a.size != b.size) return a.size > b.size;
    return a.seq > b.seq;
  }
};

constexpr size_t kSeenCap = 2000000;
// Engine caches grow with every doomed check; dropping them at the cap trades
// recompute for a bounded footprint per search.
constexpr size_t kEngineNodeCap = 1000000;

}  // namespace

bool consistent(const Regex& r, const Examples& ex, automata::Engine& eng) {
  automata::Engine::Id id = eng.lower(r);
  for (const std::string& s : ex.positives)
    if (!eng.matches(id, s)) return false;
  for (const std::string& s : ex.negatives)
    if (eng.matches(id, s)) return false;
  return true;
}

bool consistent(const Regex& r, const Examples& ex) {
  automata::Engine eng;
  return consistent(r, ex, eng);
}

std::vector<PartialProgram> expand(const PartialProgram& p, const Sketch& origin,
                                   const SynthConfig& cfg) {
  return expand_with(p, scan_origin(origin, cfg), cfg, nullptr);
}

SynthResult synthesize(const Sketch& s, const Examples& ex, const SynthConfig& cfg) {
  if (cfg.depth < 1) throw std::invalid_argument("synth depth bound must be >= 1");
  if (cfg.timeout_ms <= 0) throw std::invalid_argument("synth timeout must be positive");
  if (cfg.max_worklist == 0) throw std::invalid_argument("synth worklist cap must be positive");
  {
    std::unordered_set<std::string> pos(ex.positives.begin(), ex.positives.end());
    for (const std::string& n : ex.negatives)
      if (pos.count(n)) throw std::invalid_argument("contradictory examples: \"" + n + "\"");
  }

  SynthResult res;
  OriginInfo info = scan_origin(s, cfg);
  automata::Engine eng;
  Doomer doomed{eng, ex, {}, {}};

  std::priority_queue<PartialProgram, std::vector<PartialProgram>, WorseThan> work;
  std::unordered_set<Fp, FpHash> seen;
  seen.insert(fingerprint(s.ref()));
  work.push(PartialProgram{s, overlap_score(s.ref(), info.components), prog_size(s.ref()), 0, 0});

  const int64_t budget = cfg.timeout_ms * kStepsPerMs;
  uint64_t next_seq = 1;
  std::vector<Fp> child_fps;

  while (!work.empty()) {
    if (static_cast<int64_t>(res.stats.expanded) >= budget) {
      res.status = SynthStatus::Timeout;
      return res;
    }
    PartialProgram cur = work.top();
    work.pop();
    ++res.stats.expanded;

    if (eng.node_count() > kEngineNodeCap) {
      eng = automata::Engine();
      doomed.reset();  // verdicts are keyed by ids the reset just invalidated
    }

    if (cur.tree.concrete()) {
      ++res.stats.completed;
      Regex r = to_regex(cur.tree);
      if (consistent(r, ex, eng)) {
        res.status = SynthStatus::Found;
        res.program = std::move(r);
        return res;
      }
      continue;
    }

    child_fps.clear();
    std::vector<PartialProgram> children = expand_with(cur, info, cfg, &child_fps);
    for (size_t i = 0; i < children.size(); ++i) {
      if (seen.count(child_fps[i])) continue;
      if (seen.size() < kSeenCap) seen.insert(child_fps[i]);
      if (doomed(children[i].tree)) {
        ++res.stats.pruned;
        continue;
      }
      children[i].seq = next_seq++;
      work.push(std::move(children[i]));
    }
    if (work.size() > cfg.max_worklist) {
      res.stats.worklist_overflow = true;
      res.status = SynthStatus::Timeout;
      return res;
    }
  }
  res.status = SynthStatus::NotFound;
  return res;
}

}  // namespace resketch
