#include "resketch/sampling.hpp"

#include <optional>
#include <random>
#include <unordered_set>

namespace resketch {
namespace automata {

namespace {

// Consecutive fruitless walks tolerated before the language is declared
// exhausted, and an absolute cap so tiny languages cannot spin forever.
constexpr int kMaxStall = 200;
constexpr int kMaxWalks = 200000;

}  // namespace

SampleResult sample_strings(const Dfa& d, int n, int visit_limit, uint64_t seed,
                            int max_len) {
  std::vector<bool> co = d.co_reachable();
  if (!co[d.start]) throw EmptyLanguageError();

  SampleResult res;
  if (n <= 0) return res;
  if (visit_limit < 1) visit_limit = 1;

  // Modulo reduction keeps the stream identical across standard libraries;
  // std::uniform_int_distribution is not portable.
  std::mt19937_64 rng(seed);

  const size_t nclasses = d.classes.size();
  std::vector<int> visits(d.state_count() * nclasses, 0);
  std::vector<size_t> touched;

  auto walk = [&]() -> std::optional<std::string> {
    for (size_t idx : touched) visits[idx] = 0;
    touched.clear();
    std::string out;
    uint32_t cur = d.start;
    while (true) {
      // Option list: stop here (if accepting) plus every live class edge.
      int opts[96];
      int nopts = 0;
      if (d.accepting[cur]) opts[nopts++] = -1;
      if (static_cast<int>(out.size()) < max_len) {
        for (size_t c = 0; c < nclasses; ++c) {
          if (!co[d.next[cur][c]]) continue;
          if (visits[cur * nclasses + c] >= visit_limit) continue;
          opts[nopts++] = static_cast<int>(c);
        }
      }
      if (nopts == 0) return std::nullopt;
      int pick = opts[rng() % static_cast<uint64_t>(nopts)];
      if (pick < 0) return out;
      size_t idx = cur * nclasses + static_cast<size_t>(pick);
      if (visits[idx]++ == 0) touched.push_back(idx);
      const CharSet& cs = d.classes[static_cast<size_t>(pick)];
      out.push_back(cs.nth(static_cast<int>(rng() % static_cast<uint64_t>(cs.count()))));
      cur = d.next[cur][static_cast<size_t>(pick)];
    }
  };

  std::unordered_set<std::string> seen;
  int stall = 0;
  int walks = 0;
  while (static_cast<int>(res.strings.size()) < n) {
    if (walks >= kMaxWalks || (stall >= kMaxStall && !res.strings.empty())) {
      res.exhausted = true;
      break;
    }
    ++walks;
    std::optional<std::string> s = walk();
    if (s && seen.insert(*s).second) {
      res.strings.push_back(std::move(*s));
      stall = 0;
    } else {
      ++stall;
    }
  }

  // Pad with replacement once the distinct pool has dried up.
  if (res.exhausted && !res.strings.empty()) {
    size_t distinct = res.strings.size();
    size_t i = 0;
    while (static_cast<int>(res.strings.size()) < n) {
      res.strings.push_back(res.strings[i++ % distinct]);
    }
  }
  return res;
}

}  // namespace automata
}  // namespace resketch
