#include "resketch/parser.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "resketch/syntax.hpp"

namespace resketch {

namespace {

constexpr int kUnaryClosureRounds = 5;  // longest chain: $CONST_SET..$ROOT

std::string abstract_token(const Token& t) {
  switch (t.kind) {
    case Token::Kind::Int:
      return "__int__";
    case Token::Kind::Const:
      return "__const__";
    default:
      return t.text;
  }
}

template <typename Emit>
void local_features(const Derivation& d, const std::vector<Token>& tokens, Emit&& emit) {
  emit("rule:" + d.rule_id, 1);
  for (int i = d.begin; i < d.end; ++i)
    emit("rt:" + d.rule_id + ":" + abstract_token(tokens[static_cast<size_t>(i)]), 1);
  for (const DerivRef& c : d.children) emit("bg:" + d.rule_id + ":" + c->rule_id, 1);
  if (d.skipped > 0) emit("skip", d.skipped);
}

struct Chart {
  const std::vector<Token>& tokens;
  const Grammar& g;
  const Weights& w;
  int beam;
  int n;

  using CatMap = std::unordered_map<std::string, std::vector<DerivRef>>;
  std::vector<CatMap> cells;  // index begin * (n + 1) + end
  std::unordered_map<const Derivation*, std::string> serial_cache;
  std::unordered_map<const Derivation*, std::string> value_cache;

  Chart(const std::vector<Token>& tokens, const Grammar& g, const Weights& w, int beam)
      : tokens(tokens),
        g(g),
        w(w),
        beam(beam),
        n(static_cast<int>(tokens.size())),
        cells(static_cast<size_t>((n + 1) * (n + 1))) {}

  CatMap& cell(int i, int j) { return cells[static_cast<size_t>(i * (n + 1) + j)]; }

  const std::string& ser(const DerivRef& d) {
    auto it = serial_cache.find(d.get());
    if (it != serial_cache.end()) return it->second;
    std::string s = "(" + d->rule_id + " " + std::to_string(d->begin) + ":" +
                    std::to_string(d->end);
    for (const DerivRef& c : d->children) s += " " + ser(c);
    s += ")";
    return serial_cache.emplace(d.get(), std::move(s)).first->second;
  }

  const std::string& val(const DerivRef& d) {
    auto it = value_cache.find(d.get());
    if (it != value_cache.end()) return it->second;
    return value_cache.emplace(d.get(), print_value(d->value)).first->second;
  }

  DerivRef make(std::string rule_id, int begin, int end, std::vector<DerivRef> children,
                SemValue value, int skipped) {
    auto d = std::make_shared<Derivation>();
    d->rule_id = std::move(rule_id);
    d->begin = begin;
    d->end = end;
    d->children = std::move(children);
    d->value = std::move(value);
    d->skipped = skipped;
    double s = 0.0;
    for (const DerivRef& c : d->children) s += c->score;
    local_features(*d, tokens, [&](const std::string& name, int count) {
      s += w.get(name) * count;
    });
    d->score = s;
    return d;
  }

  bool better(const DerivRef& a, const DerivRef& b) {
    if (a->score != b->score) return a->score > b->score;
    return ser(a) < ser(b);
  }

  // Sort best-first, keep one derivation per distinct value, cap at beam.
  void settle(std::vector<DerivRef>& list) {
    std::sort(list.begin(), list.end(),
              [this](const DerivRef& a, const DerivRef& b) { return better(a, b); });
    std::vector<DerivRef> kept;
    std::set<std::string> seen;
    for (DerivRef& d : list) {
      if (static_cast<int>(kept.size()) >= beam) break;
      if (seen.insert(val(d)).second) kept.push_back(std::move(d));
    }
    list = std::move(kept);
  }

  void seed_lexical() {
    for (int i = 0; i < n; ++i) {
      const Token& t = tokens[static_cast<size_t>(i)];
      if (t.kind == Token::Kind::Int) {
        cell(i, i + 1)["$INT"].push_back(
            make("tok:int", i, i + 1, {}, SemValue(static_cast<long>(t.value)), 0));
        continue;
      }
      if (t.kind == Token::Kind::Const) {
        try {
          cell(i, i + 1)["$CONST"].push_back(
              make("tok:const", i, i + 1, {}, SemValue(Sketch(str(t.text))), 0));
        } catch (const std::invalid_argument&) {
          // constant outside the printable-ASCII alphabet: not representable
        }
        continue;
      }
      std::string phrase;
      for (int j = i + 1; j <= n && j - i <= g.max_phrase_len; ++j) {
        const Token& last = tokens[static_cast<size_t>(j - 1)];
        if (last.kind != Token::Kind::Word) break;
        if (!phrase.empty()) phrase += ' ';
        phrase += last.text;
        auto hit = g.lex_by_phrase.find(phrase);
        if (hit == g.lex_by_phrase.end()) continue;
        for (size_t idx : hit->second) {
          const LexEntry& e = g.lexicon[idx];
          cell(i, j)[e.category].push_back(make(e.id, i, j, {}, e.value, 0));
        }
      }
    }
  }

  void apply_rule_over(const GrammarRule& r, int i, int j, std::vector<DerivRef>& out) {
    const int m = static_cast<int>(r.lhs.size());
    std::vector<DerivRef> kids;
    std::vector<SemValue> vals(static_cast<size_t>(m));

    std::function<void(int, int, int)> rec = [&](int k, int pos, int skipped) {
      if (k == m) {
        if (pos != j) return;
        std::vector<SemValue> args;
        args.reserve(r.selectors.size());
        for (const Selector& sel : r.selectors)
          args.push_back(sel.is_val ? SemValue(static_cast<long>(sel.val))
                                    : vals[static_cast<size_t>(sel.arg)]);
        SemValue value;
        if (!try_apply_semfn(r.fn, args, &value)) return;
        out.push_back(make(r.id, i, j, kids, std::move(value), skipped));
        return;
      }
      const std::string& e = r.lhs[static_cast<size_t>(k)];
      int first = k == 0 ? i : pos;
      int last_start = j - 1;
      for (int p = first; p <= last_start; ++p) {
        int gap = k == 0 ? 0 : p - pos;
        if (k == 0 && p != i) break;
        if (e[0] == '$') {
          for (int q = p + 1; q <= j; ++q) {
            if (k == m - 1 && q != j) continue;
            auto& cm = cell(p, q);
            auto it = cm.find(e);
            if (it == cm.end()) continue;
            for (const DerivRef& d : it->second) {
              kids.push_back(d);
              vals[static_cast<size_t>(k)] = d->value;
              rec(k + 1, q, skipped + gap);
              kids.pop_back();
            }
          }
        } else {
          const Token& t = tokens[static_cast<size_t>(p)];
          if (t.kind == Token::Kind::Word && t.text == e) {
            if (!(k == m - 1 && p + 1 != j)) {
              vals[static_cast<size_t>(k)] = SemValue(std::monostate{});
              rec(k + 1, p + 1, skipped + gap);
            }
          }
        }
      }
    };
    rec(0, i, 0);
  }

  void fill_span(int i, int j) {
    CatMap& cm = cell(i, j);

    // Multi-element rules (and single-word rules); children come from
    // strictly shorter spans already settled.
    std::unordered_map<std::string, std::vector<DerivRef>> pending;
    for (size_t ri = 0; ri < g.rules.size(); ++ri) {
      const GrammarRule& r = g.rules[ri];
      if (r.lhs.size() == 1 && r.lhs[0][0] == '$') continue;  // closure below
      std::vector<DerivRef> found;
      apply_rule_over(r, i, j, found);
      for (DerivRef& d : found) pending[r.target].push_back(std::move(d));
    }
    for (auto& [cat, list] : pending) {
      auto& dst = cm[cat];
      dst.insert(dst.end(), list.begin(), list.end());
      settle(dst);
    }

    // Unary closure, bounded: the longest legitimate chain is
    // $CONST_SET > $CC > $PROGRAM > $LIST_PROGRAM > $SKETCH > $ROOT.
    std::set<std::pair<size_t, const Derivation*>> done;
    for (int round = 0; round < kUnaryClosureRounds; ++round) {
      std::unordered_map<std::string, std::vector<DerivRef>> fresh;
      for (size_t ri = 0; ri < g.rules.size(); ++ri) {
        const GrammarRule& r = g.rules[ri];
        if (r.lhs.size() != 1 || r.lhs[0][0] != '$') continue;
        auto it = cm.find(r.lhs[0]);
        if (it == cm.end()) continue;
        for (const DerivRef& d : it->second) {
          if (!done.insert({ri, d.get()}).second) continue;
          std::vector<SemValue> args;
          args.reserve(r.selectors.size());
          for (const Selector& sel : r.selectors)
            args.push_back(sel.is_val ? SemValue(static_cast<long>(sel.val)) : d->value);
          SemValue value;
          if (!try_apply_semfn(r.fn, args, &value)) continue;
          fresh[r.target].push_back(make(r.id, i, j, {d}, std::move(value), 0));
        }
      }
      if (fresh.empty()) break;
      for (auto& [cat, list] : fresh) {
        auto& dst = cm[cat];
        dst.insert(dst.end(), list.begin(), list.end());
        settle(dst);
      }
    }
  }

  std::vector<ParseOutput> roots() {
    std::vector<DerivRef> all;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        auto& cm = cell(i, j);
        auto it = cm.find("$ROOT");
        if (it == cm.end()) continue;
        for (const DerivRef& d : it->second) {
          if (!std::holds_alternative<Sketch>(d->value)) continue;
          all.push_back(make("root", 0, n, {d}, d->value, i + (n - j)));
        }
      }
    }
    settle(all);
    std::vector<ParseOutput> out;
    out.reserve(all.size());
    for (DerivRef& d : all)
      out.push_back(ParseOutput{std::get<Sketch>(d->value), d->score, std::move(d)});
    return out;
  }
};

}  // namespace

std::string serialize(const DerivRef& d) {
  std::string s = "(" + d->rule_id + " " + std::to_string(d->begin) + ":" +
                  std::to_string(d->end);
  for (const DerivRef& c : d->children) s += " " + serialize(c);
  s += ")";
  return s;
}

std::map<std::string, int> extract_features(const DerivRef& d,
                                            const std::vector<Token>& tokens) {
  std::map<std::string, int> out;
  std::function<void(const DerivRef&)> walk = [&](const DerivRef& node) {
    local_features(*node, tokens, [&](const std::string& name, int count) {
      out[name] += count;
    });
    for (const DerivRef& c : node->children) walk(c);
  };
  walk(d);
  return out;
}

std::vector<ParseOutput> parse(const std::vector<Token>& tokens, const Grammar& g,
                               const Weights& w, int beam) {
  if (tokens.empty() || beam < 1 || g.empty()) return {};
  Chart chart(tokens, g, w, beam);
  chart.seed_lexical();
  for (int len = 1; len <= chart.n; ++len)
    for (int i = 0; i + len <= chart.n; ++i) chart.fill_span(i, i + len);
  return chart.roots();
}

}  // namespace resketch
