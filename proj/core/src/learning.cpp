#include "resketch/learning.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "resketch/automata.hpp"
#include "resketch/parallel.hpp"
#include "resketch/syntax.hpp"

namespace resketch {

Sketch pseudogold_sketch(const Regex& r) {
  Sketch s = r;
  if (depth(s) <= 1) return hole({s});
  std::vector<Sketch> comps;
  for (const auto& k : s.node().kids) comps.push_back(Sketch(k));
  return hole(comps);
}

int total_skipped(const DerivRef& d) {
  if (!d) return 0;
  int n = d->skipped;
  for (const auto& c : d->children) n += total_skipped(c);
  return n;
}

std::vector<ParseOutput> max_coverage_rank(std::vector<ParseOutput> beam) {
  std::stable_sort(beam.begin(), beam.end(),
                   [](const ParseOutput& a, const ParseOutput& b) {
                     return total_skipped(a.derivation) < total_skipped(b.derivation);
                   });
  return beam;
}

namespace {

double dot(const Weights& w, const std::map<std::string, int>& feats) {
  double s = 0.0;
  for (const auto& [name, count] : feats) s += w.get(name) * count;
  return s;
}

// log Σ exp(s_i), guarded against the empty set upstream.
double logsumexp(const std::vector<double>& scores) {
  double m = *std::max_element(scores.begin(), scores.end());
  double acc = 0.0;
  for (double s : scores) acc += std::exp(s - m);
  return m + std::log(acc);
}

void add_scaled(std::map<std::string, double>& into,
                const std::map<std::string, int>& feats, double scale) {
  for (const auto& [name, count] : feats) into[name] += scale * count;
}

// w += lr * grad, with L2 decay folded in as w *= (1 - lr*l2) first.
void sgd_step(Weights& w, const std::map<std::string, double>& grad, double lr,
              double l2) {
  if (l2 > 0.0) {
    double keep = 1.0 - lr * l2;
    for (auto& [name, val] : w.w) val *= keep;
  }
  for (const auto& [name, g] : grad) w.add(name, lr * g);
}

std::vector<size_t> shuffled_order(size_t n, std::mt19937_64& rng) {
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  for (size_t i = n; i > 1; --i) {
    size_t j = rng() % i;
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

}  // namespace

double mle_logprob(const std::vector<std::map<std::string, int>>& feats,
                   size_t gold_idx, const Weights& w,
                   std::map<std::string, double>* grad) {
  if (feats.empty()) throw std::invalid_argument("mle_logprob: empty candidate set");
  if (gold_idx >= feats.size()) throw std::invalid_argument("mle_logprob: gold index out of range");
  std::vector<double> scores(feats.size());
  for (size_t i = 0; i < feats.size(); ++i) scores[i] = dot(w, feats[i]);
  double lz = logsumexp(scores);
  if (grad) {
    add_scaled(*grad, feats[gold_idx], 1.0);
    for (size_t i = 0; i < feats.size(); ++i)
      add_scaled(*grad, feats[i], -std::exp(scores[i] - lz));
  }
  return scores[gold_idx] - lz;
}

Weights train_mle(const std::vector<MleItem>& data, const TrainConfig& cfg,
                  const Grammar& g, MleStats* stats) {
  if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.beam_size < 1)
    throw std::invalid_argument("train_mle: bad config");
  Weights w;
  MleStats local;
  std::mt19937_64 rng(cfg.seed);

  std::vector<std::string> gold_print(data.size());
  for (size_t i = 0; i < data.size(); ++i) gold_print[i] = print_sketch(data[i].gold);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto order = shuffled_order(data.size(), rng);
    double obj_sum = 0.0;
    int obj_n = 0;
    for (size_t base = 0; base < order.size(); base += cfg.batch_size) {
      size_t stop = std::min(order.size(), base + cfg.batch_size);
      std::map<std::string, double> grad;
      int used = 0;
      for (size_t oi = base; oi < stop; ++oi) {
        const MleItem& item = data[order[oi]];
        auto beam = parse(item.tokens, g, w, cfg.beam_size);
        size_t gold_at = beam.size();
        for (size_t b = 0; b < beam.size(); ++b) {
          if (print_sketch(beam[b].sketch) == gold_print[order[oi]]) {
            gold_at = b;
            break;
          }
        }
        if (gold_at == beam.size()) {
          if (epoch == 0) local.skipped_items++;
          continue;
        }
        std::vector<std::map<std::string, int>> feats(beam.size());
        for (size_t b = 0; b < beam.size(); ++b)
          feats[b] = extract_features(beam[b].derivation, item.tokens);
        obj_sum += mle_logprob(feats, gold_at, w, &grad);
        obj_n++;
        used++;
      }
      if (used > 0) {
        for (auto& [name, v] : grad) v /= used;
        sgd_step(w, grad, cfg.learning_rate, cfg.l2);
      }
    }
    local.epoch_objective.push_back(obj_n ? obj_sum / obj_n : 0.0);
  }
  if (stats) *stats = local;
  return w;
}

namespace {

struct SynthOutcome {
  bool correct = false;
  bool timed_out = false;
};

// Per-item memo: synthesis depends only on the sketch and the item's
// examples, not on the evolving weights, so outcomes persist across epochs.
struct MmlItemState {
  std::unordered_map<std::string, SynthOutcome> memo;
};

struct MmlItemResult {
  bool has_correct = false;
  double log_marginal = 0.0;
  std::map<std::string, double> grad;
  int fresh_timeouts = 0;
};

}  // namespace

Weights train_mml(const std::vector<MmlItem>& data, const TrainConfig& cfg,
                  const Grammar& g, const SynthConfig& scfg, MmlStats* stats,
                  const Weights* warm_start) {
  if (cfg.epochs < 1 || cfg.batch_size < 1 || cfg.beam_size < 1)
    throw std::invalid_argument("train_mml: bad config");
  Weights w = warm_start ? *warm_start : Weights{};
  MmlStats local;
  std::mt19937_64 rng(cfg.seed);

  std::vector<MmlItemState> state(data.size());
  std::mutex memo_mu;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    auto order = shuffled_order(data.size(), rng);
    double obj_sum = 0.0;
    int obj_n = 0;
    for (size_t base = 0; base < order.size(); base += cfg.batch_size) {
      size_t stop = std::min(order.size(), base + cfg.batch_size);
      std::vector<MmlItemResult> results(stop - base);
      parallel_for(stop - base, cfg.threads, [&](size_t slot) {
        size_t idx = order[base + slot];
        const MmlItem& item = data[idx];
        MmlItemState& st = state[idx];
        MmlItemResult out;

        auto beam = parse(item.tokens, g, w, cfg.beam_size);
        if (beam.empty()) {
          results[slot] = std::move(out);
          return;
        }
        std::vector<double> scores(beam.size());
        std::vector<std::map<std::string, int>> feats(beam.size());
        std::vector<char> correct(beam.size(), 0);
        for (size_t b = 0; b < beam.size(); ++b) {
          feats[b] = extract_features(beam[b].derivation, item.tokens);
          scores[b] = dot(w, feats[b]);
          std::string key = print_sketch(beam[b].sketch);
          SynthOutcome oc;
          bool cached = false;
          {
            std::lock_guard<std::mutex> lk(memo_mu);
            auto it = st.memo.find(key);
            if (it != st.memo.end()) {
              oc = it->second;
              cached = true;
            }
          }
          if (!cached) {
            try {
              auto res = synthesize(beam[b].sketch, item.examples, scfg);
              oc.timed_out = res.status == SynthStatus::Timeout;
              if (res.status == SynthStatus::Found)
                oc.correct = automata::equivalent(*res.program, item.gold);
            } catch (const automata::StateLimitError&) {
              oc.correct = false;
            } catch (const std::invalid_argument&) {
              oc.correct = false;  // contradictory or out-of-alphabet examples
            }
            if (oc.timed_out) out.fresh_timeouts++;
            std::lock_guard<std::mutex> lk(memo_mu);
            st.memo.emplace(std::move(key), oc);
          }
          correct[b] = oc.correct ? 1 : 0;
        }

        double lz = logsumexp(scores);
        std::vector<double> correct_scores;
        for (size_t b = 0; b < beam.size(); ++b)
          if (correct[b]) correct_scores.push_back(scores[b]);
        if (correct_scores.empty()) {
          results[slot] = std::move(out);
          return;
        }
        out.has_correct = true;
        double lzc = logsumexp(correct_scores);
        out.log_marginal = lzc - lz;
        for (size_t b = 0; b < beam.size(); ++b) {
          if (correct[b]) add_scaled(out.grad, feats[b], std::exp(scores[b] - lzc));
          add_scaled(out.grad, feats[b], -std::exp(scores[b] - lz));
        }
        results[slot] = std::move(out);
      });

      std::map<std::string, double> grad;
      int used = 0;
      for (auto& r : results) {
        local.synth_timeouts += r.fresh_timeouts;
        if (!r.has_correct) {
          if (epoch == 0) local.items_no_correct++;
          continue;
        }
        for (const auto& [name, v] : r.grad) grad[name] += v;
        obj_sum += r.log_marginal;
        obj_n++;
        used++;
      }
      if (used > 0) {
        for (auto& [name, v] : grad) v /= used;
        sgd_step(w, grad, cfg.learning_rate, cfg.l2);
      }
    }
    local.epoch_objective.push_back(obj_n ? obj_sum / obj_n : 0.0);
  }
  if (stats) *stats = local;
  return w;
}

}  // namespace resketch
