#include "resketch/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "resketch/automata.hpp"
#include "resketch/chars.hpp"
#include "resketch/learning.hpp"
#include "resketch/parallel.hpp"
#include "resketch/parser.hpp"
#include "resketch/syntax.hpp"

namespace resketch {

namespace {

using ordered_json = nlohmann::ordered_json;

int64_t ms_since(std::chrono::steady_clock::time_point t0) {
  auto d = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration_cast<std::chrono::milliseconds>(d).count();
}

std::optional<std::string> bad_alphabet_char(const std::vector<std::string>& strs) {
  for (const auto& s : strs)
    for (char c : s)
      if (!in_alphabet(c)) {
        std::ostringstream os;
        os << "char 0x" << std::hex << (int)(unsigned char)c << " in \"" << s << "\"";
        return os.str();
      }
  return std::nullopt;
}

const char* status_name(SynthStatus s) {
  switch (s) {
    case SynthStatus::Found: return "found";
    case SynthStatus::NotFound: return "not_found";
    case SynthStatus::Timeout: return "timeout";
  }
  return "?";
}

ordered_json item_to_json(const RunOutcome& it, bool with_times) {
  ordered_json ji;
  ji["id"] = it.id;
  ji["solved"] = it.solved;
  ji["rank"] = it.rank;
  ji["regex"] = it.regex ? ordered_json(print_regex(*it.regex)) : ordered_json(nullptr);
  ji["contradictory"] = it.contradictory;
  ji["empty_beam"] = it.empty_beam;
  ji["sketches"] = ordered_json::array();
  for (const auto& so : it.sketches) {
    ordered_json js;
    js["sketch"] = print_sketch(so.sketch);
    js["status"] = status_name(so.status);
    js["regex"] = so.program ? ordered_json(print_regex(*so.program)) : ordered_json(nullptr);
    js["equivalent_gold"] = so.equivalent_gold;
    if (with_times) js["millis"] = so.millis;
    ji["sketches"].push_back(std::move(js));
  }
  if (with_times) ji["millis"] = it.total_millis;
  return ji;
}

}  // namespace

LoadResult load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  LoadResult out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json j;
    try {
      j = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    Benchmark b;
    try {
      b.id = j.at("id").get<std::string>();
      b.description = j.at("description").get<std::string>();
      if (j.contains("pos")) b.positives = j["pos"].get<std::vector<std::string>>();
      if (j.contains("neg")) b.negatives = j["neg"].get<std::vector<std::string>>();
      if (j.contains("gold_regex") && !j["gold_regex"].is_null())
        b.gold_regex = parse_regex(j["gold_regex"].get<std::string>());
      if (j.contains("gold_sketch") && !j["gold_sketch"].is_null())
        b.gold_sketch = parse_sketch(j["gold_sketch"].get<std::string>());
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }

    if (auto bad = bad_alphabet_char(b.positives))
      out.warnings.push_back(b.id + ": positive example outside alphabet: " + *bad);
    if (auto bad = bad_alphabet_char(b.negatives))
      out.warnings.push_back(b.id + ": negative example outside alphabet: " + *bad);
    if (b.gold_regex) {
      try {
        automata::Dfa d = automata::build_dfa(*b.gold_regex);
        for (const auto& p : b.positives)
          if (!d.run(p))
            out.warnings.push_back(b.id + ": gold regex rejects positive \"" + p + "\"");
        for (const auto& n : b.negatives)
          if (d.run(n))
            out.warnings.push_back(b.id + ": gold regex accepts negative \"" + n + "\"");
      } catch (const std::exception& e) {
        out.warnings.push_back(b.id + ": gold regex not validated: " + e.what());
      }
    }
    out.benchmarks.push_back(std::move(b));
  }
  return out;
}

void save_jsonl(const std::string& path, const std::vector<Benchmark>& data) {
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& b : data) {
    ordered_json j;
    j["id"] = b.id;
    j["description"] = b.description;
    if (b.gold_regex) j["gold_regex"] = print_regex(*b.gold_regex);
    j["pos"] = b.positives;
    j["neg"] = b.negatives;
    if (b.gold_sketch) j["gold_sketch"] = print_sketch(*b.gold_sketch);
    outf << j.dump() << "\n";
  }
  if (!outf) throw std::runtime_error("write failed: " + path);
}

PipelineConfig profile(const std::string& name) {
  PipelineConfig cfg;
  if (name == "turk") return cfg;
  if (name == "stackoverflow") {
    cfg.beam = 25;
    cfg.timeout_ms = 30000;
    cfg.depth = 6;
    return cfg;
  }
  throw std::invalid_argument("unknown profile: " + name);
}

RunOutcome run_benchmark(const Benchmark& b, const Grammar& g, const Weights& w,
                         const PipelineConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  RunOutcome out;
  out.id = b.id;

  std::set<std::string> pos(b.positives.begin(), b.positives.end());
  for (const auto& n : b.negatives)
    if (pos.count(n)) {
      out.contradictory = true;
      out.total_millis = ms_since(t0);
      return out;
    }

  std::vector<Sketch> sketches;
  try {
    auto tokens = tokenize(b.description);
    auto beam = parse(tokens, g, w, cfg.beam);
    if (cfg.rank_max_coverage) beam = max_coverage_rank(std::move(beam));
    for (const auto& p : beam) sketches.push_back(p.sketch);
  } catch (const std::invalid_argument&) {
    // Untokenizable description; fall through to the bare-hole baseline.
  }
  if (sketches.empty()) {
    out.empty_beam = true;
    sketches.push_back(hole({}));
  }

  Examples ex;
  ex.positives = b.positives;
  ex.negatives = b.negatives;
  SynthConfig scfg;
  scfg.depth = cfg.depth;
  scfg.timeout_ms = cfg.timeout_ms;
  scfg.max_worklist = cfg.max_worklist;

  out.sketches.reserve(sketches.size());
  for (const Sketch& s : sketches) out.sketches.push_back(SketchOutcome{s});
  parallel_for(sketches.size(), cfg.threads, [&](size_t i) {
    SketchOutcome& so = out.sketches[i];
    auto ts = std::chrono::steady_clock::now();
    try {
      auto res = synthesize(sketches[i], ex, scfg);
      so.status = res.status;
      if (res.status == SynthStatus::Found) so.program = res.program;
    } catch (const std::exception&) {
      so.status = SynthStatus::NotFound;
    }
    if (so.program && b.gold_regex) {
      try {
        so.equivalent_gold = automata::equivalent(*so.program, *b.gold_regex);
      } catch (const automata::StateLimitError&) {
        so.equivalent_gold = false;
      }
    }
    so.millis = ms_since(ts);
  });

  for (size_t i = 0; i < out.sketches.size(); ++i) {
    if (out.sketches[i].status == SynthStatus::Found) {
      out.solved = true;
      out.rank = (int)i;
      out.regex = out.sketches[i].program;
      break;
    }
  }
  out.total_millis = ms_since(t0);
  return out;
}

EvalReport evaluate(const std::vector<Benchmark>& data, const Grammar& g,
                    const Weights& w, const PipelineConfig& cfg, int topn) {
  if (topn < 1) throw std::invalid_argument("evaluate: topn must be >= 1");
  EvalReport rep;
  rep.total = (int)data.size();
  rep.topn = topn;
  rep.items.resize(data.size());

  PipelineConfig item_cfg = cfg;
  item_cfg.threads = 1;  // the pool is spent across items, not within them
  parallel_for(data.size(), cfg.threads, [&](size_t i) {
    rep.items[i] = run_benchmark(data[i], g, w, item_cfg);
  });

  int solved = 0, semantic = 0, topn_hits = 0;
  for (const auto& it : rep.items) {
    if (it.solved) solved++;
    if (it.solved && it.rank >= 0 && it.sketches[it.rank].equivalent_gold) semantic++;
    int n = std::min<int>(topn, (int)it.sketches.size());
    for (int k = 0; k < n; ++k)
      if (it.sketches[k].equivalent_gold) {
        topn_hits++;
        break;
      }
  }
  if (rep.total > 0) {
    rep.consistency = (double)solved / rep.total;
    rep.semantic_accuracy = (double)semantic / rep.total;
    rep.topn_accuracy = (double)topn_hits / rep.total;
  }
  return rep;
}

std::string run_outcome_json(const RunOutcome& it, bool with_times) {
  return item_to_json(it, with_times).dump(2);
}

std::string run_outcome_text(const RunOutcome& it) {
  std::ostringstream os;
  os << it.id << ": ";
  if (it.contradictory)
    os << "contradictory examples\n";
  else if (it.solved)
    os << "rank " << it.rank << "  " << print_regex(*it.regex) << "\n";
  else
    os << "unsolved\n";
  if (it.empty_beam) os << "  (empty beam; bare-hole fallback)\n";
  for (size_t i = 0; i < it.sketches.size(); ++i) {
    const auto& so = it.sketches[i];
    os << "  [" << i << "] " << print_sketch(so.sketch) << "  " << status_name(so.status);
    if (so.program) os << "  " << print_regex(*so.program);
    if (so.equivalent_gold) os << "  (= gold)";
    os << "\n";
  }
  return os.str();
}

std::string EvalReport::to_json(bool with_times) const {
  ordered_json j;
  j["total"] = total;
  j["semantic_accuracy"] = semantic_accuracy;
  j["consistency"] = consistency;
  j["topn"] = topn;
  j["topn_accuracy"] = topn_accuracy;
  j["items"] = ordered_json::array();
  for (const auto& it : items) j["items"].push_back(item_to_json(it, with_times));
  return j.dump(2);
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << "items: " << total << "\n";
  os << "semantic accuracy: " << semantic_accuracy << "\n";
  os << "consistency: " << consistency << "\n";
  os << "top-" << topn << " accuracy: " << topn_accuracy << "\n";
  for (const auto& it : items) {
    os << "  " << it.id << ": ";
    if (it.contradictory)
      os << "contradictory examples";
    else if (it.solved)
      os << "rank " << it.rank << "  " << print_regex(*it.regex)
         << (it.rank >= 0 && it.sketches[it.rank].equivalent_gold ? "  (= gold)" : "");
    else
      os << "unsolved";
    if (it.empty_beam) os << "  [empty beam]";
    os << "\n";
  }
  return os.str();
}

}  // namespace resketch
