// Command-line front end: parse | synth | gen-examples | train | eval | run.
// Exit codes: 0 success, 1 failure outcome (unsolved, empty beam, exhausted
// generator), 2 usage or configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "resketch/automata.hpp"
#include "resketch/examplegen.hpp"
#include "resketch/grammar.hpp"
#include "resketch/learning.hpp"
#include "resketch/parser.hpp"
#include "resketch/pipeline.hpp"
#include "resketch/syntax.hpp"
#include "resketch/synth.hpp"
#include "resketch/weights.hpp"

namespace {

using nlohmann::ordered_json;
using namespace resketch;

struct GlobalOpts {
  std::string grammar = "data/grammar.rules";
  std::string lexicon = "data/lexicon.tsv";
  std::string weights;
  std::string profile_name = "turk";
  int beam = -1;
  int timeout_ms = -1;
  int depth = -1;
  int threads = -1;
  uint64_t seed = 0;
  std::string format = "text";
  std::string ranker = "score";
};

PipelineConfig make_config(const GlobalOpts& o) {
  PipelineConfig cfg = profile(o.profile_name);
  if (o.beam > 0) cfg.beam = o.beam;
  if (o.timeout_ms > 0) cfg.timeout_ms = o.timeout_ms;
  if (o.depth > 0) cfg.depth = o.depth;
  if (o.threads > 0) cfg.threads = o.threads;
  cfg.seed = o.seed;
  cfg.rank_max_coverage = o.ranker == "maxcov";
  return cfg;
}

SynthConfig make_synth_config(const PipelineConfig& cfg) {
  SynthConfig s;
  s.depth = cfg.depth;
  s.timeout_ms = cfg.timeout_ms;
  s.max_worklist = cfg.max_worklist;
  return s;
}

Grammar load_grammar_for(const GlobalOpts& o) {
  return load_grammar(o.grammar, o.lexicon);
}

Weights load_weights_for(const GlobalOpts& o) {
  return o.weights.empty() ? Weights{} : Weights::load(o.weights);
}

std::vector<Benchmark> load_data(const std::string& path) {
  LoadResult lr = load_jsonl(path);
  for (const auto& w : lr.warnings) std::cerr << "warning: " << w << "\n";
  return std::move(lr.benchmarks);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open " + out_path + " for writing");
  f << text;
  if (!text.empty() && text.back() != '\n') f << "\n";
}

int cmd_parse(const GlobalOpts& o, const std::string& description) {
  Grammar g = load_grammar_for(o);
  Weights w = load_weights_for(o);
  PipelineConfig cfg = make_config(o);
  std::vector<Token> tokens;
  try {
    tokens = tokenize(description);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  auto beam = parse(tokens, g, w, cfg.beam);
  if (cfg.rank_max_coverage) beam = max_coverage_rank(std::move(beam));
  if (o.format == "json") {
    ordered_json arr = ordered_json::array();
    for (const auto& p : beam) {
      ordered_json j;
      j["sketch"] = print_sketch(p.sketch);
      j["score"] = p.score;
      j["skipped"] = total_skipped(p.derivation);
      arr.push_back(std::move(j));
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    for (size_t i = 0; i < beam.size(); ++i)
      std::cout << i << "\t" << beam[i].score << "\t" << print_sketch(beam[i].sketch)
                << "\n";
  }
  return beam.empty() ? 1 : 0;
}

int cmd_synth(const GlobalOpts& o, const std::string& sketch_text,
              const std::vector<std::string>& pos, const std::vector<std::string>& neg,
              const std::string& examples_file, bool dot) {
  Sketch s = parse_sketch(sketch_text);
  Examples ex;
  ex.positives = pos;
  ex.negatives = neg;
  if (!examples_file.empty()) {
    std::ifstream f(examples_file);
    if (!f) throw std::runtime_error("cannot open " + examples_file);
    ordered_json j = ordered_json::parse(f);
    for (const auto& p : j.value("pos", std::vector<std::string>{}))
      ex.positives.push_back(p);
    for (const auto& n : j.value("neg", std::vector<std::string>{}))
      ex.negatives.push_back(n);
  }
  SynthConfig scfg = make_synth_config(make_config(o));
  SynthResult res = synthesize(s, ex, scfg);
  const char* status = res.status == SynthStatus::Found     ? "found"
                       : res.status == SynthStatus::Timeout ? "timeout"
                                                            : "not_found";
  if (dot && res.program) {
    std::cout << automata::to_dot(automata::build_dfa(*res.program));
    return 0;
  }
  if (o.format == "json") {
    ordered_json j;
    j["status"] = status;
    j["regex"] = res.program ? ordered_json(print_regex(*res.program)) : ordered_json(nullptr);
    j["expanded"] = res.stats.expanded;
    std::cout << j.dump(2) << "\n";
  } else if (res.program) {
    std::cout << print_regex(*res.program) << "\n";
  } else {
    std::cout << status << "\n";
  }
  return res.status == SynthStatus::Found ? 0 : 1;
}

int cmd_gen(const GlobalOpts& o, const std::string& regex_text, const std::string& data,
            const std::string& out, int n_pos, int n_neg, int visit_limit, bool force) {
  if (!regex_text.empty()) {
    Regex r = parse_regex(regex_text);
    Examples ex;
    try {
      ex = generate_examples(r, n_pos, n_neg, visit_limit, o.seed);
    } catch (const EmptySideError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
    if (o.format == "json") {
      ordered_json j;
      j["pos"] = ex.positives;
      j["neg"] = ex.negatives;
      j["pos_exhausted"] = ex.positives_exhausted;
      j["neg_exhausted"] = ex.negatives_exhausted;
      std::cout << j.dump(2) << "\n";
    } else {
      for (const auto& p : ex.positives) std::cout << "+ " << p << "\n";
      for (const auto& n : ex.negatives) std::cout << "- " << n << "\n";
    }
    return 0;
  }

  // Dataset mode: fill in examples for items that have none (or all, --force).
  auto benchmarks = load_data(data);
  uint64_t idx = 0;
  int filled = 0, skipped = 0;
  for (auto& b : benchmarks) {
    uint64_t item_seed = o.seed + idx++;
    if (!force && (!b.positives.empty() || !b.negatives.empty())) continue;
    if (!b.gold_regex) {
      std::cerr << "warning: " << b.id << ": no gold regex, cannot generate\n";
      skipped++;
      continue;
    }
    try {
      Examples ex = generate_examples(*b.gold_regex, n_pos, n_neg, visit_limit, item_seed);
      b.positives = std::move(ex.positives);
      b.negatives = std::move(ex.negatives);
      filled++;
    } catch (const std::exception& e) {
      std::cerr << "warning: " << b.id << ": " << e.what() << "\n";
      skipped++;
    }
  }
  save_jsonl(out.empty() ? data : out, benchmarks);
  std::cerr << "filled " << filled << " items, skipped " << skipped << "\n";
  return 0;
}

int cmd_train(const GlobalOpts& o, const std::string& data, const std::string& objective,
              const std::string& out, const std::string& log_path,
              const std::string& warm_start_path, int epochs, int batch_size,
              std::optional<double> lr) {
  Grammar g = load_grammar_for(o);
  PipelineConfig cfg = make_config(o);
  auto benchmarks = load_data(data);

  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = batch_size;
  tc.beam_size = o.beam > 0 ? o.beam : 200;
  tc.seed = o.seed;
  tc.threads = cfg.threads;
  tc.objective =
      objective == "mml" ? TrainConfig::Objective::MML : TrainConfig::Objective::MLE;
  tc.learning_rate = lr ? *lr : (tc.objective == TrainConfig::Objective::MML ? 0.01 : 0.1);

  Weights w;
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path);
    if (!log) throw std::runtime_error("cannot open " + log_path + " for writing");
  }

  if (tc.objective == TrainConfig::Objective::MLE) {
    std::vector<MleItem> items;
    for (const auto& b : benchmarks) {
      std::optional<Sketch> gold = b.gold_sketch;
      if (!gold && b.gold_regex) gold = pseudogold_sketch(*b.gold_regex);
      if (!gold) {
        std::cerr << "warning: " << b.id << ": no gold sketch or regex, skipped\n";
        continue;
      }
      try {
        items.push_back({tokenize(b.description), *gold});
      } catch (const std::invalid_argument& e) {
        std::cerr << "warning: " << b.id << ": " << e.what() << "\n";
      }
    }
    if (items.empty()) {
      std::cerr << "error: no trainable items\n";
      return 1;
    }
    MleStats stats;
    w = train_mle(items, tc, g, &stats);
    if (log) {
      log << "epoch,objective,gold_missing\n";
      for (size_t e = 0; e < stats.epoch_objective.size(); ++e)
        log << e << "," << stats.epoch_objective[e] << ","
            << (e == 0 ? stats.skipped_items : 0) << "\n";
    }
    std::cerr << "trained on " << items.size() << " items; " << stats.skipped_items
              << " had no derivable gold; final objective "
              << (stats.epoch_objective.empty() ? 0.0 : stats.epoch_objective.back())
              << "\n";
  } else {
    std::vector<MmlItem> items;
    for (const auto& b : benchmarks) {
      if (!b.gold_regex) {
        std::cerr << "warning: " << b.id << ": no gold regex, skipped\n";
        continue;
      }
      if (b.positives.empty() && b.negatives.empty()) {
        std::cerr << "warning: " << b.id << ": no examples, skipped\n";
        continue;
      }
      Examples ex;
      ex.positives = b.positives;
      ex.negatives = b.negatives;
      try {
        items.push_back({tokenize(b.description), *b.gold_regex, std::move(ex)});
      } catch (const std::invalid_argument& e) {
        std::cerr << "warning: " << b.id << ": " << e.what() << "\n";
      }
    }
    if (items.empty()) {
      std::cerr << "error: no trainable items\n";
      return 1;
    }
    std::optional<Weights> warm;
    if (!warm_start_path.empty()) warm = Weights::load(warm_start_path);
    MmlStats stats;
    w = train_mml(items, tc, g, make_synth_config(cfg), &stats,
                  warm ? &*warm : nullptr);
    if (log) {
      log << "epoch,objective,synth_timeouts,no_correct\n";
      for (size_t e = 0; e < stats.epoch_objective.size(); ++e)
        log << e << "," << stats.epoch_objective[e] << ","
            << (e == 0 ? stats.synth_timeouts : 0) << ","
            << (e == 0 ? stats.items_no_correct : 0) << "\n";
    }
    std::cerr << "trained on " << items.size() << " items; " << stats.items_no_correct
              << " had no correct sketch in the first epoch; " << stats.synth_timeouts
              << " synthesis timeouts\n";
  }

  w.save(out);
  std::cerr << "weights written to " << out << "\n";
  return 0;
}

int cmd_eval(const GlobalOpts& o, const std::string& data, int topn, bool with_times,
             const std::string& out) {
  Grammar g = load_grammar_for(o);
  Weights w = load_weights_for(o);
  PipelineConfig cfg = make_config(o);
  auto benchmarks = load_data(data);
  EvalReport rep = evaluate(benchmarks, g, w, cfg, topn);
  emit(o.format == "json" ? rep.to_json(with_times) : rep.to_text(), out);
  return 0;
}

int cmd_run(const GlobalOpts& o, const std::string& data, const std::string& id,
            bool with_times) {
  Grammar g = load_grammar_for(o);
  Weights w = load_weights_for(o);
  PipelineConfig cfg = make_config(o);
  auto benchmarks = load_data(data);
  if (benchmarks.empty()) throw std::runtime_error(data + ": no benchmarks");
  const Benchmark* pick = &benchmarks.front();
  if (!id.empty()) {
    pick = nullptr;
    for (const auto& b : benchmarks)
      if (b.id == id) {
        pick = &b;
        break;
      }
    if (!pick) throw std::runtime_error("no benchmark with id " + id);
  }
  RunOutcome outcome = run_benchmark(*pick, g, w, cfg);
  std::cout << (o.format == "json" ? run_outcome_json(outcome, with_times)
                                   : run_outcome_text(outcome));
  return outcome.solved ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regex synthesis from natural-language descriptions and examples"};
  app.require_subcommand(1);

  GlobalOpts o;
  app.add_option("--grammar", o.grammar, "Grammar rules file")->capture_default_str();
  app.add_option("--lexicon", o.lexicon, "Lexicon file")->capture_default_str();
  app.add_option("--weights", o.weights, "Weight vector file (absent = zero weights)");
  app.add_option("--profile", o.profile_name, "Config profile: turk | stackoverflow")
      ->check(CLI::IsMember({"turk", "stackoverflow"}))
      ->capture_default_str();
  app.add_option("--beam", o.beam, "Beam size override");
  app.add_option("--timeout-ms", o.timeout_ms, "Synthesis timeout override (ms)");
  app.add_option("--depth", o.depth, "Synthesis depth override");
  app.add_option("--threads", o.threads, "Worker thread count override");
  app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  app.add_option("--ranker", o.ranker, "Beam ranking: score | maxcov")
      ->check(CLI::IsMember({"score", "maxcov"}))
      ->capture_default_str();

  std::string description;
  auto* sub_parse = app.add_subcommand("parse", "Parse a description into k-best sketches");
  sub_parse->fallthrough();
  sub_parse->add_option("description", description, "Natural-language description")
      ->required();

  std::string sketch_text, examples_file;
  std::vector<std::string> pos, neg;
  bool dot = false;
  auto* sub_synth = app.add_subcommand("synth", "Complete a sketch against examples");
  sub_synth->fallthrough();
  sub_synth->add_option("sketch", sketch_text, "Sketch in textual syntax")->required();
  sub_synth->add_option("--pos", pos, "Positive example (repeatable)");
  sub_synth->add_option("--neg", neg, "Negative example (repeatable)");
  sub_synth->add_option("--examples", examples_file, "JSON file with pos/neg arrays");
  sub_synth->add_flag("--dot", dot, "Print the result DFA in DOT format");

  std::string gen_regex, gen_data, gen_out;
  int n_pos = 10, n_neg = 10, visit_limit = 2;
  bool gen_force = false;
  auto* sub_gen = app.add_subcommand("gen-examples", "Sample examples from a regex");
  sub_gen->fallthrough();
  sub_gen->add_option("regex", gen_regex, "Regex in textual syntax");
  sub_gen->add_option("--data", gen_data, "Dataset mode: fill examples in a JSONL file");
  sub_gen->add_option("--out", gen_out, "Dataset mode output path (default: --data)");
  sub_gen->add_option("--pos-count", n_pos, "Positive examples per item")
      ->capture_default_str();
  sub_gen->add_option("--neg-count", n_neg, "Negative examples per item")
      ->capture_default_str();
  sub_gen->add_option("--visit-limit", visit_limit, "Per-walk state revisit budget")
      ->capture_default_str();
  sub_gen->add_flag("--force", gen_force, "Regenerate even when examples exist");

  std::string train_data, objective = "mle", train_out = "weights.tsv", train_log,
              warm_start;
  int epochs = 5, batch_size = 50;
  double lr_val = 0.0;
  auto* sub_train = app.add_subcommand("train", "Train parser weights");
  sub_train->fallthrough();
  sub_train->add_option("--data", train_data, "Training dataset (JSONL)")->required();
  sub_train->add_option("--objective", objective, "mle | mml")
      ->check(CLI::IsMember({"mle", "mml"}))
      ->capture_default_str();
  sub_train->add_option("--out", train_out, "Output weights file")->capture_default_str();
  sub_train->add_option("--log", train_log, "Training log (CSV)");
  sub_train->add_option("--warm-start", warm_start, "Initial weights file (MML)");
  sub_train->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
  sub_train->add_option("--batch-size", batch_size, "Minibatch size")->capture_default_str();
  auto* lr_opt = sub_train->add_option("--lr", lr_val, "Learning rate (default 0.1 MLE, 0.01 MML)");

  std::string eval_data, eval_out;
  int topn = 1;
  bool with_times = false;
  auto* sub_eval = app.add_subcommand("eval", "Evaluate a dataset end to end");
  sub_eval->fallthrough();
  sub_eval->add_option("--data", eval_data, "Dataset (JSONL)")->required();
  sub_eval->add_option("--topn", topn, "Top-N accuracy cutoff")->capture_default_str();
  sub_eval->add_flag("--with-times", with_times, "Include wall-clock timings in reports");
  sub_eval->add_option("--out", eval_out, "Write the report here instead of stdout");

  std::string run_data, run_id;
  bool run_times = false;
  auto* sub_run = app.add_subcommand("run", "Run a single benchmark");
  sub_run->fallthrough();
  sub_run->add_option("--data", run_data, "Dataset (JSONL)")->required();
  sub_run->add_option("--id", run_id, "Benchmark id (default: first in file)");
  sub_run->add_flag("--with-times", run_times, "Include wall-clock timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(sub_parse)) return cmd_parse(o, description);
    if (app.got_subcommand(sub_synth))
      return cmd_synth(o, sketch_text, pos, neg, examples_file, dot);
    if (app.got_subcommand(sub_gen)) {
      if (gen_regex.empty() == gen_data.empty()) {
        std::cerr << "error: gen-examples needs a regex argument or --data, not both\n";
        return 2;
      }
      return cmd_gen(o, gen_regex, gen_data, gen_out, n_pos, n_neg, visit_limit,
                     gen_force);
    }
    if (app.got_subcommand(sub_train))
      return cmd_train(o, train_data, objective, train_out, train_log, warm_start,
                       epochs, batch_size,
                       lr_opt->count() ? std::optional<double>(lr_val) : std::nullopt);
    if (app.got_subcommand(sub_eval))
      return cmd_eval(o, eval_data, topn, with_times, eval_out);
    if (app.got_subcommand(sub_run)) return cmd_run(o, run_data, run_id, run_times);
  } catch (const ParseError& e) {  // textual regex/sketch syntax
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GrammarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
