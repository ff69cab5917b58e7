#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "resketch/pipeline.hpp"
#include "resketch/syntax.hpp"

using namespace resketch;
namespace fs = std::filesystem;

namespace {

Grammar mini_grammar() {
  return parse_grammar(
      "$CC -> $PROGRAM [IdentityFn arg:0]\n"
      "$INT $CC -> $PROGRAM [RepeatFn arg:1 arg:0]\n"
      "$PROGRAM -> $SKETCH [UnarySketchFn arg:0]\n"
      "$SKETCH -> $ROOT [IdentityFn arg:0]\n",
      "number\t$CC\t<num>\n"
      "letter\t$CC\t<let>\n");
}

Benchmark bench(std::string id, std::string desc, std::vector<std::string> pos,
                std::vector<std::string> neg) {
  Benchmark b;
  b.id = std::move(id);
  b.description = std::move(desc);
  b.positives = std::move(pos);
  b.negatives = std::move(neg);
  return b;
}

fs::path tmp_file(const char* name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("profiles carry the published budgets") {
  PipelineConfig turk = profile("turk");
  CHECK(turk.beam == 20);
  CHECK(turk.timeout_ms == 2000);
  CHECK(turk.depth == 4);
  CHECK(turk.threads == 10);

  PipelineConfig so = profile("stackoverflow");
  CHECK(so.beam == 25);
  CHECK(so.timeout_ms == 30000);
  CHECK(so.depth == 6);

  CHECK_THROWS_AS(profile("mturk"), std::invalid_argument);
}

TEST_CASE("load_jsonl reports data problems as warnings, not failures") {
  fs::path p = tmp_file("resketch_test_warnings.jsonl");
  {
    std::ofstream out(p);
    out << R"({"id":"a","description":"d","gold_regex":"<num>","pos":["ab"],"neg":[]})" << "\n";
    out << "\n";  // blank lines are skipped
    out << R"({"id":"b","description":"d","pos":["x\u0001"],"neg":[]})" << "\n";
    out << R"({"id":"c","description":"d","gold_regex":"<num>","pos":["5"],"neg":["7"]})" << "\n";
  }
  LoadResult res = load_jsonl(p.string());
  fs::remove(p);

  REQUIRE(res.benchmarks.size() == 3);
  REQUIRE(res.warnings.size() == 3);
  CHECK(res.warnings[0].find("a: gold regex rejects positive \"ab\"") != std::string::npos);
  CHECK(res.warnings[1].find("outside alphabet") != std::string::npos);
  CHECK(res.warnings[1].find("0x1") != std::string::npos);
  CHECK(res.warnings[2].find("accepts negative \"7\"") != std::string::npos);

  REQUIRE(res.benchmarks[0].gold_regex.has_value());
  CHECK(print_regex(*res.benchmarks[0].gold_regex) == "<num>");
  CHECK(res.benchmarks[1].positives == std::vector<std::string>{"x\x01"});
}

TEST_CASE("load_jsonl rejects malformed lines with their location") {
  fs::path p = tmp_file("resketch_test_malformed.jsonl");
  {
    std::ofstream out(p);
    out << R"({"id":"ok","description":"d"})" << "\n";
    out << "{oops\n";
  }
  bool threw = false;
  try {
    load_jsonl(p.string());
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  CHECK(threw);
  fs::remove(p);

  CHECK_THROWS_AS(load_jsonl("/nonexistent/nowhere.jsonl"), std::runtime_error);

  // A gold field that does not parse is a failure too: the line's location
  // must be reported rather than the benchmark silently dropped.
  fs::path q = tmp_file("resketch_test_badgold.jsonl");
  {
    std::ofstream out(q);
    out << R"x({"id":"a","description":"d","gold_regex":"Bogus(<num>)"})x" << "\n";
  }
  threw = false;
  try {
    load_jsonl(q.string());
  } catch (const std::runtime_error& e) {
    threw = true;
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
  CHECK(threw);
  fs::remove(q);
}

TEST_CASE("save_jsonl then load_jsonl is lossless") {
  Benchmark b1 = bench("r1", "anything at all", {"a\"b\\c", ""}, {});
  b1.gold_regex = star(cls(CharClass::Any));
  b1.gold_sketch = hole({cls(CharClass::Num)});
  Benchmark b2 = bench("r2", "two digits", {"12"}, {"1", "123"});

  fs::path p = tmp_file("resketch_test_roundtrip.jsonl");
  save_jsonl(p.string(), {b1, b2});
  LoadResult res = load_jsonl(p.string());
  fs::remove(p);

  CHECK(res.warnings.empty());
  REQUIRE(res.benchmarks.size() == 2);
  const Benchmark& c1 = res.benchmarks[0];
  CHECK(c1.id == "r1");
  CHECK(c1.description == "anything at all");
  CHECK(c1.positives == b1.positives);
  CHECK(c1.negatives == b1.negatives);
  REQUIRE(c1.gold_regex.has_value());
  CHECK(print_regex(*c1.gold_regex) == "KleeneStar(<any>)");
  REQUIRE(c1.gold_sketch.has_value());
  CHECK(print_sketch(*c1.gold_sketch) == "?{<num>}");
  const Benchmark& c2 = res.benchmarks[1];
  CHECK(!c2.gold_regex.has_value());
  CHECK(!c2.gold_sketch.has_value());
  CHECK(c2.negatives == b2.negatives);
}

TEST_CASE("run_benchmark flags contradictory examples and stops") {
  Grammar g = mini_grammar();
  Weights w;
  PipelineConfig cfg;
  cfg.threads = 1;
  Benchmark b = bench("x", "3 numbers", {"x", "y"}, {"y"});
  RunOutcome out = run_benchmark(b, g, w, cfg);
  CHECK(out.contradictory);
  CHECK(!out.solved);
  CHECK(out.rank == -1);
  CHECK(out.sketches.empty());
  CHECK(run_outcome_text(out).find("contradictory") != std::string::npos);
}

TEST_CASE("run_benchmark falls back to a bare hole when nothing parses") {
  Grammar g = mini_grammar();
  Weights w;
  PipelineConfig cfg;
  cfg.threads = 1;
  cfg.depth = 2;

  // No lexicon hits at all, so the beam is empty and the examples alone
  // must carry the search.
  Benchmark b = bench("f1", "qwerty zzz", {"5"}, {"a"});
  RunOutcome out = run_benchmark(b, g, w, cfg);
  CHECK(out.empty_beam);
  REQUIRE(out.solved);
  CHECK(out.rank == 0);
  REQUIRE(out.sketches.size() == 1);
  CHECK(print_sketch(out.sketches[0].sketch) == "?{}");
  CHECK(print_regex(*out.regex) == "<num>");

  // An untokenizable description (unbalanced quote) takes the same path.
  Benchmark b2 = bench("f2", "say \"oops", {"5"}, {"a"});
  RunOutcome out2 = run_benchmark(b2, g, w, cfg);
  CHECK(out2.empty_beam);
  CHECK(out2.solved);
}

TEST_CASE("rank is the first beam index whose synthesis succeeds") {
  Grammar g = mini_grammar();
  Weights w;
  PipelineConfig cfg;
  cfg.threads = 2;
  cfg.depth = 1;  // starves the Repeat reading: its completions are all too deep

  Benchmark b = bench("rk", "3 numbers", {"7"}, {"a"});
  b.gold_regex = cls(CharClass::Num);
  RunOutcome out = run_benchmark(b, g, w, cfg);

  REQUIRE(out.sketches.size() == 2);
  CHECK(print_sketch(out.sketches[0].sketch) == "?{Repeat(<num>,3)}");
  CHECK(out.sketches[0].status == SynthStatus::NotFound);
  CHECK(out.sketches[1].status == SynthStatus::Found);
  REQUIRE(out.solved);
  CHECK(out.rank == 1);
  CHECK(print_regex(*out.regex) == "<num>");
  CHECK(out.sketches[1].equivalent_gold);

  std::string text = run_outcome_text(out);
  CHECK(text.find("rank 1") != std::string::npos);
  CHECK(text.find("(= gold)") != std::string::npos);
  CHECK(text.find("not_found") != std::string::npos);
}

TEST_CASE("evaluate scores a fully solvable dataset at 1.0") {
  Grammar g = mini_grammar();
  Weights w;
  PipelineConfig cfg;
  cfg.threads = 2;
  cfg.depth = 2;

  std::vector<Benchmark> data;
  data.push_back(bench("e1", "3 numbers", {"123", "456"}, {"12", "1234", ""}));
  data.back().gold_regex = repeat(cls(CharClass::Num), 3);
  data.push_back(bench("e2", "2 letters", {"AB"}, {"A"}));
  data.back().gold_regex = repeat(cls(CharClass::Let), 2);
  data.push_back(bench("e3", "letters", {"x"}, {"5"}));
  data.back().gold_regex = cls(CharClass::Let);

  EvalReport rep = evaluate(data, g, w, cfg);
  CHECK(rep.total == 3);
  CHECK(rep.consistency == doctest::Approx(1.0));
  CHECK(rep.semantic_accuracy == doctest::Approx(1.0));
  CHECK(rep.topn_accuracy == doctest::Approx(1.0));
  REQUIRE(rep.items.size() == 3);
  CHECK(rep.items[0].id == "e1");  // report preserves dataset order
  for (const auto& it : rep.items) CHECK(it.rank == 0);

  CHECK_THROWS_AS(evaluate(data, g, w, cfg, 0), std::invalid_argument);
}

TEST_CASE("topn accuracy is monotone in n") {
  Grammar g = mini_grammar();
  Weights w;
  PipelineConfig cfg;
  cfg.threads = 1;
  cfg.depth = 3;

  // Both beam entries synthesize; only the second lands on this (contrarian)
  // gold, so top-1 misses it and top-2 hits it.
  std::vector<Benchmark> data;
  data.push_back(bench("t1", "2 letters", {"AB"}, {"A"}));
  data.back().gold_regex = negate(cls(CharClass::Let));

  EvalReport top1 = evaluate(data, g, w, cfg, 1);
  CHECK(top1.consistency == doctest::Approx(1.0));
  CHECK(top1.semantic_accuracy == doctest::Approx(0.0));
  CHECK(top1.topn_accuracy == doctest::Approx(0.0));

  EvalReport top2 = evaluate(data, g, w, cfg, 2);
  CHECK(top2.topn == 2);
  CHECK(top2.topn_accuracy == doctest::Approx(1.0));
  REQUIRE(top2.items.size() == 1);
  REQUIRE(top2.items[0].sketches.size() == 2);
  CHECK(print_regex(*top2.items[0].sketches[1].program) == "Not(<let>)");
}

TEST_CASE("reports without timings are byte-stable across runs and threads") {
  Grammar g = mini_grammar();
  Weights w;

  std::vector<Benchmark> data;
  data.push_back(bench("s1", "3 numbers", {"123"}, {"12"}));
  data.back().gold_regex = repeat(cls(CharClass::Num), 3);
  data.push_back(bench("s2", "letters", {"q"}, {"4"}));

  PipelineConfig c1;
  c1.threads = 1;
  c1.depth = 2;
  PipelineConfig c4 = c1;
  c4.threads = 4;

  std::string j1 = evaluate(data, g, w, c1).to_json();
  std::string j1b = evaluate(data, g, w, c1).to_json();
  std::string j4 = evaluate(data, g, w, c4).to_json();
  CHECK(j1 == j1b);
  CHECK(j1 == j4);
  CHECK(j1.find("millis") == std::string::npos);

  RunOutcome one = run_benchmark(data[0], g, w, c1);
  std::string oj = run_outcome_json(one);
  CHECK(oj == run_outcome_json(run_benchmark(data[0], g, w, c4)));
  CHECK(oj.find("millis") == std::string::npos);
  CHECK(run_outcome_json(one, true).find("millis") != std::string::npos);
}
