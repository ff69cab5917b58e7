#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <string>
#include <vector>

#include "resketch/parser.hpp"
#include "resketch/syntax.hpp"

using namespace resketch;

#ifndef RESKETCH_DATA_DIR
#error "tests need RESKETCH_DATA_DIR pointing at the shipped grammar files"
#endif

namespace {

// Minimal repetition grammar; enough to exercise spans, gaps, and closure.
Grammar mini_grammar() {
  return parse_grammar(
      "$CC -> $PROGRAM [IdentityFn arg:0]\n"
      "$INT $CC -> $PROGRAM [RepeatFn arg:1 arg:0]\n"
      "$PROGRAM -> $SKETCH [UnarySketchFn arg:0]\n"
      "$SKETCH -> $ROOT [IdentityFn arg:0]\n",
      "number\t$CC\t<num>\n"
      "letter\t$CC\t<let>\n"
      "capital\t$CC\t<cap>\n");
}

std::vector<std::string> prints(const std::vector<ParseOutput>& beam) {
  std::vector<std::string> out;
  for (const ParseOutput& p : beam) out.push_back(print_sketch(p.sketch));
  return out;
}

std::shared_ptr<Derivation> leaf_deriv(std::string rule_id, int begin, int end) {
  auto d = std::make_shared<Derivation>();
  d->rule_id = std::move(rule_id);
  d->begin = begin;
  d->end = end;
  return d;
}

}  // namespace

TEST_CASE("feature templates on a lexical derivation") {
  std::vector<Token> toks = tokenize("digit");
  std::map<std::string, int> f = extract_features(leaf_deriv("lex:num", 0, 1), toks);
  std::map<std::string, int> want = {{"rule:lex:num", 1}, {"rt:lex:num:digit", 1}};
  CHECK(f == want);
}

TEST_CASE("feature templates abstract Int and Const tokens") {
  std::vector<Token> toks = tokenize("3 \"ab\"");
  auto d = leaf_deriv("r", 0, 2);
  std::map<std::string, int> f = extract_features(d, toks);
  CHECK(f.at("rt:r:__int__") == 1);
  CHECK(f.at("rt:r:__const__") == 1);
  CHECK(!f.count("rt:r:3"));
}

TEST_CASE("feature templates: bigrams and skips") {
  std::vector<Token> toks = tokenize("3 numbers");
  auto parent = leaf_deriv("up", 0, 2);
  parent->children = {leaf_deriv("down", 0, 1)};
  parent->skipped = 2;
  std::map<std::string, int> f = extract_features(parent, toks);
  CHECK(f.at("bg:up:down") == 1);
  CHECK(f.at("skip") == 2);
  CHECK(f.at("rule:up") == 1);
  CHECK(f.at("rule:down") == 1);
  CHECK(f.at("rt:up:__int__") == 1);
  CHECK(f.at("rt:up:number") == 1);
  CHECK(f.at("rt:down:__int__") == 1);
}

TEST_CASE("serialize is positional and recursive") {
  auto parent = leaf_deriv("a", 0, 2);
  parent->children = {leaf_deriv("b", 0, 1), leaf_deriv("c", 1, 2)};
  CHECK(serialize(parent) == "(a 0:2 (b 0:1) (c 1:2))");
}

TEST_CASE("parse: degenerate inputs give an empty beam") {
  Grammar g = mini_grammar();
  Weights w;
  CHECK(parse({}, g, w, 10).empty());
  CHECK(parse(tokenize("3 numbers"), g, w, 0).empty());
  CHECK(parse(tokenize("3 numbers"), Grammar{}, w, 10).empty());
  // Nothing derivable: no lexicon hit at all.
  CHECK(parse(tokenize("qwerty asdf"), g, w, 10).empty());
}

TEST_CASE("parse: repetition beam, untrained tie-break") {
  Grammar g = mini_grammar();
  Weights w;
  auto beam = parse(tokenize("3 numbers"), g, w, 10);
  REQUIRE(beam.size() == 2);
  // Full-coverage derivation sorts first under zero weights (serialization
  // tie-break favors the span starting at 0).
  CHECK(print_sketch(beam[0].sketch) == "?{Repeat(<num>,3)}");
  CHECK(print_sketch(beam[1].sketch) == "?{<num>}");
  CHECK(beam[0].score == 0.0);

  // The second parse ignores the count token; the root wrapper records that.
  auto f = extract_features(beam[1].derivation, tokenize("3 numbers"));
  CHECK(f.at("skip") == 1);
  auto f0 = extract_features(beam[0].derivation, tokenize("3 numbers"));
  CHECK(!f0.count("skip"));
}

TEST_CASE("parse: rule elements tolerate gaps") {
  Grammar g = mini_grammar();
  Weights w;
  // "red" sits between the count and the class; the rule should skip it.
  auto beam = parse(tokenize("3 red numbers"), g, w, 10);
  REQUIRE(!beam.empty());
  CHECK(prints(beam)[0] == "?{Repeat(<num>,3)}");
  auto f = extract_features(beam[0].derivation, tokenize("3 red numbers"));
  CHECK(f.at("skip") == 1);
}

TEST_CASE("parse: weights reorder the beam") {
  Grammar g = mini_grammar();
  Weights w;
  w.w["rule:$INT_$CC->$PROGRAM:RepeatFn"] = -2.0;
  auto beam = parse(tokenize("3 numbers"), g, w, 10);
  REQUIRE(beam.size() == 2);
  CHECK(print_sketch(beam[0].sketch) == "?{<num>}");
  CHECK(beam[0].score > beam[1].score);

  // Scores are non-increasing down the beam.
  for (size_t i = 1; i < beam.size(); ++i) CHECK(beam[i - 1].score >= beam[i].score);
}

TEST_CASE("parse: beam caps and value dedup") {
  // Two unary routes to the same value collapse to one beam entry.
  Grammar g = parse_grammar(
      "$CC -> $PROGRAM [IdentityFn arg:0]\n"
      "$CC -> $PROGRAM [SelectFn arg:0]\n"
      "$PROGRAM -> $SKETCH [UnarySketchFn arg:0]\n"
      "$SKETCH -> $ROOT [IdentityFn arg:0]\n",
      "number\t$CC\t<num>\n");
  Weights w;
  auto beam = parse(tokenize("numbers"), g, w, 10);
  REQUIRE(beam.size() == 1);
  CHECK(print_sketch(beam[0].sketch) == "?{<num>}");

  Grammar mini = mini_grammar();
  CHECK(parse(tokenize("3 numbers"), mini, w, 1).size() == 1);
}

TEST_CASE("parse: quoted constants become string programs") {
  Grammar g = parse_grammar(
      "$CONST -> $PROGRAM [IdentityFn arg:0]\n"
      "$PROGRAM -> $SKETCH [UnarySketchFn arg:0]\n"
      "$SKETCH -> $ROOT [IdentityFn arg:0]\n",
      "number\t$CC\t<num>\n");
  Weights w;
  auto beam = parse(tokenize("the word \"ab,c\""), g, w, 5);
  REQUIRE(!beam.empty());
  CHECK(print_sketch(beam[0].sketch) == "?{Concat(<a>,Concat(<b>,Concat(<,>,<c>)))}");
}

TEST_CASE("shipped grammar parses the repetition example") {
  Grammar g = load_grammar(RESKETCH_DATA_DIR "/grammar.rules",
                           RESKETCH_DATA_DIR "/lexicon.tsv");
  Weights w;
  auto beam = parse(tokenize("3 numbers"), g, w, 20);
  REQUIRE(!beam.empty());
  CHECK(prints(beam)[0] == "?{Repeat(<num>,3)}");
}

TEST_CASE("shipped grammar covers the marker constructions") {
  Grammar g = load_grammar(RESKETCH_DATA_DIR "/grammar.rules",
                           RESKETCH_DATA_DIR "/lexicon.tsv");
  Weights w;

  struct Case {
    const char* text;
    const char* want;  // expected somewhere in the beam
  };
  const Case cases[] = {
      {"starts with a capital letter", "?{StartsWith(<cap>)}"},
      {"ends with a semicolon", "?{EndsWith(<;>)}"},
      {"2 or more vowels", "?{RepeatAtLeast(<vow>,2)}"},
      {"does not contain numbers", "?{Not(Contains(<num>))}"},
      {"an optional dash", "?{Optional(<->)}"},
      {"a double number",
       "?{RepeatAtLeast(<num>,1),RepeatAtLeast(<num>,1),"
       "Concat(RepeatAtLeast(<num>,1),Optional(Concat(<.>,RepeatAtLeast(<num>,1))))}"},
      {"5 or 3 numbers", "?{Or(Repeat(<num>,5),Repeat(<num>,3))}"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.text);
    auto beam = parse(tokenize(c.text), g, w, 40);
    REQUIRE(!beam.empty());
    bool found = false;
    for (const std::string& p : prints(beam)) found = found || p == c.want;
    CHECK(found);
  }

  // Separator phrasings produce a repetition-shaped hole; the exact nesting
  // depends on which side reached $SKETCH first, so test the shape.
  for (const char* text : {"numbers separated by commas", "numbers split by dashes"}) {
    CAPTURE(text);
    auto beam = parse(tokenize(text), g, w, 40);
    REQUIRE(!beam.empty());
    bool found = false;
    for (const std::string& p : prints(beam))
      found = found || p.find("KleeneStar(Concat(") != std::string::npos;
    CHECK(found);
  }
}
