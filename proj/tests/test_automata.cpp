#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>

#include "resketch/ast.hpp"
#include "resketch/automata.hpp"
#include "support/brute.hpp"

using namespace resketch;
namespace am = resketch::automata;

TEST_CASE("matches: basic membership") {
  CHECK(am::matches(cls(CharClass::Num), "7"));
  CHECK(!am::matches(cls(CharClass::Num), "77"));
  CHECK(!am::matches(cls(CharClass::Num), ""));
  CHECK(am::matches(cls(CharClass::Eps), ""));
  CHECK(!am::matches(cls(CharClass::Null), ""));

  Regex r = concat(optional(lit('-')), repeat_at_least(cls(CharClass::Num), 1));
  CHECK(am::matches(r, "-42"));
  CHECK(am::matches(r, "7"));
  CHECK(!am::matches(r, "-"));
  CHECK(!am::matches(r, "4-2"));

  // Boolean connectives, the part standard engines don't have.
  Regex caps_no_vowel = conj(repeat_at_least(cls(CharClass::Cap), 1),
                             negate(contains(cls(CharClass::Vow))));
  CHECK(am::matches(caps_no_vowel, "XYZ"));
  CHECK(!am::matches(caps_no_vowel, "XAZ"));

  CHECK(am::matches(ends_with(lit(';')), "int x = 0;"));
  CHECK(!am::matches(ends_with(lit(';')), ";x"));
}

TEST_CASE("matches rejects characters outside the alphabet") {
  CHECK_THROWS_AS(am::matches(cls(CharClass::Any), "\n"), std::invalid_argument);
  CHECK_THROWS_AS(am::matches(cls(CharClass::Any), "a\tb"), std::invalid_argument);
}

TEST_CASE("engine derivatives agree with the reference matcher") {
  std::mt19937_64 rng(11);
  testsupport::GenConfig gc;
  gc.leaves = {cls(CharClass::Num), cls(CharClass::Let), Regex(lit('0')),
               Regex(lit('x'))};
  gc.ops = {Op::Concat, Op::Or, Op::And, Op::Not, Op::Optional, Op::KleeneStar,
            Op::Repeat, Op::StartsWith, Op::EndsWith, Op::Contains};
  gc.max_depth = 3;
  std::vector<std::string> words = testsupport::all_strings("0x", 3);
  words.push_back("a0");
  words.push_back("zz");
  for (int i = 0; i < 150; ++i) {
    Regex r = testsupport::random_regex(rng, gc);
    for (const std::string& w : words) {
      CAPTURE(i);
      CAPTURE(w);
      REQUIRE(am::matches(r, w) == testsupport::brute_matches(r, w));
    }
  }
}

TEST_CASE("dfa sizes for the canonical examples") {
  CHECK(am::build_dfa(cls(CharClass::Null)).state_count() == 1);
  CHECK(am::build_dfa(cls(CharClass::Eps)).state_count() == 2);
  CHECK(am::build_dfa(alt(cls(CharClass::Num), cls(CharClass::Let))).state_count() == 3);
}

TEST_CASE("dfa run agrees with matches") {
  Regex r = concat(repeat(cls(CharClass::Let), 2), ends_with(cls(CharClass::Num)));
  am::Dfa d = am::build_dfa(r);
  for (const char* w : {"ab1", "ab", "abc9", "a1", "xy42", ""})
    CHECK(d.run(w) == am::matches(r, w));
  CHECK_THROWS_AS(d.run("\x01"), std::invalid_argument);
}

TEST_CASE("dfa partitions characters by observable behavior") {
  // In Or(<num>,<let>) digits and letters act alike in every state, so they
  // share one class; position makes them distinguishable in Concat.
  am::Dfa u = am::build_dfa(alt(cls(CharClass::Num), cls(CharClass::Let)));
  CHECK(u.class_of('3') == u.class_of('a'));
  CHECK(u.classes.size() == 2);  // alphanumerics, everything else

  am::Dfa d = am::build_dfa(concat(cls(CharClass::Num), cls(CharClass::Let)));
  CHECK(d.class_of('3') == d.class_of('8'));
  CHECK(d.class_of('a') == d.class_of('Z'));
  CHECK(d.class_of('3') != d.class_of('a'));
  CHECK(d.class_of('#') != d.class_of('3'));
  CHECK(d.class_of('#') != d.class_of('a'));
  CHECK(d.classes.size() == 3);  // digits, letters, everything else
}

TEST_CASE("co_reachable spots the dead state") {
  am::Dfa d = am::build_dfa(repeat(cls(CharClass::Num), 2));
  std::vector<bool> live = d.co_reachable();
  int dead = 0;
  for (size_t s = 0; s < d.state_count(); ++s)
    if (!live[s]) ++dead;
  CHECK(dead == 1);
  CHECK(live[d.start]);

  // A total language has no dead states.
  am::Dfa all = am::build_dfa(star(cls(CharClass::Any)));
  for (bool b : all.co_reachable()) CHECK(b);
}

TEST_CASE("is_empty") {
  CHECK(am::is_empty(cls(CharClass::Null)));
  CHECK(am::is_empty(conj(cls(CharClass::Vow), cls(CharClass::Num))));
  CHECK(am::is_empty(negate(star(cls(CharClass::Any)))));
  CHECK(am::is_empty(concat(cls(CharClass::Num), cls(CharClass::Null))));
  CHECK(!am::is_empty(cls(CharClass::Eps)));
  CHECK(!am::is_empty(negate(cls(CharClass::Num))));
  CHECK(!am::is_empty(contains(lit('~'))));
}

TEST_CASE("equivalent") {
  Regex num = cls(CharClass::Num);
  CHECK(am::equivalent(alt(num, cls(CharClass::Let)), alt(cls(CharClass::Let), num)));
  CHECK(am::equivalent(repeat(num, 2), concat(num, num)));
  CHECK(am::equivalent(repeat_at_least(num, 1), concat(num, star(num))));
  CHECK(am::equivalent(negate(negate(num)), num));
  CHECK(am::equivalent(cls(CharClass::Alphanum),
                       alt(cls(CharClass::Let), cls(CharClass::Num))));
  CHECK(!am::equivalent(repeat(num, 2), repeat(num, 3)));
  CHECK(!am::equivalent(starts_with(num), ends_with(num)));
  // Same language, different shape: exactly-2-to-4 digits.
  CHECK(am::equivalent(repeat_range(num, 2, 4),
                       concat(repeat(num, 2), repeat_range(optional(num), 2, 2))));
}

TEST_CASE("state limits are enforced") {
  CHECK_THROWS_AS(am::build_dfa(repeat(cls(CharClass::Num), 200), 100),
                  am::StateLimitError);
  CHECK_THROWS_AS(am::equivalent(repeat(cls(CharClass::Num), 200),
                                 repeat(cls(CharClass::Num), 199), 50),
                  am::StateLimitError);
  try {
    am::build_dfa(repeat(cls(CharClass::Num), 200), 100);
    FAIL("expected StateLimitError");
  } catch (const am::StateLimitError& e) {
    CHECK(e.limit == 100);
  }
}

TEST_CASE("engine can be reused across regexes") {
  am::Engine eng;
  am::Engine::Id a = eng.lower(repeat(cls(CharClass::Num), 3));
  am::Engine::Id b = eng.lower(cls(CharClass::Let));
  CHECK(eng.matches(a, "123"));
  CHECK(!eng.matches(a, "12"));
  CHECK(eng.matches(b, "q"));
  // Structurally identical regexes intern to the same node.
  CHECK(eng.lower(repeat(cls(CharClass::Num), 3)) == a);
  CHECK(eng.nullable(eng.lower(optional(cls(CharClass::Num)))));
  CHECK(!eng.nullable(a));
}
