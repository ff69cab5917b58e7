#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "resketch/ast.hpp"
#include "resketch/syntax.hpp"

using namespace resketch;

namespace {

// Print -> parse -> print must be a fixed point.
void check_roundtrip(const Sketch& s) {
  std::string text = print_sketch(s);
  Sketch back = parse_sketch(text);
  CHECK(back == s);
  CHECK(print_sketch(back) == text);
}

}  // namespace

TEST_CASE("classes and literals print in angle brackets") {
  CHECK(print_regex(cls(CharClass::Num)) == "<num>");
  CHECK(print_regex(cls(CharClass::Alphanum)) == "<alphanum>");
  CHECK(print_regex(cls(CharClass::Eps)) == "<eps>");
  CHECK(print_regex(lit('a')) == "<a>");
  CHECK(print_regex(lit(',')) == "<,>");
  CHECK(print_regex(lit(' ')) == "< >");
  // Quote and backslash can't use the bracket form.
  CHECK(print_regex(lit('"')) == "\"\\\"\"");
  CHECK(print_regex(lit('\\')) == "\"\\\\\"");
  CHECK(print_regex(lit('<')) == "\"<\"");
}

TEST_CASE("operators print prefix with counts appended") {
  CHECK(print_regex(concat(lit('a'), lit('b'))) == "Concat(<a>,<b>)");
  CHECK(print_regex(repeat(cls(CharClass::Num), 3)) == "Repeat(<num>,3)");
  CHECK(print_regex(repeat_at_least(cls(CharClass::Vow), 2)) ==
        "RepeatAtLeast(<vow>,2)");
  CHECK(print_regex(repeat_range(cls(CharClass::Num), 1, 4)) ==
        "RepeatRange(<num>,1,4)");
  CHECK(print_regex(negate(contains(cls(CharClass::Vow)))) ==
        "Not(Contains(<vow>))");
  CHECK(print_sketch(hole()) == "?{}");
  CHECK(print_sketch(hole({Sketch(cls(CharClass::Num)), Sketch(lit(','))})) ==
        "?{<num>,<,>}");
}

TEST_CASE("round trips") {
  check_roundtrip(Sketch(cls(CharClass::Null)));
  check_roundtrip(Sketch(lit(' ')));
  check_roundtrip(Sketch(lit('"')));
  check_roundtrip(Sketch(lit('\\')));
  check_roundtrip(Sketch(str("a,b c")));
  check_roundtrip(Sketch(alt(conj(cls(CharClass::Cap), negate(cls(CharClass::Vow))),
                             star(optional(lit('-'))))));
  check_roundtrip(Sketch(repeat_range(ends_with(lit(';')), 2, 7)));
  check_roundtrip(concat(hole({Sketch(cls(CharClass::Num)), Sketch(lit(','))}),
                         hole()));
  check_roundtrip(hole({repeat(hole(), 2)}));  // hole inside a hole component
}

TEST_CASE("parser accepts whitespace and the short aliases") {
  CHECK(parse_regex("Concat( <a> , <b> )") == concat(lit('a'), lit('b')));
  CHECK(parse_regex("RepAtLeast(<num>,2)") == repeat_at_least(cls(CharClass::Num), 2));
  CHECK(parse_regex("RepRange(<num>,1,3)") == repeat_range(cls(CharClass::Num), 1, 3));
  CHECK(parse_regex("KleeneStar(<any>)") == star(cls(CharClass::Any)));
  // Quoted multi-char strings fold like str().
  CHECK(parse_regex("\"ab\"") == str("ab"));
}

TEST_CASE("parse errors carry a position") {
  std::vector<std::string> bad = {
      "",             // nothing there
      "Concat(<a>",   // unclosed
      "Frobnicate(<a>)",
      "<nosuchclass>",
      "Repeat(<a>,0)",          // count must be >= 1
      "RepeatRange(<a>,3,2)",   // inverted range
      "Concat(<a>,<b>) junk",   // trailing garbage
      "Repeat(<a>)",            // missing count
  };
  for (const std::string& text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_regex(text), ParseError);
  }

  try {
    parse_regex("Concat(<a>,@)");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.pos == 11);  // points at the '@'
  }
}

TEST_CASE("parse_regex rejects holes; parse_sketch takes them") {
  CHECK_THROWS_AS(parse_regex("?{<num>}"), ParseError);
  CHECK_THROWS_AS(parse_regex("Concat(<a>,?{})"), ParseError);
  Sketch s = parse_sketch("?{<num>}");
  CHECK(s == hole({Sketch(cls(CharClass::Num))}));
}

TEST_CASE("standard-notation translation") {
  CHECK(to_standard_regex(repeat(cls(CharClass::Num), 3)) == "([0-9]){3}");
  CHECK(to_standard_regex(concat(lit('a'), lit('b'))) == "ab");
  CHECK(to_standard_regex(optional(lit('.'))) == "(\\.)?");
  CHECK(to_standard_regex(starts_with(cls(CharClass::Cap))) == "([A-Z]).*");
  CHECK(to_standard_regex(repeat_at_least(cls(CharClass::Num), 1)) == "([0-9]){1,}");
  CHECK(to_standard_regex(alt(lit('a'), lit('b'))) == "(a)|(b)");
}
