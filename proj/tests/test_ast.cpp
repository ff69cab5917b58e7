#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <stdexcept>

#include "resketch/ast.hpp"

using namespace resketch;

TEST_CASE("builders validate their inputs") {
  Regex d = cls(CharClass::Num);

  CHECK_THROWS_AS(lit('\n'), std::invalid_argument);
  CHECK_THROWS_AS(lit('\x7f'), std::invalid_argument);
  CHECK_NOTHROW(lit(' '));   // 0x20, first alphabet char
  CHECK_NOTHROW(lit('~'));   // 0x7e, last

  CHECK_THROWS_AS(repeat(d, 0), std::invalid_argument);
  CHECK_THROWS_AS(repeat(d, -2), std::invalid_argument);
  CHECK_THROWS_AS(repeat_at_least(d, 0), std::invalid_argument);
  CHECK_THROWS_AS(repeat_range(d, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(repeat_range(d, 0, 2), std::invalid_argument);
  CHECK_NOTHROW(repeat_range(d, 2, 2));  // degenerate range is fine
}

TEST_CASE("str folds to the right") {
  Regex r = str("abc");
  const Node& n = r.node();
  REQUIRE(n.op == Op::Concat);
  CHECK(n.kids[0]->op == Op::Literal);
  CHECK(n.kids[0]->lit == 'a');
  REQUIRE(n.kids[1]->op == Op::Concat);
  CHECK(n.kids[1]->kids[0]->lit == 'b');
  CHECK(n.kids[1]->kids[1]->lit == 'c');

  CHECK(str("").node().op == Op::Class);
  CHECK(str("").node().cls == CharClass::Eps);
  CHECK(str("x").node().op == Op::Literal);
}

TEST_CASE("regex construction rejects holes") {
  Sketch h = hole({Sketch(cls(CharClass::Num))});
  CHECK_THROWS_AS(to_regex(h), std::invalid_argument);
  CHECK_THROWS_AS(Regex(h.ref()), std::invalid_argument);
  CHECK_THROWS_AS(to_regex(concat(Sketch(lit('a')), hole())), std::invalid_argument);

  // Hole-free sketches convert losslessly.
  Regex r = concat(lit('a'), cls(CharClass::Num));
  CHECK(to_regex(to_sketch(r)) == r);
}

TEST_CASE("holey propagates upward") {
  Sketch h = hole();
  CHECK(!h.concrete());
  CHECK(optional(h).node().holey);
  CHECK(concat(Sketch(lit('a')), h).node().holey);
  CHECK(Sketch(lit('a')).concrete());
}

TEST_CASE("size and depth count hole components as children") {
  Sketch h1 = hole({Sketch(cls(CharClass::Num))});
  CHECK(size(h1) == 2);
  CHECK(depth(h1) == 2);

  CHECK(size(hole()) == 1);
  CHECK(depth(hole()) == 1);

  Regex r = concat(lit('a'), repeat(cls(CharClass::Num), 3));
  CHECK(size(r) == 4);  // Concat, <a>, Repeat, <num>
  CHECK(depth(r) == 3);

  // Two components under one hole: still one level down.
  Sketch h2 = hole({Sketch(cls(CharClass::Num)), Sketch(lit(','))});
  CHECK(size(h2) == 3);
  CHECK(depth(h2) == 2);
}

TEST_CASE("node_equal is structural") {
  Regex a = repeat_range(cls(CharClass::Num), 1, 4);
  Regex b = repeat_range(cls(CharClass::Num), 1, 4);
  Regex c = repeat_range(cls(CharClass::Num), 1, 5);
  CHECK(a == b);
  CHECK(!(a == c));
  CHECK(node_hash(a.ref()) == node_hash(b.ref()));
  CHECK(!(lit('a') == lit('b')));
  CHECK(!(cls(CharClass::Num) == Regex(lit('0'))));
}

TEST_CASE("for_each_subtree visits every node once, preorder") {
  Sketch s = concat(hole({Sketch(cls(CharClass::Num))}), Sketch(lit('x')));
  std::vector<Op> seen;
  for_each_subtree(s.ref(), [&](const NodeRef& n) { seen.push_back(n->op); });
  REQUIRE(seen.size() == 4);
  CHECK(seen[0] == Op::Concat);
  CHECK(seen[1] == Op::Hole);
  CHECK(seen[2] == Op::Class);  // the hole's component
  CHECK(seen[3] == Op::Literal);
}

TEST_CASE("sketch_matches: positional match outside holes") {
  Regex r = concat(lit('a'), cls(CharClass::Num));
  CHECK(sketch_matches(to_sketch(r), r));
  CHECK(!sketch_matches(to_sketch(r), concat(lit('b'), cls(CharClass::Num))));
  CHECK(!sketch_matches(to_sketch(r), concat(cls(CharClass::Num), lit('a'))));
  // Operator mismatch at the root.
  CHECK(!sketch_matches(Sketch(optional(cls(CharClass::Num))),
                        star(cls(CharClass::Num))));
}

TEST_CASE("sketch_matches: hole admits regexes containing a component match") {
  Sketch h = hole({Sketch(cls(CharClass::Num))});
  CHECK(sketch_matches(h, cls(CharClass::Num)));
  CHECK(sketch_matches(h, repeat_at_least(cls(CharClass::Num), 1)));  // nested
  CHECK(sketch_matches(h, concat(lit('a'), cls(CharClass::Num))));
  CHECK(!sketch_matches(h, cls(CharClass::Let)));
  CHECK(!sketch_matches(hole({Sketch(cls(CharClass::Cap))}), cls(CharClass::Num)));

  // Unconstrained hole admits anything.
  CHECK(sketch_matches(hole(), negate(star(cls(CharClass::Any)))));

  // Two components: either one suffices.
  Sketch h2 = hole({Sketch(cls(CharClass::Num)), Sketch(lit(','))});
  CHECK(sketch_matches(h2, lit(',')));
  CHECK(sketch_matches(h2, cls(CharClass::Num)));
  CHECK(!sketch_matches(h2, lit(';')));
}

TEST_CASE("sketch_matches: decimal-number sketch accepts its known completion") {
  // Concat(?{<num>},?{<num>,<.>}) against the decimal-literal regex.
  Sketch s = concat(hole({Sketch(cls(CharClass::Num))}),
                    hole({Sketch(cls(CharClass::Num)), Sketch(lit('.'))}));
  Regex r = concat(repeat_at_least(cls(CharClass::Num), 1),
                   optional(concat(lit('.'), repeat_range(cls(CharClass::Num), 1, 3))));
  CHECK(sketch_matches(s, r));

  // Same shape but the second half has neither digits nor a dot.
  Regex bad = concat(repeat_at_least(cls(CharClass::Num), 1),
                     optional(cls(CharClass::Let)));
  CHECK(!sketch_matches(s, bad));
}

TEST_CASE("sketch_matches: components may themselves be sketches") {
  // ?{Repeat(<num>,?)} style: component with a nested hole.
  Sketch inner = repeat(hole(), 3);
  Sketch h = hole({inner});
  CHECK(sketch_matches(h, repeat(cls(CharClass::Let), 3)));
  CHECK(!sketch_matches(h, repeat(cls(CharClass::Let), 2)));
}
