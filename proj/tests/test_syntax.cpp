/* Copyright 2026 The trlc Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "doctest.h"
#include "oracle.hpp"
#include "trlc/corpus.hpp"
#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

using namespace trlc;

namespace {

ParseError::Kind error_kind(const std::string& text) {
  try {
    parse_program(text);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected a parse error for: " << text);
  return ParseError::Kind::syntax;
}

Goal call(const char* p) { return Goal::call(Atom(Symbol::intern(p), {})); }

}  // namespace

TEST_CASE("operator precedence: & binds tighter than *, which binds tighter than |") {
  const Goal g = parse_goal("a * b & c | d");
  REQUIRE(g.kind == Goal::Kind::concurrent);
  const Goal& left = g.children[0];
  REQUIRE(left.kind == Goal::Kind::serial);
  CHECK(left.children[0] == call("a"));
  CHECK(left.children[1] == Goal::query_conj({call("b"), call("c")}));
  CHECK(g.children[1] == call("d"));
}

TEST_CASE("concurrent conjunction is left-associative") {
  const Goal g = parse_goal("a | b | c");
  CHECK(g == Goal::concurrent(Goal::concurrent(call("a"), call("b")), call("c")));
}

TEST_CASE("nested serial and query conjunctions are flattened") {
  CHECK(parse_goal("(a * b) * c") == Goal::serial({call("a"), call("b"), call("c")}));
  CHECK(parse_goal("a & (b & c)") == Goal::query_conj({call("a"), call("b"), call("c")}));
  // A bracketed conjunction followed by nothing else stays intact.
  CHECK(parse_goal("(a & b) * +c").children.size() == 2);
}

TEST_CASE("actions, comments and trailing dots") {
  const Program p = parse_program("% a comment\np(X) :- q(X) * -q(X) * +r(X). % trailing\nq(a).");
  REQUIRE(p.rules.size() == 1);
  REQUIRE(p.facts.size() == 1);
  const Goal& body = p.rules[0].body;
  REQUIRE(body.kind == Goal::Kind::serial);
  CHECK(body.children[1].kind == Goal::Kind::act);
  CHECK(body.children[1].polarity == Polarity::remove);
  CHECK(body.children[2].polarity == Polarity::insert);
  CHECK(parse_goal("p(a).") == parse_goal("p(a)"));
}

TEST_CASE("queries") {
  Query q = parse_query("?- possible task4(car).");
  CHECK(q.mode == Query::Mode::possible);
  CHECK(to_string(q.goal) == "task4(car)");
  q = parse_query("?- task4(car).");
  CHECK(q.mode == Query::Mode::execute);
  CHECK_THROWS_AS(parse_query("?- +artifact1(car) * possible task4(car)."), ParseError);
}

TEST_CASE("diagnostics carry line and column") {
  try {
    parse_program("p :- q.\nr :- s\n");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::syntax);
    CHECK(e.pos().line == 2);
    CHECK(std::string(e.what()).rfind("2:", 0) == 0);
  }
  CHECK(error_kind("p :- q $ r.") == ParseError::Kind::lexical);
}

TEST_CASE("load-time checks") {
  CHECK(error_kind("p(a). p(a,b).") == ParseError::Kind::arity);
  CHECK(error_kind("p(X) :- +q(X).") == ParseError::Kind::safety);
  CHECK(error_kind("p(X) :- q.") == ParseError::Kind::safety);
  CHECK(error_kind("p(X).") != ParseError::Kind::lexical);  // facts must be ground
  CHECK(error_kind("p. p :- q.") == ParseError::Kind::clash);
  CHECK(error_kind("p :- q. r :- +p.") == ParseError::Kind::clash);
  CHECK(error_kind("p :- q & +r.") == ParseError::Kind::syntax);
  CHECK_THROWS_AS(parse_program("possible :- q."), ParseError);
}

TEST_CASE("each concurrent branch sees only the bindings made before it") {
  CHECK(error_kind("p :- q(X) | +r(X).") == ParseError::Kind::safety);
  CHECK_NOTHROW(parse_program("p :- (q(X) | s(Y)) * +r(X) * +r(Y)."));
  CHECK_NOTHROW(parse_program("p :- q(X) * (+r(X) | +s(X))."));
}

TEST_CASE("printing") {
  CHECK(to_string(parse_goal("a * b * c")) == "a * b * c");
  CHECK(to_string(parse_goal("(+a * +b) | +c")) == "(+a * +b) | +c");
  CHECK(to_string(parse_goal("a | b | c")) == "a | b | c");
  CHECK(to_string(parse_goal("a | (b | c)")) == "a | (b | c)");
  CHECK(to_string(parse_query("?- possible p(X).")) == "?- possible p(X).");
}

TEST_CASE("print then parse is the identity on the corpus") {
  for (const CorpusEntry& e : list_corpus()) {
    const Program p = parse_program(e.program, e.id);
    CHECK(parse_program(to_string(p)) == p);
  }
}

TEST_CASE("print then parse is the identity on generated programs") {
  oracle::ProgramGen gen(5);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const auto k = gen.next();
    Program p;
    try {
      p = parse_program(k.program);
    } catch (const ParseError&) {
      continue;
    }
    ++checked;
    CHECK(parse_program(to_string(p)) == p);
    const Goal g = parse_goal(k.goal);
    CHECK(parse_goal(to_string(g)) == g);
  }
  CHECK(checked > 200);
}
