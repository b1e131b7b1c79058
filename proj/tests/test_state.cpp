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
#include "trlc/parser.hpp"
#include "trlc/state.hpp"

using namespace trlc;

namespace {

Fact fact(const std::string& text) { return Fact::from_atom(parse_atom(text)); }
GroundAction ins(const std::string& text) { return {Polarity::insert, fact(text)}; }
GroundAction del(const std::string& text) { return {Polarity::remove, fact(text)}; }

}  // namespace

TEST_CASE("apply reports whether the set changed and revert undoes it") {
  State s;
  ActionRecord a = s.apply(ins("p(a)"));
  CHECK(a.effective);
  CHECK(s.contains(fact("p(a)")));
  ActionRecord b = s.apply(ins("p(a)"));
  CHECK_FALSE(b.effective);
  CHECK(s.size() == 1);
  ActionRecord c = s.apply(del("q(a)"));
  CHECK_FALSE(c.effective);
  s.revert(c);
  s.revert(b);
  s.revert(a);
  CHECK(s.empty());
  CHECK(s.version() == 0);
}

TEST_CASE("revert must be LIFO") {
  State s;
  ActionRecord a = s.apply(ins("p(a)"));
  s.apply(ins("p(b)"));
  CHECK_THROWS_AS(s.revert(a), std::logic_error);
}

TEST_CASE("facts enumerate in first-insertion order; re-insertion revives the slot") {
  State s;
  s.apply(ins("p(b)"));
  s.apply(ins("p(a)"));
  s.apply(ins("p(c)"));
  s.apply(del("p(b)"));
  s.apply(ins("p(b)"));
  std::vector<std::string> seen;
  s.for_each_of(Symbol::intern("p"), [&](const Fact& f) {
    seen.push_back(to_string(f));
    return true;
  });
  CHECK(seen == std::vector<std::string>{"p(b)", "p(a)", "p(c)"});
}

TEST_CASE("version moves on effective changes only and revert restores it") {
  State s;
  const auto v0 = s.version();
  ActionRecord a = s.apply(ins("p(a)"));
  const auto v1 = s.version();
  CHECK(v1 != v0);
  s.apply(ins("p(a)"));
  CHECK(s.version() == v1);
  ActionRecord b = s.apply(del("p(a)"));
  s.revert(b);
  CHECK(s.version() == v1);
  s.revert(a);
  CHECK(s.version() == v0);
}

TEST_CASE("equality and fingerprint ignore insertion order") {
  State a(std::vector<Fact>{fact("p(a)"), fact("q(b,c)"), fact("r")});
  State b(std::vector<Fact>{fact("r"), fact("p(a)"), fact("q(b,c)")});
  CHECK(a == b);
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.snapshot() == b.snapshot());
  b.apply(del("r"));
  CHECK_FALSE(a == b);
  CHECK(a.fingerprint() != b.fingerprint());
}

TEST_CASE("snapshot is sorted clause syntax and parses back") {
  State s(std::vector<Fact>{fact("artifact2(car)"), fact("start"), fact("artifact1(car)")});
  CHECK(s.snapshot() == "artifact1(car).\nartifact2(car).\nstart.\n");
  CHECK(parse_state(s.snapshot()) == s);
  CHECK(s.digest() == hex64(fnv1a64(s.snapshot())));
  CHECK(s.digest().size() == 16);
}

TEST_CASE("FNV-1a 64 reference values") {
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(hex64(fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(hex64(fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("match binds variables, including repeated ones") {
  State s(std::vector<Fact>{fact("e(a,b)"), fact("e(b,b)"), fact("e(c,a)")});
  CHECK(s.match(parse_atom("e(X,Y)")).size() == 3);
  const auto loops = s.match(parse_atom("e(X,X)"));
  REQUIRE(loops.size() == 1);
  CHECK(loops[0].at(Symbol::intern("X")) == Term::constant("b"));
  CHECK(s.match(parse_atom("e(c,Y)")).size() == 1);
  CHECK(s.match(parse_atom("e(d,Y)")).empty());
}

TEST_CASE("value-semantics apply and revert leave their input alone") {
  const State s0(std::vector<Fact>{fact("p(a)")});
  auto [s1, rec] = apply(s0, ins("p(b)"));
  CHECK(s0.size() == 1);
  CHECK(s1.size() == 2);
  const State s2 = revert(s1, rec);
  CHECK(s2 == s0);
  CHECK(s1.size() == 2);
}

TEST_CASE("non-ground atoms are not facts") {
  CHECK_THROWS_AS(Fact::from_atom(parse_atom("p(X)")), std::invalid_argument);
}
