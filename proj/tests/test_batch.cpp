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

#include <algorithm>

#include "doctest.h"
#include "trlc/batch.hpp"
#include "trlc/corpus.hpp"
#include "trlc/parser.hpp"

using namespace trlc;

namespace {

Fact fact(const std::string& text) { return Fact::from_atom(parse_atom(text)); }

LifecycleModel sample() { return recognize_tasks(parse_program(get_corpus("sample_network").program)); }

std::vector<Fact> universe(const std::vector<std::string>& components) {
  std::vector<Fact> out;
  for (const auto& c : components) {
    for (int i = 1; i <= 5; ++i) out.push_back(fact("artifact" + std::to_string(i) + "(" + c + ")"));
  }
  return out;
}

}  // namespace

TEST_CASE("substates enumerate in binary-counter order") {
  const State base(std::vector<Fact>{fact("start")});
  const auto all = batch::substates(base, {fact("a"), fact("b")});
  REQUIRE(all.size() == 4);
  CHECK(all[0].snapshot() == "start.\n");
  CHECK(all[1].snapshot() == "a.\nstart.\n");
  CHECK(all[2].snapshot() == "b.\nstart.\n");
  CHECK(all[3].snapshot() == "a.\nb.\nstart.\n");
  CHECK_THROWS(batch::substates(base, std::vector<Fact>(21, fact("a"))));
}

TEST_CASE("parallel enabled sweep equals the serial one") {
  const LifecycleModel m = sample();
  const std::vector<Symbol> scope{Symbol::intern("car"), Symbol::intern("bike")};
  const auto states = batch::substates(State(), universe({"car", "bike"}));
  CHECK(batch::enabled(m, states, scope) == batch::enabled_serial(m, states, scope));
  CHECK(batch::threads() >= 1);
}

TEST_CASE("parallel possible sweep equals the serial one") {
  const Engine e(compile_model(sample()));
  std::vector<batch::Job> jobs;
  for (const State& s : batch::substates(State(), universe({"car"}))) {
    jobs.push_back({s, parse_goal("task3(car) * task4(car)")});
    jobs.push_back({s, parse_goal("task1(car) | task2(car)")});
  }
  const auto par = batch::possible(e, jobs);
  CHECK(par == batch::possible_serial(e, jobs));
  CHECK(std::count(par.begin(), par.end(), Outcome::success) > 0);
  CHECK(std::count(par.begin(), par.end(), Outcome::failure) > 0);
}

TEST_CASE("an exception inside a worker reaches the caller") {
  const Engine e(parse_program("p :- q.\n"));
  std::vector<batch::Job> jobs(8, batch::Job{State(), parse_goal("q")});
  jobs[5].goal = parse_goal("+r(X)");
  CHECK_THROWS_AS(batch::possible(e, jobs), EvalError);
  CHECK_THROWS_AS(batch::possible_serial(e, jobs), EvalError);
}
