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

// Serial reference vs OpenMP sweep over every sub-state of a project.
#include <benchmark/benchmark.h>

#include "trlc/batch.hpp"
#include "trlc/corpus.hpp"
#include "trlc/parser.hpp"

namespace {

using namespace trlc;

struct Fixture {
  LifecycleModel model;
  Engine engine;
  std::vector<Symbol> scope;
  std::vector<State> states;
  std::vector<batch::Job> jobs;

  Fixture()
      : model(recognize_tasks(parse_program(get_corpus("sample_network").program))),
        engine(compile_model(model)) {
    // Three components, so 15 artifact facts and 2^15 sub-states.
    std::vector<Fact> universe;
    for (const char* c : {"car", "bike", "boat"}) {
      scope.push_back(Symbol::intern(c));
      for (Symbol a : model.artifacts) universe.push_back(Fact{a, {Symbol::intern(c)}});
    }
    states = batch::substates(State(std::vector<Fact>{Fact{start_symbol(), {}}}), universe);
    const Goal goal = parse_goal("task3(boat) * task4(boat)");
    for (std::size_t i = 0; i < states.size(); i += 8) jobs.push_back({states[i], goal});
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_EnabledSerial(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(batch::enabled_serial(f.model, f.states, f.scope));
}

void BM_EnabledParallel(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(batch::enabled(f.model, f.states, f.scope));
}

void BM_PossibleSerial(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(batch::possible_serial(f.engine, f.jobs));
}

void BM_PossibleParallel(benchmark::State& st) {
  const Fixture& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(batch::possible(f.engine, f.jobs));
}

BENCHMARK(BM_EnabledSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnabledParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PossibleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PossibleParallel)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
