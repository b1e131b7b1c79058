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

#ifndef TRLC_BATCH_HPP_
#define TRLC_BATCH_HPP_

#include <vector>

#include "trlc/engine.hpp"
#include "trlc/lifecycle.hpp"
#include "trlc/state.hpp"

// Sweeps over many independent states: what-if tables for a project
// ("which tasks are enabled in each of these situations?"). Each kernel has
// an OpenMP version and a serial reference with identical results.
namespace trlc::batch {

struct Job {
  State state;
  Goal goal;
};

// Every subset of `universe` added to `base`, in binary-counter order
// (bit i of the index selects universe[i]). Capped at 2^20 subsets.
std::vector<State> substates(const State& base, const std::vector<Fact>& universe);

std::vector<Outcome> possible(const Engine& engine, const std::vector<Job>& jobs,
                              const EvalConfig& config = {});
std::vector<Outcome> possible_serial(const Engine& engine, const std::vector<Job>& jobs,
                                     const EvalConfig& config = {});

std::vector<std::vector<Fact>> enabled(const LifecycleModel& model,
                                       const std::vector<State>& states,
                                       const std::vector<Symbol>& scope);
std::vector<std::vector<Fact>> enabled_serial(const LifecycleModel& model,
                                              const std::vector<State>& states,
                                              const std::vector<Symbol>& scope);

// Number of worker threads the parallel kernels will use.
int threads();

}  // namespace trlc::batch

#endif  // TRLC_BATCH_HPP_
