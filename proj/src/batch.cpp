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

#include "trlc/batch.hpp"

#include <omp.h>

#include <exception>
#include <stdexcept>

namespace trlc::batch {
namespace {

// OpenMP regions must not throw; the first exception is carried out.
class ErrorSlot {
 public:
  template <typename Fn>
  void run(Fn&& fn) {
    try {
      fn();
    } catch (...) {
#pragma omp critical(trlc_batch_error)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

std::vector<State> substates(const State& base, const std::vector<Fact>& universe) {
  if (universe.size() > 20) throw std::invalid_argument("substates: universe too large");
  const std::size_t n = std::size_t{1} << universe.size();
  std::vector<State> out;
  out.reserve(n);
  for (std::size_t mask = 0; mask < n; ++mask) {
    State s = base;
    for (std::size_t i = 0; i < universe.size(); ++i) {
      if (mask >> i & 1) s.apply({Polarity::insert, universe[i]});
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Outcome> possible(const Engine& engine, const std::vector<Job>& jobs,
                              const EvalConfig& config) {
  std::vector<Outcome> out(jobs.size(), Outcome::unknown);
  ErrorSlot err;
  const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    err.run([&] { out[i] = engine.possible(jobs[i].state, jobs[i].goal, config).outcome; });
  }
  err.rethrow();
  return out;
}

std::vector<Outcome> possible_serial(const Engine& engine, const std::vector<Job>& jobs,
                                     const EvalConfig& config) {
  std::vector<Outcome> out;
  out.reserve(jobs.size());
  for (const Job& j : jobs) out.push_back(engine.possible(j.state, j.goal, config).outcome);
  return out;
}

std::vector<std::vector<Fact>> enabled(const LifecycleModel& model,
                                       const std::vector<State>& states,
                                       const std::vector<Symbol>& scope) {
  std::vector<std::vector<Fact>> out(states.size());
  ErrorSlot err;
  const auto n = static_cast<std::int64_t>(states.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    err.run([&] { out[i] = enabled_tasks(model, states[i], scope); });
  }
  err.rethrow();
  return out;
}

std::vector<std::vector<Fact>> enabled_serial(const LifecycleModel& model,
                                              const std::vector<State>& states,
                                              const std::vector<Symbol>& scope) {
  std::vector<std::vector<Fact>> out;
  out.reserve(states.size());
  for (const State& s : states) out.push_back(enabled_tasks(model, s, scope));
  return out;
}

int threads() { return omp_get_max_threads(); }

}  // namespace trlc::batch
