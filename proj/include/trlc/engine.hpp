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

#ifndef TRLC_ENGINE_HPP_
#define TRLC_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trlc/ast.hpp"
#include "trlc/state.hpp"

namespace trlc {

// Search bounds. Running out of any of them makes an otherwise answerless
// search report Outcome::unknown rather than failure.
struct EvalConfig {
  std::uint32_t max_depth = 256;          // nested rule expansions
  std::uint32_t max_answers = 64;         // solve() stops after this many
  std::uint32_t max_interleavings = 1024; // schedules explored under '|'
  std::uint64_t max_steps = 2'000'000;    // total steps per evaluation
  bool loop_check = true;                 // prune repeated configurations

  void validate() const;  // throws std::invalid_argument on a zero bound
};

enum class Outcome { success, failure, unknown };
const char* to_string(Outcome outcome);

class EvalError : public std::runtime_error {
 public:
  enum class Kind { non_ground_action, action_in_query, invalid_config };
  EvalError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct TraceStep {
  GroundAction action;
  bool effective = false;
  std::uint64_t version = 0;  // state version after the step
};

// The elementary actions an execution performed, in order.
struct Trace {
  std::uint64_t initial_version = 0;
  std::vector<TraceStep> steps;

  std::vector<GroundAction> actions() const;
};

// Replays a trace's actions over `initial`.
State replay(State initial, const Trace& trace);

struct Answer {
  Substitution bindings;  // query variables only
  Trace trace;
  State final_state;
};

struct SearchReport {
  std::size_t answers = 0;
  bool stopped = false;            // the visitor asked to stop
  bool depth_exhausted = false;
  bool interleavings_exhausted = false;
  bool steps_exhausted = false;
  std::uint64_t steps = 0;

  bool exhausted() const {
    return depth_exhausted || interleavings_exhausted || steps_exhausted;
  }
};

struct Solutions {
  std::vector<Answer> answers;
  SearchReport report;
  bool truncated = false;  // max_answers reached; more may exist

  Outcome outcome() const;
};

struct Possibility {
  Outcome outcome = Outcome::failure;
  std::optional<Trace> witness;
  Substitution bindings;
  SearchReport report;
};

struct Execution {
  Outcome outcome = Outcome::failure;
  std::optional<Answer> answer;
  SearchReport report;
};

// Most general unifier of two atoms extending `sigma`, if any.
std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution sigma = {});

// Evaluator for serial-Horn programs over a fact state. Goals run depth-first
// and left to right, rules in textual order, with every state change undone
// on backtracking. A call to a base predicate queries the state; a call to a
// defined predicate expands each matching rule in turn. `a | b` interleaves
// the two sides one step at a time (an action, a base query, a rule
// expansion, or a whole `&` conjunction), left side first.
//
// An Engine is immutable after construction and may be shared by threads;
// each evaluation works on its own copy of the input state.
class Engine {
 public:
  explicit Engine(Program program);  // runs check_program()
  ~Engine();
  Engine(Engine&&) noexcept;
  Engine& operator=(Engine&&) noexcept;

  const Program& program() const { return program_; }
  bool is_defined(Symbol predicate) const;

  // Enumerates answers lazily; `visit` returns false to stop the search.
  SearchReport for_each_answer(const State& state, const Goal& goal, const EvalConfig& config,
                               const std::function<bool(const Answer&)>& visit) const;

  Solutions solve(const State& state, const Goal& goal, const EvalConfig& config = {}) const;

  // Hypothetical: never changes anything observable.
  Possibility possible(const State& state, const Goal& goal,
                       const EvalConfig& config = {}) const;

  // Commits the first answer's final state into `state`. On failure or
  // unknown the state is left exactly as it was.
  Execution execute(State& state, const Goal& goal, const EvalConfig& config = {}) const;

  struct Compiled;

 private:
  Program program_;
  std::unique_ptr<const Compiled> compiled_;
};

}  // namespace trlc

#endif  // TRLC_ENGINE_HPP_
