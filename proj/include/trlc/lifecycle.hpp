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

#ifndef TRLC_LIFECYCLE_HPP_
#define TRLC_LIFECYCLE_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trlc/ast.hpp"
#include "trlc/engine.hpp"
#include "trlc/state.hpp"

namespace trlc {

class LifecycleError : public std::runtime_error {
 public:
  enum class Kind {
    invalid_task,
    recognition,
    unknown_task,
    unknown_artifact,
    delete_unsupported,
    scope
  };
  LifecycleError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A software-process task: it may run once any one requirement set (a
// disjunct of artifact patterns) holds, and its completion applies the
// productions in order. A task with no prerequisites requires the reserved
// nullary artifact `start`.
struct TaskDef {
  Symbol name;
  std::vector<Symbol> params;  // head variables, one per argument
  std::vector<std::vector<Atom>> requirements;
  std::vector<ElementaryAction> productions;

  std::size_t arity() const { return params.size(); }
  Atom head() const;
  // Throws LifecycleError(invalid_task) naming the broken invariant.
  void validate() const;

  friend bool operator==(const TaskDef& a, const TaskDef& b) {
    return a.name == b.name && a.params == b.params && a.requirements == b.requirements &&
           a.productions == b.productions;
  }
};

struct LifecycleModel {
  std::vector<TaskDef> tasks;
  std::vector<Symbol> artifacts;                 // first-appearance order, `start` excluded
  std::map<Symbol, std::size_t> artifact_arity;  // includes `start` when used
  std::vector<Symbol> start_tasks;

  // Validates each task and the task/artifact namespace split.
  static LifecycleModel from_tasks(std::vector<TaskDef> tasks);

  const TaskDef* find(Symbol task) const;
  bool is_artifact(Symbol predicate) const { return artifact_arity.count(predicate) > 0; }
  bool delete_free() const;
  std::size_t max_arity() const;
};

// One rule per requirement disjunct: name(params) :- requirements * productions.
std::vector<Rule> compile_task(const TaskDef& task);
Program compile_model(const LifecycleModel& model);

// Inverse of compile_task over a whole program. Rules are grouped by head
// predicate; each must be a requirement prefix of artifact queries (joined
// by '&' or '*') followed by actions only.
LifecycleModel recognize_tasks(const Program& program);

// Ground instances p(c1..cn) of every n-ary task with arguments from `scope`,
// in task order then odometer order over scope.
std::vector<Fact> task_instances(const TaskDef& task, const std::vector<Symbol>& scope);

struct EnabledTask {
  Fact task;
  std::size_t disjunct = 0;  // first satisfied requirement set
};

struct BlockedTask {
  Fact task;
  // Per disjunct, the requirement atoms (instantiated) not currently held.
  std::vector<std::vector<Atom>> missing;
};

std::vector<EnabledTask> enabled_instances(const LifecycleModel& model, const State& state,
                                           const std::vector<Symbol>& scope);
std::vector<Fact> enabled_tasks(const LifecycleModel& model, const State& state,
                                const std::vector<Symbol>& scope);
std::vector<BlockedTask> blocked_tasks(const LifecycleModel& model, const State& state,
                                       const std::vector<Symbol>& scope);

struct DependencyGraph {
  enum class NodeKind { task, artifact };
  enum class EdgeKind { requirement, production };

  struct Node {
    Symbol name;
    NodeKind kind;
  };
  struct Edge {
    std::size_t from;
    std::size_t to;
    EdgeKind kind;
    std::size_t disjunct = 0;              // requirement edges
    Polarity polarity = Polarity::insert;  // production edges
  };

  std::vector<Node> nodes;  // tasks first, then artifacts
  std::vector<Edge> edges;

  std::size_t count(NodeKind kind) const;
};

DependencyGraph dependency_graph(const LifecycleModel& model);
// Tasks as boxes, artifacts as ellipses; requirement edges are labelled with
// their disjunct index and production edges with + or -.
std::string to_dot(const DependencyGraph& graph);

// Artifact predicates that occur in every requirement set of `task`.
std::vector<Symbol> critical_requirements(const LifecycleModel& model, Symbol task);

// Least fixpoint of firing enabled tasks' insertions from `state`.
State reachable_artifacts(const LifecycleModel& model, const State& state,
                          const std::vector<Symbol>& scope);

struct Plan {
  Outcome outcome = Outcome::failure;
  std::vector<Fact> tasks;
};

// A shortest sequence of task instances whose in-order execution from
// `state` makes `goal` hold; among equally short plans, the earliest in task
// declaration order. Plan length is bounded by config.max_depth.
Plan plan(const LifecycleModel& model, const State& state, const Fact& goal,
          const std::vector<Symbol>& scope, const EvalConfig& config = {});

}  // namespace trlc

#endif  // TRLC_LIFECYCLE_HPP_
