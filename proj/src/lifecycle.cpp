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

#include "trlc/lifecycle.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

namespace trlc {
namespace {

std::set<Symbol> vars_in(const std::vector<Atom>& atoms) {
  std::set<Symbol> out;
  for (const Atom& a : atoms) {
    for (const Term& t : a.args) {
      if (t.is_var()) out.insert(t.name);
    }
  }
  return out;
}

std::vector<Atom> sorted_copy(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return to_string(a) < to_string(b);
  });
  return atoms;
}

Term substitute(const Term& t, const Substitution& sigma) {
  if (!t.is_var()) return t;
  auto it = sigma.find(t.name);
  return it == sigma.end() ? t : it->second;
}

Atom substitute(const Atom& a, const Substitution& sigma) {
  Atom out(a.predicate, {}, a.pos);
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(substitute(t, sigma));
  return out;
}

Substitution bind_params(const TaskDef& task, const Fact& instance) {
  Substitution sigma;
  for (std::size_t i = 0; i < task.params.size(); ++i) {
    sigma[task.params[i]] = Term::constant(instance.args[i]);
  }
  return sigma;
}

// Calls fn(sigma) for every extension of `sigma` that makes all of
// atoms[i..] hold in `state`; fn returns false to stop.
template <typename Fn>
bool for_each_solution(const std::vector<Atom>& atoms, std::size_t i, Substitution& sigma,
                       const State& state, Fn&& fn) {
  if (i == atoms.size()) return fn(sigma);
  Atom pattern = substitute(atoms[i], sigma);
  for (const Substitution& m : state.match(pattern)) {
    Substitution extended = sigma;
    extended.insert(m.begin(), m.end());
    if (!for_each_solution(atoms, i + 1, extended, state, fn)) return false;
  }
  return true;
}

bool satisfiable(const std::vector<Atom>& atoms, Substitution sigma, const State& state) {
  bool found = false;
  for_each_solution(atoms, 0, sigma, state, [&](const Substitution&) {
    found = true;
    return false;
  });
  return found;
}

void require_scope(const LifecycleModel& model, const std::vector<Symbol>& scope) {
  if (scope.empty() && model.max_arity() > 0) {
    throw LifecycleError(LifecycleError::Kind::scope,
                         "component scope is empty but the model has tasks with parameters");
  }
}

}  // namespace

Atom TaskDef::head() const {
  Atom a(name, {});
  for (Symbol p : params) a.args.push_back(Term::variable(p));
  return a;
}

void TaskDef::validate() const {
  auto fail = [&](const std::string& why) {
    throw LifecycleError(LifecycleError::Kind::invalid_task,
                         "task " + name.name() + ": " + why);
  };
  if (name.empty()) fail("empty name");
  if (name == start_symbol()) fail("'start' is reserved for the initial-state token");
  if (std::set<Symbol>(params.begin(), params.end()).size() != params.size()) {
    fail("parameters must be distinct variables");
  }
  if (requirements.empty()) fail("at least one requirement set is needed (use 'start')");
  if (productions.empty()) fail("at least one production is needed");
  std::set<Symbol> needed(params.begin(), params.end());
  for (const ElementaryAction& p : productions) {
    for (const Term& t : p.atom.args) {
      if (t.is_var()) needed.insert(t.name);
    }
  }
  std::set<std::vector<Atom>, bool (*)(const std::vector<Atom>&, const std::vector<Atom>&)>
      seen([](const std::vector<Atom>& a, const std::vector<Atom>& b) {
        return std::lexicographical_compare(
            a.begin(), a.end(), b.begin(), b.end(),
            [](const Atom& x, const Atom& y) { return to_string(x) < to_string(y); });
      });
  for (std::size_t d = 0; d < requirements.size(); ++d) {
    const std::vector<Atom>& disjunct = requirements[d];
    if (disjunct.empty()) fail("requirement set " + std::to_string(d) + " is empty");
    std::set<Symbol> have = vars_in(disjunct);
    for (Symbol v : needed) {
      if (!have.count(v)) {
        fail("variable " + v.name() + " does not occur in requirement set " +
             std::to_string(d));
      }
    }
    if (!seen.insert(sorted_copy(disjunct)).second) {
      fail("requirement set " + std::to_string(d) + " repeats an earlier one");
    }
  }
}

LifecycleModel LifecycleModel::from_tasks(std::vector<TaskDef> tasks) {
  LifecycleModel m;
  std::set<Symbol> names;
  for (const TaskDef& t : tasks) {
    t.validate();
    if (!names.insert(t.name).second) {
      throw LifecycleError(LifecycleError::Kind::invalid_task,
                           "task " + t.name.name() + " is defined twice");
    }
  }
  std::map<Symbol, std::size_t> arity;
  auto note = [&](const Atom& a) {
    if (names.count(a.predicate)) {
      throw LifecycleError(LifecycleError::Kind::invalid_task,
                           "task predicate " + a.predicate.name() +
                               " is also used as an artifact");
    }
    auto [it, fresh] = m.artifact_arity.try_emplace(a.predicate, a.arity());
    if (!fresh && it->second != a.arity()) {
      throw LifecycleError(LifecycleError::Kind::invalid_task,
                           "artifact " + a.predicate.name() + " used with two arities");
    }
    if (fresh && a.predicate != start_symbol()) m.artifacts.push_back(a.predicate);
  };
  for (const TaskDef& t : tasks) {
    bool trivial = false;
    for (const auto& disjunct : t.requirements) {
      for (const Atom& a : disjunct) note(a);
      if (disjunct.size() == 1 && disjunct.front().predicate == start_symbol()) trivial = true;
    }
    for (const ElementaryAction& p : t.productions) note(p.atom);
    if (trivial) m.start_tasks.push_back(t.name);
  }
  m.tasks = std::move(tasks);
  return m;
}

const TaskDef* LifecycleModel::find(Symbol task) const {
  for (const TaskDef& t : tasks) {
    if (t.name == task) return &t;
  }
  return nullptr;
}

bool LifecycleModel::delete_free() const {
  for (const TaskDef& t : tasks) {
    for (const ElementaryAction& p : t.productions) {
      if (p.polarity == Polarity::remove) return false;
    }
  }
  return true;
}

std::size_t LifecycleModel::max_arity() const {
  std::size_t n = 0;
  for (const TaskDef& t : tasks) n = std::max(n, t.arity());
  return n;
}

std::vector<Rule> compile_task(const TaskDef& task) {
  std::vector<Rule> rules;
  for (const auto& disjunct : task.requirements) {
    std::vector<Goal> body;
    if (disjunct.size() == 1) {
      body.push_back(Goal::call(disjunct.front()));
    } else {
      std::vector<Goal> calls;
      for (const Atom& a : disjunct) calls.push_back(Goal::call(a));
      body.push_back(Goal::query_conj(std::move(calls)));
    }
    for (const ElementaryAction& p : task.productions) body.push_back(Goal::act(p));
    rules.push_back(Rule{task.head(), Goal::serial(std::move(body)), {}});
  }
  return rules;
}

Program compile_model(const LifecycleModel& model) {
  Program p;
  p.source_name = "<lifecycle>";
  for (const TaskDef& t : model.tasks) {
    for (Rule& r : compile_task(t)) p.rules.push_back(std::move(r));
  }
  check_program(p);
  return p;
}

namespace {

[[noreturn]] void not_task_shaped(const Rule& r, const std::string& why) {
  throw LifecycleError(LifecycleError::Kind::recognition,
                       std::to_string(r.pos.line) + ":" + std::to_string(r.pos.column) +
                           ": rule '" + to_string(r) + "' is not a task: " + why);
}

struct RuleShape {
  std::vector<Atom> requirements;
  std::vector<ElementaryAction> productions;
};

RuleShape split_rule(const Rule& r, const Program& program) {
  std::vector<const Goal*> items;
  if (r.body.kind == Goal::Kind::serial) {
    for (const Goal& g : r.body.children) items.push_back(&g);
  } else {
    items.push_back(&r.body);
  }
  RuleShape shape;
  std::size_t i = 0;
  auto require = [&](const Goal& g) {
    if (program.is_defined(g.atom.predicate)) {
      not_task_shaped(r, "requirement " + to_string(g.atom) + " calls another task");
    }
    shape.requirements.push_back(g.atom);
  };
  for (; i < items.size(); ++i) {
    const Goal& g = *items[i];
    if (g.kind == Goal::Kind::call) {
      require(g);
    } else if (g.kind == Goal::Kind::query_conj) {
      for (const Goal& c : g.children) {
        if (c.kind != Goal::Kind::call) {
          not_task_shaped(r, "requirements must be plain artifact queries");
        }
        require(c);
      }
    } else {
      break;
    }
  }
  if (shape.requirements.empty()) {
    not_task_shaped(r, i < items.size() && items[i]->kind == Goal::Kind::act
                           ? "an action comes before any requirement"
                           : "no requirement precedes the productions");
  }
  for (; i < items.size(); ++i) {
    const Goal& g = *items[i];
    if (g.kind != Goal::Kind::act) {
      not_task_shaped(r, "only actions may follow the productions' first action");
    }
    shape.productions.push_back(g.action());
  }
  if (shape.productions.empty()) not_task_shaped(r, "it produces nothing");
  return shape;
}

Atom rename(const Atom& a, const std::map<Symbol, Symbol>& names) {
  Atom out(a.predicate, {}, a.pos);
  for (const Term& t : a.args) {
    auto it = t.is_var() ? names.find(t.name) : names.end();
    out.args.push_back(it == names.end() ? t : Term::variable(it->second));
  }
  return out;
}

}  // namespace

LifecycleModel recognize_tasks(const Program& program) {
  std::vector<TaskDef> tasks;
  std::map<Symbol, std::size_t> index;
  for (const Rule& r : program.rules) {
    std::vector<Symbol> params;
    for (const Term& t : r.head.args) {
      if (!t.is_var() || std::find(params.begin(), params.end(), t.name) != params.end()) {
        not_task_shaped(r, "head arguments must be distinct variables");
      }
      params.push_back(t.name);
    }
    RuleShape shape = split_rule(r, program);
    auto [it, fresh] = index.try_emplace(r.head.predicate, tasks.size());
    if (fresh) {
      tasks.push_back(TaskDef{r.head.predicate, params, {std::move(shape.requirements)},
                              std::move(shape.productions)});
      continue;
    }
    TaskDef& task = tasks[it->second];
    // Align this rule's variable names with the task's parameters; other
    // variables that would collide are renamed apart.
    std::map<Symbol, Symbol> names;
    for (std::size_t k = 0; k < params.size(); ++k) names[params[k]] = task.params[k];
    std::set<Symbol> taken(task.params.begin(), task.params.end());
    for (Symbol v : vars_in(shape.requirements)) {
      if (names.count(v)) continue;
      Symbol target = v;
      for (int n = 1; taken.count(target); ++n) {
        target = Symbol::intern(v.name() + "_" + std::to_string(n));
      }
      names[v] = target;
      taken.insert(target);
    }
    std::vector<Atom> disjunct;
    for (const Atom& a : shape.requirements) disjunct.push_back(rename(a, names));
    std::vector<ElementaryAction> productions;
    for (const ElementaryAction& p : shape.productions) {
      productions.push_back({p.polarity, rename(p.atom, names)});
    }
    if (productions != task.productions) {
      not_task_shaped(r, "its productions differ from the earlier rules for " +
                             r.head.predicate.name());
    }
    task.requirements.push_back(std::move(disjunct));
  }
  try {
    return LifecycleModel::from_tasks(std::move(tasks));
  } catch (const LifecycleError& e) {
    throw LifecycleError(LifecycleError::Kind::recognition, e.what());
  }
}

std::vector<Fact> task_instances(const TaskDef& task, const std::vector<Symbol>& scope) {
  std::vector<Fact> out;
  const std::size_t n = task.arity();
  if (n > 0 && scope.empty()) return out;
  std::vector<std::size_t> odometer(n, 0);
  for (;;) {
    Fact f{task.name, {}};
    for (std::size_t k : odometer) f.args.push_back(scope[k]);
    out.push_back(std::move(f));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < scope.size()) break;
      odometer[pos] = 0;
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

std::vector<EnabledTask> enabled_instances(const LifecycleModel& model, const State& state,
                                           const std::vector<Symbol>& scope) {
  require_scope(model, scope);
  std::vector<EnabledTask> out;
  for (const TaskDef& t : model.tasks) {
    for (Fact& inst : task_instances(t, scope)) {
      Substitution sigma = bind_params(t, inst);
      for (std::size_t d = 0; d < t.requirements.size(); ++d) {
        if (satisfiable(t.requirements[d], sigma, state)) {
          out.push_back(EnabledTask{std::move(inst), d});
          break;
        }
      }
    }
  }
  return out;
}

std::vector<Fact> enabled_tasks(const LifecycleModel& model, const State& state,
                                const std::vector<Symbol>& scope) {
  std::vector<Fact> out;
  for (EnabledTask& e : enabled_instances(model, state, scope)) out.push_back(std::move(e.task));
  return out;
}

std::vector<BlockedTask> blocked_tasks(const LifecycleModel& model, const State& state,
                                       const std::vector<Symbol>& scope) {
  require_scope(model, scope);
  std::vector<BlockedTask> out;
  for (const TaskDef& t : model.tasks) {
    for (Fact& inst : task_instances(t, scope)) {
      Substitution sigma = bind_params(t, inst);
      BlockedTask b{inst, {}};
      bool enabled = false;
      for (const auto& disjunct : t.requirements) {
        if (satisfiable(disjunct, sigma, state)) {
          enabled = true;
          break;
        }
        std::vector<Atom> missing;
        for (const Atom& a : disjunct) {
          Atom pattern = substitute(a, sigma);
          if (state.match(pattern).empty()) missing.push_back(pattern);
        }
        b.missing.push_back(std::move(missing));
      }
      if (!enabled) out.push_back(std::move(b));
    }
  }
  return out;
}

std::size_t DependencyGraph::count(NodeKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [&](const Node& n) { return n.kind == kind; }));
}

DependencyGraph dependency_graph(const LifecycleModel& model) {
  DependencyGraph g;
  std::map<Symbol, std::size_t> task_node, artifact_node;
  for (const TaskDef& t : model.tasks) {
    task_node[t.name] = g.nodes.size();
    g.nodes.push_back({t.name, DependencyGraph::NodeKind::task});
  }
  auto artifact = [&](Symbol a) {
    auto [it, fresh] = artifact_node.try_emplace(a, g.nodes.size());
    if (fresh) g.nodes.push_back({a, DependencyGraph::NodeKind::artifact});
    return it->second;
  };
  if (model.artifact_arity.count(start_symbol())) artifact(start_symbol());
  for (Symbol a : model.artifacts) artifact(a);
  for (const TaskDef& t : model.tasks) {
    std::size_t tn = task_node[t.name];
    for (std::size_t d = 0; d < t.requirements.size(); ++d) {
      for (const Atom& a : t.requirements[d]) {
        g.edges.push_back({artifact(a.predicate), tn, DependencyGraph::EdgeKind::requirement, d,
                           Polarity::insert});
      }
    }
    for (const ElementaryAction& p : t.productions) {
      g.edges.push_back(
          {tn, artifact(p.atom.predicate), DependencyGraph::EdgeKind::production, 0, p.polarity});
    }
  }
  return g;
}

std::string to_dot(const DependencyGraph& graph) {
  std::string out = "digraph lifecycle {\n";
  if (!graph.nodes.empty()) out += "  rankdir=LR;\n";
  for (const auto& n : graph.nodes) {
    out += "  \"" + n.name.name() + "\" [shape=" +
           (n.kind == DependencyGraph::NodeKind::task ? "box" : "ellipse") + "];\n";
  }
  for (const auto& e : graph.edges) {
    out += "  \"" + graph.nodes[e.from].name.name() + "\" -> \"" +
           graph.nodes[e.to].name.name() + "\" [label=\"";
    if (e.kind == DependencyGraph::EdgeKind::requirement) {
      out += std::to_string(e.disjunct);
    } else {
      out += e.polarity == Polarity::insert ? "+" : "-";
    }
    out += "\"];\n";
  }
  out += "}\n";
  return out;
}

std::vector<Symbol> critical_requirements(const LifecycleModel& model, Symbol task) {
  const TaskDef* t = model.find(task);
  if (!t) {
    throw LifecycleError(LifecycleError::Kind::unknown_task, "unknown task " + task.name());
  }
  std::vector<Symbol> out;
  for (const Atom& a : t->requirements.front()) {
    if (std::find(out.begin(), out.end(), a.predicate) != out.end()) continue;
    bool everywhere = std::all_of(
        t->requirements.begin() + 1, t->requirements.end(), [&](const std::vector<Atom>& d) {
          return std::any_of(d.begin(), d.end(),
                             [&](const Atom& b) { return b.predicate == a.predicate; });
        });
    if (everywhere) out.push_back(a.predicate);
  }
  return out;
}

State reachable_artifacts(const LifecycleModel& model, const State& state,
                          const std::vector<Symbol>& scope) {
  if (!model.delete_free()) {
    throw LifecycleError(LifecycleError::Kind::delete_unsupported,
                         "model has delete productions; use possible() per artifact instead");
  }
  require_scope(model, scope);
  State out = state;
  for (bool changed = true; changed;) {
    changed = false;
    for (const TaskDef& t : model.tasks) {
      for (const Fact& inst : task_instances(t, scope)) {
        for (const auto& disjunct : t.requirements) {
          std::vector<Fact> produced;
          Substitution sigma = bind_params(t, inst);
          for_each_solution(disjunct, 0, sigma, out, [&](const Substitution& s) {
            for (const ElementaryAction& p : t.productions) {
              produced.push_back(Fact::from_atom(substitute(p.atom, s)));
            }
            return true;
          });
          for (const Fact& f : produced) {
            changed |= out.apply({Polarity::insert, f}).effective;
          }
        }
      }
    }
  }
  return out;
}

Plan plan(const LifecycleModel& model, const State& state, const Fact& goal,
          const std::vector<Symbol>& scope, const EvalConfig& config) {
  if (!model.is_artifact(goal.predicate)) {
    throw LifecycleError(LifecycleError::Kind::unknown_artifact,
                         "goal " + to_string(goal) + " is not an artifact of the model");
  }
  require_scope(model, scope);
  Plan result;
  if (state.contains(goal)) {
    result.outcome = Outcome::success;
    return result;
  }
  Engine engine(compile_model(model));
  std::vector<Fact> instances;
  for (const TaskDef& t : model.tasks) {
    for (Fact& f : task_instances(t, scope)) instances.push_back(std::move(f));
  }

  // Breadth-first over states, children in declaration order: the first
  // plan found is the shortest, ties going to the earliest task sequence.
  struct Node {
    State state;
    std::size_t parent;
    std::size_t via;
  };
  std::vector<Node> nodes{{state, 0, 0}};
  std::unordered_set<std::string> visited{state.snapshot()};
  std::vector<std::size_t> frontier{0};
  bool uncertain = false;
  for (std::uint32_t length = 1; !frontier.empty(); ++length) {
    if (length > config.max_depth) {
      result.outcome = Outcome::unknown;
      return result;
    }
    std::vector<std::size_t> next;
    for (std::size_t n : frontier) {
      for (std::size_t k = 0; k < instances.size(); ++k) {
        State s = nodes[n].state;
        Execution ex = engine.execute(s, Goal::call(instances[k].to_atom()), config);
        if (ex.outcome == Outcome::unknown) uncertain = true;
        if (ex.outcome != Outcome::success) continue;
        if (!visited.insert(s.snapshot()).second) continue;
        bool reached = s.contains(goal);
        nodes.push_back({std::move(s), n, k});
        if (reached) {
          for (std::size_t at = nodes.size() - 1; at != 0; at = nodes[at].parent) {
            result.tasks.push_back(instances[nodes[at].via]);
          }
          std::reverse(result.tasks.begin(), result.tasks.end());
          result.outcome = Outcome::success;
          return result;
        }
        next.push_back(nodes.size() - 1);
      }
    }
    frontier = std::move(next);
  }
  result.outcome = uncertain ? Outcome::unknown : Outcome::failure;
  return result;
}

}  // namespace trlc
