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

#include "trlc/json_io.hpp"

#include <algorithm>

#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

namespace trlc::json_io {

json outcome(Outcome o) {
  switch (o) {
    case Outcome::success:
      return true;
    case Outcome::failure:
      return false;
    case Outcome::unknown:
      break;
  }
  return "unknown";
}

json state(const State& s) {
  json out = json::array();
  for (const Fact& f : s.sorted_facts()) out.push_back(to_string(f));
  return out;
}

json actions(const std::vector<GroundAction>& actions) {
  json out = json::array();
  for (const GroundAction& a : actions) out.push_back(to_string(a));
  return out;
}

json bindings(const Substitution& sigma) {
  json out = json::object();
  for (const auto& [var, value] : sigma) out[var.name()] = to_string(value);
  return out;
}

json report(const SearchReport& r) {
  return {{"steps", r.steps},
          {"depth_exhausted", r.depth_exhausted},
          {"interleavings_exhausted", r.interleavings_exhausted},
          {"steps_exhausted", r.steps_exhausted}};
}

json task(const TaskDef& t) {
  json params = json::array(), needs = json::array(), produces = json::array();
  for (Symbol p : t.params) params.push_back(p.name());
  for (const auto& disjunct : t.requirements) {
    json d = json::array();
    for (const Atom& a : disjunct) d.push_back(to_string(a));
    needs.push_back(std::move(d));
  }
  for (const ElementaryAction& p : t.productions) produces.push_back(to_string(p));
  return {{"name", t.name.name()},
          {"arity", t.arity()},
          {"params", params},
          {"requires", needs},
          {"produces", produces}};
}

namespace {

[[noreturn]] void bad(const std::string& why) {
  throw LifecycleError(LifecycleError::Kind::invalid_task, why);
}

}  // namespace

TaskDef task(const json& j) {
  if (!j.is_object()) bad("a task must be a JSON object");
  if (!j.contains("name") || !j["name"].is_string()) bad("task needs a string 'name'");
  TaskDef t;
  t.name = Symbol::intern(j["name"].get<std::string>());
  const std::string where = "task " + t.name.name() + ": ";
  if (!j.contains("requires") || !j["requires"].is_array()) {
    bad(where + "'requires' must be an array of arrays of atoms");
  }
  for (const json& d : j["requires"]) {
    if (!d.is_array()) bad(where + "each requirement set must be an array");
    std::vector<Atom> disjunct;
    for (const json& a : d) {
      if (!a.is_string()) bad(where + "requirements must be atom strings");
      disjunct.push_back(parse_atom(a.get<std::string>()));
    }
    t.requirements.push_back(std::move(disjunct));
  }
  if (!j.contains("produces") || !j["produces"].is_array()) {
    bad(where + "'produces' must be an array of signed atoms");
  }
  for (const json& p : j["produces"]) {
    if (!p.is_string()) bad(where + "productions must be strings like \"+a(C)\"");
    t.productions.push_back(parse_action(p.get<std::string>()));
  }
  std::size_t arity = 0;
  if (j.contains("arity")) {
    if (!j["arity"].is_number_unsigned()) bad(where + "'arity' must be a non-negative integer");
    arity = j["arity"].get<std::size_t>();
  }
  if (j.contains("params")) {
    if (!j["params"].is_array()) bad(where + "'params' must be an array of variable names");
    for (const json& p : j["params"]) {
      if (!p.is_string()) bad(where + "'params' must be an array of variable names");
      Atom probe = parse_atom("p(" + p.get<std::string>() + ")");
      if (!probe.args.front().is_var()) bad(where + "parameter " + p.dump() + " is not a variable");
      t.params.push_back(probe.args.front().name);
    }
    if (j.contains("arity") && t.params.size() != arity) {
      bad(where + "'arity' disagrees with 'params'");
    }
  } else if (arity > 0) {
    if (t.requirements.empty()) bad(where + "no requirement set to take parameters from");
    for (const Atom& a : t.requirements.front()) {
      for (const Term& term : a.args) {
        if (t.params.size() < arity && term.is_var() &&
            std::find(t.params.begin(), t.params.end(), term.name) == t.params.end()) {
          t.params.push_back(term.name);
        }
      }
    }
    if (t.params.size() < arity) {
      bad(where + "first requirement set has fewer than " + std::to_string(arity) +
          " variables");
    }
  }
  return t;
}

std::vector<TaskDef> tasks(const json& j) {
  if (!j.is_array()) bad("'tasks' must be an array");
  std::vector<TaskDef> out;
  for (const json& t : j) out.push_back(task(t));
  return out;
}

json graph(const DependencyGraph& g) {
  json nodes = json::array(), edges = json::array();
  for (const auto& n : g.nodes) {
    nodes.push_back({{"id", n.name.name()},
                     {"kind", n.kind == DependencyGraph::NodeKind::task ? "task" : "artifact"}});
  }
  for (const auto& e : g.edges) {
    json edge = {{"from", g.nodes[e.from].name.name()}, {"to", g.nodes[e.to].name.name()}};
    if (e.kind == DependencyGraph::EdgeKind::requirement) {
      edge["kind"] = "requirement";
      edge["disjunct"] = e.disjunct;
    } else {
      edge["kind"] = "production";
      edge["polarity"] = e.polarity == Polarity::insert ? "+" : "-";
    }
    edges.push_back(std::move(edge));
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

json enabled(const LifecycleModel& model, const std::vector<EnabledTask>& on,
             const std::vector<BlockedTask>& off) {
  auto critical = [&](Symbol task) {
    json out = json::array();
    for (Symbol a : critical_requirements(model, task)) out.push_back(a.name());
    return out;
  };
  json e = json::array(), b = json::array();
  for (const EnabledTask& t : on) {
    e.push_back({{"task", to_string(t.task)},
                 {"disjunct", t.disjunct},
                 {"critical", critical(t.task.predicate)}});
  }
  for (const BlockedTask& t : off) {
    json missing = json::array();
    for (const auto& d : t.missing) {
      json m = json::array();
      for (const Atom& a : d) m.push_back(to_string(a));
      missing.push_back(std::move(m));
    }
    b.push_back({{"task", to_string(t.task)},
                 {"missing", missing},
                 {"critical", critical(t.task.predicate)}});
  }
  return {{"enabled", e}, {"blocked", b}};
}

json plan(const Plan& p) {
  json steps = json::array();
  for (const Fact& f : p.tasks) steps.push_back(to_string(f));
  return {{"outcome", outcome(p.outcome)}, {"plan", steps}};
}

GroundAction ground_action(const std::string& text) {
  return GroundAction::from_action(parse_action(text));
}

}  // namespace trlc::json_io
