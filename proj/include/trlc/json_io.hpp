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

#ifndef TRLC_JSON_IO_HPP_
#define TRLC_JSON_IO_HPP_

#include "json.hpp"
#include "trlc/engine.hpp"
#include "trlc/lifecycle.hpp"
#include "trlc/state.hpp"

// JSON encodings shared by the service, the CLI's --json output and the
// session event log. Atoms and actions travel as strings in clause syntax.
namespace trlc::json_io {

using nlohmann::json;

json outcome(Outcome o);  // true, false or "unknown"
json state(const State& s);  // sorted fact strings
json actions(const std::vector<GroundAction>& actions);
json bindings(const Substitution& sigma);  // {"X": "car"}, by variable name
json report(const SearchReport& r);

// {"name", "arity", "params", "requires", "produces"}; "params" is optional
// on input and defaults to the first `arity` distinct variables met in the
// first requirement set.
json task(const TaskDef& t);
TaskDef task(const json& j);
std::vector<TaskDef> tasks(const json& j);

json graph(const DependencyGraph& g);
json enabled(const LifecycleModel& model, const std::vector<EnabledTask>& on,
             const std::vector<BlockedTask>& off);
json plan(const Plan& p);

GroundAction ground_action(const std::string& text);  // "+p(a)" / "-p(a)"

}  // namespace trlc::json_io

#endif  // TRLC_JSON_IO_HPP_
