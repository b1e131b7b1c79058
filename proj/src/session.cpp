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

#include "trlc/session.hpp"

#include <chrono>
#include <ctime>
#include <set>
#include <fstream>

#include "trlc/corpus.hpp"
#include "trlc/json_io.hpp"
#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

namespace trlc {

using nlohmann::json;

json Event::to_json() const {
  return {{"seq", seq}, {"timestamp", timestamp}, {"kind", kind}, {"payload", payload},
          {"digest", digest}};
}

Event Event::from_json(const json& j) {
  Event e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.timestamp = j.at("timestamp").get<std::string>();
  e.kind = j.at("kind").get<std::string>();
  e.payload = j.at("payload");
  e.digest = j.at("digest").get<std::string>();
  return e;
}

namespace {

using UndoStack = std::vector<std::pair<std::uint64_t, std::vector<ActionRecord>>>;

[[noreturn]] void invalid(const std::string& why) {
  throw SessionError(SessionError::Kind::invalid_request, why);
}

std::string now_utc() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t t = system_clock::to_time_t(now);
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

State initial_state(const json& facts) {
  std::vector<Fact> out{Fact{start_symbol(), {}}};
  for (const json& f : facts) out.push_back(Fact::from_atom(parse_atom(f.get<std::string>())));
  return State(out);
}

// Applies one logged event to (state, stack); shared by replay and restore.
void apply_logged(const Event& e, State& state, UndoStack& stack) {
  if (e.kind == "load") {
    state = initial_state(e.payload.at("initial"));
    stack.clear();
  } else if (e.kind == "undo") {
    if (stack.empty()) invalid("event " + std::to_string(e.seq) + ": nothing to undo");
    const auto& records = stack.back().second;
    for (auto it = records.rbegin(); it != records.rend(); ++it) state.revert(*it);
    stack.pop_back();
  } else {
    std::vector<ActionRecord> records;
    for (const json& a : e.payload.at("actions")) {
      records.push_back(state.apply(json_io::ground_action(a.get<std::string>())));
    }
    stack.emplace_back(e.seq, std::move(records));
  }
}

struct Loaded {
  Program program;
  LifecycleModel model;
  std::vector<Symbol> scope;
  std::string source;
};

Loaded load_request(const json& request) {
  if (!request.is_object()) invalid("request body must be a JSON object");
  const int sources = static_cast<int>(request.contains("corpus")) +
                      static_cast<int>(request.contains("program")) +
                      static_cast<int>(request.contains("tasks"));
  if (sources != 1) invalid("give exactly one of 'corpus', 'program' or 'tasks'");
  Loaded out;
  if (request.contains("corpus")) {
    if (!request["corpus"].is_string()) invalid("'corpus' must be a string id");
    const std::string id = request["corpus"].get<std::string>();
    const CorpusEntry* entry = nullptr;
    try {
      entry = &get_corpus(id);
    } catch (const UnknownCorpusEntry& e) {
      invalid(e.what());
    }
    out.program = parse_program(entry->program, id + ".tlp");
    out.model = recognize_tasks(out.program);
    out.source = "corpus:" + id;
  } else if (request.contains("program")) {
    if (!request["program"].is_string()) invalid("'program' must be .tlp text");
    out.program = parse_program(request["program"].get<std::string>(), "upload.tlp");
    out.model = recognize_tasks(out.program);
    out.source = "program";
  } else {
    out.model = LifecycleModel::from_tasks(json_io::tasks(request["tasks"]));
    out.program = compile_model(out.model);
    out.source = "tasks";
  }
  if (request.contains("scope")) {
    if (!request["scope"].is_array()) invalid("'scope' must be an array of constants");
    for (const json& c : request["scope"]) {
      if (!c.is_string()) invalid("'scope' must be an array of constants");
      const Atom probe = parse_atom("scope(" + c.get<std::string>() + ")");
      if (probe.args.size() != 1 || probe.args.front().is_var()) {
        invalid("scope entry " + c.dump() + " is not a constant");
      }
      const Symbol s = probe.args.front().name;
      if (std::find(out.scope.begin(), out.scope.end(), s) == out.scope.end()) {
        out.scope.push_back(s);
      }
    }
  }
  if (out.scope.empty() && out.model.max_arity() > 0) {
    throw LifecycleError(LifecycleError::Kind::scope,
                         "scope is empty but some tasks take a component argument");
  }
  return out;
}

}  // namespace

ProjectSession::ProjectSession(std::string id, Program program, LifecycleModel model,
                               std::vector<Symbol> scope, EvalConfig config, std::string source)
    : id_(std::move(id)),
      engine_(std::move(program)),
      model_(std::move(model)),
      scope_(std::move(scope)),
      config_(config),
      source_(std::move(source)) {
  config_.validate();
}

std::shared_ptr<ProjectSession> ProjectSession::create(
    std::string id, const json& request, EvalConfig config,
    std::optional<std::filesystem::path> log_dir) {
  Loaded l = load_request(request);
  json initial = json::array();
  for (const Atom& f : l.program.facts) initial.push_back(to_string(f));
  if (request.contains("facts")) {
    if (!request["facts"].is_array()) invalid("'facts' must be an array of ground atoms");
    for (const json& f : request["facts"]) {
      if (!f.is_string()) invalid("'facts' must be an array of ground atoms");
      const Atom a = parse_atom(f.get<std::string>());
      if (!a.is_ground()) invalid("initial fact " + to_string(a) + " is not ground");
      initial.push_back(to_string(a));
    }
  }
  std::shared_ptr<ProjectSession> s(new ProjectSession(
      std::move(id), std::move(l.program), std::move(l.model), std::move(l.scope), config,
      std::move(l.source)));
  if (request.contains("facts")) {
    for (const json& f : request["facts"]) s->check_artifact(parse_atom(f.get<std::string>()));
  }
  if (log_dir) s->log_file_ = *log_dir / (s->id_ + ".jsonl");
  std::lock_guard lock(s->mutex_);
  s->state_ = initial_state(initial);
  s->commit("load", {{"request", request}, {"initial", initial}}, {});
  return s;
}

std::shared_ptr<ProjectSession> ProjectSession::restore(
    std::string id, const std::vector<Event>& events, EvalConfig config,
    std::optional<std::filesystem::path> log_dir) {
  if (events.empty() || events.front().kind != "load") {
    invalid("session log for " + id + " does not start with a load event");
  }
  const json& request = events.front().payload.at("request");
  Loaded l = load_request(request);
  std::shared_ptr<ProjectSession> s(new ProjectSession(
      std::move(id), std::move(l.program), std::move(l.model), std::move(l.scope), config,
      std::move(l.source)));
  if (request.contains("facts")) {
    for (const json& f : request["facts"]) s->check_artifact(parse_atom(f.get<std::string>()));
  }
  if (log_dir) s->log_file_ = *log_dir / (s->id_ + ".jsonl");
  std::lock_guard lock(s->mutex_);
  for (const Event& e : events) {
    if (e.seq != s->events_.size() + 1) invalid("session log for " + s->id_ + " has a gap");
    s->apply_event(e);
    s->events_.push_back(e);
  }
  s->publish();
  return s;
}

std::vector<std::shared_ptr<ProjectSession>> ProjectSession::restore_all(
    const std::filesystem::path& dir, EvalConfig config) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<std::shared_ptr<ProjectSession>> out;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::vector<Event> events;
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) events.push_back(Event::from_json(json::parse(line)));
    }
    out.push_back(restore(path.stem().string(), events, config, dir));
  }
  return out;
}

State ProjectSession::replay(const std::vector<Event>& events) {
  State state;
  UndoStack stack;
  for (const Event& e : events) apply_logged(e, state, stack);
  return state;
}

std::shared_ptr<const ProjectSession::View> ProjectSession::view() const {
  return std::atomic_load(&view_);
}

ProjectSession::QueryResult ProjectSession::query(const std::string& text) const {
  std::string t(text);
  const auto b = t.find_first_not_of(" \t\r\n");
  t = b == std::string::npos ? std::string() : t.substr(b);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  if (t.rfind("?-", 0) != 0) t = "?- " + t;
  if (t.empty() || t.back() != '.') t += '.';
  Query q = parse_query(t);
  std::set<Symbol> known;
  for (const auto& [artifact, arity] : model_.artifact_arity) known.insert(artifact);
  validate_goal(program(), q.goal, known);
  Possibility p = engine_.possible(view()->state, q.goal, config_);
  return {std::move(q.goal), std::move(p)};
}

std::vector<EnabledTask> ProjectSession::enabled() const {
  return enabled_instances(model_, view()->state, scope_);
}

std::vector<BlockedTask> ProjectSession::blocked() const {
  return blocked_tasks(model_, view()->state, scope_);
}

Plan ProjectSession::plan(const Fact& goal) const {
  return trlc::plan(model_, view()->state, goal, scope_, config_);
}

Event ProjectSession::execute(const Atom& task) {
  const TaskDef* def = model_.find(task.predicate);
  if (!def) invalid("unknown task " + task.predicate.name());
  if (task.arity() != def->arity()) {
    invalid("task " + task.predicate.name() + " takes " + std::to_string(def->arity()) +
            " argument(s)");
  }
  if (!task.is_ground()) invalid("task atom " + to_string(task) + " is not ground");
  std::lock_guard lock(mutex_);
  State scratch = state_;
  Execution ex = engine_.execute(scratch, Goal::call(task), config_);
  if (ex.outcome == Outcome::unknown) {
    throw SessionError(SessionError::Kind::not_executable,
                       to_string(task) + " could not be decided within the search bounds");
  }
  if (ex.outcome != Outcome::success) {
    throw SessionError(SessionError::Kind::not_executable,
                       to_string(task) + " is not executable in the current state");
  }
  return commit("execute", {{"task", to_string(task)}}, ex.answer->trace.actions());
}

void ProjectSession::check_artifact(const Atom& fact) const {
  if (!fact.is_ground()) invalid("fact " + to_string(fact) + " is not ground");
  auto it = model_.artifact_arity.find(fact.predicate);
  if (it == model_.artifact_arity.end()) {
    invalid(fact.predicate.name() + " is not an artifact of this lifecycle");
  }
  if (fact.predicate == start_symbol()) invalid("'start' is managed by the session");
  if (it->second != fact.arity()) {
    invalid("artifact " + fact.predicate.name() + " takes " + std::to_string(it->second) +
            " argument(s)");
  }
}

Event ProjectSession::assert_fact(const Atom& fact) {
  check_artifact(fact);
  std::lock_guard lock(mutex_);
  const Fact f = Fact::from_atom(fact);
  return commit("assert", {{"fact", to_string(f)}}, {GroundAction{Polarity::insert, f}});
}

Event ProjectSession::retract_fact(const Atom& fact) {
  check_artifact(fact);
  std::lock_guard lock(mutex_);
  const Fact f = Fact::from_atom(fact);
  return commit("retract", {{"fact", to_string(f)}}, {GroundAction{Polarity::remove, f}});
}

Event ProjectSession::undo() {
  std::lock_guard lock(mutex_);
  if (undo_stack_.empty()) {
    throw SessionError(SessionError::Kind::nothing_to_undo, "nothing to undo");
  }
  return commit("undo", {{"undoes", undo_stack_.back().first}}, {});
}

Event ProjectSession::commit(const std::string& kind, json payload,
                             const std::vector<GroundAction>& actions) {
  Event e;
  e.seq = events_.size() + 1;
  e.timestamp = now_utc();
  e.kind = kind;
  if (kind != "load" && kind != "undo") payload["actions"] = json_io::actions(actions);
  e.payload = std::move(payload);
  if (kind != "load") apply_event(e);
  e.digest = state_.digest();
  persist(e);
  events_.push_back(e);
  publish();
  return e;
}

void ProjectSession::apply_event(const Event& e) {
  apply_logged(e, state_, undo_stack_);
}

void ProjectSession::publish() {
  auto v = std::make_shared<View>();
  v->state = state_;
  v->events = events_;
  v->undoable = undo_stack_.size();
  std::atomic_store(&view_, std::shared_ptr<const View>(std::move(v)));
}

void ProjectSession::persist(const Event& e) {
  if (!log_file_) return;
  std::ofstream out(*log_file_, std::ios::app);
  out << e.to_json().dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot append to " + log_file_->string());
}

}  // namespace trlc
