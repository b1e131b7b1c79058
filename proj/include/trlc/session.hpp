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

#ifndef TRLC_SESSION_HPP_
#define TRLC_SESSION_HPP_

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "trlc/engine.hpp"
#include "trlc/lifecycle.hpp"
#include "trlc/state.hpp"

namespace trlc {

// One committed change to a project, or its creation. The payload of a
// mutating event carries the ground actions it applied, so a log can be
// replayed without re-running the engine.
struct Event {
  std::uint64_t seq = 0;  // 1, 2, 3, ...
  std::string timestamp;  // UTC, ISO 8601
  std::string kind;       // load | execute | assert | retract | undo
  nlohmann::json payload;
  std::string digest;  // State::digest() after the event

  nlohmann::json to_json() const;
  static Event from_json(const nlohmann::json& j);
};

class SessionError : public std::runtime_error {
 public:
  enum class Kind {
    invalid_request,  // malformed or out-of-model input
    not_executable,   // task exists but cannot run in this state
    nothing_to_undo
  };
  SessionError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A monitored project: a lifecycle model, a component scope and the
// artifact state, changed only through logged events. Mutations are
// serialized by a per-session mutex; readers take immutable snapshots and
// never block.
class ProjectSession {
 public:
  struct View {
    State state;
    std::vector<Event> events;
    std::size_t undoable = 0;
  };

  // `request` holds exactly one of {"corpus": id}, {"program": text} or
  // {"tasks": [TaskDef JSON]}, plus "scope" (array of constants) and an
  // optional "facts" array of extra initial facts. Throws ParseError,
  // LifecycleError or SessionError. With `log_dir` set, every event is
  // appended to <log_dir>/<id>.jsonl.
  static std::shared_ptr<ProjectSession> create(
      std::string id, const nlohmann::json& request, EvalConfig config = {},
      std::optional<std::filesystem::path> log_dir = std::nullopt);

  // Rebuilds a session from its event log (first event must be `load`).
  static std::shared_ptr<ProjectSession> restore(
      std::string id, const std::vector<Event>& events, EvalConfig config = {},
      std::optional<std::filesystem::path> log_dir = std::nullopt);

  // Every `<id>.jsonl` in `dir`.
  static std::vector<std::shared_ptr<ProjectSession>> restore_all(
      const std::filesystem::path& dir, EvalConfig config = {});

  // State obtained by replaying `events` from scratch.
  static State replay(const std::vector<Event>& events);

  const std::string& id() const { return id_; }
  const Program& program() const { return engine_.program(); }
  const Engine& engine() const { return engine_; }
  const LifecycleModel& model() const { return model_; }
  const std::vector<Symbol>& scope() const { return scope_; }
  const EvalConfig& config() const { return config_; }
  const std::string& source() const { return source_; }

  std::shared_ptr<const View> view() const;

  // Read-only operations on the current snapshot.
  struct QueryResult {
    Goal goal;
    Possibility possibility;
  };
  // Accepts "?- possible g.", "possible g" or a bare goal g; always
  // hypothetical. Throws ParseError.
  QueryResult query(const std::string& text) const;
  std::vector<EnabledTask> enabled() const;
  std::vector<BlockedTask> blocked() const;
  Plan plan(const Fact& goal) const;

  // Mutations; each returns the logged event.
  Event execute(const Atom& task);  // throws SessionError
  Event assert_fact(const Atom& fact);
  Event retract_fact(const Atom& fact);
  Event undo();  // throws SessionError(nothing_to_undo)

 private:
  ProjectSession(std::string id, Program program, LifecycleModel model,
                 std::vector<Symbol> scope, EvalConfig config, std::string source);

  void check_artifact(const Atom& fact) const;
  Event commit(const std::string& kind, nlohmann::json payload,
               const std::vector<GroundAction>& actions);
  void apply_event(const Event& e);  // replays one logged event
  void publish();
  void persist(const Event& e);

  std::string id_;
  Engine engine_;
  LifecycleModel model_;
  std::vector<Symbol> scope_;
  EvalConfig config_;
  std::string source_;  // "corpus:<id>", "program" or "tasks"
  std::optional<std::filesystem::path> log_file_;

  std::mutex mutex_;  // guards everything below and the log file
  State state_;
  std::vector<Event> events_;
  std::vector<std::pair<std::uint64_t, std::vector<ActionRecord>>> undo_stack_;  // by event seq
  std::shared_ptr<const View> view_;  // std::atomic_load / atomic_store only
};

}  // namespace trlc

#endif  // TRLC_SESSION_HPP_
