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

#include "trlc/service.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "httplib.h"
#include "trlc/corpus.hpp"
#include "trlc/json_io.hpp"
#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

namespace trlc {

using nlohmann::json;

std::string ApiResponse::payload() const {
  return content_type == "application/json" ? body.dump(2) + "\n" : text;
}

namespace {

ApiResponse error(int status, const std::string& kind, const std::string& message) {
  ApiResponse r;
  r.status = status;
  r.body = {{"error", kind}, {"message", message}};
  return r;
}

ApiResponse ok(json body, int status = 200) {
  ApiResponse r;
  r.status = status;
  r.body = std::move(body);
  return r;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::istringstream in(path);
  for (std::string part; std::getline(in, part, '/');) {
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::string field(const json& body, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (body.contains(n) && body[n].is_string()) return body[n].get<std::string>();
  }
  throw SessionError(SessionError::Kind::invalid_request,
                     std::string("request needs a string field '") + *names.begin() + "'");
}

json summary(const ProjectSession& s) {
  auto v = s.view();
  json scope = json::array(), tasks = json::array(), artifacts = json::array(),
       starts = json::array();
  for (Symbol c : s.scope()) scope.push_back(c.name());
  for (const TaskDef& t : s.model().tasks) tasks.push_back(json_io::task(t));
  for (Symbol a : s.model().artifacts) artifacts.push_back(a.name());
  for (Symbol t : s.model().start_tasks) starts.push_back(t.name());
  return {{"id", s.id()},
          {"source", s.source()},
          {"scope", scope},
          {"tasks", tasks},
          {"artifacts", artifacts},
          {"start_tasks", starts},
          {"seq", v->events.size()},
          {"digest", v->state.digest()}};
}

json state_body(const ProjectSession& s, const ProjectSession::View& v) {
  return {{"id", s.id()},
          {"state", json_io::state(v.state)},
          {"digest", v.state.digest()},
          {"seq", v.events.size()},
          {"undoable", v.undoable}};
}

ApiResponse mutation(const ProjectSession& s, const Event& e) {
  auto v = s.view();
  json body = state_body(s, *v);
  body["event"] = e.to_json();
  ApiResponse r = ok(std::move(body));
  r.etag = v->state.digest();
  return r;
}

}  // namespace

Api::Api(EvalConfig config, std::optional<std::filesystem::path> data_dir)
    : config_(config), data_dir_(std::move(data_dir)) {
  config_.validate();
  if (!data_dir_) return;
  std::filesystem::create_directories(*data_dir_);
  for (auto& s : ProjectSession::restore_all(*data_dir_, config_)) {
    order_.push_back(s->id());
    sessions_.emplace(s->id(), std::move(s));
  }
}

std::shared_ptr<ProjectSession> Api::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<ProjectSession>> Api::sessions() const {
  std::shared_lock lock(mutex_);
  std::vector<std::shared_ptr<ProjectSession>> out;
  for (const std::string& id : order_) out.push_back(sessions_.at(id));
  return out;
}

std::string Api::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  for (;;) {
    std::string id = hex64(rng()).substr(0, 12);
    std::shared_lock lock(mutex_);
    if (!sessions_.count(id)) return id;
  }
}

ApiResponse Api::handle(const ApiRequest& request) {
  try {
    const std::vector<std::string> parts = split_path(request.path);
    const std::string& m = request.method;
    if (parts.empty()) return error(404, "not_found", "no such route");
    if (parts[0] == "corpus") {
      if (m != "GET") return error(405, "method_not_allowed", m + " " + request.path);
      if (parts.size() == 1) {
        json out = json::array();
        for (const CorpusEntry& e : list_corpus()) {
          out.push_back({{"id", e.id}, {"title", e.title}, {"provenance", e.provenance}});
        }
        return ok(out);
      }
      if (parts.size() == 2) {
        try {
          const CorpusEntry& e = get_corpus(parts[1]);
          return ok({{"id", e.id},
                     {"title", e.title},
                     {"provenance", e.provenance},
                     {"program", e.program}});
        } catch (const UnknownCorpusEntry& e) {
          return error(404, "not_found", e.what());
        }
      }
      return error(404, "not_found", "no such route");
    }
    if (parts[0] != "projects" || parts.size() > 3) {
      return error(404, "not_found", "no such route");
    }
    if (parts.size() == 1) {
      if (m == "POST") {
        return create(request.body.empty() ? json::object() : json::parse(request.body));
      }
      if (m != "GET") return error(405, "method_not_allowed", m + " " + request.path);
      json out = json::array();
      for (const auto& s : sessions()) {
        auto v = s->view();
        out.push_back({{"id", s->id()},
                       {"source", s->source()},
                       {"seq", v->events.size()},
                       {"digest", v->state.digest()}});
      }
      return ok(out);
    }
    auto session = find(parts[1]);
    if (!session) return error(404, "not_found", "unknown project " + parts[1]);
    return project(session, m, parts.size() == 3 ? parts[2] : "", request);
  } catch (const json::exception& e) {
    return error(400, "bad_json", e.what());
  } catch (const ParseError& e) {
    ApiResponse r = error(422, "parse", e.what());
    r.body["kind"] = to_string(e.kind());
    r.body["line"] = e.pos().line;
    r.body["column"] = e.pos().column;
    return r;
  } catch (const LifecycleError& e) {
    return error(422, e.kind() == LifecycleError::Kind::scope ? "scope" : "lifecycle", e.what());
  } catch (const SessionError& e) {
    switch (e.kind()) {
      case SessionError::Kind::invalid_request:
        return error(422, "invalid_request", e.what());
      case SessionError::Kind::not_executable:
        return error(409, "not_executable", e.what());
      case SessionError::Kind::nothing_to_undo:
        return error(409, "nothing_to_undo", e.what());
    }
    return error(409, "conflict", e.what());
  } catch (const EvalError& e) {
    return error(422, "evaluation", e.what());
  } catch (const std::invalid_argument& e) {
    return error(422, "invalid_request", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

ApiResponse Api::create(const json& body) {
  const std::string id = fresh_id();
  auto session = ProjectSession::create(id, body, config_, data_dir_);
  {
    std::unique_lock lock(mutex_);
    sessions_.emplace(id, session);
    order_.push_back(id);
  }
  ApiResponse r = ok(summary(*session), 201);
  r.etag = session->view()->state.digest();
  return r;
}

ApiResponse Api::project(const std::shared_ptr<ProjectSession>& s, const std::string& method,
                         const std::string& action, const ApiRequest& request) {
  const bool get = method == "GET";
  if (get) {
    auto v = s->view();
    ApiResponse r;
    if (action.empty()) {
      r = ok(summary(*s));
    } else if (action == "state") {
      r = ok(state_body(*s, *v));
    } else if (action == "enabled") {
      json body = json_io::enabled(s->model(), enabled_instances(s->model(), v->state, s->scope()),
                                   blocked_tasks(s->model(), v->state, s->scope()));
      body["digest"] = v->state.digest();
      r = ok(std::move(body));
    } else if (action == "history") {
      json events = json::array();
      for (const Event& e : v->events) events.push_back(e.to_json());
      r = ok({{"id", s->id()}, {"events", events}});
    } else if (action == "graph") {
      const DependencyGraph g = dependency_graph(s->model());
      auto fmt = request.params.find("format");
      if (fmt != request.params.end() && fmt->second == "dot") {
        r.content_type = "text/vnd.graphviz";
        r.text = to_dot(g);
      } else if (fmt == request.params.end() || fmt->second == "json") {
        r = ok(json_io::graph(g));
      } else {
        return error(400, "bad_request", "format must be json or dot");
      }
    } else {
      return error(404, "not_found", "no such route");
    }
    r.etag = v->state.digest();
    return r;
  }
  if (method != "POST") return error(405, "method_not_allowed", method + " " + request.path);
  const json body = request.body.empty() ? json::object() : json::parse(request.body);
  if (!body.is_object()) return error(400, "bad_json", "request body must be a JSON object");
  if (action == "query") {
    auto result = s->query(field(body, {"goal", "query"}));
    const Possibility& p = result.possibility;
    json out = {{"query", to_string(result.goal)},
                {"possible", json_io::outcome(p.outcome)},
                {"witness", p.witness ? json_io::actions(p.witness->actions()) : json()},
                {"bindings", json_io::bindings(p.bindings)},
                {"report", json_io::report(p.report)}};
    ApiResponse r = ok(std::move(out));
    r.etag = s->view()->state.digest();
    r.body["digest"] = r.etag;
    return r;
  }
  if (action == "execute") return mutation(*s, s->execute(parse_atom(field(body, {"task"}))));
  if (action == "assert") return mutation(*s, s->assert_fact(parse_atom(field(body, {"fact"}))));
  if (action == "retract") {
    return mutation(*s, s->retract_fact(parse_atom(field(body, {"fact"}))));
  }
  if (action == "undo") return mutation(*s, s->undo());
  if (action == "plan") {
    const Atom goal = parse_atom(field(body, {"goal"}));
    if (!goal.is_ground()) return error(422, "invalid_request", "plan goal must be ground");
    ApiResponse r = ok(json_io::plan(s->plan(Fact::from_atom(goal))));
    r.etag = s->view()->state.digest();
    return r;
  }
  return error(404, "not_found", "no such route");
}

struct Service::Impl {
  ServiceOptions options;
  Api api;
  httplib::Server server;
  int port = -1;

  explicit Impl(ServiceOptions o) : options(std::move(o)), api(options.config, options.data_dir) {
    server.set_default_headers({
        {"Access-Control-Allow-Origin", options.cors_origin},
        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
        {"Access-Control-Allow-Headers", "Content-Type"},
        {"Access-Control-Expose-Headers", "ETag"},
    });
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest request{req.method, req.path, {}, req.body};
      for (const auto& [k, v] : req.params) request.params[k] = v;
      ApiResponse r = api.handle(request);
      res.status = r.status;
      if (!r.etag.empty()) res.set_header("ETag", "\"" + r.etag + "\"");
      res.set_content(r.payload(), r.content_type);
    };
    server.Get(".*", forward);
    server.Post(".*", forward);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Service::~Service() { stop(); }

Api& Service::api() { return impl_->api; }

int Service::bind() {
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
  } else {
    impl_->port = impl_->server.bind_to_port(o.host, o.port) ? o.port : -1;
  }
  if (impl_->port < 0) {
    throw std::runtime_error("cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->port;
}

void Service::run() { impl_->server.listen_after_bind(); }
void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace trlc
