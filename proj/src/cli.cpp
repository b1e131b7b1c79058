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

#include "trlc/cli.hpp"

#include <unistd.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "trlc/corpus.hpp"
#include "trlc/json_io.hpp"
#include "trlc/parser.hpp"
#include "trlc/printer.hpp"
#include "trlc/service.hpp"

namespace trlc {
namespace {

using nlohmann::json;

struct Source {
  std::string name;
  std::string text;
  std::string corpus_id;  // set for corpus:<id>
};

// FILE or corpus:<id>.
Source read_source(const std::string& path) {
  if (path.rfind("corpus:", 0) == 0) {
    const CorpusEntry& e = get_corpus(path.substr(7));
    return {e.id + ".tlp", e.program, e.id};
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return {path, buf.str(), {}};
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string trace_line(const json& witness) {
  std::vector<std::string> steps;
  for (const json& a : witness) steps.push_back(a.get<std::string>());
  return "trace: " + (steps.empty() ? std::string("(empty)") : join(steps, " * "));
}

void print_bindings(std::ostream& out, const Substitution& sigma) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (const auto& [v, t] : sigma) rows.emplace_back(v.name(), to_string(t));
  std::sort(rows.begin(), rows.end());
  for (const auto& [v, t] : rows) out << v << " = " << t << "\n";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::success:
      return kExitOk;
    case Outcome::failure:
      return kExitFalse;
    case Outcome::unknown:
      break;
  }
  return kExitUnknown;
}

std::string normalize_query(std::string t) {
  const auto b = t.find_first_not_of(" \t\r\n");
  t = b == std::string::npos ? std::string() : t.substr(b);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  if (t.rfind("?-", 0) != 0) t = "?- " + t;
  if (t.back() != '.') t += '.';
  return t;
}

struct Options {
  std::string file;
  std::string text;
  std::string facts_file;
  std::vector<std::string> scope;
  std::string format = "dot";
  bool json = false;
  EvalConfig config;
  bool no_loop_check = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
};

std::vector<std::string> read_facts(const Options& o) {
  std::vector<std::string> out;
  if (o.facts_file.empty()) return out;
  for (const Atom& a : parse_facts(read_source(o.facts_file).text)) out.push_back(to_string(a));
  return out;
}

int cmd_check(const Options& o, std::ostream& out) {
  const Source src = read_source(o.file);
  const Program p = parse_program(src.text, src.name);
  std::optional<LifecycleModel> model;
  std::string why;
  try {
    model = recognize_tasks(p);
  } catch (const LifecycleError& e) {
    why = e.what();
  }
  if (o.json) {
    json body = {{"file", src.name}, {"rules", p.rules.size()}, {"facts", p.facts.size()}};
    if (model) {
      json tasks = json::array(), artifacts = json::array();
      for (const TaskDef& t : model->tasks) tasks.push_back(json_io::task(t));
      for (Symbol a : model->artifacts) artifacts.push_back(a.name());
      body["tasks"] = tasks;
      body["artifacts"] = artifacts;
    } else {
      body["lifecycle"] = why;
    }
    out << body.dump(2) << "\n";
    return kExitOk;
  }
  out << src.name << ": " << p.rules.size() << " rules, " << p.facts.size() << " facts\n";
  if (!model) {
    out << "not a lifecycle model: " << why << "\n";
    return kExitOk;
  }
  auto named = [&](Symbol s, std::size_t arity) { return s.name() + "/" + std::to_string(arity); };
  std::vector<std::string> tasks, artifacts, starts;
  for (const TaskDef& t : model->tasks) {
    tasks.push_back(named(t.name, t.arity()) + " (" + std::to_string(t.requirements.size()) +
                    (t.requirements.size() == 1 ? " requirement set)" : " requirement sets)"));
  }
  for (Symbol a : model->artifacts) artifacts.push_back(named(a, model->artifact_arity.at(a)));
  for (Symbol s : model->start_tasks) starts.push_back(s.name());
  out << "tasks: " << tasks.size() << (tasks.empty() ? "" : "\n  " + join(tasks, "\n  ")) << "\n";
  out << "artifacts: " << artifacts.size()
      << (artifacts.empty() ? "" : "\n  " + join(artifacts, "\n  ")) << "\n";
  out << "start tasks: " << (starts.empty() ? "none" : join(starts, ", ")) << "\n";
  return kExitOk;
}

int cmd_query(const Options& o, std::ostream& out) {
  const Source src = read_source(o.file);
  const Program p = parse_program(src.text, src.name);
  const Query q = parse_query(normalize_query(o.text));
  std::vector<Fact> initial{Fact{start_symbol(), {}}};
  for (const Atom& f : p.facts) initial.push_back(Fact::from_atom(f));
  for (const std::string& f : read_facts(o)) initial.push_back(Fact::from_atom(parse_atom(f)));
  State state(initial);
  std::set<Symbol> known;
  for (const Fact& f : initial) known.insert(f.predicate);
  validate_goal(p, q.goal, known);
  const Engine engine(p);

  if (q.mode == Query::Mode::possible) {
    const Possibility r = engine.possible(state, q.goal, o.config);
    if (o.json) {
      out << json{{"query", to_string(q)},
                  {"possible", json_io::outcome(r.outcome)},
                  {"witness", r.witness ? json_io::actions(r.witness->actions()) : json()},
                  {"bindings", json_io::bindings(r.bindings)},
                  {"report", json_io::report(r.report)}}
                 .dump(2)
          << "\n";
    } else {
      out << to_string(r.outcome) << "\n";
      if (r.outcome == Outcome::success) {
        print_bindings(out, r.bindings);
        out << trace_line(json_io::actions(r.witness->actions())) << "\n";
      }
    }
    return exit_code(r.outcome);
  }
  const Execution r = engine.execute(state, q.goal, o.config);
  if (o.json) {
    json body = {{"query", to_string(q)}, {"executed", json_io::outcome(r.outcome)}};
    if (r.answer) {
      body["trace"] = json_io::actions(r.answer->trace.actions());
      body["bindings"] = json_io::bindings(r.answer->bindings);
    }
    body["state"] = json_io::state(state);
    body["report"] = json_io::report(r.report);
    out << body.dump(2) << "\n";
  } else {
    out << to_string(r.outcome) << "\n";
    if (r.answer) {
      print_bindings(out, r.answer->bindings);
      out << trace_line(json_io::actions(r.answer->trace.actions())) << "\n";
      out << "state:\n";
      for (const Fact& f : state.sorted_facts()) out << "  " << to_string(f) << "\n";
    }
  }
  return exit_code(r.outcome);
}

int cmd_graph(const Options& o, std::ostream& out) {
  const Source src = read_source(o.file);
  const LifecycleModel model = recognize_tasks(parse_program(src.text, src.name));
  const DependencyGraph g = dependency_graph(model);
  if (o.format == "json") {
    out << json_io::graph(g).dump(2) << "\n";
  } else {
    out << to_dot(g);
  }
  return kExitOk;
}

int cmd_corpus(const Options& o, std::ostream& out) {
  if (!o.file.empty()) {
    const CorpusEntry& e = get_corpus(o.file);
    if (o.json) {
      out << json{{"id", e.id}, {"title", e.title}, {"provenance", e.provenance},
                  {"program", e.program}}
                 .dump(2)
          << "\n";
    } else {
      out << e.program;
    }
    return kExitOk;
  }
  json list = json::array();
  for (const CorpusEntry& e : list_corpus()) {
    if (o.json) {
      list.push_back({{"id", e.id}, {"title", e.title}, {"provenance", e.provenance}});
    } else {
      out << e.id << "  " << e.title << "\n";
    }
  }
  if (o.json) out << list.dump(2) << "\n";
  return kExitOk;
}

int cmd_plan(const Options& o, std::ostream& out) {
  const Source src = read_source(o.file);
  const LifecycleModel model = recognize_tasks(parse_program(src.text, src.name));
  std::vector<Fact> initial{Fact{start_symbol(), {}}};
  for (const std::string& f : read_facts(o)) initial.push_back(Fact::from_atom(parse_atom(f)));
  std::vector<Symbol> scope;
  for (const std::string& c : o.scope) scope.push_back(Symbol::intern(c));
  const Plan p = plan(model, State(initial), Fact::from_atom(parse_atom(o.text)), scope, o.config);
  if (o.json) {
    out << json_io::plan(p).dump(2) << "\n";
  } else if (p.outcome == Outcome::success) {
    if (p.tasks.empty()) out << "plan: goal already holds\n";
    for (std::size_t i = 0; i < p.tasks.size(); ++i) {
      out << i + 1 << ". " << to_string(p.tasks[i]) << "\n";
    }
  } else {
    out << (p.outcome == Outcome::failure ? "no plan\n" : "unknown\n");
  }
  return exit_code(p.outcome);
}

// The REPL is an in-process client of the service API, so its commands have
// the service's semantics and --json prints the service's payloads.
class Repl {
 public:
  Repl(Api& api, std::string id, bool json, std::ostream& out)
      : api_(api), id_(std::move(id)), json_(json), out_(out) {}

  // Returns false on quit.
  bool command(const std::string& line) {
    std::string cmd, arg;
    {
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos || line[b] == '%') return true;
      const std::string t = line.substr(b);
      if (t.rfind("?-", 0) == 0) {
        cmd = "?-";
        arg = t;
      } else {
        const auto sp = t.find_first_of(" \t");
        cmd = t.substr(0, sp);
        if (sp != std::string::npos) arg = t.substr(t.find_first_not_of(" \t", sp));
      }
      while (!arg.empty() && std::isspace(static_cast<unsigned char>(arg.back()))) arg.pop_back();
    }
    if (cmd == "quit" || cmd == "exit") return false;
    if (cmd == "help") {
      out_ << "commands: state, enabled, blocked, run <task>, assert <fact>, retract <fact>,\n"
              "          undo, ?- [possible] <goal>., plan <fact>, history, graph, quit\n";
    } else if (cmd == "state") {
      show(get("state"), [&](const json& b) {
        for (const json& f : b["state"]) out_ << f.get<std::string>() << "\n";
      });
    } else if (cmd == "enabled") {
      show(get("enabled"), [&](const json& b) {
        if (b["enabled"].empty()) out_ << "no task is enabled\n";
        for (const json& e : b["enabled"]) {
          out_ << e["task"].get<std::string>() << "  via requirement set "
               << e["disjunct"].get<std::size_t>();
          if (!e["critical"].empty()) out_ << "  critical: " << names(e["critical"]);
          out_ << "\n";
        }
      });
    } else if (cmd == "blocked") {
      show(get("enabled"), [&](const json& b) {
        if (b["blocked"].empty()) out_ << "no task is blocked\n";
        for (const json& e : b["blocked"]) {
          std::vector<std::string> sets;
          for (const json& m : e["missing"]) sets.push_back(names(m));
          out_ << e["task"].get<std::string>() << "  missing " << join(sets, " | ") << "\n";
        }
      });
    } else if (cmd == "run" || cmd == "execute") {
      show(post("execute", {{"task", arg}}), [&](const json& b) {
        out_ << "executed " << b["event"]["payload"]["task"].get<std::string>() << ": "
             << actions(b["event"]["payload"]["actions"]) << "\n";
      });
    } else if (cmd == "assert" || cmd == "retract") {
      show(post(cmd, {{"fact", arg}}), [&](const json& b) {
        out_ << cmd << "ed " << b["event"]["payload"]["fact"].get<std::string>() << "\n";
      });
    } else if (cmd == "undo") {
      show(post("undo", json::object()), [&](const json& b) {
        out_ << "undid event " << b["event"]["payload"]["undoes"].get<std::uint64_t>() << "\n";
      });
    } else if (cmd == "?-" || cmd == "possible") {
      show(post("query", {{"goal", cmd == "?-" ? arg : line}}), [&](const json& b) {
        const json& p = b["possible"];
        out_ << (p.is_boolean() ? (p.get<bool>() ? "true" : "false") : "unknown") << "\n";
        if (p.is_boolean() && p.get<bool>()) {
          for (const auto& [v, t] : b["bindings"].items()) {
            out_ << v << " = " << t.get<std::string>() << "\n";
          }
          out_ << trace_line(b["witness"]) << "\n";
        }
      });
    } else if (cmd == "plan") {
      show(post("plan", {{"goal", arg}}), [&](const json& b) {
        const json& o = b["outcome"];
        if (!o.is_boolean()) {
          out_ << "unknown\n";
        } else if (!o.get<bool>()) {
          out_ << "no plan\n";
        } else if (b["plan"].empty()) {
          out_ << "plan: goal already holds\n";
        } else {
          std::size_t i = 0;
          for (const json& t : b["plan"]) out_ << ++i << ". " << t.get<std::string>() << "\n";
        }
      });
    } else if (cmd == "history") {
      show(get("history"), [&](const json& b) {
        for (const json& e : b["events"]) {
          out_ << e["seq"].get<std::uint64_t>() << " " << e["kind"].get<std::string>();
          const json& p = e["payload"];
          if (p.contains("task")) out_ << " " << p["task"].get<std::string>();
          if (p.contains("fact")) out_ << " " << p["fact"].get<std::string>();
          if (p.contains("undoes")) out_ << " " << p["undoes"].get<std::uint64_t>();
          out_ << "\n";
        }
      });
    } else if (cmd == "graph") {
      ApiResponse r = get("graph", {{"format", json_ ? "json" : "dot"}});
      if (json_ || r.status >= 400) {
        show(std::move(r), [](const json&) {});
      } else {
        out_ << r.text;
      }
    } else {
      out_ << "error: unknown command '" << cmd << "' (try help)\n";
    }
    return true;
  }

 private:
  static std::string names(const json& list) {
    std::vector<std::string> parts;
    for (const json& x : list) parts.push_back(x.get<std::string>());
    return join(parts, ", ");
  }
  static std::string actions(const json& list) {
    std::vector<std::string> parts;
    for (const json& x : list) parts.push_back(x.get<std::string>());
    return parts.empty() ? "(no actions)" : join(parts, " * ");
  }

  ApiResponse get(const std::string& what, std::map<std::string, std::string> params = {}) {
    return api_.handle({"GET", "/projects/" + id_ + "/" + what, std::move(params), ""});
  }
  ApiResponse post(const std::string& what, const json& body) {
    return api_.handle({"POST", "/projects/" + id_ + "/" + what, {}, body.dump()});
  }

  template <typename Fn>
  void show(ApiResponse r, Fn&& render) {
    if (json_) {
      out_ << r.body.dump() << "\n";
    } else if (r.status >= 400) {
      out_ << "error: " << r.body["message"].get<std::string>() << "\n";
    } else {
      render(r.body);
    }
  }

  Api& api_;
  std::string id_;
  bool json_;
  std::ostream& out_;
};

int cmd_repl(const Options& o, std::ostream& out, std::ostream& err, std::istream& in) {
  Api api(o.config);
  const Source src = read_source(o.file);
  json request = src.corpus_id.empty() ? json{{"program", src.text}}
                                       : json{{"corpus", src.corpus_id}};
  request["scope"] = o.scope;
  request["facts"] = read_facts(o);
  ApiResponse created = api.handle({"POST", "/projects", {}, request.dump()});
  if (created.status != 201) {
    err << "trlc: " << created.body["message"].get<std::string>() << "\n";
    return kExitUsage;
  }
  Repl repl(api, created.body["id"].get<std::string>(), o.json, out);
  const bool prompt = &in == &std::cin && isatty(STDIN_FILENO);
  for (std::string line;;) {
    if (prompt) out << "trlc> " << std::flush;
    if (!std::getline(in, line)) break;
    if (!repl.command(line)) break;
  }
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  ServiceOptions so;
  so.host = o.host;
  so.port = o.port;
  so.config = o.config;
  if (!o.data_dir.empty()) so.data_dir = o.data_dir;
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  Service service(so);
  const int port = service.bind();
  out << "listening on http://" << o.host << ":" << port << std::endl;
  std::thread server([&] { service.run(); });
  int sig = 0;
  sigwait(&signals, &sig);
  service.stop();
  server.join();
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
            std::istream& in) {
  CLI::App app{"Serial-Horn transaction logic for software life-cycle models", "trlc"};
  app.require_subcommand(1);
  Options o;

  auto bounds = [&](CLI::App* cmd) {
    cmd->add_option("--max-depth", o.config.max_depth, "nested rule expansions")
        ->capture_default_str();
    cmd->add_option("--max-answers", o.config.max_answers)->capture_default_str();
    cmd->add_option("--max-interleavings", o.config.max_interleavings)->capture_default_str();
    cmd->add_option("--max-steps", o.config.max_steps)->capture_default_str();
    cmd->add_flag("--no-loop-check", o.no_loop_check, "disable repeated-configuration pruning");
  };
  auto json_flag = [&](CLI::App* cmd) {
    cmd->add_flag("--json", o.json, "print the service's JSON payload");
  };

  CLI::App* check = app.add_subcommand("check", "parse a program and summarize its model");
  check->add_option("file", o.file, "a .tlp file or corpus:<id>")->required();
  json_flag(check);

  CLI::App* query = app.add_subcommand("query", "evaluate a query against a program");
  query->add_option("file", o.file, "a .tlp file or corpus:<id>")->required();
  query->add_option("query", o.text, "e.g. \"?- possible task4(car).\"")->required();
  query->add_option("--facts", o.facts_file, "initial facts (.tlp, facts only)");
  json_flag(query);
  bounds(query);

  CLI::App* repl = app.add_subcommand("repl", "interactive project session");
  repl->add_option("file", o.file, "a .tlp file or corpus:<id>")->required();
  repl->add_option("--scope", o.scope, "component constants")->delimiter(',');
  repl->add_option("--facts", o.facts_file, "initial facts");
  json_flag(repl);
  bounds(repl);

  CLI::App* plan_cmd = app.add_subcommand("plan", "shortest task sequence producing an artifact");
  plan_cmd->add_option("file", o.file, "a .tlp file or corpus:<id>")->required();
  plan_cmd->add_option("goal", o.text, "ground artifact atom")->required();
  plan_cmd->add_option("--scope", o.scope, "component constants")->delimiter(',');
  plan_cmd->add_option("--facts", o.facts_file, "initial facts");
  json_flag(plan_cmd);
  bounds(plan_cmd);

  CLI::App* graph = app.add_subcommand("graph", "export the task/artifact dependency graph");
  graph->add_option("file", o.file, "a .tlp file or corpus:<id>")->required();
  graph->add_option("--format", o.format)->check(CLI::IsMember({"dot", "json"}))
      ->capture_default_str();

  CLI::App* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--host", o.host)->envname("TRLC_HOST")->capture_default_str();
  serve->add_option("--port", o.port)->envname("TRLC_PORT")->capture_default_str();
  serve->add_option("--data-dir", o.data_dir, "event-log directory")->envname("TRLC_DATA_DIR");
  bounds(serve);

  CLI::App* corpus = app.add_subcommand("corpus", "list the shipped programs or print one");
  corpus->add_option("id", o.file);
  json_flag(corpus);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.config.loop_check = !o.no_loop_check;

  try {
    o.config.validate();
    if (check->parsed()) return cmd_check(o, out);
    if (query->parsed()) return cmd_query(o, out);
    if (repl->parsed()) return cmd_repl(o, out, err, in);
    if (plan_cmd->parsed()) return cmd_plan(o, out);
    if (graph->parsed()) return cmd_graph(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
    if (corpus->parsed()) return cmd_corpus(o, out);
  } catch (const ParseError& e) {
    err << "trlc: " << to_string(e.kind()) << " at " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "trlc: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace trlc
