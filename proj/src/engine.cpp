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

#include "trlc/engine.hpp"

#include <algorithm>
#include <unordered_map>
#include <utility>

#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

namespace trlc {

void EvalConfig::validate() const {
  if (max_depth == 0 || max_answers == 0 || max_interleavings == 0 || max_steps == 0) {
    throw std::invalid_argument("evaluation bounds must all be at least 1");
  }
}

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "true";
    case Outcome::failure: return "false";
    case Outcome::unknown: return "unknown";
  }
  return "?";
}

std::vector<GroundAction> Trace::actions() const {
  std::vector<GroundAction> out;
  out.reserve(steps.size());
  for (const TraceStep& s : steps) out.push_back(s.action);
  return out;
}

State replay(State initial, const Trace& trace) {
  for (const TraceStep& s : trace.steps) initial.apply(s.action);
  return initial;
}

Outcome Solutions::outcome() const {
  if (!answers.empty()) return Outcome::success;
  return report.exhausted() ? Outcome::unknown : Outcome::failure;
}

namespace {

Term walk(const Substitution& sigma, Term t) {
  while (t.is_var()) {
    auto it = sigma.find(t.name);
    if (it == sigma.end() || it->second == t) break;
    t = it->second;
  }
  return t;
}

}  // namespace

std::optional<Substitution> unify(const Atom& a, const Atom& b, Substitution sigma) {
  if (a.predicate != b.predicate || a.arity() != b.arity()) return std::nullopt;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    Term x = walk(sigma, a.args[i]);
    Term y = walk(sigma, b.args[i]);
    if (x == y) continue;
    if (x.is_var()) {
      sigma[x.name] = y;
    } else if (y.is_var()) {
      sigma[y.name] = x;
    } else {
      return std::nullopt;
    }
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Compiled form: variables become rule-local indices, offset at run time by
// the base of the expansion's variable block.

namespace {

struct RTerm {
  std::uint32_t v = 0;  // local variable index, or constant symbol id
  bool var = false;
};

struct RAtom {
  Symbol predicate;
  std::vector<RTerm> args;
};

struct RGoal {
  Goal::Kind kind = Goal::Kind::call;
  Polarity polarity = Polarity::insert;
  bool defined = false;  // call of a predicate with rules
  RAtom atom;
  std::vector<RGoal> children;
};

struct RRule {
  RAtom head;
  RGoal body;
  std::uint32_t num_vars = 0;
};

class VarNumbering {
 public:
  RTerm term(const Term& t) {
    if (!t.is_var()) return {t.name.id(), false};
    auto [it, fresh] = ids_.try_emplace(t.name, static_cast<std::uint32_t>(order_.size()));
    if (fresh) order_.push_back(t.name);
    return {it->second, true};
  }
  RAtom atom(const Atom& a) {
    RAtom r{a.predicate, {}};
    r.args.reserve(a.args.size());
    for (const Term& t : a.args) r.args.push_back(term(t));
    return r;
  }
  std::uint32_t size() const { return static_cast<std::uint32_t>(order_.size()); }
  const std::vector<Symbol>& order() const { return order_; }

 private:
  std::unordered_map<Symbol, std::uint32_t> ids_;
  std::vector<Symbol> order_;
};

}  // namespace

struct Engine::Compiled {
  std::vector<RRule> rules;
  std::unordered_map<Symbol, std::vector<std::uint32_t>> by_predicate;

  RGoal goal(const Goal& g, VarNumbering& vars) const {
    RGoal r;
    r.kind = g.kind;
    r.polarity = g.polarity;
    if (g.kind == Goal::Kind::call || g.kind == Goal::Kind::act) {
      r.atom = vars.atom(g.atom);
      r.defined = g.kind == Goal::Kind::call && by_predicate.count(g.atom.predicate);
    }
    r.children.reserve(g.children.size());
    for (const Goal& c : g.children) r.children.push_back(goal(c, vars));
    return r;
  }
};

namespace {

// Non-owning callable reference; the referent must outlive every call.
template <typename Sig>
class FnRef;

template <typename R, typename... Args>
class FnRef<R(Args...)> {
 public:
  template <typename F>
  FnRef(F& f)  // NOLINT(google-explicit-constructor)
      : obj_(static_cast<void*>(&f)),
        call_([](void* o, Args... args) -> R {
          return (*static_cast<F*>(o))(std::forward<Args>(args)...);
        }) {}

  R operator()(Args... args) const { return call_(obj_, std::forward<Args>(args)...); }

 private:
  void* obj_;
  R (*call_)(void*, Args...);
};

// Resolved runtime value: a constant symbol id or a global variable slot.
struct Val {
  std::uint32_t x = 0;
  bool var = false;
  friend bool operator==(Val, Val) = default;
};

// Process terms are persistent lists so that a step rewrites only the front
// and alternatives share their tails.
struct Cell;
using List = std::shared_ptr<const Cell>;

struct Item {
  const RGoal* goal = nullptr;  // null: a parallel composition of left/right
  std::uint32_t base = 0;
  std::uint32_t depth = 0;
  List left;
  List right;
};

struct Cell {
  Item item;
  List next;
};

List cons(Item item, List next) {
  return std::make_shared<const Cell>(Cell{std::move(item), std::move(next)});
}

List push_goals(const std::vector<RGoal>& goals, std::uint32_t base, std::uint32_t depth,
                List tail) {
  for (auto it = goals.rbegin(); it != goals.rend(); ++it) {
    tail = cons(Item{&*it, base, depth, nullptr, nullptr}, std::move(tail));
  }
  return tail;
}

List append(const List& front, List tail) {
  if (!front) return tail;
  std::vector<const Item*> items;
  for (const Cell* c = front.get(); c; c = c->next.get()) items.push_back(&c->item);
  for (auto it = items.rbegin(); it != items.rend(); ++it) tail = cons(**it, std::move(tail));
  return tail;
}

// Deepest chain of run/step frames one branch may build before the search
// gives up on it as exhausted; keeps native recursion within a default stack.
constexpr std::size_t kMaxPathSteps = 6000;

class Evaluator {
 public:
  using Emit = FnRef<bool()>;
  using Next = FnRef<bool(List)>;

  Evaluator(const Engine::Compiled& prog, const EvalConfig& cfg, const State& state)
      : prog_(prog), cfg_(cfg), state_(state), initial_version_(state.version()) {}

  // Compiles `goal` as the query and enumerates its answers.
  template <typename OnAnswer>
  SearchReport run_query(const Goal& goal, OnAnswer&& on_answer) {
    VarNumbering vars;
    query_ = prog_.goal(goal, vars);
    for (std::uint32_t i = 0; i < vars.size(); ++i) {
      query_vars_.emplace_back(vars.order()[i], i);
    }
    alloc(vars.size());
    List start = cons(Item{&query_, 0, 0, nullptr, nullptr}, nullptr);
    auto emit = [&]() -> bool {
      ++report_.answers;
      bool go = on_answer(*this);
      if (!go) report_.stopped = true;
      return go;
    };
    run(start, emit);
    report_.steps = steps_taken_;
    return report_;
  }

  Substitution bindings() const {
    Substitution out;
    for (auto [name, slot] : query_vars_) {
      Val v = deref({slot, true});
      if (!v.var) out.emplace(name, Term::constant(Symbol::from_id(v.x)));
    }
    return out;
  }

  Trace trace() const {
    Trace t{initial_version_, {}};
    t.steps = steps_;
    return t;
  }

  const State& state() const { return state_; }

 private:
  // -- bindings -------------------------------------------------------------

  Val deref(Val v) const {
    while (v.var) {
      Val b = bind_[v.x];
      if (b == v) break;
      v = b;
    }
    return v;
  }

  Val resolve(RTerm t, std::uint32_t base) const {
    return t.var ? deref(Val{base + t.v, true}) : Val{t.v, false};
  }

  std::uint32_t alloc(std::uint32_t n) {
    auto base = static_cast<std::uint32_t>(bind_.size());
    for (std::uint32_t i = 0; i < n; ++i) bind_.push_back(Val{base + i, true});
    return base;
  }

  void release(std::uint32_t base) { bind_.resize(base); }

  void bind(std::uint32_t slot, Val v) {
    bind_[slot] = v;
    trail_.push_back(slot);
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      std::uint32_t slot = trail_.back();
      trail_.pop_back();
      bind_[slot] = Val{slot, true};
    }
  }

  bool unify(Val a, Val b) {
    a = deref(a);
    b = deref(b);
    if (a == b) return true;
    if (a.var) {
      bind(a.x, b);
    } else if (b.var) {
      bind(b.x, a);
    } else {
      return false;
    }
    return true;
  }

  // -- search ----------------------------------------------------------------

  // Rewrites the front of `l` until it is an item that takes a step: flattens
  // serial goals and opens concurrent goals into a parallel pair.
  List normalize(List l) const {
    while (l) {
      const Item& it = l->item;
      if (!it.goal) {
        if (!it.left) {
          l = append(it.right, l->next);
        } else if (!it.right) {
          l = append(it.left, l->next);
        } else {
          return l;
        }
        continue;
      }
      const RGoal& g = *it.goal;
      if (g.kind == Goal::Kind::serial ||
          (g.kind == Goal::Kind::concurrent && pure_ > 0)) {
        // Inside '&' nothing changes state, so interleaving is moot.
        l = push_goals(g.children, it.base, it.depth, l->next);
        continue;
      }
      if (g.kind == Goal::Kind::concurrent) {
        List left = cons(Item{&g.children[0], it.base, it.depth, nullptr, nullptr}, nullptr);
        List right = cons(Item{&g.children[1], it.base, it.depth, nullptr, nullptr}, nullptr);
        return cons(Item{nullptr, 0, 0, std::move(left), std::move(right)}, l->next);
      }
      return l;
    }
    return l;
  }

  bool run(List l, Emit emit) {
    l = normalize(std::move(l));
    if (!l) return emit();
    if (path_ >= kMaxPathSteps) {
      report_.steps_exhausted = true;
      return true;
    }
    List saved = std::exchange(current_, l);
    ++path_;
    auto next = [&](List l2) { return run(std::move(l2), emit); };
    bool go = step(l, next);
    --path_;
    current_ = std::move(saved);
    return go;
  }

  // Takes one step at the front of normalized, non-empty `l`, calling `k`
  // with each successor list. Returns false once the search must stop.
  bool step(const List& l, Next k) {
    if (++steps_taken_ > cfg_.max_steps) {
      report_.steps_exhausted = true;
      return false;
    }
    const Item& it = l->item;
    const List& rest = l->next;
    if (!it.goal) return step_parallel(it, rest, k);
    const RGoal& g = *it.goal;
    switch (g.kind) {
      case Goal::Kind::act:
        return step_action(g, it.base, rest, k);
      case Goal::Kind::call:
        return g.defined ? step_expand(g, it, rest, k) : step_query(g, it.base, rest, k);
      case Goal::Kind::query_conj:
        return step_conjunction(g, it, rest, k);
      default:
        break;  // normalize() removed serial/concurrent heads
    }
    return true;
  }

  bool step_parallel(const Item& par, const List& rest, Next k) {
    auto on_left = [&](List nl) {
      return k(cons(Item{nullptr, 0, 0, std::move(nl), par.right}, rest));
    };
    if (!step(normalize(par.left), on_left)) return false;
    if (schedules_ >= cfg_.max_interleavings) {
      report_.interleavings_exhausted = true;
      return true;
    }
    ++schedules_;
    auto on_right = [&](List nr) {
      return k(cons(Item{nullptr, 0, 0, par.left, std::move(nr)}, rest));
    };
    return step(normalize(par.right), on_right);
  }

  GroundAction ground(const RGoal& g, std::uint32_t base) const {
    GroundAction a{g.polarity, Fact{g.atom.predicate, {}}};
    a.fact.args.reserve(g.atom.args.size());
    for (RTerm t : g.atom.args) {
      Val v = resolve(t, base);
      if (v.var) {
        std::string shown = g.polarity == Polarity::insert ? "+" : "-";
        shown += g.atom.predicate.name();
        throw EvalError(EvalError::Kind::non_ground_action,
                        "action " + shown + " is not ground when executed");
      }
      a.fact.args.push_back(Symbol::from_id(v.x));
    }
    return a;
  }

  bool step_action(const RGoal& g, std::uint32_t base, const List& rest, Next k) {
    GroundAction a = ground(g, base);
    if (pure_ > 0) {
      throw EvalError(EvalError::Kind::action_in_query,
                      "action " + to_string(a) + " executed inside a query conjunction '&'");
    }
    ActionRecord rec = state_.apply(a);
    steps_.push_back(TraceStep{rec.action, rec.effective, state_.version()});
    records_.push_back(rec);
    bool go = k(rest);
    records_.pop_back();
    steps_.pop_back();
    state_.revert(rec);
    return go;
  }

  bool step_query(const RGoal& g, std::uint32_t base, const List& rest, Next k) {
    const std::size_t mark = trail_.size();
    bool go = true;
    state_.for_each_of(g.atom.predicate, [&](const Fact& f) {
      if (f.args.size() != g.atom.args.size()) return true;
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (!unify(resolve(g.atom.args[i], base), Val{f.args[i].id(), false})) {
          undo_to(mark);
          return true;
        }
      }
      go = k(rest);
      undo_to(mark);
      return go;
    });
    return go;
  }

  bool step_conjunction(const RGoal& g, const Item& it, const List& rest, Next k) {
    List sub = push_goals(g.children, it.base, it.depth, nullptr);
    ++pure_;
    contexts_.push_back(current_);
    auto resume = [&]() {
      --pure_;
      List ctx = std::move(contexts_.back());
      contexts_.pop_back();
      bool go = k(rest);
      contexts_.push_back(std::move(ctx));
      ++pure_;
      return go;
    };
    bool go = run(sub, resume);
    contexts_.pop_back();
    --pure_;
    return go;
  }

  bool step_expand(const RGoal& g, const Item& it, const List& rest, Next k) {
    if (it.depth >= cfg_.max_depth) {
      report_.depth_exhausted = true;
      return true;
    }
    std::string key;
    if (cfg_.loop_check) {
      std::vector<std::uint32_t> depths;
      key = configuration_key(depths);
      if (repeats(key, depths)) return true;
      seen_[key].push_back(Seen{records_.size(), std::move(depths)});
    }
    bool go = true;
    auto found = prog_.by_predicate.find(g.atom.predicate);
    for (std::uint32_t idx : found->second) {
      const RRule& rule = prog_.rules[idx];
      const std::size_t mark = trail_.size();
      const std::uint32_t base = alloc(rule.num_vars);
      bool ok = true;
      for (std::size_t i = 0; ok && i < rule.head.args.size(); ++i) {
        ok = unify(resolve(g.atom.args[i], it.base), resolve(rule.head.args[i], base));
      }
      if (ok) {
        go = k(cons(Item{&rule.body, base, it.depth + 1, nullptr, nullptr}, rest));
      }
      undo_to(mark);
      release(base);
      if (!go) break;
    }
    if (cfg_.loop_check) {
      auto s = seen_.find(key);
      s->second.pop_back();
      if (s->second.empty()) seen_.erase(s);
    }
    return go;
  }

  // -- loop check -------------------------------------------------------------
  //
  // A configuration is (fact set, query-variable bindings, pending work). If
  // one recurs on a branch with no more depth headroom on any pending item
  // than before, everything reachable from the repeat was already reachable
  // from the earlier occurrence, so the branch is pruned.

  struct Seen {
    std::size_t records = 0;  // records_.size() when first seen
    std::vector<std::uint32_t> depths;
  };

  class KeyWriter {
   public:
    KeyWriter(const Evaluator& ev, std::vector<std::uint32_t>& depths)
        : ev_(ev), depths_(depths) {}

    void val(Val v) {
      v = ev_.deref(v);
      if (v.var) {
        auto [it, fresh] = names_.try_emplace(v.x, static_cast<std::uint32_t>(names_.size()));
        out_ += '_';
        out_ += std::to_string(it->second);
      } else {
        out_ += std::to_string(v.x);
      }
      out_ += ',';
    }

    void list(const List& l) {
      for (const Cell* c = l.get(); c; c = c->next.get()) item(c->item);
      out_ += ';';
    }

    void item(const Item& it) {
      if (!it.goal) {
        out_ += '(';
        list(it.left);
        out_ += '|';
        list(it.right);
        out_ += ')';
        return;
      }
      depths_.push_back(it.depth);
      goal(*it.goal, it.base);
    }

    void goal(const RGoal& g, std::uint32_t base) {
      out_ += static_cast<char>('a' + static_cast<int>(g.kind));
      if (g.kind == Goal::Kind::act) out_ += g.polarity == Polarity::insert ? '+' : '-';
      if (g.kind == Goal::Kind::call || g.kind == Goal::Kind::act) {
        out_ += std::to_string(g.atom.predicate.id());
        out_ += '(';
        for (RTerm t : g.atom.args) val(ev_.resolve(t, base));
        out_ += ')';
        return;
      }
      out_ += '[';
      for (const RGoal& c : g.children) goal(c, base);
      out_ += ']';
    }

    std::string& out() { return out_; }

   private:
    const Evaluator& ev_;
    std::vector<std::uint32_t>& depths_;
    std::unordered_map<std::uint32_t, std::uint32_t> names_;
    std::string out_;
  };

  std::string configuration_key(std::vector<std::uint32_t>& depths) const {
    KeyWriter w(*this, depths);
    w.out() += hex64(state_.fingerprint());
    w.out() += '/';
    for (auto [name, slot] : query_vars_) w.val(Val{slot, true});
    w.out() += '/';
    for (const List& ctx : contexts_) w.list(ctx);
    w.out() += '/';
    w.list(current_);
    return std::move(w.out());
  }

  bool repeats(const std::string& key, const std::vector<std::uint32_t>& depths) const {
    auto it = seen_.find(key);
    if (it == seen_.end()) return false;
    for (const Seen& s : it->second) {
      bool dominated = s.depths.size() == depths.size();
      for (std::size_t i = 0; dominated && i < depths.size(); ++i) {
        dominated = depths[i] >= s.depths[i];
      }
      if (dominated && unchanged_since(s.records)) return true;
    }
    return false;
  }

  // Exact check behind the fingerprint: every fact touched since `mark` was
  // flipped an even number of times.
  bool unchanged_since(std::size_t mark) const {
    std::unordered_map<Fact, int, FactHash> flips;
    for (std::size_t i = mark; i < records_.size(); ++i) {
      if (records_[i].effective) ++flips[records_[i].action.fact];
    }
    return std::all_of(flips.begin(), flips.end(),
                       [](const auto& kv) { return kv.second % 2 == 0; });
  }

  const Engine::Compiled& prog_;
  const EvalConfig& cfg_;
  State state_;
  std::uint64_t initial_version_;

  RGoal query_;
  std::vector<std::pair<Symbol, std::uint32_t>> query_vars_;

  std::vector<Val> bind_;
  std::vector<std::uint32_t> trail_;
  std::vector<ActionRecord> records_;
  std::vector<TraceStep> steps_;

  int pure_ = 0;
  std::vector<List> contexts_;
  List current_;
  std::unordered_map<std::string, std::vector<Seen>> seen_;

  std::uint32_t schedules_ = 1;
  std::uint64_t steps_taken_ = 0;
  std::size_t path_ = 0;
  SearchReport report_;
};

Answer make_answer(const Evaluator& ev) {
  return Answer{ev.bindings(), ev.trace(), ev.state()};
}

}  // namespace

Engine::Engine(Program program) : program_(std::move(program)) {
  check_program(program_);
  auto compiled = std::make_unique<Compiled>();
  for (std::size_t i = 0; i < program_.rules.size(); ++i) {
    compiled->by_predicate[program_.rules[i].head.predicate].push_back(
        static_cast<std::uint32_t>(i));
  }
  compiled->rules.reserve(program_.rules.size());
  for (const Rule& r : program_.rules) {
    VarNumbering vars;
    RRule rr;
    rr.head = vars.atom(r.head);
    rr.body = compiled->goal(r.body, vars);
    rr.num_vars = vars.size();
    compiled->rules.push_back(std::move(rr));
  }
  compiled_ = std::move(compiled);
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

bool Engine::is_defined(Symbol predicate) const {
  return compiled_->by_predicate.count(predicate) > 0;
}

SearchReport Engine::for_each_answer(const State& state, const Goal& goal,
                                     const EvalConfig& config,
                                     const std::function<bool(const Answer&)>& visit) const {
  config.validate();
  Evaluator ev(*compiled_, config, state);
  return ev.run_query(goal, [&](const Evaluator& e) { return visit(make_answer(e)); });
}

Solutions Engine::solve(const State& state, const Goal& goal, const EvalConfig& config) const {
  config.validate();
  Solutions out;
  Evaluator ev(*compiled_, config, state);
  out.report = ev.run_query(goal, [&](const Evaluator& e) {
    out.answers.push_back(make_answer(e));
    return out.answers.size() < config.max_answers;
  });
  out.truncated = out.report.stopped;
  return out;
}

Possibility Engine::possible(const State& state, const Goal& goal,
                             const EvalConfig& config) const {
  config.validate();
  Possibility out;
  Evaluator ev(*compiled_, config, state);
  out.report = ev.run_query(goal, [&](const Evaluator& e) {
    out.witness = e.trace();
    out.bindings = e.bindings();
    return false;
  });
  if (out.witness) {
    out.outcome = Outcome::success;
  } else {
    out.outcome = out.report.exhausted() ? Outcome::unknown : Outcome::failure;
  }
  return out;
}

Execution Engine::execute(State& state, const Goal& goal, const EvalConfig& config) const {
  config.validate();
  Execution out;
  Evaluator ev(*compiled_, config, state);
  out.report = ev.run_query(goal, [&](const Evaluator& e) {
    out.answer = make_answer(e);
    return false;
  });
  if (out.answer) {
    out.outcome = Outcome::success;
    state = out.answer->final_state;
  } else {
    out.outcome = out.report.exhausted() ? Outcome::unknown : Outcome::failure;
  }
  return out;
}

}  // namespace trlc
