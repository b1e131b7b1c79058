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

#include "trlc/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace trlc {

bool Atom::is_ground() const {
  return std::none_of(args.begin(), args.end(),
                      [](const Term& t) { return t.is_var(); });
}

Goal Goal::call(Atom a) {
  Goal g;
  g.kind = Kind::call;
  g.pos = a.pos;
  g.atom = std::move(a);
  return g;
}

Goal Goal::act(Polarity p, Atom a) {
  Goal g;
  g.kind = Kind::act;
  g.polarity = p;
  g.pos = a.pos;
  g.atom = std::move(a);
  return g;
}

Goal Goal::serial(std::vector<Goal> items) {
  if (items.empty()) throw std::invalid_argument("serial goal must be non-empty");
  Goal g;
  g.kind = Kind::serial;
  g.pos = items.front().pos;
  g.children = std::move(items);
  return g;
}

Goal Goal::query_conj(std::vector<Goal> items) {
  if (items.empty()) throw std::invalid_argument("query conjunction must be non-empty");
  Goal g;
  g.kind = Kind::query_conj;
  g.pos = items.front().pos;
  g.children = std::move(items);
  return g;
}

Goal Goal::concurrent(Goal left, Goal right) {
  Goal g;
  g.kind = Kind::concurrent;
  g.pos = left.pos;
  g.children.push_back(std::move(left));
  g.children.push_back(std::move(right));
  return g;
}

bool Goal::contains_action() const {
  if (kind == Kind::act) return true;
  return std::any_of(children.begin(), children.end(),
                     [](const Goal& c) { return c.contains_action(); });
}

bool operator==(const Goal& a, const Goal& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Goal::Kind::call:
      return a.atom == b.atom;
    case Goal::Kind::act:
      return a.polarity == b.polarity && a.atom == b.atom;
    default:
      return a.children == b.children;
  }
}

std::map<Symbol, PredicateInfo> Program::predicates() const {
  std::map<Symbol, PredicateInfo> out;
  auto note = [&](const Atom& a) {
    out.try_emplace(a.predicate, PredicateInfo{a.arity(), false});
  };
  auto walk = [&](auto&& self, const Goal& g) -> void {
    if (g.kind == Goal::Kind::call || g.kind == Goal::Kind::act) {
      note(g.atom);
      return;
    }
    for (const Goal& c : g.children) self(self, c);
  };
  for (const Rule& r : rules) {
    note(r.head);
    out[r.head.predicate].defined = true;
    walk(walk, r.body);
  }
  for (const Atom& f : facts) note(f);
  return out;
}

bool Program::is_defined(Symbol predicate) const {
  return std::any_of(rules.begin(), rules.end(), [&](const Rule& r) {
    return r.head.predicate == predicate;
  });
}

namespace {

void collect(const Atom& a, std::vector<Symbol>& out) {
  for (const Term& t : a.args) {
    if (t.is_var() && std::find(out.begin(), out.end(), t.name) == out.end())
      out.push_back(t.name);
  }
}

void collect(const Goal& g, std::vector<Symbol>& out) {
  if (g.kind == Goal::Kind::call || g.kind == Goal::Kind::act) {
    collect(g.atom, out);
    return;
  }
  for (const Goal& c : g.children) collect(c, out);
}

}  // namespace

std::vector<Symbol> variables_of(const Atom& atom) {
  std::vector<Symbol> out;
  collect(atom, out);
  return out;
}

std::vector<Symbol> variables_of(const Goal& goal) {
  std::vector<Symbol> out;
  collect(goal, out);
  return out;
}

}  // namespace trlc
