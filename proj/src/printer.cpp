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

#include "trlc/printer.hpp"

namespace trlc {
namespace {

bool compound(const Goal& g) {
  return g.kind == Goal::Kind::serial || g.kind == Goal::Kind::query_conj ||
         g.kind == Goal::Kind::concurrent;
}

void print(std::string& out, const Goal& g);

// Compound operands are always bracketed; the one exception is the left
// spine of a concurrent chain, which parses back left-associatively.
void print_operand(std::string& out, const Goal& g, bool bracket) {
  if (bracket) out += '(';
  print(out, g);
  if (bracket) out += ')';
}

void print_nary(std::string& out, const Goal& g, const char* op) {
  for (std::size_t i = 0; i < g.children.size(); ++i) {
    if (i) out += op;
    print_operand(out, g.children[i], compound(g.children[i]));
  }
}

void print(std::string& out, const Goal& g) {
  switch (g.kind) {
    case Goal::Kind::call:
      out += to_string(g.atom);
      return;
    case Goal::Kind::act:
      out += g.polarity == Polarity::insert ? '+' : '-';
      out += to_string(g.atom);
      return;
    case Goal::Kind::serial:
      print_nary(out, g, " * ");
      return;
    case Goal::Kind::query_conj:
      print_nary(out, g, " & ");
      return;
    case Goal::Kind::concurrent:
      print_operand(out, g.children[0],
                    compound(g.children[0]) && g.children[0].kind != Goal::Kind::concurrent);
      out += " | ";
      print_operand(out, g.children[1], compound(g.children[1]));
      return;
  }
}

}  // namespace

std::string to_string(const Term& term) { return term.name.name(); }

std::string to_string(const Atom& atom) {
  std::string out = atom.predicate.name();
  if (!atom.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < atom.args.size(); ++i) {
      if (i) out += ", ";
      out += atom.args[i].name.name();
    }
    out += ')';
  }
  return out;
}

std::string to_string(const ElementaryAction& action) {
  return (action.polarity == Polarity::insert ? "+" : "-") + to_string(action.atom);
}

std::string to_string(const Goal& goal) {
  std::string out;
  print(out, goal);
  return out;
}

std::string to_string(const Rule& rule) {
  return to_string(rule.head) + " :- " + to_string(rule.body) + ".";
}

std::string to_string(const Query& query) {
  return std::string("?- ") +
         (query.mode == Query::Mode::possible ? "possible " : "") +
         to_string(query.goal) + ".";
}

std::string to_string(const Program& program) {
  std::string out;
  for (const Rule& r : program.rules) {
    out += to_string(r);
    out += '\n';
  }
  for (const Atom& f : program.facts) {
    out += to_string(f);
    out += ".\n";
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const Atom& atom) {
  return os << to_string(atom);
}

std::ostream& operator<<(std::ostream& os, const Goal& goal) {
  return os << to_string(goal);
}

}  // namespace trlc
