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

#ifndef TRLC_AST_HPP_
#define TRLC_AST_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trlc/symbol.hpp"

namespace trlc {

// 1-based line/column; {0, 0} marks a synthesized node.
struct SourcePos {
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

struct Term {
  enum class Kind : std::uint8_t { constant, variable };

  Kind kind = Kind::constant;
  Symbol name;

  static Term constant(Symbol s) { return {Kind::constant, s}; }
  static Term variable(Symbol s) { return {Kind::variable, s}; }
  static Term constant(std::string_view s) { return constant(Symbol::intern(s)); }
  static Term variable(std::string_view s) { return variable(Symbol::intern(s)); }

  bool is_var() const { return kind == Kind::variable; }

  friend bool operator==(const Term&, const Term&) = default;
};

// p(t1,...,tn). Positions do not take part in equality.
struct Atom {
  Symbol predicate;
  std::vector<Term> args;
  SourcePos pos;

  Atom() = default;
  Atom(Symbol p, std::vector<Term> a, SourcePos at = {})
      : predicate(p), args(std::move(a)), pos(at) {}

  std::size_t arity() const { return args.size(); }
  bool is_ground() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
};

enum class Polarity : std::uint8_t { insert, remove };

struct ElementaryAction {
  Polarity polarity = Polarity::insert;
  Atom atom;

  friend bool operator==(const ElementaryAction&,
                         const ElementaryAction&) = default;
};

// Goal tree. `atom`/`polarity` are meaningful for call and act; `children`
// holds the operands of serial, query_conj (n-ary, non-empty) and concurrent
// (exactly two: left, right).
struct Goal {
  enum class Kind : std::uint8_t { call, act, serial, query_conj, concurrent };

  Kind kind = Kind::call;
  Atom atom;
  Polarity polarity = Polarity::insert;
  std::vector<Goal> children;
  SourcePos pos;

  static Goal call(Atom a);
  static Goal act(Polarity p, Atom a);
  static Goal act(ElementaryAction a) { return act(a.polarity, std::move(a.atom)); }
  static Goal serial(std::vector<Goal> items);
  static Goal query_conj(std::vector<Goal> items);
  static Goal concurrent(Goal left, Goal right);

  bool contains_action() const;
  ElementaryAction action() const { return {polarity, atom}; }

  friend bool operator==(const Goal& a, const Goal& b);
};

struct Rule {
  Atom head;
  Goal body;
  SourcePos pos;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.head == b.head && a.body == b.body;
  }
};

struct PredicateInfo {
  std::size_t arity = 0;
  bool defined = false;  // has at least one rule
};

struct Program {
  std::vector<Rule> rules;
  std::vector<Atom> facts;  // ground
  std::string source_name;

  // Every predicate mentioned anywhere in the program.
  std::map<Symbol, PredicateInfo> predicates() const;
  bool is_defined(Symbol predicate) const;

  friend bool operator==(const Program& a, const Program& b) {
    return a.rules == b.rules && a.facts == b.facts;
  }
};

struct Query {
  enum class Mode : std::uint8_t { possible, execute };

  Mode mode = Mode::execute;
  Goal goal;

  friend bool operator==(const Query&, const Query&) = default;
};

// Variables of an atom or goal, in first-occurrence order.
std::vector<Symbol> variables_of(const Atom& atom);
std::vector<Symbol> variables_of(const Goal& goal);

}  // namespace trlc

#endif  // TRLC_AST_HPP_
