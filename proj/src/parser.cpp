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

#include "trlc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace trlc {

ParseError::ParseError(Kind kind, SourcePos pos, const std::string& message)
    : std::runtime_error(std::to_string(pos.line) + ":" +
                         std::to_string(pos.column) + ": " + message),
      kind_(kind),
      pos_(pos),
      message_(message) {}

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::lexical: return "lexical error";
    case ParseError::Kind::syntax: return "syntax error";
    case ParseError::Kind::arity: return "arity conflict";
    case ParseError::Kind::safety: return "safety violation";
    case ParseError::Kind::clash: return "base/defined predicate clash";
    case ParseError::Kind::unknown_predicate: return "unknown predicate";
  }
  return "error";
}

Symbol start_symbol() {
  static const Symbol s = Symbol::intern("start");
  return s;
}

namespace {

constexpr std::string_view kPossible = "possible";

enum class Tok {
  name,      // [a-z0-9][A-Za-z0-9_]*
  variable,  // [A-Z_][A-Za-z0-9_]*
  lparen,
  rparen,
  comma,
  period,
  neck,      // :-
  query,     // ?-
  star,
  amp,
  bar,
  plus,
  minus,
  eof
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::name: return "identifier";
    case Tok::variable: return "variable";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::comma: return "','";
    case Tok::period: return "'.'";
    case Tok::neck: return "':-'";
    case Tok::query: return "'?-'";
    case Tok::star: return "'*'";
    case Tok::amp: return "'&'";
    case Tok::bar: return "'|'";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::eof: return "end of input";
  }
  return "token";
}

struct Token {
  Tok kind;
  std::string_view text;
  SourcePos pos;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_blank();
      SourcePos at{line_, col_};
      if (i_ >= text_.size()) {
        out.push_back({Tok::eof, {}, end_pos()});
        return out;
      }
      char c = text_[i_];
      if (std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back({Tok::name, word(), at});
      } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back({Tok::variable, word(), at});
      } else if (c == ':' && peek(1) == '-') {
        out.push_back({Tok::neck, take(2), at});
      } else if (c == '?' && peek(1) == '-') {
        out.push_back({Tok::query, take(2), at});
      } else {
        Tok k;
        switch (c) {
          case '(': k = Tok::lparen; break;
          case ')': k = Tok::rparen; break;
          case ',': k = Tok::comma; break;
          case '.': k = Tok::period; break;
          case '*': k = Tok::star; break;
          case '&': k = Tok::amp; break;
          case '|': k = Tok::bar; break;
          case '+': k = Tok::plus; break;
          case '-': k = Tok::minus; break;
          default: {
            std::ostringstream msg;
            if (static_cast<unsigned char>(c) >= 0x80 || !std::isprint(c)) {
              msg << "unexpected byte 0x" << std::hex
                  << static_cast<int>(static_cast<unsigned char>(c));
            } else {
              msg << "unexpected character '" << c << "'";
            }
            throw ParseError(ParseError::Kind::lexical, at, msg.str());
          }
        }
        out.push_back({k, take(1), at});
      }
    }
  }

 private:
  char peek(std::size_t k) const {
    return i_ + k < text_.size() ? text_[i_ + k] : '\0';
  }

  std::string_view take(std::size_t n) {
    std::string_view s = text_.substr(i_, n);
    i_ += n;
    col_ += static_cast<std::uint32_t>(n);
    return s;
  }

  std::string_view word() {
    std::size_t n = 1;
    while (i_ + n < text_.size() && ident_char(text_[i_ + n])) ++n;
    return take(n);
  }

  void skip_blank() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == '\n') {
        ++i_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        ++i_;
        ++col_;
      } else if (c == '%') {
        while (i_ < text_.size() && text_[i_] != '\n') ++i_;
      } else {
        return;
      }
    }
  }

  // Position just past the last non-newline character.
  SourcePos end_pos() const {
    std::uint32_t line = 1, col = 1;
    std::size_t last = text_.find_last_not_of(" \t\r\n\f\v");
    for (std::size_t k = 0; last != std::string_view::npos && k <= last; ++k) {
      if (text_[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  std::string_view text_;
  std::size_t i_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  Program program(std::string source_name) {
    Program p;
    p.source_name = std::move(source_name);
    while (cur().kind != Tok::eof) {
      SourcePos at = cur().pos;
      Atom head = atom();
      if (accept(Tok::neck)) {
        Goal body = goal();
        expect(Tok::period, "to end the rule");
        p.rules.push_back(Rule{std::move(head), std::move(body), at});
      } else {
        expect(Tok::period, "or ':-' after clause head");
        if (!head.is_ground()) {
          throw ParseError(ParseError::Kind::safety, head.pos,
                           "fact " + head.predicate.name() +
                               " must be ground (variables have no binding)");
        }
        p.facts.push_back(std::move(head));
      }
    }
    return p;
  }

  Query query() {
    expect(Tok::query, "to start a query");
    Query q;
    q.mode = Query::Mode::execute;
    if (cur().kind == Tok::name && cur().text == kPossible) {
      ++i_;
      q.mode = Query::Mode::possible;
    }
    q.goal = goal();
    expect(Tok::period, "to end the query");
    expect(Tok::eof, "after the query");
    return q;
  }

  Goal bare_goal() {
    Goal g = goal();
    accept(Tok::period);
    expect(Tok::eof, "after the goal");
    return g;
  }

  Atom bare_atom() {
    Atom a = atom();
    accept(Tok::period);
    expect(Tok::eof, "after the atom");
    return a;
  }

  ElementaryAction bare_action() {
    Polarity pol;
    if (accept(Tok::plus)) {
      pol = Polarity::insert;
    } else if (accept(Tok::minus)) {
      pol = Polarity::remove;
    } else {
      fail("expected '+' or '-' before an atom");
    }
    ElementaryAction a{pol, atom()};
    accept(Tok::period);
    expect(Tok::eof, "after the action");
    return a;
  }

 private:
  const Token& cur() const { return toks_[i_]; }

  bool accept(Tok k) {
    if (cur().kind != k) return false;
    ++i_;
    return true;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string got = cur().kind == Tok::eof
                          ? std::string("end of input")
                          : "'" + std::string(cur().text) + "'";
    throw ParseError(ParseError::Kind::syntax, cur().pos, what + ", got " + got);
  }

  void expect(Tok k, const char* context) {
    if (!accept(k)) fail(std::string("expected ") + describe(k) + " " + context);
  }

  Goal goal() {
    Goal left = serial();
    while (accept(Tok::bar)) {
      Goal right = serial();
      left = Goal::concurrent(std::move(left), std::move(right));
    }
    return left;
  }

  Goal serial() {
    SourcePos at = cur().pos;
    std::vector<Goal> items;
    splice(items, conj(), Goal::Kind::serial);
    while (accept(Tok::star)) splice(items, conj(), Goal::Kind::serial);
    if (items.size() == 1) return std::move(items.front());
    Goal g = Goal::serial(std::move(items));
    g.pos = at;
    return g;
  }

  Goal conj() {
    SourcePos at = cur().pos;
    Goal first = unary();
    if (cur().kind != Tok::amp) return first;
    std::vector<Goal> items;
    splice(items, std::move(first), Goal::Kind::query_conj);
    while (accept(Tok::amp)) splice(items, unary(), Goal::Kind::query_conj);
    for (const Goal& g : items) {
      if (g.contains_action()) {
        throw ParseError(ParseError::Kind::syntax, first_action_pos(g),
                         "elementary actions are not allowed under '&'");
      }
    }
    if (items.size() == 1) return std::move(items.front());
    Goal g = Goal::query_conj(std::move(items));
    g.pos = at;
    return g;
  }

  static SourcePos first_action_pos(const Goal& g) {
    if (g.kind == Goal::Kind::act) return g.pos;
    for (const Goal& c : g.children) {
      if (c.contains_action()) return first_action_pos(c);
    }
    return g.pos;
  }

  // Operands of an associative connective that are themselves (parenthesized)
  // instances of the same connective are flattened.
  static void splice(std::vector<Goal>& items, Goal g, Goal::Kind kind) {
    if (g.kind == kind) {
      for (Goal& c : g.children) items.push_back(std::move(c));
    } else {
      items.push_back(std::move(g));
    }
  }

  Goal unary() {
    SourcePos at = cur().pos;
    if (accept(Tok::plus)) {
      Goal g = Goal::act(Polarity::insert, atom());
      g.pos = at;
      return g;
    }
    if (accept(Tok::minus)) {
      Goal g = Goal::act(Polarity::remove, atom());
      g.pos = at;
      return g;
    }
    if (accept(Tok::lparen)) {
      Goal g = goal();
      expect(Tok::rparen, "to close '('");
      return g;
    }
    if (cur().kind == Tok::name) return Goal::call(atom());
    fail("expected a goal");
  }

  Atom atom() {
    if (cur().kind != Tok::name) {
      if (cur().kind == Tok::variable) {
        throw ParseError(ParseError::Kind::syntax, cur().pos,
                         "predicate names must start with a lowercase letter, got '" +
                             std::string(cur().text) + "'");
      }
      fail("expected a predicate name");
    }
    const Token& name = cur();
    if (name.text == kPossible) {
      throw ParseError(ParseError::Kind::syntax, name.pos,
                       "'possible' is reserved and may only follow '?-'");
    }
    if (std::isdigit(static_cast<unsigned char>(name.text.front()))) {
      throw ParseError(ParseError::Kind::syntax, name.pos,
                       "predicate names must start with a letter, got '" +
                           std::string(name.text) + "'");
    }
    ++i_;
    Atom a(Symbol::intern(name.text), {}, name.pos);
    if (accept(Tok::lparen)) {
      do {
        a.args.push_back(term());
      } while (accept(Tok::comma));
      expect(Tok::rparen, "to close the argument list");
    }
    return a;
  }

  Term term() {
    const Token& t = cur();
    if (t.kind == Tok::name) {
      ++i_;
      return Term::constant(t.text);
    }
    if (t.kind == Tok::variable) {
      ++i_;
      return Term::variable(t.text);
    }
    fail("expected a constant or variable");
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

class ArityTable {
 public:
  void note(const Atom& a) {
    auto [it, fresh] = arity_.try_emplace(a.predicate, a.arity());
    if (!fresh && it->second != a.arity()) {
      throw ParseError(ParseError::Kind::arity, a.pos,
                       "predicate " + a.predicate.name() + " used with arity " +
                           std::to_string(a.arity()) + ", previously " +
                           std::to_string(it->second));
    }
  }

  void walk(const Goal& g) {
    if (g.kind == Goal::Kind::call || g.kind == Goal::Kind::act) {
      note(g.atom);
      return;
    }
    for (const Goal& c : g.children) walk(c);
  }

 private:
  std::map<Symbol, std::size_t> arity_;
};

using VarSet = std::set<Symbol>;

void check_safety(const Goal& g, VarSet& bound) {
  switch (g.kind) {
    case Goal::Kind::call:
      for (const Term& t : g.atom.args) {
        if (t.is_var()) bound.insert(t.name);
      }
      return;
    case Goal::Kind::act:
      for (const Term& t : g.atom.args) {
        if (t.is_var() && !bound.count(t.name)) {
          throw ParseError(ParseError::Kind::safety, g.pos,
                           "variable " + t.name.name() + " is unbound at action " +
                               std::string(g.polarity == Polarity::insert ? "+" : "-") +
                               g.atom.predicate.name());
        }
      }
      return;
    case Goal::Kind::serial:
    case Goal::Kind::query_conj:
      for (const Goal& c : g.children) check_safety(c, bound);
      return;
    case Goal::Kind::concurrent: {
      // Either branch may run first, so neither sees the other's bindings.
      VarSet left = bound;
      VarSet right = bound;
      check_safety(g.children[0], left);
      check_safety(g.children[1], right);
      bound.insert(left.begin(), left.end());
      bound.insert(right.begin(), right.end());
      return;
    }
  }
}

void check_query_conj(const Goal& g) {
  if (g.kind == Goal::Kind::query_conj && g.contains_action()) {
    throw ParseError(ParseError::Kind::syntax, g.pos,
                     "elementary actions are not allowed under '&'");
  }
  for (const Goal& c : g.children) check_query_conj(c);
}

void check_actions_on_base(const Goal& g, const std::set<Symbol>& defined) {
  if (g.kind == Goal::Kind::act && defined.count(g.atom.predicate)) {
    throw ParseError(ParseError::Kind::clash, g.pos,
                     "action on defined predicate " + g.atom.predicate.name());
  }
  for (const Goal& c : g.children) check_actions_on_base(c, defined);
}

}  // namespace

void check_program(const Program& program) {
  ArityTable arity;
  std::set<Symbol> defined;
  for (const Rule& r : program.rules) {
    arity.note(r.head);
    arity.walk(r.body);
    defined.insert(r.head.predicate);
  }
  for (const Atom& f : program.facts) {
    arity.note(f);
    if (!f.is_ground()) {
      throw ParseError(ParseError::Kind::safety, f.pos,
                       "fact " + f.predicate.name() + " must be ground");
    }
    if (defined.count(f.predicate)) {
      throw ParseError(ParseError::Kind::clash, f.pos,
                       "predicate " + f.predicate.name() +
                           " has rules and cannot also be a fact");
    }
  }
  if (defined.count(start_symbol())) {
    const Rule& r = *std::find_if(program.rules.begin(), program.rules.end(),
                                  [](const Rule& r) { return r.head.predicate == start_symbol(); });
    throw ParseError(ParseError::Kind::clash, r.pos,
                     "'start' is a reserved base predicate and cannot head a rule");
  }
  for (const Rule& r : program.rules) {
    check_query_conj(r.body);
    check_actions_on_base(r.body, defined);
    VarSet bound;
    check_safety(r.body, bound);
    for (const Term& t : r.head.args) {
      if (t.is_var() && !bound.count(t.name)) {
        throw ParseError(ParseError::Kind::safety, r.head.pos,
                         "head variable " + t.name.name() + " of " +
                             r.head.predicate.name() + " does not occur in a body query");
      }
    }
  }
}

void validate_goal(const Program& program, const Goal& goal,
                   const std::set<Symbol>& known_base) {
  std::map<Symbol, PredicateInfo> preds = program.predicates();
  ArityTable local;
  auto walk = [&](auto&& self, const Goal& g) -> void {
    if (g.kind == Goal::Kind::call || g.kind == Goal::Kind::act) {
      local.note(g.atom);
      auto it = preds.find(g.atom.predicate);
      if (it != preds.end()) {
        if (it->second.arity != g.atom.arity()) {
          throw ParseError(ParseError::Kind::arity, g.pos,
                           "predicate " + g.atom.predicate.name() + " has arity " +
                               std::to_string(it->second.arity) + ", used with " +
                               std::to_string(g.atom.arity()));
        }
        if (g.kind == Goal::Kind::act && it->second.defined) {
          throw ParseError(ParseError::Kind::clash, g.pos,
                           "action on defined predicate " + g.atom.predicate.name());
        }
      } else if (g.kind == Goal::Kind::call && !known_base.count(g.atom.predicate) &&
                 g.atom.predicate != start_symbol()) {
        throw ParseError(ParseError::Kind::unknown_predicate, g.pos,
                         "unknown predicate " + g.atom.predicate.name() + "/" +
                             std::to_string(g.atom.arity()));
      }
      return;
    }
    for (const Goal& c : g.children) self(self, c);
  };
  check_query_conj(goal);
  walk(walk, goal);
}

Program parse_program(std::string_view text, std::string source_name) {
  Program p = Parser(text).program(std::move(source_name));
  check_program(p);
  return p;
}

Query parse_query(std::string_view text) {
  Query q = Parser(text).query();
  ArityTable arity;
  arity.walk(q.goal);
  return q;
}

Goal parse_goal(std::string_view text) {
  Goal g = Parser(text).bare_goal();
  ArityTable arity;
  arity.walk(g);
  return g;
}

Atom parse_atom(std::string_view text) { return Parser(text).bare_atom(); }

ElementaryAction parse_action(std::string_view text) {
  return Parser(text).bare_action();
}

std::vector<Atom> parse_facts(std::string_view text) {
  Program p = parse_program(text, "<facts>");
  if (!p.rules.empty()) {
    throw ParseError(ParseError::Kind::syntax, p.rules.front().pos,
                     "facts file may not contain rules");
  }
  return std::move(p.facts);
}

}  // namespace trlc
