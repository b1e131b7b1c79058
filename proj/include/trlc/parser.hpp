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

#ifndef TRLC_PARSER_HPP_
#define TRLC_PARSER_HPP_

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "trlc/ast.hpp"

namespace trlc {

// Concrete syntax of `.tlp` programs and queries:
//
//   clause := atom [ ':-' goal ] '.'
//   query  := '?-' [ 'possible' ] goal '.'
//   goal   := ser { '|' ser }          concurrent, left-associative
//   ser    := conj { '*' conj }        serial
//   conj   := unary { '&' unary }      query conjunction (action-free)
//   unary  := '+' atom | '-' atom | atom | '(' goal ')'
//
// `%` starts a comment running to end of line.
class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    lexical,
    syntax,
    arity,
    safety,
    clash,             // base/defined predicate namespaces overlap
    unknown_predicate  // goal calls a predicate the program never mentions
  };

  ParseError(Kind kind, SourcePos pos, const std::string& message);

  Kind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  Kind kind_;
  SourcePos pos_;
  std::string message_;
};

const char* to_string(ParseError::Kind kind);

Program parse_program(std::string_view text, std::string source_name = "<input>");
Query parse_query(std::string_view text);

// A bare goal; a trailing '.' is optional.
Goal parse_goal(std::string_view text);
// A single atom (ground or not); a trailing '.' is optional.
Atom parse_atom(std::string_view text);
// "+p(a)" or "-p(a)".
ElementaryAction parse_action(std::string_view text);
// A file of ground facts only.
std::vector<Atom> parse_facts(std::string_view text);

// Load-time checks shared by parse_program and programmatically built
// programs: arity, safety, namespace clash, action-free query conjunctions.
void check_program(const Program& program);

// Checks a query goal against a loaded program: every called predicate must
// be known (mentioned by the program, in `known_base`, or `start`), arities
// must agree, and actions may only touch base predicates.
void validate_goal(const Program& program, const Goal& goal,
                   const std::set<Symbol>& known_base = {});

// Reserved nullary token present in every initial project state.
Symbol start_symbol();

}  // namespace trlc

#endif  // TRLC_PARSER_HPP_
