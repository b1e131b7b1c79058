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

#ifndef TRLC_PRINTER_HPP_
#define TRLC_PRINTER_HPP_

#include <ostream>
#include <string>

#include "trlc/ast.hpp"

namespace trlc {

// Canonical `.tlp` rendering: compound operands of a connective are
// bracketed, so printing a parsed node and reparsing it yields the same tree.
std::string to_string(const Term& term);
std::string to_string(const Atom& atom);
std::string to_string(const ElementaryAction& action);
std::string to_string(const Goal& goal);
std::string to_string(const Rule& rule);
std::string to_string(const Query& query);
// One clause per line: rules in order, then facts.
std::string to_string(const Program& program);

std::ostream& operator<<(std::ostream& os, const Atom& atom);
std::ostream& operator<<(std::ostream& os, const Goal& goal);

}  // namespace trlc

#endif  // TRLC_PRINTER_HPP_
