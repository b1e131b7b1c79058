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

#include "trlc/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace trlc {
namespace {

struct SymbolTable {
  std::shared_mutex mu;
  std::deque<std::string> names{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> ids{{names.front(), 0}};
};

SymbolTable& table() {
  static SymbolTable* t = new SymbolTable();
  return *t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  SymbolTable& t = table();
  {
    std::shared_lock lock(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mu);
  auto it = t.ids.find(name);
  if (it != t.ids.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(t.names.back(), id);
  return Symbol(id);
}

const std::string& Symbol::name() const {
  SymbolTable& t = table();
  std::shared_lock lock(t.mu);
  return t.names[id_];
}

}  // namespace trlc
