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

#ifndef TRLC_SYMBOL_HPP_
#define TRLC_SYMBOL_HPP_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace trlc {

// Interned identifier. Symbols compare by id, which reflects first-interning
// order, not spelling; sort by name() when a lexicographic order is needed.
// Interning is thread-safe.
class Symbol {
 public:
  constexpr Symbol() = default;

  static Symbol intern(std::string_view name);

  const std::string& name() const;
  constexpr std::uint32_t id() const { return id_; }
  constexpr bool empty() const { return id_ == 0; }

  static Symbol from_id(std::uint32_t id) { return Symbol(id); }

  friend constexpr bool operator==(Symbol a, Symbol b) = default;
  friend constexpr auto operator<=>(Symbol a, Symbol b) = default;

 private:
  constexpr explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

inline bool name_less(Symbol a, Symbol b) { return a.name() < b.name(); }

}  // namespace trlc

template <>
struct std::hash<trlc::Symbol> {
  std::size_t operator()(trlc::Symbol s) const noexcept {
    return std::hash<std::uint32_t>{}(s.id());
  }
};

#endif  // TRLC_SYMBOL_HPP_
