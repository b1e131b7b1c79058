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

#ifndef TRLC_STATE_HPP_
#define TRLC_STATE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "trlc/ast.hpp"

namespace trlc {

// A ground atom in compact form.
struct Fact {
  Symbol predicate;
  std::vector<Symbol> args;

  static Fact from_atom(const Atom& atom);  // throws std::invalid_argument unless ground
  Atom to_atom() const;

  friend bool operator==(const Fact&, const Fact&) = default;
};

// Lexicographic by spelling: predicate name, then argument names.
bool spelling_less(const Fact& a, const Fact& b);
std::string to_string(const Fact& fact);

struct FactHash {
  std::size_t operator()(const Fact& f) const noexcept;
};

struct GroundAction {
  Polarity polarity = Polarity::insert;
  Fact fact;

  static GroundAction from_action(const ElementaryAction& action);
  friend bool operator==(const GroundAction&, const GroundAction&) = default;
};

std::string to_string(const GroundAction& action);

struct ActionRecord {
  GroundAction action;
  bool effective = false;  // whether the fact set changed
  // Undo bookkeeping.
  bool new_slot = false;
  std::uint64_t prior_version = 0;
};

using Substitution = std::map<Symbol, Term>;

// Finite set of ground facts. Facts enumerate in first-insertion order: a
// fact that is deleted and later re-inserted keeps its original position.
// apply() and revert() are O(1); revert must be called in LIFO order over
// the records produced by apply().
class State {
 public:
  State() = default;
  explicit State(std::span<const Fact> facts);
  static State from_atoms(std::span<const Atom> atoms);

  ActionRecord apply(const GroundAction& action);
  void revert(const ActionRecord& record);

  bool contains(const Fact& fact) const;
  std::size_t size() const { return live_; }
  bool empty() const { return live_ == 0; }
  // Advances on every effective change; revert restores the prior value.
  std::uint64_t version() const { return version_; }
  // Order-independent 64-bit hash of the fact set.
  std::uint64_t fingerprint() const { return fingerprint_; }

  std::vector<Fact> facts() const;  // insertion order
  std::vector<Fact> sorted_facts() const;

  // Calls fn(fact) for every live fact of `predicate` in insertion order,
  // stopping early when fn returns false. fn may apply and revert actions
  // (LIFO) on this state, but the fact reference dies at the first mutation.
  template <typename Fn>
  void for_each_of(Symbol predicate, Fn&& fn) const {
    auto it = by_predicate_.find(predicate);
    if (it == by_predicate_.end()) return;
    const std::vector<std::uint32_t>& ids = it->second;
    const std::size_t n = ids.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Slot& s = slots_[ids[i]];
      if (s.live && !fn(s.fact)) return;
    }
  }

  // All substitutions σ with σ(pattern) in the set, in fact order.
  std::vector<Substitution> match(const Atom& pattern) const;

  // One fact per line in clause syntax, sorted lexicographically.
  std::string snapshot() const;
  // FNV-1a 64 of snapshot(), as 16 hex digits.
  std::string digest() const;

  friend bool operator==(const State& a, const State& b);

 private:
  struct Slot {
    Fact fact;
    bool live = false;
  };

  std::vector<Slot> slots_;
  std::unordered_map<Fact, std::uint32_t, FactHash> index_;
  std::unordered_map<Symbol, std::vector<std::uint32_t>> by_predicate_;
  std::size_t live_ = 0;
  std::uint64_t version_ = 0;
  std::uint64_t fingerprint_ = 0;
};

// Value-semantics forms of apply/revert: the input state is left untouched.
std::pair<State, ActionRecord> apply(State state, const GroundAction& action);
State revert(State state, const ActionRecord& record);

// Parses a snapshot (or any facts-only text) back into a state.
State parse_state(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace trlc

#endif  // TRLC_STATE_HPP_
