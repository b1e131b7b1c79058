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

#include "trlc/state.hpp"

#include <algorithm>
#include <stdexcept>

#include "trlc/parser.hpp"
#include "trlc/printer.hpp"

namespace trlc {
namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Spelling-based, so fingerprints do not depend on interning order.
std::uint64_t fact_hash64(const Fact& f) {
  std::uint64_t h = fnv1a64(f.predicate.name());
  for (Symbol a : f.args) h = mix64(h ^ fnv1a64(a.name()));
  return mix64(h ^ f.args.size());
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 0xf];
  return out;
}

Fact Fact::from_atom(const Atom& atom) {
  Fact f{atom.predicate, {}};
  f.args.reserve(atom.args.size());
  for (const Term& t : atom.args) {
    if (t.is_var()) {
      throw std::invalid_argument("atom " + trlc::to_string(atom) + " is not ground");
    }
    f.args.push_back(t.name);
  }
  return f;
}

Atom Fact::to_atom() const {
  Atom a(predicate, {});
  a.args.reserve(args.size());
  for (Symbol s : args) a.args.push_back(Term::constant(s));
  return a;
}

bool spelling_less(const Fact& a, const Fact& b) {
  if (a.predicate != b.predicate) return a.predicate.name() < b.predicate.name();
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(),
                                      b.args.end(), name_less);
}

std::string to_string(const Fact& fact) { return to_string(fact.to_atom()); }

std::size_t FactHash::operator()(const Fact& f) const noexcept {
  std::uint64_t h = mix64(f.predicate.id());
  for (Symbol a : f.args) h = mix64(h ^ a.id());
  return static_cast<std::size_t>(h);
}

GroundAction GroundAction::from_action(const ElementaryAction& action) {
  return {action.polarity, Fact::from_atom(action.atom)};
}

std::string to_string(const GroundAction& action) {
  return (action.polarity == Polarity::insert ? "+" : "-") + to_string(action.fact);
}

State::State(std::span<const Fact> facts) {
  for (const Fact& f : facts) apply({Polarity::insert, f});
}

State State::from_atoms(std::span<const Atom> atoms) {
  State s;
  for (const Atom& a : atoms) s.apply({Polarity::insert, Fact::from_atom(a)});
  return s;
}

ActionRecord State::apply(const GroundAction& action) {
  ActionRecord rec{action, false, false, version_};
  auto it = index_.find(action.fact);
  if (action.polarity == Polarity::insert) {
    if (it == index_.end()) {
      auto id = static_cast<std::uint32_t>(slots_.size());
      slots_.push_back({action.fact, true});
      index_.emplace(action.fact, id);
      by_predicate_[action.fact.predicate].push_back(id);
      rec.new_slot = true;
    } else if (!slots_[it->second].live) {
      slots_[it->second].live = true;
    } else {
      return rec;
    }
    ++live_;
    fingerprint_ += fact_hash64(action.fact);
  } else {
    if (it == index_.end() || !slots_[it->second].live) return rec;
    slots_[it->second].live = false;
    --live_;
    fingerprint_ -= fact_hash64(action.fact);
  }
  rec.effective = true;
  ++version_;
  return rec;
}

void State::revert(const ActionRecord& record) {
  if (!record.effective) return;
  const Fact& f = record.action.fact;
  auto it = index_.find(f);
  if (it == index_.end()) throw std::logic_error("revert: record does not belong to this state");
  Slot& slot = slots_[it->second];
  if (record.action.polarity == Polarity::insert) {
    if (!slot.live) throw std::logic_error("revert: out-of-order undo of " + to_string(f));
    if (record.new_slot) {
      if (it->second + 1 != slots_.size()) {
        throw std::logic_error("revert: out-of-order undo of " + to_string(f));
      }
      by_predicate_[f.predicate].pop_back();
      slots_.pop_back();
      index_.erase(it);
    } else {
      slot.live = false;
    }
    --live_;
    fingerprint_ -= fact_hash64(f);
  } else {
    if (slot.live) throw std::logic_error("revert: out-of-order undo of " + to_string(f));
    slot.live = true;
    ++live_;
    fingerprint_ += fact_hash64(f);
  }
  version_ = record.prior_version;
}

bool State::contains(const Fact& fact) const {
  auto it = index_.find(fact);
  return it != index_.end() && slots_[it->second].live;
}

std::vector<Fact> State::facts() const {
  std::vector<Fact> out;
  out.reserve(live_);
  for (const Slot& s : slots_) {
    if (s.live) out.push_back(s.fact);
  }
  return out;
}

std::vector<Fact> State::sorted_facts() const {
  std::vector<Fact> out = facts();
  std::sort(out.begin(), out.end(), spelling_less);
  return out;
}

std::vector<Substitution> State::match(const Atom& pattern) const {
  std::vector<Substitution> out;
  for_each_of(pattern.predicate, [&](const Fact& f) {
    if (f.args.size() != pattern.args.size()) return true;
    Substitution sigma;
    for (std::size_t i = 0; i < f.args.size(); ++i) {
      const Term& t = pattern.args[i];
      if (!t.is_var()) {
        if (t.name != f.args[i]) return true;
        continue;
      }
      auto [it, fresh] = sigma.try_emplace(t.name, Term::constant(f.args[i]));
      if (!fresh && it->second.name != f.args[i]) return true;
    }
    out.push_back(std::move(sigma));
    return true;
  });
  return out;
}

std::string State::snapshot() const {
  std::string out;
  for (const Fact& f : sorted_facts()) {
    out += to_string(f);
    out += ".\n";
  }
  return out;
}

std::string State::digest() const { return hex64(fnv1a64(snapshot())); }

bool operator==(const State& a, const State& b) {
  if (a.live_ != b.live_ || a.fingerprint_ != b.fingerprint_) return false;
  for (const State::Slot& s : a.slots_) {
    if (s.live && !b.contains(s.fact)) return false;
  }
  return true;
}

std::pair<State, ActionRecord> apply(State state, const GroundAction& action) {
  ActionRecord rec = state.apply(action);
  return {std::move(state), std::move(rec)};
}

State revert(State state, const ActionRecord& record) {
  state.revert(record);
  return state;
}

State parse_state(std::string_view text) {
  std::vector<Atom> atoms = parse_facts(text);
  return State::from_atoms(atoms);
}

}  // namespace trlc
