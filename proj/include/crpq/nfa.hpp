#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "crpq/base.hpp"
#include "crpq/regex.hpp"

namespace crpq {

using StateId = std::uint32_t;

/// Epsilon-free NFA. Built by Thompson construction followed by epsilon
/// elimination, so the empty word is accepted iff the initial state is
/// accepting.
struct Nfa {
  struct Transition {
    StateId from;
    Label label;
    StateId to;
  };

  std::uint32_t num_states = 0;
  StateId initial = 0;
  std::vector<bool> accepting;
  std::vector<Transition> transitions;
  // label.raw -> (from, to) pairs, for product construction
  std::unordered_map<std::uint32_t, std::vector<std::pair<StateId, StateId>>>
      by_label;
  std::vector<Label> alphabet;

  bool accepts_empty() const { return accepting[initial]; }
  std::vector<StateId> accepting_states() const {
    std::vector<StateId> out;
    for (StateId q = 0; q < num_states; ++q)
      if (accepting[q]) out.push_back(q);
    return out;
  }
};

/// Compiles an AST to an epsilon-free NFA. Symbol names are interned in
/// `scope`; inverse-tagged symbols map to inverse labels.
Nfa compile_nfa(const RegexPtr& ast, SymbolScope& scope);

}  // namespace crpq
