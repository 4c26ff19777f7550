#pragma once

#include <unordered_map>
#include <vector>

#include "crpq/graph.hpp"
#include "crpq/query.hpp"

namespace crpq {

using Tuple = std::vector<VertexId>;

/// Capped relation slice keyed by one variable: per key value, up to `cap`
/// distinct tail tuples. Keys whose true degree is within the cap carry
/// their complete tail set; heavier keys carry exactly `cap` tuples.
struct RestrictionTable {
  VarId key = 0;
  std::vector<VarId> tail;
  std::size_t cap = 0;
  std::vector<VertexId> keys;  // ascending
  std::unordered_map<VertexId, std::vector<Tuple>> lists;

  std::size_t degree(VertexId x) const {
    auto it = lists.find(x);
    return it == lists.end() ? 0 : it->second.size();
  }
};

/// Capped table for the relation of a single RPQ atom: pairs (x, y) with a
/// path x -> y in L(regex), keyed by x. With `inverted`, the atom is read
/// in the opposite direction (inverse regex over the transposed edge view).
RestrictionTable restrict_single_rpq(const RegexPtr& regex, bool inverted,
                                     VarId key_var, VarId tail_var,
                                     const OverlayGraph& g, std::size_t cap,
                                     SymbolScope& scope, Counters& counters);

/// Pushes a capped table through an RPQ atom R(X, Y): from a table s keyed
/// by Y, produces the capped table of R(X, Y) ∧ S(Y, tail) keyed by X.
/// Backward worklist over the product graph; O(N * cap) for a fixed query.
RestrictionTable propagate(const RegexPtr& regex, bool inverted, VarId key_var,
                           const OverlayGraph& g, const RestrictionTable& s,
                           std::size_t cap, SymbolScope& scope,
                           Counters& counters);

/// Joins two capped tables on their shared key: per key present in both,
/// the cross product of the tail lists truncated to `cap` tuples
/// (row-major: a's list outer, b's inner). Tail sets must be disjoint.
RestrictionTable compose(const RestrictionTable& a, const RestrictionTable& b,
                         std::size_t cap, Counters& counters);

}  // namespace crpq
