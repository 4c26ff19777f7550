#pragma once

#include <unordered_map>

#include "crpq/baseline.hpp"
#include "crpq/freeleaf.hpp"
#include "crpq/relation.hpp"

namespace crpq {

enum class Engine { Optimal, Baseline, Oracle };

struct CyclicQueryError : std::runtime_error {
  explicit CyclicQueryError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Linear-time evaluation of a connected acyclic query with at most one
/// free variable, by repeated leaf elimination with backward product
/// traversals and fresh-symbol filters.
BindingRelation eval_single_free(const Crpq& q, const OverlayGraph& g,
                                 SymbolScope& scope, Counters& counters);

/// Backward product reachability: the set {p : some y has a path p -> y in
/// L(regex)}, read over the transposed edge view when `inverted`.
VertexSet linear_rpq_sources(const RegexPtr& regex, bool inverted,
                             const OverlayGraph& g, SymbolScope& scope,
                             Counters& counters);

struct VariableFilters {
  bool satisfiable = true;  // false once any connected component is empty
  std::unordered_map<VarId, VertexSet> by_var;  // one entry per free var
};

/// Per free variable X: the value set of the whole query body with only X
/// free (other connected components act as Boolean guards).
VariableFilters compute_variable_filters(const Crpq& q, const LabeledGraph& g,
                                         SymbolScope& scope,
                                         Counters& counters);

/// Bound-connected component (>= 2 free variables) made free-leaf: filters
/// merged into incident atoms, then non-free leaves eliminated via backward
/// traversal plus fresh-symbol self-loops.
struct FreeLeafForm {
  Crpq query;
  OverlayGraph overlay;
};

FreeLeafForm to_free_leaf(const Crpq& component, const VariableFilters& filters,
                          const LabeledGraph& g, SymbolScope& scope,
                          Counters& counters);

BindingRelation yannakakis_join(std::vector<BindingRelation> relations,
                                const std::vector<VarId>& out_vars);

/// Full pipeline entry point.
EvalReport evaluate(const Crpq& q, const LabeledGraph& g, Engine engine);

}  // namespace crpq
