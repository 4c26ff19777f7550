#pragma once

#include <vector>

#include "crpq/restriction.hpp"

namespace crpq {

/// Materialized relation over an ordered variable schema. Rows are kept
/// sorted and deduplicated once normalize() has run.
struct BindingRelation {
  std::vector<VarId> schema;
  std::vector<Tuple> rows;

  void normalize();  // sort + dedup
};

/// Join tree for an alpha-acyclic schema hypergraph, built by GYO ear
/// removal. removal_order lists non-root relations bottom-up.
struct JoinTree {
  std::vector<std::size_t> parent;  // SIZE_MAX at the root
  std::vector<std::size_t> removal_order;
  std::size_t root = 0;
};

/// Throws std::invalid_argument when the hypergraph is not alpha-acyclic.
JoinTree build_join_tree(const std::vector<std::vector<VarId>>& schemas);

bool is_alpha_acyclic(const std::vector<std::vector<VarId>>& schemas);

/// Full natural join of alpha-acyclic relations projected onto out_vars in
/// the given order: semijoin sweep both ways, then a bottom-up join with
/// early projection. Relations over disjoint schemas cross-product. An
/// empty relation list yields the 0-ary relation {()}.
BindingRelation join_acyclic(std::vector<BindingRelation> relations,
                             const std::vector<VarId>& out_vars);

}  // namespace crpq
