#pragma once

#include "crpq/freeleaf.hpp"
#include "crpq/relation.hpp"

namespace crpq {

struct OracleGuardExceeded : std::runtime_error {
  explicit OracleGuardExceeded(const std::string& what)
      : std::runtime_error(what) {}
};

/// Fully materialized RPQ relation, packed as (src << 32) | dst per row.
struct MaterializedRpq {
  VarId src_var = 0;
  VarId dst_var = 0;
  std::vector<std::uint64_t> rows;
};

/// Forward BFS in the product graph from every (x, q0); O(|V| * |E'|).
MaterializedRpq materialize_rpq(const RegexPtr& regex, const LabeledGraph& g,
                                SymbolScope& scope,
                                Counters* counters = nullptr);

/// Reference evaluation: materialize every atom, fold the natural join,
/// project, dedup. Accepts cyclic queries. Throws OracleGuardExceeded when
/// any materialized or intermediate relation exceeds `guard` rows.
BindingRelation oracle_eval(const Crpq& q, const LabeledGraph& g,
                            std::size_t guard = 10'000'000);

/// The non-output-sensitive baseline: materialize every atom, semijoin
/// reduce along a join tree, then join with projection. Records
/// OUT_a = the largest materialized atom relation.
EvalReport baseline_eval(const Crpq& q, const LabeledGraph& g);

}  // namespace crpq
