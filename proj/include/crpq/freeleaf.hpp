#pragma once

#include <cstdint>

#include "crpq/restriction.hpp"

namespace crpq {

/// True when CRPQ_DEBUG_ASSERT=1; enables in-algorithm invariant checks.
bool debug_asserts_enabled();

struct RoundInfo {
  std::uint64_t guess = 0;
  std::size_t delta = 0;                       // Δ; passes run capped at Δ+1
  std::vector<std::size_t> heavy_sizes;        // |H_W| per pass
  std::vector<std::size_t> emitted_per_pass;   // light rows per pass
};

struct EvalReport {
  std::vector<VarId> schema;   // declared free-variable order
  std::vector<Tuple> rows;     // sorted, pairwise distinct
  std::vector<RoundInfo> rounds;
  Counters counters;
  std::uint64_t out_a = 0;     // max materialized atom size (baseline only)
};

/// One rooted bottom-up pass: builds the capped table keyed by the root free
/// variable over all remaining free variables, then splits keys into light
/// rows (complete, emitted) and heavy keys (degree hit the cap).
struct PassResult {
  std::vector<Tuple> light_rows;  // in the query's declared free order
  VertexSet heavy;
};

PassResult run_pass(const Crpq& q, const OrientedTree& tree, std::size_t cap,
                    const OverlayGraph& g, SymbolScope& scope,
                    Counters& counters);

/// Output-size doubling evaluation of a free-leaf query with >= 2 free
/// variables. Per guess, processes the free variables in declaration order;
/// processed variables are narrowed to their heavy keys via fresh-symbol
/// self-loop filters, and a heavy key surviving the last pass doubles the
/// guess and restarts from a clean overlay.
EvalReport eval_freeleaf(const Crpq& q, const OverlayGraph& g,
                         SymbolScope& scope);

}  // namespace crpq
