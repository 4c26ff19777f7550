#pragma once

#include <cstdint>
#include <vector>

#include "crpq/base.hpp"
#include "crpq/graph.hpp"
#include "crpq/nfa.hpp"

namespace crpq {

/// Product of a graph with an NFA: vertices are (v, q) pairs packed as
/// v * num_nfa_states + q, edges are unlabeled. Both adjacency directions
/// are stored (propagation walks backwards, BFS forwards).
struct ProductGraph {
  std::uint32_t nv = 0;  // graph vertices
  std::uint32_t nq = 0;  // NFA states
  std::uint64_t num_edges = 0;

  std::vector<std::uint32_t> out_offsets, out_targets;
  std::vector<std::uint32_t> in_offsets, in_sources;

  std::uint32_t id(VertexId v, StateId q) const { return v * nq + q; }
  std::uint32_t num_product_vertices() const { return nv * nq; }
};

/// Builds the product. With `transposed` set, every base edge (u, l, v) is
/// treated as (v, l^-1, u), which evaluates inverse regexes on the transpose
/// graph without materializing it.
ProductGraph build_product(const OverlayGraph& g, const Nfa& m,
                           bool transposed, Counters* counters = nullptr);

}  // namespace crpq
