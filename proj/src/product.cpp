#include "crpq/product.hpp"

namespace crpq {

ProductGraph build_product(const OverlayGraph& g, const Nfa& m,
                           bool transposed, Counters* counters) {
  ProductGraph p;
  p.nv = static_cast<std::uint32_t>(g.num_vertices());
  p.nq = m.num_states;
  const std::uint64_t npv = static_cast<std::uint64_t>(p.nv) * p.nq;

  // Two passes over the edges: degree counting, then fill.
  std::vector<std::uint32_t> out_deg(npv, 0), in_deg(npv, 0);
  auto for_each_product_edge = [&](auto&& f) {
    g.for_each_edge([&](const Edge& e) {
      VertexId src = transposed ? e.dst : e.src;
      VertexId dst = transposed ? e.src : e.dst;
      Label l = transposed ? e.label.inverse() : e.label;
      auto it = m.by_label.find(l.raw);
      if (it == m.by_label.end()) return;
      for (const auto& [q1, q2] : it->second) f(p.id(src, q1), p.id(dst, q2));
    });
  };

  for_each_product_edge([&](std::uint32_t a, std::uint32_t b) {
    ++out_deg[a];
    ++in_deg[b];
    ++p.num_edges;
  });

  p.out_offsets.resize(npv + 1, 0);
  p.in_offsets.resize(npv + 1, 0);
  for (std::uint64_t i = 0; i < npv; ++i) {
    p.out_offsets[i + 1] = p.out_offsets[i] + out_deg[i];
    p.in_offsets[i + 1] = p.in_offsets[i] + in_deg[i];
  }
  p.out_targets.resize(p.num_edges);
  p.in_sources.resize(p.num_edges);
  std::vector<std::uint32_t> out_pos(p.out_offsets.begin(),
                                     p.out_offsets.end() - 1);
  std::vector<std::uint32_t> in_pos(p.in_offsets.begin(),
                                    p.in_offsets.end() - 1);
  for_each_product_edge([&](std::uint32_t a, std::uint32_t b) {
    p.out_targets[out_pos[a]++] = b;
    p.in_sources[in_pos[b]++] = a;
  });

  if (counters) counters->product_edges += p.num_edges;
  return p;
}

}  // namespace crpq
