#include "crpq/width.hpp"

#include <algorithm>
#include <bit>
#include <set>

namespace crpq {

std::size_t rho_star_free(const Crpq& component) {
  if (component.atoms.size() == 1) {
    const Atom& a = component.atoms[0];
    if (component.is_free(a.src) && component.is_free(a.dst)) return 1;
  }
  return component.free.size();
}

WidthReport fn_fhtw(const Crpq& q) {
  auto acyclic = check_acyclic(q);
  if (!acyclic.accepted)
    throw std::invalid_argument("width is only defined for acyclic queries: " +
                                acyclic.reason);
  WidthReport report;
  report.fn_fhtw = 1;
  for (Crpq& c : bound_connected_components(q)) {
    WidthReport::Component entry;
    entry.free_count = c.free.size();
    entry.rho_star = rho_star_free(c);
    entry.single_edge = entry.rho_star == 1 && c.atoms.size() == 1 &&
                        entry.free_count == 2;
    report.fn_fhtw = std::max(report.fn_fhtw, entry.rho_star);
    entry.query = std::move(c);
    report.components.push_back(std::move(entry));
  }
  report.trivial = is_trivial(q);
  report.predicted_exponent =
      1.0 - 1.0 / static_cast<double>(std::max<std::size_t>(report.fn_fhtw, 2));
  return report;
}

std::size_t brute_force_edge_cover(const QueryMultigraph& g,
                                   const std::vector<VarId>& target) {
  if (target.empty()) return 0;
  if (g.edges.size() > 20)
    throw std::invalid_argument("edge cover oracle limited to 20 edges");

  std::set<VarId> want(target.begin(), target.end());
  for (VarId v : want) {
    bool covered = false;
    for (const auto& [a, b, idx] : g.edges)
      covered |= a == v || b == v;
    if (!covered)
      throw std::invalid_argument("target variable covered by no edge");
  }

  const std::size_t m = g.edges.size();
  std::size_t best = SIZE_MAX;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::size_t size = std::popcount(mask);
    if (size >= best) continue;
    std::set<VarId> covered;
    for (std::size_t i = 0; i < m; ++i) {
      if (!(mask & (1u << i))) continue;
      covered.insert(std::get<0>(g.edges[i]));
      covered.insert(std::get<1>(g.edges[i]));
    }
    bool ok = true;
    for (VarId v : want) ok &= covered.count(v) != 0;
    if (ok) best = size;
  }
  return best;
}

}  // namespace crpq
