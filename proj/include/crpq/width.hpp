#pragma once

#include <vector>

#include "crpq/query.hpp"

namespace crpq {

struct WidthReport {
  struct Component {
    Crpq query;
    std::size_t free_count = 0;
    std::size_t rho_star = 0;
    bool single_edge = false;
  };
  std::size_t fn_fhtw = 1;
  std::vector<Component> components;
  bool trivial = false;
  double predicted_exponent = 0.5;  // 1 - 1/max(fn_fhtw, 2)
};

/// Integral edge cover number of the free variables of a bound-connected
/// acyclic component: 1 for a single atom with both endpoints free,
/// otherwise the free-variable count.
std::size_t rho_star_free(const Crpq& component);

/// Width of an acyclic query: the component maximum of rho_star_free,
/// floored at 1.
WidthReport fn_fhtw(const Crpq& q);

/// Exhaustive minimum edge cover of `target` in a query multigraph; the
/// independent validation oracle. Guarded to <= 20 edges.
std::size_t brute_force_edge_cover(const QueryMultigraph& g,
                                   const std::vector<VarId>& target);

}  // namespace crpq
