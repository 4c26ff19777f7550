#include "crpq/restriction.hpp"

#include <algorithm>
#include <deque>

#include "crpq/nfa.hpp"
#include "crpq/product.hpp"

namespace crpq {

namespace {

RestrictionTable propagate_core(const RegexPtr& regex, bool inverted,
                                VarId key_var, const OverlayGraph& g,
                                const RestrictionTable& s, std::size_t cap,
                                SymbolScope& scope, Counters& counters) {
  if (s.cap != cap)
    throw std::invalid_argument(
        "propagate: input table cap " + std::to_string(s.cap) +
        " does not match requested cap " + std::to_string(cap));

  RegexPtr effective = inverted ? invert_regex(regex) : regex;
  Nfa nfa = compile_nfa(effective, scope);
  ProductGraph p = build_product(g, nfa, inverted, &counters);

  std::vector<std::vector<Tuple>> lists(p.num_product_vertices());
  std::deque<std::pair<std::uint32_t, std::uint32_t>> fifo;

  auto add = [&](std::uint32_t pv, const Tuple& t) {
    auto& list = lists[pv];
    if (list.size() >= cap) return;
    if (std::find(list.begin(), list.end(), t) != list.end()) return;
    list.push_back(t);
    fifo.emplace_back(pv, static_cast<std::uint32_t>(list.size() - 1));
    ++counters.worklist_pushes;
  };

  std::vector<StateId> accepting = nfa.accepting_states();
  for (VertexId y : s.keys)
    for (StateId qf : accepting)
      for (const Tuple& t : s.lists.at(y)) add(p.id(y, qf), t);

  while (!fifo.empty()) {
    auto [pv, idx] = fifo.front();
    fifo.pop_front();
    Tuple t = lists[pv][idx];  // copy: lists[pv] may grow below
    for (std::uint32_t e = p.in_offsets[pv]; e < p.in_offsets[pv + 1]; ++e)
      add(p.in_sources[e], t);
  }

  RestrictionTable out;
  out.key = key_var;
  out.tail = s.tail;
  out.cap = cap;
  for (VertexId x = 0; x < p.nv; ++x) {
    auto& list = lists[p.id(x, nfa.initial)];
    if (list.empty()) continue;
    out.keys.push_back(x);
    out.lists.emplace(x, std::move(list));
  }
  return out;
}

}  // namespace

RestrictionTable restrict_single_rpq(const RegexPtr& regex, bool inverted,
                                     VarId key_var, VarId tail_var,
                                     const OverlayGraph& g, std::size_t cap,
                                     SymbolScope& scope, Counters& counters) {
  RestrictionTable identity;
  identity.key = tail_var;
  identity.tail = {tail_var};
  identity.cap = cap;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    identity.keys.push_back(v);
    identity.lists.emplace(v, std::vector<Tuple>{{v}});
  }
  RestrictionTable out = propagate_core(regex, inverted, key_var, g, identity,
                                        cap, scope, counters);
  ++counters.base_restrictions;
  return out;
}

RestrictionTable propagate(const RegexPtr& regex, bool inverted, VarId key_var,
                           const OverlayGraph& g, const RestrictionTable& s,
                           std::size_t cap, SymbolScope& scope,
                           Counters& counters) {
  RestrictionTable out =
      propagate_core(regex, inverted, key_var, g, s, cap, scope, counters);
  ++counters.propagations;
  return out;
}

RestrictionTable compose(const RestrictionTable& a, const RestrictionTable& b,
                         std::size_t cap, Counters& counters) {
  if (a.key != b.key)
    throw std::invalid_argument("compose: tables have different key variables");
  if (a.cap != cap || b.cap != cap)
    throw std::invalid_argument("compose: cap mismatch");
  for (VarId va : a.tail)
    for (VarId vb : b.tail)
      if (va == vb)
        throw std::invalid_argument("compose: tail variable sets overlap");

  RestrictionTable out;
  out.key = a.key;
  out.tail = a.tail;
  out.tail.insert(out.tail.end(), b.tail.begin(), b.tail.end());
  out.cap = cap;

  for (VertexId x : a.keys) {
    auto itb = b.lists.find(x);
    if (itb == b.lists.end()) continue;
    const auto& la = a.lists.at(x);
    std::vector<Tuple> combined;
    for (const Tuple& ta : la) {
      for (const Tuple& tb : itb->second) {
        if (combined.size() >= cap) break;
        Tuple t = ta;
        t.insert(t.end(), tb.begin(), tb.end());
        combined.push_back(std::move(t));
      }
      if (combined.size() >= cap) break;
    }
    out.keys.push_back(x);
    out.lists.emplace(x, std::move(combined));
  }
  ++counters.compositions;
  return out;
}

}  // namespace crpq
