#include "crpq/planner.hpp"

#include <algorithm>

#include "crpq/nfa.hpp"
#include "crpq/product.hpp"

namespace crpq {

VertexSet linear_rpq_sources(const RegexPtr& regex, bool inverted,
                             const OverlayGraph& g, SymbolScope& scope,
                             Counters& counters) {
  RegexPtr effective = inverted ? invert_regex(regex) : regex;
  Nfa nfa = compile_nfa(effective, scope);
  ProductGraph p = build_product(g, nfa, inverted, &counters);

  std::vector<bool> visited(p.num_product_vertices(), false);
  std::vector<std::uint32_t> queue;
  for (VertexId v = 0; v < p.nv; ++v)
    for (StateId q = 0; q < p.nq; ++q)
      if (nfa.accepting[q]) {
        std::uint32_t pv = p.id(v, q);
        if (!visited[pv]) {
          visited[pv] = true;
          queue.push_back(pv);
        }
      }
  std::size_t head = 0;
  while (head < queue.size()) {
    std::uint32_t pv = queue[head++];
    for (std::uint32_t e = p.in_offsets[pv]; e < p.in_offsets[pv + 1]; ++e) {
      std::uint32_t u = p.in_sources[e];
      if (!visited[u]) {
        visited[u] = true;
        queue.push_back(u);
      }
    }
  }

  VertexSet out(p.nv);
  for (VertexId v = 0; v < p.nv; ++v)
    if (visited[p.id(v, nfa.initial)]) out.insert(v);
  return out;
}

namespace {

// Attaches a vertex filter for variable `var` to the first atom touching it:
// self-loops over a fresh symbol, concatenated onto the matching regex end.
void merge_filter(Crpq& q, OverlayGraph& overlay, VarId var,
                  const VertexSet& filter, SymbolScope& scope) {
  std::string fresh = scope.fresh();
  overlay.add_filter_selfloops(filter, scope.resolve(fresh));
  for (Atom& atom : q.atoms) {
    if (atom.src == var) {
      atom.regex = concat_symbol(atom.regex, ConcatSide::Prefix, fresh);
      return;
    }
    if (atom.dst == var) {
      atom.regex = concat_symbol(atom.regex, ConcatSide::Suffix, fresh);
      return;
    }
  }
  throw std::logic_error("filter variable not present in any atom");
}

}  // namespace

BindingRelation eval_single_free(const Crpq& q, const OverlayGraph& g,
                                 SymbolScope& scope, Counters& counters) {
  if (q.free.size() > 1)
    throw std::invalid_argument("eval_single_free: more than one free variable");

  Crpq work = q;
  OverlayGraph overlay = g;
  std::optional<VertexSet> candidate;
  std::optional<VarId> result_var;

  while (!work.atoms.empty()) {
    // smallest-id leaf variable that is not the free variable
    VarId leaf = kNoVertex;
    for (VarId v : work.vars()) {
      if (work.var_degree(v) == 1 && !work.is_free(v)) {
        leaf = v;
        break;
      }
    }
    if (leaf == kNoVertex)
      throw std::logic_error("no eliminable leaf (query not a tree?)");

    std::size_t atom_idx = SIZE_MAX;
    for (std::size_t i = 0; i < work.atoms.size(); ++i)
      if (work.atoms[i].src == leaf || work.atoms[i].dst == leaf) {
        atom_idx = i;
        break;
      }
    Atom atom = work.atoms[atom_idx];
    VarId other = atom.src == leaf ? atom.dst : atom.src;
    bool inverted = atom.src == leaf;  // orient the relation other -> leaf
    VertexSet sources =
        linear_rpq_sources(atom.regex, inverted, overlay, scope, counters);

    work.atoms.erase(work.atoms.begin() + atom_idx);
    bool other_remains = false;
    for (const Atom& a : work.atoms)
      other_remains |= a.src == other || a.dst == other;
    if (other_remains) {
      merge_filter(work, overlay, other, sources, scope);
    } else {
      if (!candidate) {
        candidate = std::move(sources);
      } else {
        VertexSet merged(overlay.num_vertices());
        for (VertexId v : candidate->to_vector())
          if (sources.contains(v)) merged.insert(v);
        candidate = std::move(merged);
      }
      result_var = other;
    }
  }

  BindingRelation out;
  if (q.free.empty()) {
    if (candidate && !candidate->empty()) out.rows.push_back({});
    return out;
  }
  out.schema = {q.free[0]};
  if (candidate && (!result_var || *result_var == q.free[0]))
    for (VertexId v : candidate->to_vector()) out.rows.push_back({v});
  return out;
}

VariableFilters compute_variable_filters(const Crpq& q, const LabeledGraph& g,
                                         SymbolScope& scope,
                                         Counters& counters) {
  VariableFilters out;
  std::vector<Crpq> components = connected_components(q);

  for (const Crpq& c : components) {
    Crpq guard = c;
    guard.free.clear();
    OverlayGraph overlay(g);
    BindingRelation sat = eval_single_free(guard, overlay, scope, counters);
    if (sat.rows.empty()) {
      out.satisfiable = false;
      break;
    }
  }

  for (VarId x : q.free) {
    if (!out.satisfiable) {
      out.by_var.emplace(x, VertexSet(g.num_vertices()));
      continue;
    }
    for (const Crpq& c : components) {
      bool has_x = false;
      for (const Atom& a : c.atoms) has_x |= a.src == x || a.dst == x;
      if (!has_x) continue;
      Crpq qx = c;
      qx.free = {x};
      OverlayGraph overlay(g);
      BindingRelation values = eval_single_free(qx, overlay, scope, counters);
      VertexSet filter(g.num_vertices());
      for (const Tuple& row : values.rows) filter.insert(row[0]);
      out.by_var.emplace(x, std::move(filter));
      break;
    }
  }
  return out;
}

FreeLeafForm to_free_leaf(const Crpq& component,
                          const VariableFilters& filters,
                          const LabeledGraph& g, SymbolScope& scope,
                          Counters& counters) {
  FreeLeafForm form{component, OverlayGraph(g)};
  Crpq& work = form.query;
  OverlayGraph& overlay = form.overlay;

  for (VarId x : work.free)
    merge_filter(work, overlay, x, filters.by_var.at(x), scope);

  for (;;) {
    VarId leaf = kNoVertex;
    for (VarId v : work.vars())
      if (work.var_degree(v) == 1 && !work.is_free(v)) {
        leaf = v;
        break;
      }
    if (leaf == kNoVertex) break;

    std::size_t atom_idx = SIZE_MAX;
    for (std::size_t i = 0; i < work.atoms.size(); ++i)
      if (work.atoms[i].src == leaf || work.atoms[i].dst == leaf) {
        atom_idx = i;
        break;
      }
    Atom atom = work.atoms[atom_idx];
    VarId other = atom.src == leaf ? atom.dst : atom.src;
    bool inverted = atom.src == leaf;
    VertexSet sources =
        linear_rpq_sources(atom.regex, inverted, overlay, scope, counters);
    work.atoms.erase(work.atoms.begin() + atom_idx);
    merge_filter(work, overlay, other, sources, scope);
  }
  return form;
}

BindingRelation yannakakis_join(std::vector<BindingRelation> relations,
                                const std::vector<VarId>& out_vars) {
  return join_acyclic(std::move(relations), out_vars);
}

EvalReport evaluate(const Crpq& q, const LabeledGraph& g, Engine engine) {
  if (engine != Engine::Oracle) {
    auto acyclic = check_acyclic(q);
    if (!acyclic.accepted) throw CyclicQueryError(acyclic.reason);
  }
  if (engine == Engine::Baseline) return baseline_eval(q, g);
  if (engine == Engine::Oracle) {
    BindingRelation r = oracle_eval(q, g);
    EvalReport report;
    report.schema = q.free;
    report.rows = std::move(r.rows);
    return report;
  }

  EvalReport report;
  report.schema = q.free;
  SymbolScope scope(g.alphabet());
  Counters& counters = report.counters;

  VariableFilters filters = compute_variable_filters(q, g, scope, counters);
  if (!filters.satisfiable) return report;

  std::vector<BindingRelation> component_results;
  for (const Crpq& component : bound_connected_components(q)) {
    if (component.free.empty()) continue;  // covered by the guard check
    if (component.free.size() == 1) {
      BindingRelation r;
      VarId x = component.free[0];
      r.schema = {x};
      for (VertexId v : filters.by_var.at(x).to_vector()) r.rows.push_back({v});
      component_results.push_back(std::move(r));
      continue;
    }
    FreeLeafForm form = to_free_leaf(component, filters, g, scope, counters);
    EvalReport sub = eval_freeleaf(form.query, form.overlay, scope);
    counters.product_edges += sub.counters.product_edges;
    counters.worklist_pushes += sub.counters.worklist_pushes;
    counters.base_restrictions += sub.counters.base_restrictions;
    counters.compositions += sub.counters.compositions;
    counters.propagations += sub.counters.propagations;
    report.rounds.insert(report.rounds.end(), sub.rounds.begin(),
                         sub.rounds.end());
    BindingRelation r;
    r.schema = sub.schema;
    r.rows = std::move(sub.rows);
    component_results.push_back(std::move(r));
  }

  BindingRelation joined = yannakakis_join(std::move(component_results), q.free);
  report.rows = std::move(joined.rows);
  return report;
}

}  // namespace crpq
