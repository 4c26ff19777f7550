#include "crpq/baseline.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_set>

#include "crpq/nfa.hpp"
#include "crpq/product.hpp"

namespace crpq {

MaterializedRpq materialize_rpq(const RegexPtr& regex, const LabeledGraph& g,
                                SymbolScope& scope, Counters* counters) {
  Nfa nfa = compile_nfa(regex, scope);
  OverlayGraph overlay(g);
  ProductGraph p = build_product(overlay, nfa, false, counters);

  MaterializedRpq out;
  const std::uint32_t npv = p.num_product_vertices();
  const std::uint32_t nv = p.nv;
  // epoch stamps avoid clearing the visited arrays per source
  std::vector<std::uint32_t> visited(npv, 0), hit(nv, 0);
  std::vector<std::uint32_t> queue;

  for (VertexId x = 0; x < nv; ++x) {
    const std::uint32_t epoch = x + 1;
    queue.assign(1, p.id(x, nfa.initial));
    visited[queue[0]] = epoch;
    std::size_t head = 0;
    while (head < queue.size()) {
      std::uint32_t pv = queue[head++];
      VertexId y = pv / p.nq;
      if (nfa.accepting[pv % p.nq] && hit[y] != epoch) {
        hit[y] = epoch;
        out.rows.push_back((static_cast<std::uint64_t>(x) << 32) | y);
      }
      for (std::uint32_t e = p.out_offsets[pv]; e < p.out_offsets[pv + 1];
           ++e) {
        std::uint32_t w = p.out_targets[e];
        if (visited[w] != epoch) {
          visited[w] = epoch;
          queue.push_back(w);
        }
      }
    }
  }
  return out;
}

namespace {

std::vector<MaterializedRpq> materialize_atoms(const Crpq& q,
                                               const LabeledGraph& g,
                                               Counters* counters) {
  SymbolScope scope(g.alphabet());
  std::vector<MaterializedRpq> out;
  for (const Atom& a : q.atoms) {
    MaterializedRpq m = materialize_rpq(a.regex, g, scope, counters);
    m.src_var = a.src;
    m.dst_var = a.dst;
    out.push_back(std::move(m));
  }
  return out;
}

// Keeps only rows of `rel` whose projection onto `key_vars` occurs in the
// same projection of `other`. Packed binary relations throughout.
void packed_semijoin(MaterializedRpq& rel, const MaterializedRpq& other,
                     const std::vector<VarId>& key_vars) {
  if (key_vars.empty()) {
    if (other.rows.empty()) rel.rows.clear();
    return;
  }
  auto project = [&](const MaterializedRpq& r,
                     std::uint64_t row) -> std::uint64_t {
    std::uint64_t key = 0;
    for (VarId v : key_vars) {
      std::uint32_t val = v == r.src_var ? static_cast<std::uint32_t>(row >> 32)
                                         : static_cast<std::uint32_t>(row);
      key = (key << 32) | val;
    }
    return key;
  };
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(other.rows.size() * 2);
  for (std::uint64_t row : other.rows) keys.insert(project(other, row));
  std::vector<std::uint64_t> kept;
  for (std::uint64_t row : rel.rows)
    if (keys.count(project(rel, row))) kept.push_back(row);
  rel.rows = std::move(kept);
}

std::vector<VarId> shared_with(const std::vector<VarId>& a,
                               const std::vector<VarId>& b) {
  std::vector<VarId> out;
  for (VarId v : a)
    if (std::find(b.begin(), b.end(), v) != b.end() &&
        std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  return out;
}

BindingRelation unpack(const MaterializedRpq& m) {
  BindingRelation r;
  r.schema = {m.src_var, m.dst_var};
  r.rows.reserve(m.rows.size());
  for (std::uint64_t row : m.rows)
    r.rows.push_back({static_cast<VertexId>(row >> 32),
                      static_cast<VertexId>(row & 0xffffffffu)});
  return r;
}

}  // namespace

BindingRelation oracle_eval(const Crpq& q, const LabeledGraph& g,
                            std::size_t guard) {
  std::vector<MaterializedRpq> atoms = materialize_atoms(q, g, nullptr);
  for (const auto& m : atoms)
    if (m.rows.size() > guard)
      throw OracleGuardExceeded("materialized RPQ exceeds " +
                                std::to_string(guard) + " rows");

  // Fold the natural join in atom order over explicit tuples.
  std::vector<VarId> schema;
  std::vector<Tuple> rows{{}};
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    const Atom& a = q.atoms[i];
    // self-loop atoms relate a vertex to itself
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (std::uint64_t row : atoms[i].rows) {
      VertexId x = static_cast<VertexId>(row >> 32);
      VertexId y = static_cast<VertexId>(row & 0xffffffffu);
      if (a.src == a.dst && x != y) continue;
      pairs.emplace_back(x, y);
    }

    auto pos_of = [&](VarId v) {
      auto it = std::find(schema.begin(), schema.end(), v);
      return it == schema.end() ? SIZE_MAX
                                : static_cast<std::size_t>(it - schema.begin());
    };
    std::size_t src_pos = pos_of(a.src), dst_pos = pos_of(a.dst);

    // index the atom pairs by their bound-in-schema endpoints
    std::map<Tuple, std::vector<std::pair<VertexId, VertexId>>> index;
    for (const auto& [x, y] : pairs) {
      Tuple key;
      if (src_pos != SIZE_MAX) key.push_back(x);
      if (dst_pos != SIZE_MAX && a.dst != a.src) key.push_back(y);
      index[key].push_back({x, y});
    }

    std::vector<VarId> new_schema = schema;
    bool add_src = src_pos == SIZE_MAX;
    bool add_dst = dst_pos == SIZE_MAX && a.dst != a.src;
    if (add_src) new_schema.push_back(a.src);
    if (add_dst) new_schema.push_back(a.dst);

    std::vector<Tuple> next;
    for (const Tuple& r : rows) {
      Tuple key;
      if (src_pos != SIZE_MAX) key.push_back(r[src_pos]);
      if (dst_pos != SIZE_MAX && a.dst != a.src) key.push_back(r[dst_pos]);
      auto it = index.find(key);
      if (it == index.end()) continue;
      for (const auto& [x, y] : it->second) {
        Tuple extended = r;
        if (add_src) extended.push_back(x);
        if (add_dst) extended.push_back(y);
        next.push_back(std::move(extended));
        if (next.size() > guard)
          throw OracleGuardExceeded("intermediate join exceeds " +
                                    std::to_string(guard) + " rows");
      }
    }
    schema = std::move(new_schema);
    rows = std::move(next);
  }

  BindingRelation out;
  out.schema = q.free;
  std::set<Tuple> dedup;
  for (const Tuple& r : rows) {
    Tuple projected;
    for (VarId v : q.free) {
      auto it = std::find(schema.begin(), schema.end(), v);
      projected.push_back(r[static_cast<std::size_t>(it - schema.begin())]);
    }
    dedup.insert(std::move(projected));
  }
  out.rows.assign(dedup.begin(), dedup.end());
  return out;
}

EvalReport baseline_eval(const Crpq& q, const LabeledGraph& g) {
  auto acyclic = check_acyclic(q);
  if (!acyclic.accepted)
    throw std::invalid_argument("baseline requires an acyclic query: " +
                                acyclic.reason);

  EvalReport report;
  report.schema = q.free;
  std::vector<MaterializedRpq> atoms =
      materialize_atoms(q, g, &report.counters);
  for (const auto& m : atoms)
    report.out_a = std::max<std::uint64_t>(report.out_a, m.rows.size());

  // Semijoin-reduce the packed relations along a join tree before
  // unpacking: keeps the generic join small even when OUT_a is huge.
  std::vector<std::vector<VarId>> schemas;
  for (const auto& m : atoms) schemas.push_back({m.src_var, m.dst_var});
  JoinTree tree = build_join_tree(schemas);
  for (std::size_t i : tree.removal_order) {
    std::vector<VarId> key = shared_with(schemas[i], schemas[tree.parent[i]]);
    packed_semijoin(atoms[tree.parent[i]], atoms[i], key);
  }
  for (auto it = tree.removal_order.rbegin(); it != tree.removal_order.rend();
       ++it) {
    std::vector<VarId> key = shared_with(schemas[*it],
                                         schemas[tree.parent[*it]]);
    packed_semijoin(atoms[*it], atoms[tree.parent[*it]], key);
  }

  std::vector<BindingRelation> relations;
  for (const auto& m : atoms) relations.push_back(unpack(m));
  BindingRelation joined = join_acyclic(std::move(relations), q.free);
  report.rows = std::move(joined.rows);
  return report;
}

}  // namespace crpq
