#include "crpq/relation.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace crpq {

void BindingRelation::normalize() {
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

namespace {

std::vector<VarId> shared_vars(const std::vector<VarId>& a,
                               const std::vector<VarId>& b) {
  std::vector<VarId> out;
  for (VarId v : a)
    if (std::find(b.begin(), b.end(), v) != b.end() &&
        std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  return out;
}

Tuple project_row(const Tuple& row, const std::vector<VarId>& schema,
                  const std::vector<VarId>& vars) {
  Tuple out;
  out.reserve(vars.size());
  for (VarId v : vars) {
    auto it = std::find(schema.begin(), schema.end(), v);
    out.push_back(row[static_cast<std::size_t>(it - schema.begin())]);
  }
  return out;
}

void semijoin(BindingRelation& target, const BindingRelation& with) {
  std::vector<VarId> key = shared_vars(target.schema, with.schema);
  if (key.empty()) {
    if (with.rows.empty()) target.rows.clear();
    return;
  }
  std::set<Tuple> keys;
  for (const Tuple& r : with.rows)
    keys.insert(project_row(r, with.schema, key));
  std::vector<Tuple> kept;
  for (Tuple& r : target.rows)
    if (keys.count(project_row(r, target.schema, key)))
      kept.push_back(std::move(r));
  target.rows = std::move(kept);
}

// target := project(target x with, keep); keep must cover the join key.
void join_into(BindingRelation& target, const BindingRelation& with,
               const std::vector<VarId>& keep) {
  std::vector<VarId> key = shared_vars(target.schema, with.schema);
  std::map<Tuple, std::vector<const Tuple*>> index;
  for (const Tuple& r : with.rows)
    index[project_row(r, with.schema, key)].push_back(&r);

  std::vector<VarId> combined_schema = target.schema;
  for (VarId v : with.schema)
    if (std::find(combined_schema.begin(), combined_schema.end(), v) ==
        combined_schema.end())
      combined_schema.push_back(v);
  std::vector<VarId> kept_vars;
  for (VarId v : combined_schema)
    if (std::find(keep.begin(), keep.end(), v) != keep.end())
      kept_vars.push_back(v);

  BindingRelation out;
  out.schema = kept_vars;
  for (const Tuple& r : target.rows) {
    auto it = index.find(project_row(r, target.schema, key));
    if (it == index.end()) continue;
    for (const Tuple* w : it->second) {
      Tuple combined = r;
      for (std::size_t i = 0; i < with.schema.size(); ++i) {
        if (std::find(target.schema.begin(), target.schema.end(),
                      with.schema[i]) == target.schema.end())
          combined.push_back((*w)[i]);
      }
      out.rows.push_back(project_row(combined, combined_schema, kept_vars));
    }
  }
  out.normalize();
  target = std::move(out);
}

}  // namespace

JoinTree build_join_tree(const std::vector<std::vector<VarId>>& schemas) {
  const std::size_t n = schemas.size();
  JoinTree tree;
  tree.parent.assign(n, SIZE_MAX);
  std::vector<bool> removed(n, false);
  std::size_t remaining = n;

  while (remaining > 1) {
    bool progressed = false;
    for (std::size_t i = 0; i < n && remaining > 1; ++i) {
      if (removed[i]) continue;
      // vars of i that also occur in some other live relation
      std::vector<VarId> shared;
      for (VarId v : schemas[i]) {
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i || removed[j]) continue;
          if (std::find(schemas[j].begin(), schemas[j].end(), v) !=
              schemas[j].end()) {
            shared.push_back(v);
            break;
          }
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || removed[j]) continue;
        bool witness = true;
        for (VarId v : shared)
          witness &= std::find(schemas[j].begin(), schemas[j].end(), v) !=
                     schemas[j].end();
        if (witness) {
          tree.parent[i] = j;
          tree.removal_order.push_back(i);
          removed[i] = true;
          --remaining;
          progressed = true;
          break;
        }
      }
    }
    if (!progressed)
      throw std::invalid_argument("schema hypergraph is not alpha-acyclic");
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!removed[i]) tree.root = i;
  return tree;
}

bool is_alpha_acyclic(const std::vector<std::vector<VarId>>& schemas) {
  if (schemas.empty()) return true;
  try {
    build_join_tree(schemas);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

BindingRelation join_acyclic(std::vector<BindingRelation> relations,
                             const std::vector<VarId>& out_vars) {
  if (relations.empty()) {
    BindingRelation r;
    r.rows.push_back({});
    r.schema = out_vars;  // must be empty for a well-formed call
    return r;
  }
  for (BindingRelation& r : relations) r.normalize();

  std::vector<std::vector<VarId>> schemas;
  for (const BindingRelation& r : relations) schemas.push_back(r.schema);
  JoinTree tree = build_join_tree(schemas);

  // Semijoin sweep: bottom-up (reduce parents by children), then top-down.
  for (std::size_t i : tree.removal_order)
    semijoin(relations[tree.parent[i]], relations[i]);
  for (auto it = tree.removal_order.rbegin(); it != tree.removal_order.rend();
       ++it)
    semijoin(relations[*it], relations[tree.parent[*it]]);

  // Bottom-up join with early projection: besides the output variables,
  // keep only variables still needed as join keys higher up.
  std::vector<bool> merged(relations.size(), false);
  for (std::size_t i : tree.removal_order) {
    std::size_t parent = tree.parent[i];
    merged[i] = true;
    std::vector<VarId> keep = out_vars;
    for (std::size_t j = 0; j < relations.size(); ++j) {
      if (merged[j] || j == parent) continue;
      for (VarId v : relations[j].schema)
        if (std::find(keep.begin(), keep.end(), v) == keep.end())
          keep.push_back(v);
    }
    join_into(relations[parent], relations[i], keep);
  }

  BindingRelation& root = relations[tree.root];
  BindingRelation out;
  out.schema = out_vars;
  for (const Tuple& r : root.rows)
    out.rows.push_back(project_row(r, root.schema, out_vars));
  out.normalize();
  return out;
}

}  // namespace crpq
