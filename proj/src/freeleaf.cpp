#include "crpq/freeleaf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace crpq {

bool debug_asserts_enabled() {
  static const bool enabled = [] {
    const char* v = std::getenv("CRPQ_DEBUG_ASSERT");
    return v != nullptr && v[0] == '1';
  }();
  return enabled;
}

namespace {

// Table keyed by `parent` covering the free variables in the subtree under
// `child`: base restriction at leaves, compose+propagate inside.
RestrictionTable subtree_table(const Crpq& q, const OrientedTree& tree,
                               VarId child, VarId parent, std::size_t cap,
                               const OverlayGraph& g, SymbolScope& scope,
                               Counters& counters) {
  const Atom& atom = q.atoms[tree.parent_atom[child]];
  bool inverted = tree.parent_inverted[child];
  if (tree.children[child].empty())
    return restrict_single_rpq(atom.regex, inverted, parent, child, g, cap,
                               scope, counters);

  RestrictionTable merged;
  bool first = true;
  for (VarId grandchild : tree.children[child]) {
    RestrictionTable t =
        subtree_table(q, tree, grandchild, child, cap, g, scope, counters);
    if (first) {
      merged = std::move(t);
      first = false;
    } else {
      merged = compose(merged, t, cap, counters);
    }
  }
  return propagate(atom.regex, inverted, parent, g, merged, cap, scope,
                   counters);
}

std::uint64_t ceil_log2(std::uint64_t x) {
  std::uint64_t bits = 0;
  while ((1ull << bits) < x) ++bits;
  return bits;
}

}  // namespace

PassResult run_pass(const Crpq& q, const OrientedTree& tree, std::size_t cap,
                    const OverlayGraph& g, SymbolScope& scope,
                    Counters& counters) {
  VarId root = tree.root;
  RestrictionTable table;
  bool first = true;
  for (VarId child : tree.children[root]) {
    RestrictionTable t =
        subtree_table(q, tree, child, root, cap, g, scope, counters);
    if (first) {
      table = std::move(t);
      first = false;
    } else {
      table = compose(table, t, cap, counters);
    }
  }

  // Map (root, tail...) onto the declared free order.
  std::vector<std::size_t> position(q.free.size());
  for (std::size_t i = 0; i < q.free.size(); ++i) {
    VarId v = q.free[i];
    if (v == root) {
      position[i] = 0;
      continue;
    }
    auto it = std::find(table.tail.begin(), table.tail.end(), v);
    if (it == table.tail.end())
      throw std::logic_error("pass table is missing a free variable");
    position[i] = 1 + static_cast<std::size_t>(it - table.tail.begin());
  }

  PassResult result;
  result.heavy = VertexSet(g.num_vertices());
  for (VertexId x : table.keys) {
    const auto& list = table.lists.at(x);
    if (list.size() >= cap) {
      result.heavy.insert(x);
      continue;
    }
    for (const Tuple& t : list) {
      Tuple row(q.free.size());
      for (std::size_t i = 0; i < q.free.size(); ++i)
        row[i] = position[i] == 0 ? x : t[position[i] - 1];
      result.light_rows.push_back(std::move(row));
    }
  }
  return result;
}

EvalReport eval_freeleaf(const Crpq& q, const OverlayGraph& g,
                         SymbolScope& scope) {
  const std::size_t ell = q.free.size();
  if (ell < 2)
    throw std::invalid_argument(
        "free-leaf evaluator needs >= 2 free variables");
  for (VarId v : q.free)
    if (q.var_degree(v) != 1)
      throw std::invalid_argument("free variable " + q.var_names[v] +
                                  " is not a leaf");

  std::vector<OrientedTree> trees;
  for (VarId w : q.free) trees.push_back(reroot(q, w));

  EvalReport report;
  report.schema = q.free;
  Counters& counters = report.counters;

  std::uint64_t guess = 1;
  for (;;) {
    const double exponent =
        (static_cast<double>(ell) - 1.0) / static_cast<double>(ell);
    const std::size_t delta = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(std::pow(static_cast<double>(guess), exponent) -
                         1e-9)));
    const std::size_t delta_prime = delta + 1;

    Crpq round_query = q;
    OverlayGraph round_overlay = g;
    RoundInfo round;
    round.guess = guess;
    round.delta = delta;
    std::set<Tuple> emitted;

    bool done = false;
    for (std::size_t i = 0; i < ell; ++i) {
      PassResult pass = run_pass(round_query, trees[i], delta_prime,
                                 round_overlay, scope, counters);
      round.heavy_sizes.push_back(pass.heavy.size());
      round.emitted_per_pass.push_back(pass.light_rows.size());
      for (Tuple& t : pass.light_rows) emitted.insert(std::move(t));

      if (i + 1 == ell) {
        done = pass.heavy.empty();
        break;
      }

      // Narrow this free variable to its heavy keys for later passes
      // (an empty heavy set legitimately kills the remaining passes: all
      // light rows for this variable were just emitted).
      VarId w = q.free[i];
      std::string fresh = scope.fresh();
      SymbolId fresh_id = scope.resolve(fresh);
      round_overlay.add_filter_selfloops(pass.heavy, fresh_id);
      for (Atom& atom : round_query.atoms) {
        if (atom.src == w) {
          atom.regex = concat_symbol(atom.regex, ConcatSide::Prefix, fresh);
          break;
        }
        if (atom.dst == w) {
          atom.regex = concat_symbol(atom.regex, ConcatSide::Suffix, fresh);
          break;
        }
      }
    }

    report.rounds.push_back(std::move(round));
    if (done) {
      report.rows.assign(emitted.begin(), emitted.end());
      break;
    }
    guess *= 2;
  }

  if (debug_asserts_enabled()) {
    std::uint64_t out = report.rows.size();
    std::uint64_t bound = ceil_log2(std::max<std::uint64_t>(out, 1)) + 1;
    if (report.rounds.size() > bound)
      throw std::logic_error("doubling loop exceeded its round bound");
  }
  return report;
}

}  // namespace crpq
