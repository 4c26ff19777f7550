#include "crpq/nfa.hpp"

#include <algorithm>
#include <set>

namespace crpq {

namespace {

// Thompson fragment machine with explicit epsilon edges; compacted later.
struct ThompsonNfa {
  struct Edge {
    StateId from;
    bool eps;
    Label label;
    StateId to;
  };
  std::uint32_t num_states = 0;
  std::vector<Edge> edges;

  StateId fresh() { return num_states++; }
  void add_eps(StateId a, StateId b) { edges.push_back({a, true, {}, b}); }
  void add(StateId a, Label l, StateId b) {
    edges.push_back({a, false, l, b});
  }
};

struct Frag {
  StateId start, accept;
};

Frag build(ThompsonNfa& m, const RegexPtr& ast, SymbolScope& scope) {
  switch (ast->kind) {
    case RegexKind::Epsilon: {
      StateId s = m.fresh(), a = m.fresh();
      m.add_eps(s, a);
      return {s, a};
    }
    case RegexKind::Symbol: {
      StateId s = m.fresh(), a = m.fresh();
      m.add(s, Label::make(scope.resolve(ast->symbol), ast->inverted), a);
      return {s, a};
    }
    case RegexKind::Alt: {
      Frag l = build(m, ast->left, scope);
      Frag r = build(m, ast->right, scope);
      StateId s = m.fresh(), a = m.fresh();
      m.add_eps(s, l.start);
      m.add_eps(s, r.start);
      m.add_eps(l.accept, a);
      m.add_eps(r.accept, a);
      return {s, a};
    }
    case RegexKind::Concat: {
      Frag l = build(m, ast->left, scope);
      Frag r = build(m, ast->right, scope);
      m.add_eps(l.accept, r.start);
      return {l.start, r.accept};
    }
    case RegexKind::Star: {
      Frag inner = build(m, ast->left, scope);
      StateId s = m.fresh(), a = m.fresh();
      m.add_eps(s, inner.start);
      m.add_eps(s, a);
      m.add_eps(inner.accept, inner.start);
      m.add_eps(inner.accept, a);
      return {s, a};
    }
  }
  throw std::logic_error("bad regex kind");
}

}  // namespace

Nfa compile_nfa(const RegexPtr& ast, SymbolScope& scope) {
  ThompsonNfa m;
  Frag f = build(m, ast, scope);

  // Epsilon closures by DFS per state.
  std::vector<std::vector<StateId>> eps_adj(m.num_states);
  for (const auto& e : m.edges)
    if (e.eps) eps_adj[e.from].push_back(e.to);

  std::vector<std::vector<StateId>> closure(m.num_states);
  std::vector<char> seen(m.num_states, 0);
  std::vector<StateId> stack;
  for (StateId q = 0; q < m.num_states; ++q) {
    std::fill(seen.begin(), seen.end(), 0);
    stack.assign(1, q);
    seen[q] = 1;
    while (!stack.empty()) {
      StateId u = stack.back();
      stack.pop_back();
      closure[q].push_back(u);
      for (StateId v : eps_adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }

  Nfa out;
  out.num_states = m.num_states;
  out.initial = f.start;
  out.accepting.assign(m.num_states, false);
  for (StateId q = 0; q < m.num_states; ++q)
    for (StateId c : closure[q])
      if (c == f.accept) out.accepting[q] = true;

  // q --l--> p whenever some state in closure(q) has the labeled edge.
  std::set<std::tuple<StateId, std::uint32_t, StateId>> dedup;
  for (StateId q = 0; q < m.num_states; ++q) {
    for (StateId c : closure[q]) {
      for (const auto& e : m.edges) {
        if (e.eps || e.from != c) continue;
        if (dedup.insert({q, e.label.raw, e.to}).second)
          out.transitions.push_back({q, e.label, e.to});
      }
    }
  }

  std::set<std::uint32_t> labels;
  for (const auto& t : out.transitions) {
    out.by_label[t.label.raw].emplace_back(t.from, t.to);
    labels.insert(t.label.raw);
  }
  for (std::uint32_t raw : labels) out.alphabet.push_back(Label{raw});
  return out;
}

}  // namespace crpq
