#include "crpq/query.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace crpq {

namespace {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // keep the smaller id as root
    parent[b] = a;
    return true;
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::vector<VarId> Crpq::vars() const {
  std::set<VarId> s;
  for (const Atom& a : atoms) {
    s.insert(a.src);
    s.insert(a.dst);
  }
  return {s.begin(), s.end()};
}

std::vector<VarId> Crpq::bound() const {
  std::vector<VarId> out;
  for (VarId v : vars())
    if (!is_free(v)) out.push_back(v);
  return out;
}

bool Crpq::is_free(VarId v) const {
  return std::find(free.begin(), free.end(), v) != free.end();
}

std::size_t Crpq::var_degree(VarId v) const {
  std::size_t d = 0;
  for (const Atom& a : atoms) {
    if (a.src == v) ++d;
    if (a.dst == v) ++d;
  }
  return d;
}

Crpq Crpq::subquery(const std::vector<std::size_t>& atom_indices) const {
  Crpq sub;
  sub.var_names = var_names;
  std::set<VarId> used;
  for (std::size_t i : atom_indices) {
    sub.atoms.push_back(atoms[i]);
    used.insert(atoms[i].src);
    used.insert(atoms[i].dst);
  }
  for (VarId v : free)
    if (used.count(v)) sub.free.push_back(v);
  return sub;
}

QueryMultigraph query_multigraph(const Crpq& q) {
  QueryMultigraph g;
  g.num_vars = q.var_names.size();
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    VarId a = q.atoms[i].src, b = q.atoms[i].dst;
    g.edges.emplace_back(std::min(a, b), std::max(a, b), i);
  }
  return g;
}

Crpq parse_query(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  std::optional<std::size_t> free_line;
  std::vector<std::string> free_names;
  // (line, src name, regex text, dst name)
  std::vector<std::tuple<std::size_t, std::string, std::string, std::string>>
      raw_atoms;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // strip comments: '#' at start of line or preceded by whitespace
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '#' &&
          (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1])))) {
        line.resize(i);
        break;
      }
    }
    auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "free:") {
      if (free_line)
        throw QueryParseError(line_no, "duplicate `free:` line");
      free_line = line_no;
      free_names.assign(tokens.begin() + 1, tokens.end());
    } else if (tokens[0] == "atom:") {
      if (tokens.size() < 4)
        throw QueryParseError(line_no,
                              "expected `atom: <src> <regex> <dst>`");
      std::string regex_text;
      for (std::size_t i = 2; i + 1 < tokens.size(); ++i) {
        if (!regex_text.empty()) regex_text += ' ';
        regex_text += tokens[i];
      }
      if (regex_text.size() >= 2 && regex_text.front() == '"' &&
          regex_text.back() == '"')
        regex_text = regex_text.substr(1, regex_text.size() - 2);
      raw_atoms.emplace_back(line_no, tokens[1], regex_text, tokens.back());
    } else {
      throw QueryParseError(line_no, "expected `free:` or `atom:` line");
    }
  }
  if (!free_line) throw QueryParseError(line_no, "missing `free:` line");
  if (raw_atoms.empty()) throw QueryParseError(line_no, "query has no atoms");

  Crpq q;
  std::unordered_map<std::string, VarId> var_ids;
  auto intern_var = [&](const std::string& name) {
    auto it = var_ids.find(name);
    if (it != var_ids.end()) return it->second;
    VarId id = static_cast<VarId>(q.var_names.size());
    q.var_names.push_back(name);
    var_ids.emplace(name, id);
    return id;
  };

  for (const auto& [ln, src, regex_text, dst] : raw_atoms) {
    RegexPtr regex;
    try {
      regex = parse_regex(regex_text);
    } catch (const RegexParseError& e) {
      throw QueryParseError(ln, e.what());
    }
    q.atoms.push_back({intern_var(src), intern_var(dst), std::move(regex)});
  }

  std::set<std::string> seen_free;
  for (const std::string& name : free_names) {
    auto it = var_ids.find(name);
    if (it == var_ids.end())
      throw QueryParseError(*free_line, "free variable `" + name +
                                            "` does not occur in any atom");
    if (!seen_free.insert(name).second)
      throw QueryParseError(*free_line, "duplicate free variable `" + name +
                                            "`");
    q.free.push_back(it->second);
  }
  return q;
}

AcyclicityReport check_acyclic(const Crpq& q) {
  for (std::size_t i = 0; i < q.atoms.size(); ++i)
    if (q.atoms[i].src == q.atoms[i].dst)
      return {false, "atom " + std::to_string(i + 1) + " is a self-loop on " +
                         q.var_names[q.atoms[i].src]};

  std::map<std::pair<VarId, VarId>, std::size_t> seen_pair;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    auto key = std::minmax(q.atoms[i].src, q.atoms[i].dst);
    auto [it, inserted] = seen_pair.emplace(key, i);
    if (!inserted)
      return {false, "atoms " + std::to_string(it->second + 1) + " and " +
                         std::to_string(i + 1) + " are parallel edges on {" +
                         q.var_names[key.first] + ", " +
                         q.var_names[key.second] + "}"};
  }

  Dsu dsu(q.var_names.size());
  for (std::size_t i = 0; i < q.atoms.size(); ++i)
    if (!dsu.unite(q.atoms[i].src, q.atoms[i].dst))
      return {false, "atom " + std::to_string(i + 1) + " closes a cycle on {" +
                         q.var_names[q.atoms[i].src] + ", " +
                         q.var_names[q.atoms[i].dst] + "}"};
  return {true, ""};
}

std::vector<Crpq> connected_components(const Crpq& q) {
  Dsu dsu(q.var_names.size());
  for (const Atom& a : q.atoms) dsu.unite(a.src, a.dst);
  // group atoms by root, ordered by first atom index
  std::vector<std::vector<std::size_t>> groups;
  std::unordered_map<std::size_t, std::size_t> root_to_group;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    std::size_t r = dsu.find(q.atoms[i].src);
    auto it = root_to_group.find(r);
    if (it == root_to_group.end()) {
      root_to_group.emplace(r, groups.size());
      groups.push_back({i});
    } else {
      groups[it->second].push_back(i);
    }
  }
  std::vector<Crpq> out;
  for (const auto& g : groups) out.push_back(q.subquery(g));
  return out;
}

std::vector<Crpq> bound_connected_components(const Crpq& q) {
  // Base classes: atoms glued through shared bound variables.
  Dsu dsu(q.atoms.size());
  std::unordered_map<VarId, std::size_t> first_atom_of_bound;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    for (VarId v : {q.atoms[i].src, q.atoms[i].dst}) {
      if (q.is_free(v)) continue;
      auto [it, inserted] = first_atom_of_bound.emplace(v, i);
      if (!inserted) dsu.unite(it->second, i);
    }
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> classes;
  std::vector<std::size_t> class_order;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    std::size_t r = dsu.find(i);
    if (classes.find(r) == classes.end()) class_order.push_back(r);
    classes[r].push_back(i);
  }

  // Star pieces that touch only one free variable belong to that variable's
  // component: merge classes with the same singleton free set.
  std::unordered_map<VarId, std::size_t> singleton_owner;  // var -> out index
  std::vector<std::vector<std::size_t>> merged;
  for (std::size_t r : class_order) {
    const auto& atoms = classes[r];
    std::set<VarId> frees;
    for (std::size_t i : atoms)
      for (VarId v : {q.atoms[i].src, q.atoms[i].dst})
        if (q.is_free(v)) frees.insert(v);
    if (frees.size() == 1) {
      VarId f = *frees.begin();
      auto [it, inserted] = singleton_owner.emplace(f, merged.size());
      if (!inserted) {
        auto& dst = merged[it->second];
        dst.insert(dst.end(), atoms.begin(), atoms.end());
        continue;
      }
    }
    merged.push_back(atoms);
  }

  std::vector<Crpq> out;
  for (auto& g : merged) {
    std::sort(g.begin(), g.end());
    out.push_back(q.subquery(g));
  }
  return out;
}

bool is_trivial(const Crpq& q) {
  for (const Crpq& c : connected_components(q))
    if (c.free.size() > 1) return false;
  return true;
}

Crpq k_expansion(const Crpq& q, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k-expansion needs k >= 1");
  Crpq out;
  out.var_names = q.var_names;
  out.free = q.free;
  RegexPtr s = RegexNode::sym("s");
  std::size_t fresh = 0;
  for (const Atom& a : q.atoms) {
    VarId prev = a.src;
    for (std::size_t j = 1; j < k; ++j) {
      VarId z = static_cast<VarId>(out.var_names.size());
      out.var_names.push_back("$e" + std::to_string(fresh++));
      out.atoms.push_back({prev, z, s});
      prev = z;
    }
    out.atoms.push_back({prev, a.dst, s});
  }
  return out;
}

OrientedTree reroot(const Crpq& q, VarId root) {
  if (root >= q.var_names.size())
    throw std::out_of_range("reroot: unknown variable id");
  bool root_used = false;
  std::vector<std::vector<std::pair<std::size_t, VarId>>> adj(
      q.var_names.size());
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    adj[q.atoms[i].src].emplace_back(i, q.atoms[i].dst);
    adj[q.atoms[i].dst].emplace_back(i, q.atoms[i].src);
    root_used |= q.atoms[i].src == root || q.atoms[i].dst == root;
  }
  if (!root_used) throw std::out_of_range("reroot: variable not in query");

  OrientedTree t;
  t.root = root;
  std::size_t n = q.var_names.size();
  t.parent.assign(n, kNoVertex);
  t.parent_atom.assign(n, SIZE_MAX);
  t.parent_inverted.assign(n, false);
  t.children.assign(n, {});

  std::vector<bool> visited(n, false);
  std::deque<VarId> fifo{root};
  visited[root] = true;
  while (!fifo.empty()) {
    VarId u = fifo.front();
    fifo.pop_front();
    t.order.push_back(u);
    for (const auto& [atom_idx, w] : adj[u]) {
      if (visited[w]) continue;
      visited[w] = true;
      t.parent[w] = u;
      t.parent_atom[w] = atom_idx;
      t.parent_inverted[w] = q.atoms[atom_idx].src == w;
      t.children[u].push_back(w);
      fifo.push_back(w);
    }
  }
  return t;
}

}  // namespace crpq
