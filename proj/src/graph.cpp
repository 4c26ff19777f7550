#include "crpq/graph.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace crpq {

namespace {
std::uint64_t pair_key(VertexId src, VertexId dst) {
  return (static_cast<std::uint64_t>(src) << 32) | dst;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}
}  // namespace

VertexId LabeledGraph::intern_vertex(const std::string& name) {
  auto it = ids_.find(name);
  if (it != ids_.end()) return it->second;
  VertexId id = static_cast<VertexId>(names_.size());
  names_.push_back(name);
  ids_.emplace(name, id);
  return id;
}

VertexId LabeledGraph::vertex_id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw std::out_of_range("unknown vertex: " + name);
  return it->second;
}

bool LabeledGraph::add_edge(VertexId src, Label label, VertexId dst) {
  if (src >= names_.size() || dst >= names_.size())
    throw std::out_of_range("edge endpoint out of range");
  auto& labels = edge_index_[pair_key(src, dst)];
  if (std::find(labels.begin(), labels.end(), label.raw) != labels.end())
    return false;
  labels.push_back(label.raw);
  edges_.push_back({src, label, dst});
  return true;
}

bool LabeledGraph::add_edge(const std::string& src, const std::string& label,
                            const std::string& dst) {
  VertexId s = intern_vertex(src);
  VertexId d = intern_vertex(dst);
  Label l = Label::make(alphabet_.intern(label));
  return add_edge(s, l, d);
}

LabeledGraph load_graph(std::istream& in) {
  // Parse into raw triples first so unused labels can be pruned afterwards
  // (the alphabet should contain only symbols that actually appear).
  std::vector<std::array<std::string, 3>> triples;
  std::vector<std::string> declared_vertices;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto cols = split_tabs(line);
      if (cols[0] == "#vertex") {
        if (cols.size() != 2 || cols[1].empty())
          throw GraphParseError(line_no, "expected `#vertex<TAB>name`");
        declared_vertices.push_back(cols[1]);
      }
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 3)
      throw GraphParseError(line_no, "expected 3 tab-separated columns, got " +
                                         std::to_string(cols.size()));
    if (cols[0].empty() || cols[1].empty() || cols[2].empty())
      throw GraphParseError(line_no, "empty field");
    triples.push_back({cols[0], cols[1], cols[2]});
  }

  LabeledGraph g;
  for (const auto& t : triples) g.add_edge(t[0], t[1], t[2]);
  for (const auto& v : declared_vertices) g.intern_vertex(v);
  return g;
}

void write_graph(const LabeledGraph& g, std::ostream& out) {
  std::vector<bool> isolated(g.num_vertices(), true);
  for (const Edge& e : g.edges()) {
    isolated[e.src] = false;
    isolated[e.dst] = false;
    out << g.vertex_name(e.src) << '\t' << g.alphabet().name(e.label.sym())
        << '\t' << g.vertex_name(e.dst) << '\n';
  }
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (isolated[v]) out << "#vertex\t" << g.vertex_name(v) << '\n';
}

LabeledGraph transpose(const LabeledGraph& g) {
  LabeledGraph t;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    t.intern_vertex(g.vertex_name(v));
  for (std::size_t i = 0; i < g.alphabet().size(); ++i)
    t.alphabet().intern(g.alphabet().name(static_cast<SymbolId>(i)));
  for (const Edge& e : g.edges())
    t.add_edge(e.dst, e.label.inverse(), e.src);
  return t;
}

void OverlayGraph::add_filter_selfloops(const VertexSet& s, SymbolId fresh) {
  Label l = Label::make(fresh);
  for (VertexId v : s.to_vector()) extra.push_back({v, l, v});
}

LabeledGraph add_filter_selfloops(const LabeledGraph& g, const VertexSet& s,
                                  const std::string& fresh) {
  if (g.alphabet().contains(fresh))
    throw std::invalid_argument("filter symbol '" + fresh +
                                "' already in the alphabet");
  LabeledGraph out = g;
  Label l = Label::make(out.alphabet().intern(fresh));
  for (VertexId v : s.to_vector()) out.add_edge(v, l, v);
  return out;
}

LabeledGraph gen_star_instance(std::size_t n) {
  if (n < 1) throw std::invalid_argument("star instance needs n >= 1");
  LabeledGraph g;
  auto name = [](const char* prefix, std::size_t i) {
    return std::string(prefix) + "_" + std::to_string(i);
  };
  for (std::size_t i = 0; i <= n; ++i) g.intern_vertex(name("u", i));
  g.intern_vertex("v_0");
  g.intern_vertex("v");
  for (std::size_t i = 1; i <= n; ++i) g.intern_vertex(name("w", i));
  g.intern_vertex("z_1");
  g.intern_vertex("z_2");

  for (std::size_t i = 1; i <= n; ++i) {
    g.add_edge(name("w", i), "a", "v");
    g.add_edge("v", "a", name("u", i));
  }
  g.add_edge("u_0", "a", "v_0");
  g.add_edge("v_0", "a", "w_1");
  g.add_edge("z_1", "b", "w_1");
  g.add_edge("z_2", "c", "w_1");
  return g;
}

std::string star_query_text() {
  return "free: X1 X2 X3\n"
         "atom: X1 a*aa X\n"
         "atom: X2 b X\n"
         "atom: X3 c X\n";
}

LabeledGraph gen_random(std::size_t nv, std::size_t ne,
                        std::size_t alphabet_size, std::uint64_t seed) {
  if (alphabet_size < 1) throw std::invalid_argument("alphabet_size >= 1");
  if (alphabet_size > 26) throw std::invalid_argument("alphabet_size <= 26");
  LabeledGraph g;
  for (std::size_t i = 0; i < nv; ++i)
    g.intern_vertex("v" + std::to_string(i));
  if (nv == 0) return g;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_v(0, nv - 1);
  std::uniform_int_distribution<std::size_t> pick_l(0, alphabet_size - 1);
  for (std::size_t i = 0; i < ne; ++i) {
    VertexId src = static_cast<VertexId>(pick_v(rng));
    VertexId dst = static_cast<VertexId>(pick_v(rng));
    std::string label(1, static_cast<char>('a' + pick_l(rng)));
    g.add_edge(src, Label::make(g.alphabet().intern(label)), dst);
  }
  return g;
}

}  // namespace crpq
