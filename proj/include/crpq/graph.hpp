#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "crpq/base.hpp"

namespace crpq {

struct Edge {
  VertexId src;
  Label label;
  VertexId dst;
};

struct GraphParseError : std::runtime_error {
  std::size_t line;
  GraphParseError(std::size_t line_no, const std::string& what)
      : std::runtime_error("graph parse error at line " +
                           std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

/// Edge-labeled graph with dense vertex ids and an external name table.
/// Edges form a set: duplicate (src, label, dst) triples are collapsed.
class LabeledGraph {
 public:
  VertexId intern_vertex(const std::string& name);
  const std::string& vertex_name(VertexId v) const { return names_.at(v); }
  VertexId vertex_id(const std::string& name) const;
  bool has_vertex(const std::string& name) const {
    return ids_.count(name) != 0;
  }

  // Returns false if the edge was already present.
  bool add_edge(VertexId src, Label label, VertexId dst);
  bool add_edge(const std::string& src, const std::string& label,
                const std::string& dst);

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t size() const { return num_vertices() + num_edges(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const SymbolTable& alphabet() const { return alphabet_; }
  SymbolTable& alphabet() { return alphabet_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VertexId> ids_;
  std::vector<Edge> edges_;
  // dedup index: (src, dst) -> label raws already present on that pair
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> edge_index_;
  SymbolTable alphabet_;
};

/// Parses the TSV format: `src<TAB>label<TAB>dst` per line, optional
/// `#vertex<TAB>name` declarations for isolated vertices, other `#` lines
/// are comments. Labels never used by an edge are pruned from the alphabet.
LabeledGraph load_graph(std::istream& in);

void write_graph(const LabeledGraph& g, std::ostream& out);

/// Transpose: (u, sigma, v) becomes (v, sigma^-1, u); vertices unchanged.
LabeledGraph transpose(const LabeledGraph& g);

/// Set of vertex ids; iteration is in ascending id order.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe, false) {}

  void insert(VertexId v) {
    if (v >= bits_.size()) bits_.resize(v + 1, false);
    if (!bits_[v]) {
      bits_[v] = true;
      ++count_;
    }
  }
  bool contains(VertexId v) const { return v < bits_.size() && bits_[v]; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::vector<VertexId> to_vector() const {
    std::vector<VertexId> out;
    out.reserve(count_);
    for (VertexId v = 0; v < bits_.size(); ++v)
      if (bits_[v]) out.push_back(v);
    return out;
  }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

/// Cheap layered view over a shared base graph: extra edges (typically
/// fresh-symbol self-loops) stack on top without copying the base.
struct OverlayGraph {
  const LabeledGraph* base = nullptr;
  std::vector<Edge> extra;

  explicit OverlayGraph(const LabeledGraph& g) : base(&g) {}

  std::size_t num_vertices() const { return base->num_vertices(); }
  std::size_t num_edges() const { return base->num_edges() + extra.size(); }
  std::size_t size() const { return num_vertices() + num_edges(); }

  template <typename F>
  void for_each_edge(F&& f) const {
    for (const Edge& e : base->edges()) f(e);
    for (const Edge& e : extra) f(e);
  }

  // Adds (v, fresh, v) for every v in s. The symbol id must be fresh, i.e.
  // absent from the base alphabet and from earlier overlay layers.
  void add_filter_selfloops(const VertexSet& s, SymbolId fresh);
};

/// Standalone filter augmentation (copying form of the overlay operation).
LabeledGraph add_filter_selfloops(const LabeledGraph& g, const VertexSet& s,
                                  const std::string& fresh);

/// The hard benchmark family: an a-labeled double star around a hub plus a
/// two-edge tail and one b- and one c-edge, |V| = 2n+5, |E| = 2n+4.
LabeledGraph gen_star_instance(std::size_t n);

/// Companion query for the star family (three atoms sharing one bound var).
std::string star_query_text();

/// Uniform random graph: nv vertices "v0".."v{nv-1}", up to ne distinct
/// edges over single-letter labels "a", "b", ... Deterministic per seed.
LabeledGraph gen_random(std::size_t nv, std::size_t ne,
                        std::size_t alphabet_size, std::uint64_t seed);

}  // namespace crpq
