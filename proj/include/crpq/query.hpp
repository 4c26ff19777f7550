#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crpq/regex.hpp"

namespace crpq {

struct Atom {
  VarId src;
  VarId dst;
  RegexPtr regex;
};

struct QueryParseError : std::runtime_error {
  std::size_t line;
  QueryParseError(std::size_t line_no, const std::string& what)
      : std::runtime_error("query parse error at line " +
                           std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

/// A CRPQ: a conjunction of RPQ atoms plus an ordered free-variable list.
/// Variable ids index into `var_names`; subqueries formed by the component
/// operations share the parent's variable id space.
struct Crpq {
  std::vector<std::string> var_names;
  std::vector<Atom> atoms;
  std::vector<VarId> free;  // declaration order; defines output column order

  std::vector<VarId> vars() const;   // vars used by atoms, ascending
  std::vector<VarId> bound() const;  // vars() minus free
  bool is_free(VarId v) const;
  std::size_t var_degree(VarId v) const;  // multigraph degree (atom count)

  // Subquery with the given atoms; free = free ∩ vars(subquery).
  Crpq subquery(const std::vector<std::size_t>& atom_indices) const;
};

/// Undirected multigraph view: one vertex per variable, one edge per atom.
struct QueryMultigraph {
  std::size_t num_vars = 0;
  // (min(src,dst), max(src,dst), atom index); self-loops have equal ends
  std::vector<std::tuple<VarId, VarId, std::size_t>> edges;
};

QueryMultigraph query_multigraph(const Crpq& q);

/// Query file format: a `free:` line with variable names, then `atom:` lines
/// `atom: <src> <regex> <dst>` (regex may be double-quoted); `#` comments.
Crpq parse_query(const std::string& text);

struct AcyclicityReport {
  bool accepted = false;
  std::string reason;  // witness description when rejected
};

/// Accepted iff the query multigraph has no cycle; self-loop atoms and two
/// atoms over the same variable pair are cycles.
AcyclicityReport check_acyclic(const Crpq& q);

/// Partition of the atoms by multigraph connectivity.
std::vector<Crpq> connected_components(const Crpq& q);

/// Maximal subqueries in which atoms hang together through bound variables;
/// several single-free-variable star pieces around the same free variable
/// form one component. Requires an acyclic query.
std::vector<Crpq> bound_connected_components(const Crpq& q);

/// True iff every connected component has at most one free variable.
bool is_trivial(const Crpq& q);

/// Replaces each atom by a k-path of fresh single-symbol atoms.
Crpq k_expansion(const Crpq& q, std::size_t k);

/// Rooted view of a connected acyclic query. Edges whose atom points
/// child -> parent are flagged: they are later evaluated with the inverse
/// regex over the transposed edge view.
struct OrientedTree {
  VarId root;
  std::vector<VarId> order;  // BFS order from the root
  // indexed by variable id (kNoVertex / empty where unused)
  std::vector<VarId> parent;
  std::vector<std::size_t> parent_atom;
  std::vector<bool> parent_inverted;  // atom src == child
  std::vector<std::vector<VarId>> children;
};

OrientedTree reroot(const Crpq& q, VarId root);

}  // namespace crpq
