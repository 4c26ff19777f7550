#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "crpq/graph.hpp"
#include "crpq/query.hpp"
#include "support/oracles.hpp"

using namespace crpq;

namespace {

// Eleven-atom tree query used across several suites: four stars with
// components {R1..R5}, {R6}, {R7,R10,R11}, {R8,R9}.
const char* kTreeQueryText =
    "free: D E F G K L\n"
    "atom: A r1 B\n"
    "atom: A r2 C\n"
    "atom: A r3 D\n"
    "atom: C r4 E\n"
    "atom: C r5 F\n"
    "atom: D r6 G\n"
    "atom: E r7 H\n"
    "atom: F r8 I\n"
    "atom: F r9 J\n"
    "atom: H r10 K\n"
    "atom: H r11 L\n";

VarId var(const Crpq& q, const std::string& name) {
  for (VarId v = 0; v < q.var_names.size(); ++v)
    if (q.var_names[v] == name) return v;
  REQUIRE(false);
  return 0;
}

std::set<std::string> atom_set(const Crpq& sub) {
  std::set<std::string> out;
  for (const auto& a : sub.atoms)
    out.insert(sub.var_names[a.src] + "-" + sub.var_names[a.dst]);
  return out;
}

std::set<std::string> free_set(const Crpq& sub) {
  std::set<std::string> out;
  for (VarId v : sub.free) out.insert(sub.var_names[v]);
  return out;
}

}  // namespace

TEST_CASE("parse_query on the star query") {
  Crpq q = parse_query(star_query_text());
  CHECK(q.atoms.size() == 3);
  CHECK(q.free.size() == 3);
  CHECK(q.var_names[q.free[0]] == "X1");
  CHECK(q.var_names[q.free[1]] == "X2");
  CHECK(q.var_names[q.free[2]] == "X3");
  // all three atoms target the same join variable X
  CHECK(q.atoms[0].dst == q.atoms[1].dst);
  CHECK(q.atoms[1].dst == q.atoms[2].dst);
  CHECK_FALSE(q.is_free(q.atoms[0].dst));
  CHECK(q.atoms[0].regex->kind == RegexKind::Concat);
  CHECK(q.atoms[1].regex->symbol == "b");
}

TEST_CASE("parse_query: quoting, comments, errors") {
  Crpq q = parse_query(
      "# header comment\n"
      "free: X\n"
      "atom: X \"a b | c\" Y   # trailing comment\n");
  CHECK(q.atoms.size() == 1);
  CHECK(q.atoms[0].regex->kind == RegexKind::Alt);

  CHECK_THROWS_AS(parse_query("atom: X a Y\n"), QueryParseError);  // no free:
  CHECK_THROWS_AS(parse_query("free: Z\natom: X a Y\n"),
                  QueryParseError);  // free var not in atoms
  CHECK_THROWS_AS(parse_query("free: X X\natom: X a Y\n"),
                  QueryParseError);  // duplicate free var
  CHECK_THROWS_AS(parse_query("free: X\natom: X (a Y\n"),
                  QueryParseError);  // bad regex
  CHECK_THROWS_AS(parse_query("free: X\natom: X a\n"),
                  QueryParseError);  // missing dst
  try {
    parse_query("free: X\nnonsense\natom: X a Y\n");
    FAIL("expected parse error");
  } catch (const QueryParseError& e) {
    CHECK(e.line == 2);
  }

  // Boolean query: empty free list is allowed
  Crpq b = parse_query("free:\natom: X a Y\n");
  CHECK(b.free.empty());
}

TEST_CASE("check_acyclic witnesses") {
  CHECK(check_acyclic(parse_query(star_query_text())).accepted);
  CHECK(check_acyclic(parse_query(kTreeQueryText)).accepted);

  AcyclicityReport self_loop =
      check_acyclic(parse_query("free: X\natom: X a X\n"));
  CHECK_FALSE(self_loop.accepted);
  CHECK(self_loop.reason.find("X") != std::string::npos);

  AcyclicityReport parallel =
      check_acyclic(parse_query("free: X\natom: X a Y\natom: Y b X\n"));
  CHECK_FALSE(parallel.accepted);

  AcyclicityReport triangle = check_acyclic(
      parse_query("free: X\natom: X a Y\natom: Y b Z\natom: Z c X\n"));
  CHECK_FALSE(triangle.accepted);
}

TEST_CASE("connected_components") {
  Crpq q = parse_query(
      "free: A C\n"
      "atom: A r B\n"
      "atom: C s D\n"
      "atom: D t E\n");
  std::vector<Crpq> comps = connected_components(q);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].atoms.size() == 1);
  CHECK(comps[1].atoms.size() == 2);
  CHECK(free_set(comps[0]) == std::set<std::string>{"A"});
  CHECK(free_set(comps[1]) == std::set<std::string>{"C"});

  CHECK(connected_components(parse_query(star_query_text())).size() == 1);
}

TEST_CASE("bound_connected_components on the four-star tree query") {
  Crpq q = parse_query(kTreeQueryText);
  std::vector<Crpq> comps = bound_connected_components(q);
  REQUIRE(comps.size() == 4);

  CHECK(free_set(comps[0]) == std::set<std::string>{"D", "E", "F"});
  CHECK(atom_set(comps[0]) ==
        std::set<std::string>{"A-B", "A-C", "A-D", "C-E", "C-F"});

  CHECK(free_set(comps[1]) == std::set<std::string>{"D", "G"});
  CHECK(atom_set(comps[1]) == std::set<std::string>{"D-G"});

  CHECK(free_set(comps[2]) == std::set<std::string>{"E", "K", "L"});
  CHECK(atom_set(comps[2]) == std::set<std::string>{"E-H", "H-K", "H-L"});

  // the two star pieces around F merge into one component
  CHECK(free_set(comps[3]) == std::set<std::string>{"F"});
  CHECK(atom_set(comps[3]) == std::set<std::string>{"F-I", "F-J"});
}

TEST_CASE("bound_connected_components basics") {
  // star query: all atoms share the bound variable X
  CHECK(bound_connected_components(parse_query(star_query_text())).size() == 1);

  // fully free path: each atom is its own class (no bound vars at all)
  Crpq path = parse_query("free: A B C\natom: A r B\natom: B s C\n");
  std::vector<Crpq> comps = bound_connected_components(path);
  CHECK(comps.size() == 2);

  // components partition the atoms
  Crpq tree = parse_query(kTreeQueryText);
  std::size_t total = 0;
  for (const Crpq& c : bound_connected_components(tree))
    total += c.atoms.size();
  CHECK(total == tree.atoms.size());
}

TEST_CASE("is_trivial") {
  CHECK_FALSE(is_trivial(parse_query(star_query_text())));
  CHECK_FALSE(is_trivial(parse_query(kTreeQueryText)));
  CHECK(is_trivial(parse_query("free: X\natom: X a Y\n")));
  CHECK(is_trivial(parse_query("free:\natom: X a Y\n")));
  // two components, one free var each
  CHECK(is_trivial(parse_query("free: A C\natom: A r B\natom: C s D\n")));
  // one component with two free vars is nontrivial
  CHECK_FALSE(is_trivial(parse_query("free: A B\natom: A r B\n")));
}

TEST_CASE("k_expansion") {
  Crpq q = parse_query("free: X Y\natom: X a Y\n");
  Crpq e3 = k_expansion(q, 3);
  CHECK(e3.atoms.size() == 3);
  CHECK(check_acyclic(e3).accepted);
  // endpoints preserved, interior variables fresh
  CHECK(e3.var_names[e3.atoms[0].src] == "X");
  CHECK(e3.var_names[e3.atoms[2].dst] == "Y");
  CHECK(e3.atoms[0].dst == e3.atoms[1].src);
  CHECK(e3.atoms[1].dst == e3.atoms[2].src);
  CHECK(free_set(e3) == std::set<std::string>{"X", "Y"});
  // all expansion atoms share one single-symbol regex
  for (const auto& a : e3.atoms) CHECK(a.regex->kind == RegexKind::Symbol);

  // a self-loop expands to a k-cycle: still cyclic
  Crpq loop = parse_query("free: X\natom: X a X\n");
  CHECK_FALSE(check_acyclic(k_expansion(loop, 3)).accepted);

  // parallel pair expands to a 2k-cycle: still cyclic
  Crpq par = parse_query("free: X\natom: X a Y\natom: Y b X\n");
  CHECK_FALSE(check_acyclic(k_expansion(par, 2)).accepted);

  CHECK(k_expansion(parse_query(kTreeQueryText), 2).atoms.size() == 22);
}

TEST_CASE("reroot orientation flags") {
  Crpq q = parse_query(star_query_text());
  VarId x1 = var(q, "X1");
  VarId x = q.atoms[0].dst;
  OrientedTree t = reroot(q, x1);
  CHECK(t.root == x1);
  CHECK(t.order.front() == x1);
  CHECK(t.order.size() == 4);
  CHECK(t.parent[x] == x1);
  // atom 0 is X1 -> X, so the edge from parent X1 down to child X is
  // forward: atom src is the parent, not the child
  CHECK(t.parent_atom[x] == 0);
  CHECK_FALSE(t.parent_inverted[x]);
  // X2 and X3 hang below X via atoms whose src is the child
  VarId x2 = var(q, "X2");
  CHECK(t.parent[x2] == x);
  CHECK(t.parent_atom[x2] == 1);
  CHECK(t.parent_inverted[x2]);
  CHECK(t.children[x].size() == 2);

  // rerooting at X instead flips atom 0's orientation
  OrientedTree tx = reroot(q, x);
  CHECK(tx.parent_inverted[x1]);
}

TEST_CASE("reroot covers every atom exactly once") {
  std::mt19937_64 rng(31337);
  std::vector<std::string> pool{"a", "a*", "a b", "(a|b)*"};
  for (int trial = 0; trial < 50; ++trial) {
    Crpq q = oracles::random_acyclic_query(rng, 6, 3, pool);
    for (const Crpq& comp : connected_components(q)) {
      std::vector<VarId> vars = comp.vars();
      VarId root = vars[trial % vars.size()];
      OrientedTree t = reroot(comp, root);
      CHECK(t.order.size() == vars.size());
      std::set<std::size_t> used;
      for (VarId v : t.order) {
        if (v == root) continue;
        std::size_t ai = t.parent_atom[v];
        CHECK(used.insert(ai).second);
        const Atom& a = comp.atoms[ai];
        // the flagged direction matches the atom's endpoints
        if (t.parent_inverted[v]) {
          CHECK(a.src == v);
          CHECK(a.dst == t.parent[v]);
        } else {
          CHECK(a.src == t.parent[v]);
          CHECK(a.dst == v);
        }
      }
      CHECK(used.size() == comp.atoms.size());
    }
  }
}

TEST_CASE("subquery keeps ids and trims free") {
  Crpq q = parse_query(kTreeQueryText);
  Crpq sub = q.subquery({7, 8});  // R8(F,I), R9(F,J)
  CHECK(sub.atoms.size() == 2);
  CHECK(free_set(sub) == std::set<std::string>{"F"});
  CHECK(sub.var_names == q.var_names);
}

TEST_CASE("acyclicity agrees with an independent cycle check on random "
          "multigraphs") {
  std::mt19937_64 rng(246810);
  std::uniform_int_distribution<std::size_t> nv(1, 6), na(1, 8);
  for (int trial = 0; trial < 300; ++trial) {
    Crpq q;
    std::size_t v = nv(rng);
    for (std::size_t i = 0; i < v; ++i)
      q.var_names.push_back("V" + std::to_string(i));
    std::uniform_int_distribution<VarId> pv(0, static_cast<VarId>(v - 1));
    std::size_t m = na(rng);
    for (std::size_t i = 0; i < m; ++i)
      q.atoms.push_back({pv(rng), pv(rng), parse_regex("a")});

    // independent check: a multigraph forest has (per component)
    // exactly |vars| - 1 edges and no self-loops
    std::map<VarId, VarId> parent;
    std::function<VarId(VarId)> find = [&](VarId x) {
      if (!parent.count(x)) parent[x] = x;
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    bool forest = true;
    for (const auto& a : q.atoms) {
      VarId ra = find(a.src), rb = find(a.dst);
      if (ra == rb) {
        forest = false;
        break;
      }
      parent[ra] = rb;
    }
    CHECK(check_acyclic(q).accepted == forest);
  }
}

TEST_CASE("random acyclic queries decompose consistently") {
  std::mt19937_64 rng(8675309);
  std::vector<std::string> pool{"a", "b", "a*"};
  for (int trial = 0; trial < 200; ++trial) {
    Crpq q = oracles::random_acyclic_query(rng, 7, 4, pool);
    REQUIRE(check_acyclic(q).accepted);

    // bound-connected components refine connected components and
    // partition the atom set
    std::vector<Crpq> bcc = bound_connected_components(q);
    std::size_t total = 0;
    for (const Crpq& c : bcc) {
      total += c.atoms.size();
      CHECK(connected_components(c).size() == 1);
      CHECK(check_acyclic(c).accepted);
    }
    CHECK(total == q.atoms.size());
    CHECK(bcc.size() >= connected_components(q).size());

    // distinct classes never share a bound variable of q
    std::map<VarId, int> owner;
    bool overlap = false;
    for (std::size_t i = 0; i < bcc.size(); ++i)
      for (const auto& a : bcc[i].atoms)
        for (VarId v : {a.src, a.dst}) {
          if (q.is_free(v)) continue;
          auto [it, fresh] = owner.insert({v, static_cast<int>(i)});
          if (!fresh && it->second != static_cast<int>(i)) overlap = true;
        }
    CHECK_FALSE(overlap);
  }
}
