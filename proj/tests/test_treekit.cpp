#include <gtest/gtest.h>

#include <algorithm>

#include "bridgelab/treekit.hpp"
#include "oracles.hpp"

using namespace bridgelab;

namespace {

std::vector<int> rooted_counts_by_size(int k) {
  std::vector<int> counts(k, 0);
  for (const auto& t : enumerate_rooted(k)) ++counts[t.size - 1];
  return counts;
}

std::vector<int> unrooted_counts_by_size(int k) {
  std::vector<int> counts(k, 0);
  for (const auto& u : enumerate_unrooted(k)) ++counts[u.size - 1];
  return counts;
}

const std::string kStar4Center = "(()()())";
const std::string kPath3End = "((()))";

}  // namespace

TEST(Canonical, SingleVertex) {
  const auto t = parse_rooted("()");
  EXPECT_EQ(t.code, "()");
  EXPECT_EQ(t.size, 1);
  EXPECT_EQ(t.aut_r, 1);
}

TEST(Canonical, StarsRootedAtCenter) {
  const std::vector<Edge> star3{{0, 1}, {0, 2}};
  const std::vector<Edge> star4{{0, 1}, {0, 2}, {0, 3}};
  EXPECT_EQ(canonicalize_rooted(3, star3, 0).aut_r, 2);
  EXPECT_EQ(canonicalize_rooted(4, star4, 0).aut_r, 6);
  EXPECT_EQ(canonicalize_rooted(4, star4, 0).code, kStar4Center);
}

TEST(Canonical, UnrootedSmallTrees) {
  const std::vector<Edge> p2{{0, 1}};
  const std::vector<Edge> p4{{0, 1}, {1, 2}, {2, 3}};
  const std::vector<Edge> s4{{0, 1}, {0, 2}, {0, 3}};
  EXPECT_EQ(canonicalize_unrooted(2, p2).aut_u, 2);
  const auto path = canonicalize_unrooted(4, p4);
  EXPECT_EQ(path.aut_u, 2);
  EXPECT_EQ(path.centroid_kind, CentroidKind::Two);
  EXPECT_EQ(canonicalize_unrooted(4, s4).aut_u, 6);
}

TEST(Canonical, ChildOrderDoesNotMatter) {
  EXPECT_EQ(parse_rooted("(()(()))").code, parse_rooted("((())())").code);
  EXPECT_EQ(parse_unrooted("((()))").code, parse_unrooted("(()())").code);
}

TEST(Canonical, RejectsMalformedInput) {
  EXPECT_THROW(parse_rooted(""), InvalidTree);
  EXPECT_THROW(parse_rooted("(()"), InvalidTree);
  EXPECT_THROW(parse_rooted("()()"), InvalidTree);
  EXPECT_THROW(parse_rooted("(x)"), InvalidTree);
  const std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_THROW(Tree::from_edges(3, cycle), InvalidTree);
  const std::vector<Edge> loop{{0, 0}, {0, 1}};
  EXPECT_THROW(Tree::from_edges(3, loop), InvalidTree);
  const std::vector<Edge> far{{0, 5}};
  EXPECT_THROW(Tree::from_edges(2, far), InvalidTree);
}

TEST(Canonical, AutomorphismsMatchBruteForce) {
  for (const auto& t : enumerate_rooted(7)) {
    EXPECT_EQ(t.aut_r, oracle::brute_aut(Tree::from_code(t.code), 0)) << t.code;
  }
  for (const auto& u : enumerate_unrooted(8)) {
    EXPECT_EQ(u.aut_u, oracle::brute_aut(Tree::from_code(u.code))) << u.code;
  }
}

TEST(Canonical, CanonicalIndexAddressesTheSameVertex) {
  // Relabel a tree randomly; the canonical index of every vertex must carry
  // the same rooted subtree.
  Rng rng = derive_stream(11, 0);
  for (const auto& t : enumerate_rooted(7)) {
    const Tree base = Tree::from_code(t.code);
    std::vector<int> perm(base.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> edges;
    for (const Edge& e : base.edges()) edges.push_back({perm[e.u], perm[e.v]});
    const Tree shuffled = Tree::from_edges(base.size(), edges);
    const auto form = canonical_form(shuffled, perm[0]);
    ASSERT_EQ(form.code, t.code);
    const Tree canon = Tree::from_code(form.code);
    for (int v = 0; v < base.size(); ++v) {
      EXPECT_EQ(canonical_form(shuffled, perm[0], perm[v]).code, canonical_form(canon, 0, form.index[perm[v]]).code);
    }
  }
}

TEST(Enumerate, RootedCounts) {
  EXPECT_EQ(rooted_counts_by_size(3), (std::vector<int>{1, 1, 2}));
  EXPECT_EQ(rooted_counts_by_size(6), (std::vector<int>{1, 1, 2, 4, 9, 20}));
  const auto one = enumerate_rooted(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].code, "()");
}

TEST(Enumerate, UnrootedCounts) {
  EXPECT_EQ(unrooted_counts_by_size(4), (std::vector<int>{1, 1, 1, 2}));
  EXPECT_EQ(unrooted_counts_by_size(7), (std::vector<int>{1, 1, 1, 2, 3, 6, 11}));
  EXPECT_EQ(enumerate_unrooted(1).size(), 1u);
}

TEST(Enumerate, MatchesPrueferOracle) {
  for (int n = 1; n <= 7; ++n) {
    std::set<std::string> rooted, unrooted;
    for (const auto& t : enumerate_rooted(n)) {
      if (t.size == n) rooted.insert(t.code);
    }
    for (const auto& u : enumerate_unrooted(n)) {
      if (u.size == n) unrooted.insert(u.code);
    }
    EXPECT_EQ(rooted, oracle::pruefer_rooted_codes(n)) << n;
    EXPECT_EQ(unrooted, oracle::pruefer_unrooted_codes(n)) << n;
  }
}

TEST(Enumerate, SortedDistinctCanonical) {
  const auto all = enumerate_rooted(8);
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_NE(all[i - 1].code, all[i].code);
  for (const auto& t : all) EXPECT_EQ(parse_rooted(t.code).code, t.code);
}

TEST(Enumerate, CapacityError) {
  EXPECT_THROW(enumerate_rooted(20), CapacityError);
  EXPECT_THROW(enumerate_unrooted(5, {.max_size = 4}), CapacityError);
  EXPECT_THROW(enumerate_rooted(0), std::invalid_argument);
}

TEST(Splits, ThreePathRootedAtEnd) {
  const auto s = splits(parse_rooted(kPath3End));
  ASSERT_EQ(s.size(), 2u);
  const auto it = std::find_if(s.begin(), s.end(), [](const EdgeSplit& x) { return x.u_plus.size == 1; });
  ASSERT_NE(it, s.end());
  EXPECT_EQ(it->t_minus.code, "(())");
  EXPECT_EQ(it->m_edge, 1);
  EXPECT_EQ(it->m_vminus, 1);
  EXPECT_EQ(it->n_vplus, 1);
}

TEST(Splits, FourStarRootedAtCenter) {
  const auto s = splits(parse_rooted(kStar4Center));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].m_edge, 3);
  EXPECT_EQ(s[0].t_minus.code, "(()())");
  EXPECT_EQ(s[0].u_plus.code, "()");
  EXPECT_EQ(s[0].m_vminus, 1);
  EXPECT_EQ(s[0].n_vplus, 1);
  const auto cert = verify_aut_identity(s[0]);
  EXPECT_TRUE(cert.holds);
  EXPECT_EQ(cert.lhs, Rational(1, 2));
}

TEST(Splits, PathOfFourHasSingletonOrbits) {
  const auto s = splits(parse_rooted("(((())))"));
  ASSERT_EQ(s.size(), 3u);
  for (const auto& x : s) EXPECT_EQ(x.m_edge, 1);
}

TEST(Splits, OrbitSizesCoverEveryEdge) {
  for (const auto& t : enumerate_rooted(8)) {
    if (t.size == 1) continue;
    std::int64_t total = 0;
    for (const auto& s : splits(t)) total += s.m_edge;
    EXPECT_EQ(total, t.size - 1) << t.code;
  }
}

TEST(Splits, AutIdentityExhaustive) {
  for (const auto& t : enumerate_rooted(8)) {
    if (t.size == 1) continue;
    for (const auto& s : splits(t)) EXPECT_TRUE(verify_aut_identity(s).holds) << t.code;
  }
}

TEST(Splits, AttachInvertsSplit) {
  for (const auto& t : enumerate_rooted(7)) {
    if (t.size == 1) continue;
    for (const auto& s : splits(t)) {
      EXPECT_EQ(attach(s.t_minus, s.v_minus_index, s.u_plus, s.v_plus_index).code, t.code);
    }
  }
}

TEST(Attach, Examples) {
  const auto dot = parse_unrooted("()");
  EXPECT_EQ(attach(parse_rooted("()"), 0, dot, 0).code, "(())");
  const auto p2 = parse_unrooted("(())");
  EXPECT_EQ(attach(parse_rooted("()"), 0, p2, 1).code, kPath3End);
  const auto p3 = parse_rooted(kPath3End);
  EXPECT_EQ(attach(p3, 1, dot, 0).code, "((()()))");
  EXPECT_EQ(attach(p3, 2, dot, 0).code, "(((())))");
  EXPECT_EQ(attach(p3, 0, dot, 0).code, "(()(()))");
  EXPECT_THROW(attach(p3, 3, dot, 0), std::out_of_range);
}

TEST(Orbits, VertexOrbitSizes) {
  EXPECT_EQ(rooted_vertex_orbit_size(kStar4Center, 1), 3);
  EXPECT_EQ(rooted_vertex_orbit_size(kStar4Center, 0), 1);
  EXPECT_EQ(unrooted_vertex_orbit_size("(()()())", 2), 3);
  EXPECT_EQ(unrooted_vertex_orbit_size("(()(()))", 0), 2);
  EXPECT_EQ(unrooted_vertex_orbit_size("(()(()))", 1), 2);
}

TEST(Cayley, SmallCases) {
  EXPECT_TRUE(cayley_identity_check(1).holds);
  const auto c3 = cayley_identity_check(3);
  EXPECT_EQ(c3.rooted_sum, 9);
  const auto c4 = cayley_identity_check(4);
  EXPECT_EQ(c4.rooted_sum, 64);
  EXPECT_EQ(c4.unrooted_sum, 16);
  for (int n = 1; n <= 9; ++n) EXPECT_TRUE(cayley_identity_check(n).holds) << n;
}

TEST(CatalogTest, StandardAndExplicit) {
  const auto c = Catalog::standard(3, 2);
  EXPECT_EQ(c.t0().size(), 4u);
  EXPECT_EQ(c.u0().size(), 2u);
  EXPECT_TRUE(c.t0_index("(())").has_value());
  EXPECT_FALSE(c.u0_index("((()))").has_value());
  const std::vector<std::string> t0{"()", "(())"}, u0{"()"};
  EXPECT_NO_THROW(Catalog::from_codes(t0, u0));
  const std::vector<std::string> no_dot{"(())"};
  EXPECT_THROW(Catalog::from_codes(t0, no_dot), CatalogError);
  const std::vector<std::string> not_closed{"()", "((()))"};
  EXPECT_THROW(Catalog::from_codes(not_closed, u0), CatalogError);
}
