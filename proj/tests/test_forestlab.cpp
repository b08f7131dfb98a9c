#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "bridgelab/forestlab.hpp"
#include "oracles.hpp"

using namespace bridgelab;

namespace {

Rational frac(long num, long den) { return make_rational(num, den); }

}  // namespace

TEST(Forest, Validation) {
  EXPECT_NO_THROW(LabeledForest(3, {{1, 2}}));
  EXPECT_THROW(LabeledForest(3, {{1, 2}, {2, 3}, {1, 3}}), std::invalid_argument);
  EXPECT_THROW(LabeledForest(3, {{0, 2}}), std::invalid_argument);
  EXPECT_THROW(LabeledForest(3, {{2, 2}}), std::invalid_argument);
  const LabeledForest g(4, {{3, 1}, {4, 2}});
  EXPECT_EQ(g.edges().front(), (Edge{1, 3}));
  EXPECT_EQ(g.component_count(), 2);
  EXPECT_EQ(g.component_of(4), (std::vector<int>{2, 4}));
  EXPECT_EQ(LabeledForest::from_mask(4, g.edge_mask()), g);
}

TEST(Forest, EnumerationCounts) {
  EXPECT_EQ(enumerate_forests(1).size(), 1u);
  EXPECT_EQ(enumerate_forests(3).size(), 7u);
  EXPECT_EQ(enumerate_forests(4).size(), 38u);
  EXPECT_THROW(enumerate_forests(8), CapacityError);
}

TEST(Forest, EnumerationIsDistinct) {
  const auto all = enumerate_forests(5);
  std::set<std::uint64_t> masks;
  for (const auto& g : all) masks.insert(g.edge_mask());
  EXPECT_EQ(masks.size(), all.size());
}

TEST(Counts, MatchBruteForce) {
  for (int n = 1; n <= 6; ++n) {
    const auto brute = oracle::brute_forest_counts_by_components(n);
    for (int k = 1; k <= n; ++k) {
      const auto it = brute.find(k);
      EXPECT_EQ(forest_count(n, k), it == brute.end() ? 0 : it->second) << n << ',' << k;
    }
  }
}

TEST(Counts, Examples) {
  EXPECT_EQ(forest_count(4, 2), 15);
  EXPECT_EQ(forest_count(5, 2), 110);
  for (int n = 1; n <= 20; ++n) EXPECT_EQ(forest_count(n, n), 1);
  for (int n = 1; n <= 20; ++n) EXPECT_EQ(forest_count(n, 1), cayley_count(n));
}

TEST(Counts, TotalsAddUp) {
  ForestCountTable table(30);
  for (int n = 1; n <= 30; ++n) {
    BigInt sum = 0;
    for (int k = 1; k <= n; ++k) sum += table.count(n, k);
    EXPECT_EQ(sum, table.total(n)) << n;
  }
}

TEST(Counts, RejectsBadArguments) {
  EXPECT_THROW(forest_count(0, 1), std::invalid_argument);
  EXPECT_THROW(forest_count(3, 4), std::invalid_argument);
}

TEST(Connectivity, ExactExamples) {
  EXPECT_EQ(connectivity_prob_exact(2), Rational(1, 2));
  EXPECT_EQ(connectivity_prob_exact(3), Rational(3, 7));
  EXPECT_EQ(connectivity_prob_exact(7), Rational(16807, 36961));
}

TEST(Connectivity, MatchesEnumeration) {
  for (int n = 1; n <= 6; ++n) {
    const auto all = enumerate_forests(n);
    long trees = 0;
    for (const auto& g : all) trees += g.is_tree();
    EXPECT_EQ(connectivity_prob_exact(n), frac(trees, static_cast<long>(all.size()))) << n;
  }
}

TEST(Connectivity, LogFloatAgreesWithExact) {
  const auto exact = connectivity_prob_exact_range(1, 400);
  const auto approx = connectivity_prob_logfloat_range(1, 400);
  for (int n = 1; n <= 400; ++n) EXPECT_NEAR(approx[n - 1], exact[n - 1].get_d(), 1e-12) << n;
  EXPECT_DOUBLE_EQ(connectivity_prob_logfloat(250), approx[249]);
}

TEST(Connectivity, LogFloatCapacity) {
  EXPECT_THROW(connectivity_prob_logfloat(kMaxLogFloatN + 1), CapacityError);
}

TEST(Ratio, Examples) {
  EXPECT_EQ(ratio_B_over_A(3), Rational(1));
  EXPECT_EQ(ratio_B_over_A(4), Rational(15, 16));
  EXPECT_EQ(ratio_B_over_A(5), frac(110, 125));
  const auto r = ratio_B_over_A_range(3, 60);
  for (int n = 3; n <= 60; ++n) {
    // Closed form (n - 1)(n + 6) / (2 n^2).
    EXPECT_EQ(r[n - 3], frac((n - 1) * (n + 6), 2 * n * n)) << n;
  }
}

TEST(Pruefer, DecodeIsBijective) {
  for (int m = 2; m <= 6; ++m) {
    std::set<std::vector<Edge>> seen;
    std::vector<int> seq(m - 2, 0);
    while (true) {
      auto edges = tree_from_pruefer(m, seq);
      for (auto& e : edges) {
        if (e.u > e.v) std::swap(e.u, e.v);
      }
      std::sort(edges.begin(), edges.end());
      EXPECT_NO_THROW(Tree::from_edges(m, edges));
      seen.insert(edges);
      int i = 0;
      while (i < m - 2 && ++seq[i] == m) seq[i++] = 0;
      if (i == m - 2) break;
    }
    EXPECT_EQ(BigInt(static_cast<unsigned long>(seen.size())), cayley_count(m)) << m;
  }
}

TEST(Sampler, UniformOnFourVertices) {
  const auto all = enumerate_forests(4);
  std::map<LabeledForest, std::size_t> index;
  for (std::size_t i = 0; i < all.size(); ++i) index[all[i]] = i;
  std::vector<std::int64_t> counts(all.size(), 0);
  ForestSampler sampler(4);
  Rng rng = derive_stream(5, 0);
  const int samples = 38000;
  for (int i = 0; i < samples; ++i) ++counts.at(index.at(sampler.sample(4, rng)));
  EXPECT_LT(oracle::chi_square_uniform(counts), oracle::chi_square_critical(37, 0.001));
}

TEST(Sampler, ConnectivityFrequencies) {
  for (int n : {2, 7}) {
    ForestSampler sampler(n);
    Rng rng = derive_stream(9, n);
    const int samples = 100000;
    long connected = 0;
    for (int i = 0; i < samples; ++i) connected += sampler.sample(n, rng).is_tree();
    const double p = connectivity_prob_exact(n).get_d();
    const double sigma = std::sqrt(p * (1 - p) / samples);
    EXPECT_NEAR(static_cast<double>(connected) / samples, p, 3 * sigma) << n;
  }
}

TEST(Sampler, DeterministicPerSeed) {
  EXPECT_EQ(sample_forest(12, 42), sample_forest(12, 42));
  EXPECT_NE(sample_forest(30, 1), sample_forest(30, 2));
}

TEST(Pendant, Examples) {
  const LabeledForest p2(2, {{1, 2}});
  EXPECT_EQ(pendant_tree(p2, {1, 2}).code, "()");
  const LabeledForest p3(3, {{1, 2}, {2, 3}});
  EXPECT_EQ(pendant_tree(p3, {2, 3}).code, "()");
  EXPECT_EQ(pendant_tree(p3, {1, 2}).code, "()");
  const LabeledForest star(4, {{1, 2}, {1, 3}, {1, 4}});
  for (const Edge& e : star.edges()) EXPECT_EQ(pendant_tree(star, e).code, "()");
  const LabeledForest p4(4, {{1, 2}, {2, 3}, {3, 4}});
  // Tie on the middle edge: the side holding vertex 1, rooted at vertex 2.
  EXPECT_EQ(pendant_tree(p4, {2, 3}).code, "(())");
}

TEST(Pendant, TieInsideAComponentWithoutVertexOne) {
  const LabeledForest g(8, {{3, 4}, {4, 5}, {5, 6}, {6, 7}, {6, 8}});
  const auto comp = g.component_of(3);
  EXPECT_EQ(pendant_tree_in(g, comp, {5, 6}).code, "((()))");
}

TEST(Components, TieBreaks) {
  const std::vector<std::vector<int>> comps{{1, 4}, {2, 3}, {5, 6, 7}};
  EXPECT_EQ(largest_component_index(comps), 2u);
  EXPECT_EQ(smallest_component_index(comps), 0u);
  const std::vector<std::vector<int>> tied{{1, 2, 3}, {4, 5, 6}};
  EXPECT_EQ(largest_component_index(tied), 0u);
  EXPECT_EQ(smallest_component_index(tied), 0u);
}

TEST(Alpha, Examples) {
  const auto small = Catalog::standard(2, 1);
  const LabeledForest p3(3, {{1, 2}, {2, 3}});
  const auto a = alpha_stats(p3, small);
  EXPECT_EQ(a.counts[*small.t0_index("()")], 2);
  EXPECT_EQ(a.counts[*small.t0_index("(())")], 0);
  EXPECT_EQ(alpha_stats(LabeledForest(1, {}), small).total(), 0);
  const auto three = Catalog::standard(3, 1);
  const LabeledForest star(4, {{1, 2}, {1, 3}, {1, 4}});
  EXPECT_EQ(alpha_stats(star, three).counts[*three.t0_index("()")], 3);
}

TEST(Alpha, MatchesIndependentRecount) {
  // Compare through box membership: a unit box at each forest's own alpha.
  const auto catalog = Catalog::standard(3, 2);
  for (const auto& g : enumerate_forests(6)) {
    if (g.component_count() != 1) continue;
    const auto a = alpha_stats(g, catalog);
    BoxSpec box{a.counts, 1, 0};
    ForestClass single(6, {g}, "single");
    EXPECT_EQ(oracle::brute_box_counts(single, catalog, box).a, 1);
  }
}
