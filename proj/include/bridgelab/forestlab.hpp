#pragma once

// Labeled forests on [n] = {1..n}, exact forest counts, a uniform sampler, and
// the local statistics (pendant trees, alpha vectors) that forest classes are
// partitioned by.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bridgelab/arith.hpp"
#include "bridgelab/treekit.hpp"

namespace bridgelab {

// Vertices are 1..n; edges are stored with u < v, sorted.
class LabeledForest {
 public:
  LabeledForest() = default;
  // Validates endpoints and acyclicity; normalizes edge order.
  LabeledForest(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int component_count() const { return n_ - static_cast<int>(edges_.size()); }
  bool is_tree() const { return component_count() == 1; }
  bool has_edge(Edge e) const;

  // Components as sorted vertex lists, ordered by smallest vertex.
  std::vector<std::vector<int>> components() const;
  // Component of vertex v (1-based), sorted.
  std::vector<int> component_of(int v) const;

  LabeledForest with_edge(Edge e) const;
  LabeledForest without_edge(Edge e) const;

  // Bit (u,v) -> position in the upper triangle; requires n <= 11.
  std::uint64_t edge_mask() const;
  static LabeledForest from_mask(int n, std::uint64_t mask);

  friend bool operator==(const LabeledForest&, const LabeledForest&) = default;
  friend auto operator<=>(const LabeledForest& a, const LabeledForest& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.edges_ <=> b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
};

int edge_bit(int n, Edge e);
constexpr int kMaxMaskVertices = 11;

struct ExhaustiveLimits {
  int max_n = 7;
};

// Every labeled forest on [n], each exactly once, in edge-mask order.
std::vector<LabeledForest> enumerate_forests(int n, ExhaustiveLimits limits = {});

// f(n, k): labeled forests on [n] with k components, and the totals
// F(n) = sum_k f(n, k). Rows are grown on demand.
class ForestCountTable {
 public:
  explicit ForestCountTable(int max_n);

  int max_n() const { return max_n_; }
  const BigInt& total(int n) const;
  BigInt count(int n, int k);

  // Weight of "the component of the smallest vertex has m vertices" among
  // forests on n vertices: C(n-1, m-1) * m^(m-2) * F(n-m).
  BigInt component_term(int n, int m) const;

 private:
  int max_n_;
  std::vector<BigInt> cayley_;
  std::vector<BigInt> totals_;
  std::vector<std::vector<BigInt>> by_components_;  // by_components_[k][n]
};

BigInt forest_count(int n, int k);

enum class ProbabilityMode { Exact, LogFloat };

// n^(n-2) / F(n).
Rational connectivity_prob_exact(int n);
// Same ratio in scaled floating point: every term of the recurrence is
// normalised by e^m m! so nothing overflows. Relative error per term stays
// near machine epsilon; n is capped at kMaxLogFloatN.
double connectivity_prob_logfloat(int n);
constexpr int kMaxLogFloatN = 100000;
// Exact values for every n in [lo, hi] from one pass of the recurrence.
std::vector<Rational> connectivity_prob_exact_range(int lo, int hi);
std::vector<double> connectivity_prob_logfloat_range(int lo, int hi);

// f(n, 2) / n^(n-2).
Rational ratio_B_over_A(int n);
std::vector<Rational> ratio_B_over_A_range(int lo, int hi);

// Exactly uniform sampler over labeled forests on [n]: the size of the
// component containing the smallest remaining vertex is drawn with exact
// big-integer weights, its vertex set uniformly, and the tree on it from a
// uniform Pruefer sequence.
class ForestSampler {
 public:
  explicit ForestSampler(int max_n);
  LabeledForest sample(int n, Rng& rng);
  // Size of the component of vertex 1 only; equal to n iff connected.
  int sample_first_component(int n, Rng& rng);
  const ForestCountTable& table() const { return table_; }

 private:
  const std::vector<BigInt>& cumulative(int n);

  ForestCountTable table_;
  std::map<int, std::vector<BigInt>> cumulative_;
};

LabeledForest sample_forest(int n, std::uint64_t seed);

// Uniform labeled tree on the given vertex labels.
std::vector<Edge> random_tree_on(std::span<const int> vertices, Rng& rng);
// Labeled tree on {0..m-1} from its Pruefer sequence (m >= 2, length m-2).
std::vector<Edge> tree_from_pruefer(int m, std::span<const int> sequence);

// The smaller side of g - e, or on a size tie the side containing the smallest
// vertex of g, rooted at its endpoint of e. g must be a tree (on its own
// vertex set; isolated vertices other than g's are not allowed).
RootedTreeCode pendant_tree(const LabeledForest& g, Edge e);

// Pendant tree inside one component of a forest.
RootedTreeCode pendant_tree_in(const LabeledForest& g, std::span<const int> component, Edge e);

// Index of the largest component (ties: the one with the smallest vertex) in
// g.components().
std::size_t largest_component_index(const std::vector<std::vector<int>>& components);
// Index of the smallest component (ties: the one containing vertex 1).
std::size_t smallest_component_index(const std::vector<std::vector<int>>& components);

struct AlphaStats {
  std::vector<int> counts;  // aligned with catalog.t0()
  int total() const;
  friend bool operator==(const AlphaStats&, const AlphaStats&) = default;
};

AlphaStats alpha_stats(const LabeledForest& g, const Catalog& catalog);

}  // namespace bridgelab
