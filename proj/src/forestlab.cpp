#include "bridgelab/forestlab.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bridgelab {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

Edge normalized(Edge e) { return e.u < e.v ? e : Edge{e.v, e.u}; }

}  // namespace

LabeledForest::LabeledForest(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw std::invalid_argument("forest needs at least one vertex");
  for (Edge& e : edges_) {
    if (e.u < 1 || e.u > n || e.v < 1 || e.v > n) {
      throw std::invalid_argument("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                  "} has an endpoint outside 1.." + std::to_string(n));
    }
    if (e.u == e.v) throw std::invalid_argument("self loop at vertex " + std::to_string(e.u));
    e = normalized(e);
  }
  std::sort(edges_.begin(), edges_.end());
  Dsu dsu(n + 1);
  for (const Edge& e : edges_) {
    if (!dsu.unite(e.u, e.v)) {
      throw std::invalid_argument("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} closes a cycle");
    }
  }
}

bool LabeledForest::has_edge(Edge e) const { return std::binary_search(edges_.begin(), edges_.end(), normalized(e)); }

std::vector<std::vector<int>> LabeledForest::components() const {
  Dsu dsu(n_ + 1);
  for (const Edge& e : edges_) dsu.unite(e.u, e.v);
  std::vector<std::vector<int>> by_root(n_ + 1);
  for (int v = 1; v <= n_; ++v) by_root[dsu.find(v)].push_back(v);
  std::vector<std::vector<int>> out;
  // Roots are the smallest vertex of their component, so this order is by
  // smallest vertex.
  for (auto& c : by_root) {
    if (!c.empty()) out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> LabeledForest::component_of(int v) const {
  for (auto& c : components()) {
    if (std::binary_search(c.begin(), c.end(), v)) return c;
  }
  throw std::out_of_range("vertex " + std::to_string(v) + " not in forest");
}

LabeledForest LabeledForest::with_edge(Edge e) const {
  auto edges = edges_;
  edges.push_back(e);
  return LabeledForest(n_, std::move(edges));
}

LabeledForest LabeledForest::without_edge(Edge e) const {
  auto edges = edges_;
  auto it = std::find(edges.begin(), edges.end(), normalized(e));
  if (it == edges.end()) throw std::invalid_argument("edge not in forest");
  edges.erase(it);
  return LabeledForest(n_, std::move(edges));
}

int edge_bit(int n, Edge e) {
  e = normalized(e);
  return (e.u - 1) * n - (e.u - 1) * e.u / 2 + (e.v - e.u - 1);
}

std::uint64_t LabeledForest::edge_mask() const {
  if (n_ > kMaxMaskVertices) throw CapacityError("edge masks support at most 11 vertices");
  std::uint64_t mask = 0;
  for (const Edge& e : edges_) mask |= std::uint64_t{1} << edge_bit(n_, e);
  return mask;
}

LabeledForest LabeledForest::from_mask(int n, std::uint64_t mask) {
  std::vector<Edge> edges;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (mask >> edge_bit(n, {u, v}) & 1) edges.push_back({u, v});
    }
  }
  return LabeledForest(n, std::move(edges));
}

std::vector<LabeledForest> enumerate_forests(int n, ExhaustiveLimits limits) {
  if (n < 1) throw std::invalid_argument("enumerate_forests: n must be positive");
  if (n > limits.max_n || n > kMaxMaskVertices) {
    throw CapacityError("enumerate_forests: n = " + std::to_string(n) + " exceeds the exhaustive bound " +
                        std::to_string(std::min(limits.max_n, kMaxMaskVertices)));
  }
  std::vector<Edge> all;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) all.push_back({u, v});
  }
  std::vector<std::uint64_t> masks;
  auto recurse = [&](auto&& self, std::size_t i, std::uint64_t mask, const Dsu& dsu) -> void {
    if (i == all.size()) {
      masks.push_back(mask);
      return;
    }
    self(self, i + 1, mask, dsu);
    Dsu next = dsu;
    if (next.unite(all[i].u, all[i].v)) self(self, i + 1, mask | std::uint64_t{1} << edge_bit(n, all[i]), next);
  };
  recurse(recurse, 0, 0, Dsu(n + 1));
  std::sort(masks.begin(), masks.end());
  std::vector<LabeledForest> out;
  out.reserve(masks.size());
  for (auto m : masks) out.push_back(LabeledForest::from_mask(n, m));
  return out;
}

ForestCountTable::ForestCountTable(int max_n) : max_n_(max_n) {
  if (max_n < 0) throw std::invalid_argument("ForestCountTable: negative size");
  cayley_.resize(max_n + 1);
  for (int m = 1; m <= max_n; ++m) cayley_[m] = cayley_count(m);
  totals_.resize(max_n + 1);
  totals_[0] = 1;
  for (int s = 1; s <= max_n; ++s) {
    BigInt sum = 0;
    BigInt c = 1;  // C(s-1, m-1)
    for (int m = 1; m <= s; ++m) {
      sum += c * cayley_[m] * totals_[s - m];
      c *= s - m;
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), m);
    }
    totals_[s] = std::move(sum);
  }
  // k = 0 row: only the empty vertex set.
  by_components_.push_back(std::vector<BigInt>(max_n + 1, 0));
  by_components_[0][0] = 1;
}

const BigInt& ForestCountTable::total(int n) const {
  if (n < 0 || n > max_n_) throw std::out_of_range("forest count table does not cover n = " + std::to_string(n));
  return totals_[n];
}

BigInt ForestCountTable::component_term(int n, int m) const {
  if (n < 1 || n > max_n_ || m < 1 || m > n) throw std::out_of_range("component_term out of range");
  return binomial(n - 1, m - 1) * cayley_[m] * totals_[n - m];
}

BigInt ForestCountTable::count(int n, int k) {
  if (n < 1 || n > max_n_) throw std::out_of_range("forest count table does not cover n = " + std::to_string(n));
  if (k < 1 || k > n) throw std::invalid_argument("component count k must satisfy 1 <= k <= n");
  while (static_cast<int>(by_components_.size()) <= k) {
    const auto& prev = by_components_.back();
    std::vector<BigInt> row(max_n_ + 1, 0);
    for (int s = 1; s <= max_n_; ++s) {
      BigInt sum = 0;
      BigInt c = 1;
      for (int m = 1; m <= s; ++m) {
        if (prev[s - m] != 0) sum += c * cayley_[m] * prev[s - m];
        c *= s - m;
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), m);
      }
      row[s] = std::move(sum);
    }
    by_components_.push_back(std::move(row));
  }
  return by_components_[k][n];
}

BigInt forest_count(int n, int k) {
  if (n < 1) throw std::invalid_argument("forest_count: n must be positive");
  if (k < 1 || k > n) throw std::invalid_argument("forest_count: k must satisfy 1 <= k <= n");
  ForestCountTable table(n);
  return table.count(n, k);
}

Rational connectivity_prob_exact(int n) { return connectivity_prob_exact_range(n, n).front(); }

std::vector<Rational> connectivity_prob_exact_range(int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("connectivity_prob: need 1 <= lo <= hi");
  ForestCountTable table(hi);
  std::vector<Rational> out;
  for (int n = lo; n <= hi; ++n) out.push_back(make_rational(cayley_count(n), table.total(n)));
  return out;
}

double connectivity_prob_logfloat(int n) { return connectivity_prob_logfloat_range(n, n).front(); }

std::vector<double> connectivity_prob_logfloat_range(int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("connectivity_prob: need 1 <= lo <= hi");
  if (hi > kMaxLogFloatN) {
    throw CapacityError("logfloat connectivity supports n <= " + std::to_string(kMaxLogFloatN));
  }
  // scaled_tree[m] = m^(m-2) / (m! e^m); scaled_total[s] = F(s) / (s! e^s).
  // F(s) = sum_m C(s-1, m-1) m^(m-2) F(s-m) becomes
  // s * scaled_total[s] = sum_m m * scaled_tree[m] * scaled_total[s-m].
  std::vector<double> scaled_tree(hi + 1, 0.0), weight(hi + 1, 0.0), scaled_total(hi + 1, 0.0);
  for (int m = 1; m <= hi; ++m) {
    const double log_cayley = m <= 2 ? 0.0 : (m - 2) * std::log(static_cast<double>(m));
    scaled_tree[m] = std::exp(log_cayley - std::lgamma(m + 1.0) - m);
    weight[m] = m * scaled_tree[m];
  }
  scaled_total[0] = 1.0;
  for (int s = 1; s <= hi; ++s) {
    double sum = 0.0;
    for (int m = 1; m <= s; ++m) sum += weight[m] * scaled_total[s - m];
    scaled_total[s] = sum / s;
    if (!std::isfinite(scaled_total[s]) || scaled_total[s] <= 0.0) {
      throw std::overflow_error("logfloat connectivity underflowed at n = " + std::to_string(s));
    }
  }
  std::vector<double> out;
  for (int n = lo; n <= hi; ++n) {
    const double p = scaled_tree[n] / scaled_total[n];
    if (!std::isfinite(p)) throw std::overflow_error("logfloat connectivity overflowed at n = " + std::to_string(n));
    out.push_back(p);
  }
  return out;
}

Rational ratio_B_over_A(int n) { return ratio_B_over_A_range(n, n).front(); }

std::vector<Rational> ratio_B_over_A_range(int lo, int hi) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("ratio_B_over_A: need 1 <= lo <= hi");
  std::vector<BigInt> cayley(hi + 1);
  for (int m = 1; m <= hi; ++m) cayley[m] = cayley_count(m);
  std::vector<Rational> out;
  for (int n = lo; n <= hi; ++n) {
    // Component of vertex 1 has m vertices, the other n - m.
    BigInt two = 0;
    BigInt c = 1;
    for (int m = 1; m < n; ++m) {
      two += c * cayley[m] * cayley[n - m];
      c *= n - m;
      mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), m);
    }
    out.push_back(make_rational(two, cayley[n]));
  }
  return out;
}

std::vector<Edge> tree_from_pruefer(int m, std::span<const int> sequence) {
  if (m < 2 || static_cast<int>(sequence.size()) != m - 2) throw std::invalid_argument("bad Pruefer sequence length");
  std::vector<int> degree(m, 1);
  for (int x : sequence) {
    if (x < 0 || x >= m) throw std::invalid_argument("Pruefer entry out of range");
    ++degree[x];
  }
  std::vector<Edge> edges;
  edges.reserve(m - 1);
  int ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  int leaf = ptr;
  for (int x : sequence) {
    edges.push_back({leaf, x});
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back({leaf, m - 1});
  return edges;
}

std::vector<Edge> random_tree_on(std::span<const int> vertices, Rng& rng) {
  const int m = static_cast<int>(vertices.size());
  if (m <= 1) return {};
  std::vector<int> seq(m - 2);
  for (int& x : seq) x = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m)));
  std::vector<Edge> edges = tree_from_pruefer(m, seq);
  for (Edge& e : edges) e = {vertices[e.u], vertices[e.v]};
  return edges;
}

ForestSampler::ForestSampler(int max_n) : table_(max_n) {}

const std::vector<BigInt>& ForestSampler::cumulative(int n) {
  auto it = cumulative_.find(n);
  if (it != cumulative_.end()) return it->second;
  if (n > table_.max_n()) throw std::out_of_range("sampler table does not cover n = " + std::to_string(n));
  std::vector<BigInt> cum(n + 1, 0);
  BigInt c = 1;
  for (int m = 1; m <= n; ++m) {
    cum[m] = cum[m - 1] + c * cayley_count(m) * table_.total(n - m);
    c *= n - m;
    mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), m);
  }
  return cumulative_.emplace(n, std::move(cum)).first->second;
}

int ForestSampler::sample_first_component(int n, Rng& rng) {
  const auto& cum = cumulative(n);
  const BigInt r = uniform_below(rng, cum.back());
  return static_cast<int>(std::upper_bound(cum.begin(), cum.end(), r) - cum.begin());
}

LabeledForest ForestSampler::sample(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample: n must be positive");
  std::vector<int> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 1);
  std::vector<Edge> edges;
  while (!remaining.empty()) {
    const int s = static_cast<int>(remaining.size());
    const int m = sample_first_component(s, rng);
    // remaining[0] is the smallest vertex; pick m-1 companions uniformly.
    for (int i = 1; i < m; ++i) {
      const int j = i + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(s - i)));
      std::swap(remaining[i], remaining[j]);
    }
    std::vector<int> component(remaining.begin(), remaining.begin() + m);
    std::sort(component.begin(), component.end());
    auto tree = random_tree_on(component, rng);
    edges.insert(edges.end(), tree.begin(), tree.end());
    remaining.erase(remaining.begin(), remaining.begin() + m);
    std::sort(remaining.begin(), remaining.end());
  }
  return LabeledForest(n, std::move(edges));
}

LabeledForest sample_forest(int n, std::uint64_t seed) {
  ForestSampler sampler(n);
  Rng rng = derive_stream(seed, 0);
  return sampler.sample(n, rng);
}

namespace {

// Pendant tree of every edge of a tree on local vertices 0..N-1. tie_vertex is
// the local vertex whose side wins a size tie. Pendant trees larger than
// max_size are reported with an empty code.
template <class Fn>
void for_each_pendant(const Tree& tree, int tie_vertex, int max_size, Fn&& fn) {
  const int n = tree.size();
  std::vector<int> order, parent(n, -1), sub(n, 1), tin(n), tout(n);
  std::vector<int> stack{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int w : tree.neighbors(v)) {
      if (!seen[w]) {
        seen[w] = 1;
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent[*it] >= 0) sub[parent[*it]] += sub[*it];
  }
  auto in_subtree = [&](int x, int v) {
    for (int y = x; y >= 0; y = parent[y]) {
      if (y == v) return true;
    }
    return false;
  };
  for (int v = 0; v < n; ++v) {
    const int p = parent[v];
    if (p < 0) continue;
    const int below = sub[v];
    const int above = n - below;
    bool take_below = below < above || (below == above && in_subtree(tie_vertex, v));
    const int root = take_below ? v : p;
    const int size = take_below ? below : above;
    if (size > max_size) {
      fn(Edge{p, v}, std::string());
      continue;
    }
    std::vector<int> side = tree.side_of(root, p, v);
    std::vector<int> map;
    const Tree piece = tree.induced(side, &map);
    const int local_root = static_cast<int>(std::find(map.begin(), map.end(), root) - map.begin());
    fn(Edge{p, v}, canonical_form(piece, local_root).code);
  }
}

Tree local_tree(const LabeledForest& g, std::span<const int> component, std::vector<int>& local) {
  local.assign(g.n() + 1, -1);
  for (std::size_t i = 0; i < component.size(); ++i) local[component[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (local[e.u] >= 0 && local[e.v] >= 0) edges.push_back({local[e.u], local[e.v]});
  }
  return Tree::from_edges(static_cast<int>(component.size()), edges);
}

}  // namespace

RootedTreeCode pendant_tree_in(const LabeledForest& g, std::span<const int> component, Edge e) {
  if (!g.has_edge(e)) throw std::invalid_argument("edge is not in the graph");
  std::vector<int> local;
  const Tree tree = local_tree(g, component, local);
  const int a = local.at(e.u), b = local.at(e.v);
  if (a < 0 || b < 0) throw std::invalid_argument("edge is not in the given component");
  const int tie = local[*std::min_element(component.begin(), component.end())];
  std::vector<int> side_a = tree.side_of(a, a, b);
  std::vector<int> side_b = tree.side_of(b, a, b);
  bool take_a = side_a.size() < side_b.size() ||
                (side_a.size() == side_b.size() && std::binary_search(side_a.begin(), side_a.end(), tie));
  const auto& side = take_a ? side_a : side_b;
  const int root = take_a ? a : b;
  std::vector<int> map;
  const Tree piece = tree.induced(side, &map);
  const int local_root = static_cast<int>(std::find(map.begin(), map.end(), root) - map.begin());
  CanonicalForm f = canonical_form(piece, local_root);
  return {std::move(f.code), piece.size(), std::move(f.aut)};
}

RootedTreeCode pendant_tree(const LabeledForest& g, Edge e) {
  if (!g.is_tree()) throw InvalidTree("pendant_tree expects a connected graph");
  std::vector<int> all(g.n());
  std::iota(all.begin(), all.end(), 1);
  return pendant_tree_in(g, all, e);
}

std::size_t largest_component_index(const std::vector<std::vector<int>>& components) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < components.size(); ++i) {
    // Components arrive ordered by smallest vertex, so strict > keeps the
    // smallest-vertex winner on ties.
    if (components[i].size() > components[best].size()) best = i;
  }
  return best;
}

std::size_t smallest_component_index(const std::vector<std::vector<int>>& components) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < components.size(); ++i) {
    if (components[i].size() < components[best].size()) best = i;
  }
  // Among equally small components prefer the one holding vertex 1; when none
  // of them does, the first by smallest vertex is kept.
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].size() == components[best].size() && components[i].front() == 1) return i;
  }
  return best;
}

int AlphaStats::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

AlphaStats alpha_stats(const LabeledForest& g, const Catalog& catalog) {
  AlphaStats stats;
  stats.counts.assign(catalog.t0().size(), 0);
  const auto comps = g.components();
  const auto& main = comps[largest_component_index(comps)];
  if (main.size() < 2) return stats;
  std::vector<int> local;
  const Tree tree = local_tree(g, main, local);
  // Size ties inside the component go to the side with its smallest vertex,
  // which is vertex 1 whenever the component contains it.
  for_each_pendant(tree, 0, catalog.t_max(), [&](Edge, const std::string& code) {
    if (code.empty()) return;
    if (auto idx = catalog.t0_index(code)) ++stats.counts[*idx];
  });
  return stats;
}

}  // namespace bridgelab
