#include "bridgelab/treekit.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

namespace bridgelab {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Preorder from root plus the parent of every vertex (-1 for the root).
void preorder(const Tree& tree, int root, std::vector<int>& order, std::vector<int>& parent) {
  const int n = tree.size();
  order.clear();
  order.reserve(n);
  parent.assign(n, -1);
  std::vector<int> stack{root};
  std::vector<char> seen(n, 0);
  seen[root] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& nb = tree.neighbors(v);
    for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
      if (!seen[*it]) {
        seen[*it] = 1;
        parent[*it] = v;
        stack.push_back(*it);
      }
    }
  }
}

}  // namespace

Tree Tree::from_edges(int n, std::span<const Edge> edges) {
  if (n < 1) throw InvalidTree("tree must have at least one vertex");
  if (static_cast<int>(edges.size()) != n - 1) {
    throw InvalidTree("tree on " + std::to_string(n) + " vertices needs " + std::to_string(n - 1) +
                      " edges, got " + std::to_string(edges.size()));
  }
  Tree t;
  t.adj_.assign(n, {});
  DisjointSets sets(n);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n) {
      throw InvalidTree("edge endpoint out of range: {" + std::to_string(e.u) + "," + std::to_string(e.v) + "}");
    }
    if (e.u == e.v) throw InvalidTree("self loop at vertex " + std::to_string(e.u));
    if (!sets.unite(e.u, e.v)) {
      throw InvalidTree("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) + "} closes a cycle");
    }
    t.adj_[e.u].push_back(e.v);
    t.adj_[e.v].push_back(e.u);
  }
  for (auto& nb : t.adj_) std::sort(nb.begin(), nb.end());
  return t;
}

Tree Tree::from_code(std::string_view code) {
  if (code.empty()) throw InvalidTree("empty tree code");
  std::vector<Edge> edges;
  std::vector<int> stack;
  int n = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const char c = code[i];
    if (c == '(') {
      if (stack.empty() && n > 0) throw InvalidTree("tree code has more than one root: " + std::string(code));
      if (!stack.empty()) edges.push_back({stack.back(), n});
      stack.push_back(n++);
    } else if (c == ')') {
      if (stack.empty()) throw InvalidTree("unbalanced tree code: " + std::string(code));
      stack.pop_back();
    } else {
      throw InvalidTree("unexpected character in tree code: " + std::string(code));
    }
  }
  if (!stack.empty()) throw InvalidTree("unbalanced tree code: " + std::string(code));
  return from_edges(n, edges);
}

std::vector<Edge> Tree::edges() const {
  std::vector<Edge> out;
  for (int v = 0; v < size(); ++v) {
    for (int w : adj_[v]) {
      if (v < w) out.push_back({v, w});
    }
  }
  return out;
}

std::vector<int> Tree::side_of(int start, int a, int b) const {
  std::vector<int> out{start};
  std::vector<char> seen(size(), 0);
  seen[start] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int v = out[i];
    for (int w : adj_[v]) {
      if ((v == a && w == b) || (v == b && w == a)) continue;
      if (!seen[w]) {
        seen[w] = 1;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Tree Tree::induced(std::span<const int> vertices, std::vector<int>* mapping) const {
  std::vector<int> local(size(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) local.at(vertices[i]) = static_cast<int>(i);
  std::vector<Edge> edges;
  for (int v : vertices) {
    for (int w : adj_[v]) {
      if (local[w] >= 0 && v < w) edges.push_back({local[v], local[w]});
    }
  }
  if (mapping) mapping->assign(vertices.begin(), vertices.end());
  return from_edges(static_cast<int>(vertices.size()), edges);
}

CanonicalForm canonical_form(const Tree& tree, int root, int marked) {
  const int n = tree.size();
  if (root < 0 || root >= n) throw InvalidTree("root out of range");
  std::vector<int> order, parent;
  preorder(tree, root, order, parent);

  std::vector<std::string> code(n);
  std::vector<BigInt> aut(n);
  std::vector<std::vector<int>> kids(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    auto& ch = kids[v];
    for (int w : tree.neighbors(v)) {
      if (w != parent[v]) ch.push_back(w);
    }
    std::stable_sort(ch.begin(), ch.end(), [&](int a, int b) { return code[a] > code[b]; });
    std::string s(1, v == marked ? '[' : '(');
    BigInt a = 1;
    for (std::size_t i = 0; i < ch.size();) {
      std::size_t j = i;
      while (j < ch.size() && code[ch[j]] == code[ch[i]]) {
        a *= aut[ch[j]];
        s += code[ch[j]];
        ++j;
      }
      if (j - i > 1) a *= factorial(j - i);
      i = j;
    }
    s += v == marked ? ']' : ')';
    code[v] = std::move(s);
    aut[v] = std::move(a);
    // Children strings are no longer needed once folded into the parent.
    for (int w : ch) std::string().swap(code[w]);
  }

  CanonicalForm out;
  out.code = std::move(code[root]);
  out.aut = std::move(aut[root]);
  out.index.assign(n, -1);
  int next = 0;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    out.index[v] = next++;
    for (auto c = kids[v].rbegin(); c != kids[v].rend(); ++c) stack.push_back(*c);
  }
  return out;
}

UnrootedForm unrooted_form(const Tree& tree) {
  const int n = tree.size();
  std::vector<int> order, parent;
  preorder(tree, 0, order, parent);
  std::vector<int> sub(n, 1);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (parent[*it] >= 0) sub[parent[*it]] += sub[*it];
  }
  int best = n + 1;
  std::vector<int> centroids;
  for (int v = 0; v < n; ++v) {
    int worst = n - sub[v];
    for (int w : tree.neighbors(v)) {
      if (w != parent[v]) worst = std::max(worst, sub[w]);
    }
    if (worst < best) {
      best = worst;
      centroids = {v};
    } else if (worst == best) {
      centroids.push_back(v);
    }
  }

  UnrootedForm out;
  CanonicalForm first = canonical_form(tree, centroids[0]);
  if (centroids.size() == 1) {
    out.code = {std::move(first.code), n, std::move(first.aut), CentroidKind::One};
    out.index = std::move(first.index);
    return out;
  }
  CanonicalForm second = canonical_form(tree, centroids[1]);
  // Equal codes here mean some automorphism swaps the two centroids.
  const bool swap_symmetric = first.code == second.code;
  CanonicalForm& chosen = (second.code < first.code) ? second : first;
  BigInt aut = chosen.aut;
  if (swap_symmetric) aut *= 2;
  out.code = {std::move(chosen.code), n, std::move(aut), CentroidKind::Two};
  out.index = std::move(chosen.index);
  return out;
}

RootedTreeCode canonicalize_rooted(int n, std::span<const Edge> edges, int root) {
  const Tree t = Tree::from_edges(n, edges);
  if (root < 0 || root >= n) throw InvalidTree("root " + std::to_string(root) + " is not a vertex");
  CanonicalForm f = canonical_form(t, root);
  return {std::move(f.code), n, std::move(f.aut)};
}

UnrootedTreeCode canonicalize_unrooted(int n, std::span<const Edge> edges) {
  return unrooted_form(Tree::from_edges(n, edges)).code;
}

RootedTreeCode parse_rooted(std::string_view code) {
  const Tree t = Tree::from_code(code);
  CanonicalForm f = canonical_form(t, 0);
  return {std::move(f.code), t.size(), std::move(f.aut)};
}

UnrootedTreeCode parse_unrooted(std::string_view code) { return unrooted_form(Tree::from_code(code)).code; }

namespace {

std::mutex enumeration_mutex;
std::vector<std::vector<RootedTreeCode>> rooted_cache;  // rooted_cache[s]: trees of size s

void extend_rooted_cache(int k) {
  if (rooted_cache.empty()) {
    rooted_cache.resize(2);
    rooted_cache[1].push_back({"()", 1, 1});
  }
  for (int n = static_cast<int>(rooted_cache.size()); n <= k; ++n) {
    std::vector<const RootedTreeCode*> pool;
    for (int s = 1; s < n; ++s) {
      for (const auto& t : rooted_cache[s]) pool.push_back(&t);
    }
    std::sort(pool.begin(), pool.end(), [](auto* a, auto* b) { return a->code > b->code; });

    std::vector<RootedTreeCode> level;
    std::vector<std::size_t> chosen;
    // Children are picked in non-increasing code order, so every multiset is
    // produced exactly once and the concatenation is already canonical.
    auto recurse = [&](auto&& self, std::size_t start, int remaining) -> void {
      if (remaining == 0) {
        RootedTreeCode t{"(", n, 1};
        for (std::size_t i = 0; i < chosen.size();) {
          std::size_t j = i;
          while (j < chosen.size() && chosen[j] == chosen[i]) {
            t.code += pool[chosen[j]]->code;
            t.aut_r *= pool[chosen[j]]->aut_r;
            ++j;
          }
          if (j - i > 1) t.aut_r *= factorial(j - i);
          i = j;
        }
        t.code += ')';
        level.push_back(std::move(t));
        return;
      }
      for (std::size_t i = start; i < pool.size(); ++i) {
        if (pool[i]->size > remaining) continue;
        chosen.push_back(i);
        self(self, i, remaining - pool[i]->size);
        chosen.pop_back();
      }
    };
    recurse(recurse, 0, n - 1);
    std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
    rooted_cache.push_back(std::move(level));
  }
}

void check_enumeration_bound(int k, const EnumerationLimits& limits) {
  if (k < 1) throw std::invalid_argument("size bound must be at least 1");
  if (k > limits.max_size) {
    throw CapacityError("size bound " + std::to_string(k) + " exceeds the enumeration limit " +
                        std::to_string(limits.max_size));
  }
}

}  // namespace

std::vector<RootedTreeCode> enumerate_rooted(int k, EnumerationLimits limits) {
  check_enumeration_bound(k, limits);
  std::lock_guard lock(enumeration_mutex);
  extend_rooted_cache(k);
  std::vector<RootedTreeCode> out;
  for (int s = 1; s <= k; ++s) out.insert(out.end(), rooted_cache[s].begin(), rooted_cache[s].end());
  return out;
}

std::vector<UnrootedTreeCode> enumerate_unrooted(int k, EnumerationLimits limits) {
  std::vector<UnrootedTreeCode> out;
  std::set<std::string> seen;
  for (const auto& t : enumerate_rooted(k, limits)) {
    UnrootedTreeCode u = parse_unrooted(t.code);
    if (seen.insert(u.code).second) out.push_back(std::move(u));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t rooted_vertex_orbit_size(std::string_view code, int index) {
  const Tree t = Tree::from_code(code);
  if (index < 0 || index >= t.size()) throw std::out_of_range("vertex index out of range");
  const std::string target = canonical_form(t, 0, index).code;
  std::int64_t count = 0;
  for (int w = 0; w < t.size(); ++w) count += canonical_form(t, 0, w).code == target;
  return count;
}

std::int64_t unrooted_vertex_orbit_size(std::string_view code, int index) {
  const Tree t = Tree::from_code(code);
  if (index < 0 || index >= t.size()) throw std::out_of_range("vertex index out of range");
  const std::string target = canonical_form(t, index).code;
  std::int64_t count = 0;
  for (int w = 0; w < t.size(); ++w) count += canonical_form(t, w).code == target;
  return count;
}

std::vector<EdgeSplit> splits(const RootedTreeCode& t) {
  const Tree tree = Tree::from_code(t.code);
  const int n = tree.size();
  if (n < 2) throw InvalidTree("single-vertex tree has no edges to split");
  const RootedTreeCode parent_code = parse_rooted(t.code);

  std::vector<int> order, parent;
  preorder(tree, 0, order, parent);

  // Orbits of edges under rooted automorphisms, keyed by the tree with the
  // child endpoint marked; representative = smallest preorder index.
  std::map<std::string, std::vector<int>> orbits;
  std::vector<std::string> orbit_order;
  for (int v = 1; v < n; ++v) {
    std::string key = canonical_form(tree, 0, v).code;
    auto [it, inserted] = orbits.try_emplace(key);
    if (inserted) orbit_order.push_back(key);
    it->second.push_back(v);
  }

  std::vector<EdgeSplit> out;
  for (const auto& key : orbit_order) {
    const auto& members = orbits[key];
    const int v = members.front();
    const int p = parent[v];
    const std::vector<int> plus_side = tree.side_of(v, p, v);
    std::vector<int> minus_side;
    std::vector<char> in_plus(n, 0);
    for (int w : plus_side) in_plus[w] = 1;
    for (int w = 0; w < n; ++w) {
      if (!in_plus[w]) minus_side.push_back(w);
    }

    std::vector<int> minus_map, plus_map;
    const Tree minus_tree = tree.induced(minus_side, &minus_map);
    const Tree plus_tree = tree.induced(plus_side, &plus_map);
    auto local = [](const std::vector<int>& map, int original) {
      return static_cast<int>(std::find(map.begin(), map.end(), original) - map.begin());
    };
    const int minus_root = local(minus_map, 0);
    const int v_minus = local(minus_map, p);
    const int v_plus = local(plus_map, v);

    CanonicalForm minus_form = canonical_form(minus_tree, minus_root);
    UnrootedForm plus_form = unrooted_form(plus_tree);

    EdgeSplit s;
    s.parent = parent_code;
    s.t_minus = {minus_form.code, minus_tree.size(), minus_form.aut};
    s.u_plus = plus_form.code;
    s.m_edge = static_cast<std::int64_t>(members.size());
    s.edge_child_index = v;
    s.v_minus_index = minus_form.index[v_minus];
    s.v_plus_index = plus_form.index[v_plus];

    const std::string minus_key = canonical_form(minus_tree, minus_root, v_minus).code;
    for (int w = 0; w < minus_tree.size(); ++w) s.m_vminus += canonical_form(minus_tree, minus_root, w).code == minus_key;
    const std::string plus_key = canonical_form(plus_tree, v_plus).code;
    for (int w = 0; w < plus_tree.size(); ++w) s.n_vplus += canonical_form(plus_tree, w).code == plus_key;
    out.push_back(std::move(s));
  }
  return out;
}

AutIdentityCertificate verify_aut_identity(const EdgeSplit& s) {
  AutIdentityCertificate c;
  c.lhs = make_rational(BigInt(static_cast<long>(s.m_edge)), s.parent.aut_r);
  c.rhs = make_rational(BigInt(static_cast<long>(s.m_vminus * s.n_vplus)), s.t_minus.aut_r * s.u_plus.aut_u);
  c.holds = c.lhs == c.rhs;
  return c;
}

RootedTreeCode attach(const RootedTreeCode& t_minus, int v_index, const UnrootedTreeCode& u, int u_index) {
  const Tree a = Tree::from_code(t_minus.code);
  const Tree b = Tree::from_code(u.code);
  if (v_index < 0 || v_index >= a.size()) {
    throw std::out_of_range("attach: vertex index " + std::to_string(v_index) + " out of range for " + t_minus.code);
  }
  if (u_index < 0 || u_index >= b.size()) {
    throw std::out_of_range("attach: vertex index " + std::to_string(u_index) + " out of range for " + u.code);
  }
  std::vector<Edge> edges = a.edges();
  for (const Edge& e : b.edges()) edges.push_back({e.u + a.size(), e.v + a.size()});
  edges.push_back({v_index, a.size() + u_index});
  return canonicalize_rooted(a.size() + b.size(), edges, 0);
}

CayleyCheck cayley_identity_check(int n) {
  if (n < 1) throw std::invalid_argument("cayley_identity_check: n must be positive");
  CayleyCheck c;
  const BigInt nfact = factorial(n);
  c.rooted_sum = 0;
  for (const auto& t : enumerate_rooted(n)) {
    if (t.size == n) c.rooted_sum += nfact / t.aut_r;
  }
  c.unrooted_sum = 0;
  for (const auto& u : enumerate_unrooted(n)) {
    if (u.size == n) c.unrooted_sum += nfact / u.aut_u;
  }
  c.rooted_expected = power(n, n - 1);
  c.unrooted_expected = cayley_count(n);
  c.holds = c.rooted_sum == c.rooted_expected && c.unrooted_sum == c.unrooted_expected;
  return c;
}

Catalog::Catalog(std::vector<RootedTreeCode> t0, std::vector<UnrootedTreeCode> u0)
    : t0_(std::move(t0)), u0_(std::move(u0)) {
  for (std::size_t i = 0; i < t0_.size(); ++i) {
    if (!t0_lookup_.emplace(t0_[i].code, i).second) throw CatalogError("duplicate tree in t0: " + t0_[i].code);
    t_max_ = std::max(t_max_, t0_[i].size);
  }
  for (std::size_t i = 0; i < u0_.size(); ++i) {
    if (!u0_lookup_.emplace(u0_[i].code, i).second) throw CatalogError("duplicate tree in u0: " + u0_[i].code);
    u_max_ = std::max(u_max_, u0_[i].size);
  }
  if (!u0_lookup_.contains("()")) throw CatalogError("u0 must contain the single-vertex tree");
  // Closure under rooted inclusion is equivalent to closure under deleting a
  // non-root leaf.
  for (const auto& t : t0_) {
    if (t.size < 2) continue;
    const Tree tree = Tree::from_code(t.code);
    for (int v = 1; v < tree.size(); ++v) {
      if (tree.neighbors(v).size() != 1) continue;
      std::vector<int> keep;
      for (int w = 0; w < tree.size(); ++w) {
        if (w != v) keep.push_back(w);
      }
      std::vector<int> map;
      const Tree smaller = tree.induced(keep, &map);
      const std::string sub = canonical_form(smaller, 0).code;
      if (!t0_lookup_.contains(sub)) {
        throw CatalogError("t0 is not closed under rooted inclusion: " + t.code + " contains " + sub);
      }
    }
  }
}

Catalog Catalog::standard(int t_max, int u_max) {
  if (t_max < 1 || u_max < 1) throw CatalogError("t_max and u_max must be at least 1");
  return Catalog(enumerate_rooted(t_max), enumerate_unrooted(u_max));
}

Catalog Catalog::from_codes(std::span<const std::string> t0, std::span<const std::string> u0) {
  std::vector<RootedTreeCode> roots;
  for (const auto& c : t0) roots.push_back(parse_rooted(c));
  std::vector<UnrootedTreeCode> unrooted;
  for (const auto& c : u0) unrooted.push_back(parse_unrooted(c));
  std::sort(roots.begin(), roots.end());
  std::sort(unrooted.begin(), unrooted.end());
  return Catalog(std::move(roots), std::move(unrooted));
}

std::optional<std::size_t> Catalog::t0_index(std::string_view rooted_code) const {
  auto it = t0_lookup_.find(std::string(rooted_code));
  if (it == t0_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Catalog::u0_index(std::string_view unrooted_code) const {
  auto it = u0_lookup_.find(std::string(unrooted_code));
  if (it == u0_lookup_.end()) return std::nullopt;
  return it->second;
}

}  // namespace bridgelab
