#include "bridgelab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bridgelab {

WeightVector::WeightVector(std::vector<Rational> values) : values_(std::move(values)) {
  for (auto& v : values_) {
    v.canonicalize();
    if (v < 0) throw std::invalid_argument("weights must be non-negative, got " + to_string(v));
  }
}

WeightVector WeightVector::zeros(std::size_t d) { return WeightVector(std::vector<Rational>(d, Rational(0))); }

WeightVector WeightVector::from_double(std::span<const double> values) {
  std::vector<Rational> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(rational_from_double(v));
  return WeightVector(std::move(out));
}

std::vector<double> WeightVector::to_double() const {
  std::vector<double> out;
  out.reserve(values_.size());
  for (const auto& v : values_) out.push_back(v.get_d());
  return out;
}

bool WeightVector::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Rational& v) { return v == 0; });
}

void check_weights(const WeightVector& z, const Catalog& catalog) {
  if (z.size() != catalog.u0().size()) {
    throw std::invalid_argument("weight vector has " + std::to_string(z.size()) + " entries but u0 has " +
                                std::to_string(catalog.u0().size()));
  }
}

namespace {

struct SideCodes {
  std::vector<int> a_side, b_side;
  std::string a_code, b_code;
};

std::string unrooted_code_of(const Tree& tree, std::span<const int> vertices) {
  return unrooted_form(tree.induced(vertices)).code.code;
}

SideCodes split_at(const Tree& tree, Edge e) {
  SideCodes s;
  s.a_side = tree.side_of(e.u, e.u, e.v);
  s.b_side = tree.side_of(e.v, e.u, e.v);
  s.a_code = unrooted_code_of(tree, s.a_side);
  s.b_code = unrooted_code_of(tree, s.b_side);
  return s;
}

int position(const std::vector<int>& map, int original) {
  return static_cast<int>(std::find(map.begin(), map.end(), original) - map.begin());
}

// A piece joined on during the build: its vertices in the ambient tree, the
// endpoint inside the piece and the endpoint in the tree built before it.
struct Join {
  std::vector<int> vertices;
  std::size_t piece = 0;
  int inside = 0;
  int outside = 0;
};

// Converts a labeled build (base piece, then joins in order) on `tree` into a
// trace addressed by canonical indices.
DecompositionTrace labeled_to_trace(const Tree& tree, const Catalog& catalog, const std::vector<int>& base,
                                    const std::vector<Join>& joins) {
  DecompositionTrace trace;
  std::vector<int> map;
  const Tree base_tree = tree.induced(base, &map);
  const UnrootedForm bf = unrooted_form(base_tree);
  int root = -1;
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (bf.index[i] == 0) root = map[i];
  }
  trace.steps.push_back({*catalog.u0_index(bf.code.code), -1, -1});
  std::vector<int> current = base;
  for (const Join& j : joins) {
    const Tree cur = tree.induced(current, &map);
    const CanonicalForm cf = canonical_form(cur, position(map, root));
    const int to_index = cf.index[position(map, j.outside)];
    std::vector<int> pmap;
    const Tree piece = tree.induced(j.vertices, &pmap);
    const UnrootedForm pf = unrooted_form(piece);
    trace.steps.push_back({j.piece, pf.index[position(pmap, j.inside)], to_index});
    std::vector<int> merged;
    std::merge(current.begin(), current.end(), j.vertices.begin(), j.vertices.end(), std::back_inserter(merged));
    current = std::move(merged);
  }
  return trace;
}

}  // namespace

RootedTreeCode DecompositionTrace::replay(const Catalog& catalog) const {
  if (steps.empty()) throw std::invalid_argument("cannot replay an empty decomposition");
  RootedTreeCode current = parse_rooted(catalog.u0().at(steps.front().piece).code);
  for (std::size_t i = 1; i < steps.size(); ++i) {
    current = attach(current, steps[i].to_index, catalog.u0().at(steps[i].piece), steps[i].from_index);
  }
  return current;
}

Rational DecompositionTrace::weight(const WeightVector& z) const {
  Rational w = 1;
  for (const auto& s : steps) w *= z[s.piece];
  return w;
}

OmegaTable::OmegaTable(const Catalog& catalog, WeightVector z) : catalog_(catalog), z_(std::move(z)) {
  check_weights(z_, catalog_);
}

OmegaTable::Entry OmegaTable::entry(const std::string& code) {
  {
    std::lock_guard lock(mutex_);
    auto it = memo_.find(code);
    if (it != memo_.end()) return it->second;
  }
  Entry best;
  best.value = 0;
  if (auto idx = catalog_.u0_index(code)) {
    best.value = z_[*idx];
    best.self = true;
  }
  const Tree tree = Tree::from_code(code);
  for (const Edge& e : tree.edges()) {
    const SideCodes s = split_at(tree, e);
    auto consider = [&](const std::string& piece_code, const std::string& rest_code) {
      auto idx = catalog_.u0_index(piece_code);
      if (!idx || z_[*idx] == 0) return;
      Rational v = z_[*idx] * entry(rest_code).value;
      if (v > best.value) {
        best.value = std::move(v);
        best.self = false;
        best.piece = *idx;
        best.rest = rest_code;
      }
    };
    consider(s.a_code, s.b_code);
    consider(s.b_code, s.a_code);
  }
  std::lock_guard lock(mutex_);
  return memo_.emplace(code, std::move(best)).first->second;
}

Rational OmegaTable::value(std::string_view code) { return entry(parse_unrooted(code).code).value; }

OmegaResult OmegaTable::evaluate(std::string_view code) {
  const std::string canonical = parse_unrooted(code).code;
  const Tree tree = Tree::from_code(canonical);
  std::vector<int> current(tree.size());
  std::iota(current.begin(), current.end(), 0);
  std::string cur = canonical;
  std::vector<Join> removed;
  const Rational total = entry(canonical).value;
  if (total == 0) return {Rational(0), {}};
  for (;;) {
    const Entry e = entry(cur);
    if (e.self) break;
    std::vector<int> map;
    const Tree sub = tree.induced(current, &map);
    const std::string& piece_code = catalog_.u0()[e.piece].code;
    bool found = false;
    for (const Edge& edge : sub.edges()) {
      const SideCodes s = split_at(sub, edge);
      for (int flip = 0; flip < 2 && !found; ++flip) {
        const auto& p_side = flip ? s.b_side : s.a_side;
        const auto& r_side = flip ? s.a_side : s.b_side;
        const auto& p_code = flip ? s.b_code : s.a_code;
        const auto& r_code = flip ? s.a_code : s.b_code;
        if (p_code != piece_code || r_code != e.rest) continue;
        Join j;
        for (int v : p_side) j.vertices.push_back(map[v]);
        std::sort(j.vertices.begin(), j.vertices.end());
        j.piece = e.piece;
        j.inside = map[flip ? edge.v : edge.u];
        j.outside = map[flip ? edge.u : edge.v];
        removed.push_back(std::move(j));
        std::vector<int> rest;
        for (int v : r_side) rest.push_back(map[v]);
        std::sort(rest.begin(), rest.end());
        current = std::move(rest);
        found = true;
      }
      if (found) break;
    }
    if (!found) throw std::logic_error("omega trace reconstruction failed for " + canonical);
    cur = e.rest;
  }
  std::reverse(removed.begin(), removed.end());
  return {total, labeled_to_trace(tree, catalog_, current, removed)};
}

OmegaResult omega(std::string_view code, const WeightVector& z, const Catalog& catalog) {
  OmegaTable table(catalog, z);
  return table.evaluate(code);
}

std::vector<DecompositionTrace> decompositions_bruteforce(std::string_view code, const Catalog& catalog) {
  const std::string canonical = parse_unrooted(code).code;
  const Tree tree = Tree::from_code(canonical);
  if (tree.size() > kMaxBruteforceSize) {
    throw CapacityError("decompositions_bruteforce supports trees with at most " +
                        std::to_string(kMaxBruteforceSize) + " vertices");
  }
  std::vector<DecompositionTrace> out;
  std::vector<Join> stack;  // removals, outermost first
  auto recurse = [&](auto&& self, const std::vector<int>& vertices) -> void {
    std::vector<int> map;
    const Tree sub = tree.induced(vertices, &map);
    if (catalog.u0_index(unrooted_form(sub).code.code)) {
      std::vector<Join> joins(stack.rbegin(), stack.rend());
      out.push_back(labeled_to_trace(tree, catalog, vertices, joins));
    }
    for (const Edge& edge : sub.edges()) {
      const SideCodes s = split_at(sub, edge);
      for (int flip = 0; flip < 2; ++flip) {
        const auto& p_side = flip ? s.b_side : s.a_side;
        const auto& r_side = flip ? s.a_side : s.b_side;
        auto idx = catalog.u0_index(flip ? s.b_code : s.a_code);
        if (!idx) continue;
        Join j;
        for (int v : p_side) j.vertices.push_back(map[v]);
        std::sort(j.vertices.begin(), j.vertices.end());
        j.piece = *idx;
        j.inside = map[flip ? edge.v : edge.u];
        j.outside = map[flip ? edge.u : edge.v];
        std::vector<int> rest;
        for (int v : r_side) rest.push_back(map[v]);
        std::sort(rest.begin(), rest.end());
        stack.push_back(std::move(j));
        self(self, rest);
        stack.pop_back();
      }
    }
  };
  std::vector<int> all(tree.size());
  std::iota(all.begin(), all.end(), 0);
  recurse(recurse, all);
  return out;
}

TreeFamily::TreeFamily(const Catalog& catalog, int k) : catalog_(catalog), k_(k) {
  if (k < 1) throw std::invalid_argument("TreeFamily: k must be positive");
  for (auto& u : enumerate_unrooted(k)) {
    Node node;
    node.self_piece = catalog.u0_index(u.code);
    node.tree = std::move(u);
    node.rooted_weight = 0;
    node_lookup_.emplace(node.tree.code, nodes_.size());
    nodes_.push_back(std::move(node));
  }
  for (auto& node : nodes_) {
    const Tree tree = Tree::from_code(node.tree.code);
    for (const Edge& e : tree.edges()) {
      const SideCodes s = split_at(tree, e);
      if (auto p = catalog.u0_index(s.a_code)) node.transitions.emplace_back(*p, node_lookup_.at(s.b_code));
      if (auto p = catalog.u0_index(s.b_code)) node.transitions.emplace_back(*p, node_lookup_.at(s.a_code));
    }
    std::sort(node.transitions.begin(), node.transitions.end());
    node.transitions.erase(std::unique(node.transitions.begin(), node.transitions.end()), node.transitions.end());
  }
  rooted_ = enumerate_rooted(k);
  rooted_node_.reserve(rooted_.size());
  for (std::size_t i = 0; i < rooted_.size(); ++i) {
    const std::size_t idx = node_lookup_.at(parse_unrooted(rooted_[i].code).code);
    rooted_node_.push_back(idx);
    rooted_lookup_.emplace(rooted_[i].code, i);
    nodes_[idx].rooted_weight += make_rational(1, rooted_[i].aut_r);
  }
  for (auto& node : nodes_) node.rooted_weight_d = node.rooted_weight.get_d();
}

std::optional<std::size_t> TreeFamily::node_index(std::string_view code) const {
  auto it = node_lookup_.find(std::string(code));
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> TreeFamily::rooted_index(std::string_view code) const {
  auto it = rooted_lookup_.find(std::string(code));
  if (it == rooted_lookup_.end()) return std::nullopt;
  return it->second;
}

template <class Scalar>
std::vector<Scalar> TreeFamily::omega_all(const std::vector<Scalar>& z) const {
  if (z.size() != catalog_.u0().size()) throw std::invalid_argument("weight vector does not match u0");
  // Nodes are ordered by size, so every transition target is already final.
  std::vector<Scalar> values(nodes_.size(), Scalar(0));
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    Scalar best = node.self_piece ? z[*node.self_piece] : Scalar(0);
    for (const auto& [piece, rest] : node.transitions) {
      Scalar v = z[piece] * values[rest];
      if (v > best) best = v;
    }
    values[i] = best;
  }
  return values;
}

template std::vector<Rational> TreeFamily::omega_all<Rational>(const std::vector<Rational>&) const;
template std::vector<double> TreeFamily::omega_all<double>(const std::vector<double>&) const;

std::vector<Rational> TreeFamily::rooted_by_size(const WeightVector& z) const {
  check_weights(z, catalog_);
  const auto w = omega_all(z.values());
  std::vector<Rational> c(k_ + 1, Rational(0));
  for (std::size_t i = 0; i < rooted_.size(); ++i) {
    const auto& om = w[rooted_node_[i]];
    if (om != 0) c[rooted_[i].size] += om / Rational(rooted_[i].aut_r);
  }
  return c;
}

std::vector<double> TreeFamily::rooted_by_size(const std::vector<double>& z) const {
  const auto w = omega_all(z);
  std::vector<double> c(k_ + 1, 0.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) c[nodes_[i].tree.size] += w[i] * nodes_[i].rooted_weight_d;
  return c;
}

std::vector<Rational> TreeFamily::rooted_by_size_via_unrooted(const WeightVector& z) const {
  check_weights(z, catalog_);
  const auto w = omega_all(z.values());
  std::vector<Rational> c(k_ + 1, Rational(0));
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& t = nodes_[i].tree;
    c[t.size] += w[i] * make_rational(t.size, t.aut_u);
  }
  return c;
}

std::vector<Rational> TreeFamily::unrooted_by_size(const WeightVector& z) const {
  check_weights(z, catalog_);
  const auto w = omega_all(z.values());
  std::vector<Rational> c(k_ + 1, Rational(0));
  for (std::size_t i = 0; i < nodes_.size(); ++i) c[nodes_[i].tree.size] += w[i] / Rational(nodes_[i].tree.aut_u);
  return c;
}

Rational TreeFamily::rooted_sum(std::span<const RootedTreeCode> trees, const WeightVector& z) const {
  check_weights(z, catalog_);
  const auto w = omega_all(z.values());
  Rational sum = 0;
  for (const auto& t : trees) {
    auto idx = rooted_index(t.code);
    if (!idx) throw std::out_of_range("tree " + t.code + " is larger than the family bound");
    sum += w[rooted_node_[*idx]] / Rational(t.aut_r);
  }
  return sum;
}

namespace {
Rational sum_upto(const std::vector<Rational>& c, int k) {
  Rational s = 0;
  for (int i = 1; i <= k && i < static_cast<int>(c.size()); ++i) s += c[i];
  return s;
}
}  // namespace

Rational Y_trunc(const WeightVector& z, int k, const Catalog& catalog) {
  check_weights(z, catalog);
  TreeFamily family(catalog, k);
  return sum_upto(family.rooted_by_size(z), k);
}

Rational Y_eq(const WeightVector& z, int k, const Catalog& catalog) {
  check_weights(z, catalog);
  TreeFamily family(catalog, k);
  return family.rooted_by_size(z)[k];
}

Rational Y_T0(const WeightVector& z, std::span<const RootedTreeCode> t0, const Catalog& catalog) {
  check_weights(z, catalog);
  std::vector<std::string> t_codes, u_codes;
  for (const auto& t : t0) t_codes.push_back(t.code);
  for (const auto& u : catalog.u0()) u_codes.push_back(u.code);
  // Validates inclusion-closure of t0.
  (void)Catalog::from_codes(t_codes, u_codes);
  OmegaTable table(catalog, z);
  Rational sum = 0;
  for (const auto& t : t0) sum += table.value(t.code) / Rational(t.aut_r);
  return sum;
}

UnrootedSum Yu_trunc(const WeightVector& z, int k, const Catalog& catalog) {
  check_weights(z, catalog);
  TreeFamily family(catalog, k);
  UnrootedSum out;
  out.value = sum_upto(family.unrooted_by_size(z), k);
  const auto by_size = family.rooted_by_size(z);
  out.rooted_form = 0;
  for (int s = 1; s <= k; ++s) out.rooted_form += by_size[s] / s;
  if (out.value != out.rooted_form) {
    throw std::logic_error("unrooted partition function mismatch: " + to_string(out.value) + " vs " +
                           to_string(out.rooted_form));
  }
  return out;
}

Rational Ytilde_u(const WeightVector& z, const Catalog& catalog) {
  check_weights(z, catalog);
  Rational sum = 0;
  for (std::size_t i = 0; i < z.size(); ++i) sum += z[i] / Rational(catalog.u0()[i].aut_u);
  return sum;
}

Rational Yu_U0(const WeightVector& z, const Catalog& catalog) {
  check_weights(z, catalog);
  OmegaTable table(catalog, z);
  Rational sum = 0;
  for (const auto& u : catalog.u0()) sum += table.value(u.code) / Rational(u.aut_u);
  return sum;
}

WeightVector scaled_mul(const Rational& lambda, const WeightVector& z, const Catalog& catalog) {
  check_weights(z, catalog);
  if (lambda < 0) throw std::invalid_argument("scaled_mul: lambda must be non-negative");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    Rational p;
    mpz_pow_ui(p.get_num_mpz_t(), lambda.get_num_mpz_t(), catalog.u0()[i].size);
    mpz_pow_ui(p.get_den_mpz_t(), lambda.get_den_mpz_t(), catalog.u0()[i].size);
    out.push_back(p * z[i]);
  }
  return WeightVector(std::move(out));
}

std::vector<double> scaled_mul(double lambda, const std::vector<double>& z, const Catalog& catalog) {
  if (z.size() != catalog.u0().size()) throw std::invalid_argument("weight vector does not match u0");
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::pow(lambda, catalog.u0()[i].size) * z[i];
  return out;
}

WeightVector closure(const WeightVector& z, const Catalog& catalog) {
  OmegaTable table(catalog, z);
  std::vector<Rational> out;
  for (const auto& u : catalog.u0()) out.push_back(table.value(u.code));
  return WeightVector(std::move(out));
}

DissymmetryReport verify_dissymmetry_trunc(const WeightVector& z, const TreeFamily& family) {
  const int k = family.k();
  if (k < 2) throw std::invalid_argument("dissymmetry check needs k >= 2");
  DissymmetryReport r;
  r.k = k;
  const auto rooted = family.rooted_by_size(z);
  const auto unrooted = family.unrooted_by_size(z);
  r.y = sum_upto(rooted, k);
  r.yu = sum_upto(unrooted, k);
  r.y_half = sum_upto(rooted, k / 2);
  r.lhs = r.y - r.yu;
  r.rhs = r.y_half * r.y_half / 2;
  r.holds = r.lhs >= r.rhs;
  return r;
}

DissymmetryReport verify_dissymmetry_trunc(const WeightVector& z, int k, const Catalog& catalog) {
  check_weights(z, catalog);
  if (k < 2) throw std::invalid_argument("dissymmetry check needs k >= 2");
  TreeFamily family(catalog, k);
  return verify_dissymmetry_trunc(z, family);
}

SupermultiplicativityReport verify_supermultiplicativity(std::string_view code, const WeightVector& z,
                                                         const Catalog& catalog) {
  const std::string canonical = parse_unrooted(code).code;
  const Tree tree = Tree::from_code(canonical);
  if (tree.size() < 2) throw std::invalid_argument("supermultiplicativity needs a tree with an edge");
  OmegaTable table(catalog, z);
  SupermultiplicativityReport r;
  const Rational whole = table.value(canonical);
  for (const Edge& e : tree.edges()) {
    const SideCodes s = split_at(tree, e);
    SupermultiplicativityReport::EdgeCheck c;
    c.edge = e;
    c.left = s.a_code;
    c.right = s.b_code;
    c.whole = whole;
    c.product = table.value(s.a_code) * table.value(s.b_code);
    c.holds = c.whole >= c.product;
    r.holds = r.holds && c.holds;
    r.edges.push_back(std::move(c));
  }
  return r;
}

Rational single_variable_Y(const Rational& x, int k) {
  Rational sum = 0, xn = 1;
  for (int n = 1; n <= k; ++n) {
    xn *= x;
    sum += xn * make_rational(power(n, n - 1), factorial(n));
  }
  return sum;
}

Rational single_variable_Yu(const Rational& x, int k) {
  Rational sum = 0, xn = 1;
  for (int n = 1; n <= k; ++n) {
    xn *= x;
    sum += xn * make_rational(cayley_count(n), factorial(n));
  }
  return sum;
}

double single_variable_Y(double x, int k) {
  double sum = 0.0;
  for (int n = 1; n <= k; ++n) {
    sum += std::exp(n * std::log(x) + (n - 1) * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0));
  }
  return x > 0 ? sum : 0.0;
}

}  // namespace bridgelab
