#include "bridgelab/classes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bridgelab {

ForestClass::ForestClass(int n, std::vector<LabeledForest> members, std::string provenance)
    : n_(n), members_(std::move(members)), provenance_(std::move(provenance)) {
  if (n < 1) throw std::invalid_argument("forest class needs n >= 1");
  if (n > kMaxMaskVertices) throw CapacityError("explicit forest classes support n <= 11");
  for (const auto& g : members_) {
    if (g.n() != n) throw std::invalid_argument("forest class members must all have n = " + std::to_string(n));
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  masks_.reserve(members_.size());
  for (const auto& g : members_) masks_.insert(g.edge_mask());
}

ForestClass ForestClass::all_forests(int n) {
  return ForestClass(n, enumerate_forests(n), "all-forests(n=" + std::to_string(n) + ")");
}

bool ForestClass::contains(const LabeledForest& g) const { return g.n() == n_ && masks_.contains(g.edge_mask()); }

namespace {

// Labels of the components of g, indexed by vertex (1-based).
std::vector<int> component_labels(const LabeledForest& g) {
  std::vector<int> label(g.n() + 1, -1);
  const auto comps = g.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (int v : comps[i]) label[v] = static_cast<int>(i);
  }
  return label;
}

}  // namespace

BridgeAddability is_bridge_addable(const ForestClass& c) {
  BridgeAddability r;
  const int n = c.n();
  for (const auto& g : c.members()) {
    const auto label = component_labels(g);
    const std::uint64_t mask = g.edge_mask();
    for (int u = 1; u <= n; ++u) {
      for (int v = u + 1; v <= n; ++v) {
        if (label[u] == label[v]) continue;
        const LabeledForest bigger = LabeledForest::from_mask(n, mask | std::uint64_t{1} << edge_bit(n, {u, v}));
        if (!c.contains(bigger)) {
          r.holds = false;
          r.witness = g;
          r.witness_edge = Edge{u, v};
          return r;
        }
      }
    }
  }
  return r;
}

ForestClass bridge_addable_closure(std::span<const LabeledForest> seed, std::string provenance) {
  if (seed.empty()) throw std::invalid_argument("closure needs at least one seed forest");
  const int n = seed.front().n();
  std::set<std::uint64_t> seen;
  std::deque<std::uint64_t> queue;
  for (const auto& g : seed) {
    if (g.n() != n) throw std::invalid_argument("closure seeds must share the same n");
    if (seen.insert(g.edge_mask()).second) queue.push_back(g.edge_mask());
  }
  while (!queue.empty()) {
    const std::uint64_t mask = queue.front();
    queue.pop_front();
    const auto label = component_labels(LabeledForest::from_mask(n, mask));
    for (int u = 1; u <= n; ++u) {
      for (int v = u + 1; v <= n; ++v) {
        if (label[u] == label[v]) continue;
        const std::uint64_t next = mask | std::uint64_t{1} << edge_bit(n, {u, v});
        if (seen.insert(next).second) queue.push_back(next);
      }
    }
  }
  std::vector<LabeledForest> members;
  members.reserve(seen.size());
  for (auto m : seen) members.push_back(LabeledForest::from_mask(n, m));
  return ForestClass(n, std::move(members), std::move(provenance));
}

ForestClass random_bridge_addable_class(int n, std::uint64_t seed) {
  Rng rng = derive_stream(seed, static_cast<std::uint64_t>(n));
  const int seeds = 1 + static_cast<int>(uniform_below(rng, 3));
  std::vector<int> vertices(n);
  std::iota(vertices.begin(), vertices.end(), 1);
  std::vector<LabeledForest> forests;
  for (int i = 0; i < seeds; ++i) {
    std::vector<Edge> kept;
    for (const Edge& e : random_tree_on(vertices, rng)) {
      if (uniform_below(rng, 2) == 1) kept.push_back(e);
    }
    forests.emplace_back(n, std::move(kept));
  }
  return bridge_addable_closure(forests, "random-closure(n=" + std::to_string(n) + ",seed=" + std::to_string(seed) + ")");
}

nlohmann::json class_to_json(const ForestClass& c) {
  nlohmann::json forests = nlohmann::json::array();
  for (const auto& g : c.members()) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
    forests.push_back(std::move(edges));
  }
  return {{"n", c.n()}, {"forests", std::move(forests)}};
}

ForestClass class_from_json(const nlohmann::json& j, std::string provenance) {
  if (!j.is_object() || !j.contains("n") || !j.contains("forests")) {
    throw std::invalid_argument("class file must be an object with \"n\" and \"forests\"");
  }
  const int n = j.at("n").get<int>();
  std::vector<LabeledForest> members;
  for (const auto& f : j.at("forests")) {
    std::vector<Edge> edges;
    for (const auto& e : f) {
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("edges must be [u, v] pairs");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    members.emplace_back(n, std::move(edges));
  }
  return ForestClass(n, std::move(members), std::move(provenance));
}

ForestClass load_class(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("class file " + path.string() + " is not valid JSON: " + e.what());
  }
  return class_from_json(j, "file:" + path.string());
}

void save_class(const ForestClass& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write class file " + path.string());
  out << class_to_json(c).dump() << '\n';
}

bool BoxSpec::contains(std::span<const int> alpha) const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (alpha[i] < lower[i] || alpha[i] >= lower[i] + w) return false;
  }
  return true;
}

bool BoxSpec::in_neighbourhood(std::span<const int> alpha) const {
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (alpha[i] < lower[i] - q || alpha[i] >= lower[i] + w + q) return false;
  }
  return true;
}

ClassHistogram::ClassHistogram(const ForestClass& c, const Catalog& catalog)
    : n_(c.n()), dims_(catalog.t0().size()), component_counts_(c.n() + 1, 0), b_points_(catalog.u0().size()) {
  for (const auto& g : c.members()) {
    const int k = g.component_count();
    ++component_counts_[k];
    if (k > 2) continue;
    const auto stats = alpha_stats(g, catalog);
    if (k == 1) {
      ++a_points_[stats.counts];
      continue;
    }
    const auto comps = g.components();
    const auto& small = comps[smallest_component_index(comps)];
    std::vector<int> local(g.n() + 1, -1);
    for (std::size_t i = 0; i < small.size(); ++i) local[small[i]] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
      if (local[e.u] >= 0) edges.push_back({local[e.u], local[e.v]});
    }
    const auto code = canonicalize_unrooted(static_cast<int>(small.size()), edges);
    if (auto u = catalog.u0_index(code.code)) {
      ++b_points_[*u][stats.counts];
    } else {
      ++b_outside_u0_;
    }
  }
}

std::int64_t ClassHistogram::a_total() const { return component_counts_.size() > 1 ? component_counts_[1] : 0; }

std::int64_t ClassHistogram::b_total(std::size_t u) const {
  std::int64_t s = 0;
  for (const auto& [alpha, count] : b_points_.at(u)) s += count;
  return s;
}

std::int64_t ClassHistogram::a_in_neighbourhood(const BoxSpec& box) const {
  std::int64_t s = 0;
  for (const auto& [alpha, count] : a_points_) {
    if (box.in_neighbourhood(alpha)) s += count;
  }
  return s;
}

std::int64_t ClassHistogram::b_in_box(std::size_t u, const BoxSpec& box) const {
  std::int64_t s = 0;
  for (const auto& [alpha, count] : b_points_.at(u)) {
    if (box.contains(alpha)) s += count;
  }
  return s;
}

ClassHistogram class_histogram(const ForestClass& c, const Catalog& catalog) { return ClassHistogram(c, catalog); }

SimpleCountingReport verify_lemma_simple_counting(const ForestClass& c) {
  const auto ba = is_bridge_addable(c);
  if (!ba.holds) throw NotBridgeAddable("class " + c.provenance() + " is not bridge-addable");
  SimpleCountingReport r;
  r.counts.assign(c.n() + 1, 0);
  for (const auto& g : c.members()) ++r.counts[g.component_count()];
  r.ratios.assign(c.n(), std::nullopt);
  for (int i = 1; i < c.n(); ++i) {
    if (r.counts[i] > 0) {
      r.ratios[i] = make_rational(BigInt(static_cast<long>(i * r.counts[i + 1])), BigInt(static_cast<long>(r.counts[i])));
    }
    if (i * r.counts[i + 1] > r.counts[i]) {
      r.holds = false;
      r.violations.push_back(i);
    }
  }
  return r;
}

SwitchingCase switching_case(const EdgeSplit& split, const Catalog& catalog) {
  SwitchingCase sc;
  auto t = catalog.t0_index(split.parent.code);
  auto tm = catalog.t0_index(split.t_minus.code);
  auto u = catalog.u0_index(split.u_plus.code);
  if (!t || !tm || !u) throw CatalogError("split of " + split.parent.code + " is not admissible for the catalog");
  sc.t = split.parent;
  sc.t_minus = split.t_minus;
  sc.u_plus = split.u_plus;
  sc.t_index = *t;
  sc.t_minus_index = *tm;
  sc.u_index = *u;
  sc.m_edge = split.m_edge;
  sc.m_vminus = split.m_vminus;
  sc.n_vplus = split.n_vplus;
  return sc;
}

std::vector<SwitchingCase> switching_cases(const Catalog& catalog) {
  std::vector<SwitchingCase> out;
  for (std::size_t i = 0; i < catalog.t0().size(); ++i) {
    const auto& t = catalog.t0()[i];
    const UnrootedTreeCode as_unrooted = parse_unrooted(t.code);
    if (auto u = catalog.u0_index(as_unrooted.code)) {
      SwitchingCase sc;
      sc.t = t;
      sc.u_plus = as_unrooted;
      sc.t_index = i;
      sc.u_index = *u;
      // v+ is the root of T, counted under unrooted automorphisms of U+ = T.
      const Tree tree = Tree::from_code(t.code);
      const UnrootedForm uf = unrooted_form(tree);
      sc.n_vplus = unrooted_vertex_orbit_size(uf.code.code, uf.index[0]);
      out.push_back(std::move(sc));
    }
    if (t.size < 2) continue;
    for (const auto& s : splits(t)) {
      if (catalog.t0_index(s.t_minus.code) && catalog.u0_index(s.u_plus.code)) out.push_back(switching_case(s, catalog));
    }
  }
  return out;
}

LocalCheck verify_local_double_counting(const ClassHistogram& h, const BoxSpec& box, const SwitchingCase& sc) {
  if (box.lower.size() != h.dims()) throw std::invalid_argument("box dimension does not match t0");
  LocalCheck c;
  c.b_count = h.b_in_box(sc.u_index, box);
  c.a_count = h.a_in_neighbourhood(box);
  const long alpha_t = box.lower[sc.t_index];
  const long alpha_minus = sc.degenerate() ? h.n() - sc.t.size : box.lower[*sc.t_minus_index];
  c.lhs = BigInt(sc.m_edge) * (alpha_t + box.w + box.q) * BigInt(static_cast<long>(c.a_count));
  c.rhs = BigInt(sc.n_vplus) * sc.m_vminus * alpha_minus * BigInt(static_cast<long>(c.b_count));
  c.holds = c.lhs >= c.rhs;
  return c;
}

namespace {

// Every lower corner whose box [corner, corner + w) contains at least one
// observed B point; all other corners have empty B parts.
std::vector<std::vector<int>> candidate_corners(const ClassHistogram& h, std::size_t u_count, int w) {
  std::set<std::vector<int>> corners;
  const std::size_t d = h.dims();
  for (std::size_t u = 0; u < u_count; ++u) {
    for (const auto& [beta, count] : h.b_points(u)) {
      std::vector<int> lo(d), cur(d);
      for (std::size_t i = 0; i < d; ++i) cur[i] = lo[i] = std::max(0, beta[i] - w + 1);
      for (;;) {
        corners.insert(cur);
        std::size_t i = 0;
        while (i < d && cur[i] == beta[i]) {
          cur[i] = lo[i];
          ++i;
        }
        if (i == d) break;
        ++cur[i];
      }
    }
  }
  return {corners.begin(), corners.end()};
}

}  // namespace

LocalSweepReport sweep_local_double_counting(const ClassHistogram& h, const Catalog& catalog, int w) {
  if (w < 1) throw std::invalid_argument("box width must be at least 1");
  LocalSweepReport r;
  r.w = w;
  r.q = catalog.u_max();
  mpz_ui_pow_ui(r.grid_boxes.get_mpz_t(), h.n(), h.dims());
  const auto cases = switching_cases(catalog);
  r.cases = cases.size();
  for (const auto& corner : candidate_corners(h, catalog.u0().size(), w)) {
    BoxSpec box{corner, w, r.q};
    ++r.boxes_checked;
    for (const auto& sc : cases) {
      const LocalCheck c = verify_local_double_counting(h, box, sc);
      ++r.inequalities_checked;
      if (c.holds) continue;
      r.holds = false;
      ++r.violation_count;
      if (r.violations.size() < 20) {
        r.violations.push_back({corner, sc.t.code, sc.t_minus ? sc.t_minus->code : std::string("(empty)"),
                                sc.u_plus.code, c.lhs, c.rhs});
      }
    }
  }
  return r;
}

WeightVector z_from_class(const ClassHistogram& h, const Catalog& catalog, const BoxSpec& box) {
  if (box.lower.size() != h.dims()) throw std::invalid_argument("box dimension does not match t0");
  const std::int64_t a = h.a_in_neighbourhood(box);
  std::vector<Rational> z;
  for (std::size_t u = 0; u < catalog.u0().size(); ++u) {
    const std::int64_t b = h.b_in_box(u, box);
    if (b == 0) {
      z.emplace_back(0);
      continue;
    }
    if (a == 0) {
      throw BridgeAddabilityViolation("B^U is non-empty but A is empty in the neighbourhood of the box; the class "
                                      "cannot be bridge-addable");
    }
    const auto& U = catalog.u0()[u];
    z.push_back(Rational(U.aut_u) * make_rational(BigInt(static_cast<long>(b)), BigInt(static_cast<long>(a))) *
                make_rational(h.n() - U.size, h.n()));
  }
  return WeightVector(std::move(z));
}

BigInt sum_bound_constant(const Catalog& catalog, int w, int q) {
  BigInt c = power(2 * catalog.t_max(), catalog.t_max() - 1);
  return c * (w + q) * static_cast<unsigned long>(catalog.t0().size());
}

namespace {

SumBoundCheck sum_bound_at(const ClassHistogram& h, const Catalog& catalog, const BoxSpec& box,
                           const TreeFamily& family) {
  const long sum = std::accumulate(box.lower.begin(), box.lower.end(), 0L);
  if (sum > h.n() - 1) {
    throw std::invalid_argument("box corner has alpha sum " + std::to_string(sum) + " > n - 1 = " +
                                std::to_string(h.n() - 1));
  }
  SumBoundCheck c;
  c.z = z_from_class(h, catalog, box);
  c.y_t0 = family.rooted_sum(catalog.t0(), c.z);
  c.bound = 1 + make_rational(sum_bound_constant(catalog, box.w, box.q), h.n());
  c.holds = c.y_t0 <= c.bound;
  return c;
}

}  // namespace

SumBoundCheck verify_cor_sum_bound(const ClassHistogram& h, const Catalog& catalog, const BoxSpec& box) {
  TreeFamily family(catalog, catalog.t_max());
  return sum_bound_at(h, catalog, box, family);
}

SumBoundSweepReport sweep_cor_sum_bound(const ClassHistogram& h, const Catalog& catalog, int w) {
  if (w < 1) throw std::invalid_argument("box width must be at least 1");
  SumBoundSweepReport r;
  r.w = w;
  r.q = catalog.u_max();
  r.bound = 1 + make_rational(sum_bound_constant(catalog, w, r.q), h.n());
  r.max_y = 0;
  TreeFamily family(catalog, catalog.t_max());
  // Corners with every B part empty give z = 0 and Y = 0.
  for (const auto& corner : candidate_corners(h, catalog.u0().size(), w)) {
    if (std::accumulate(corner.begin(), corner.end(), 0L) > h.n() - 1) continue;
    const auto c = sum_bound_at(h, catalog, BoxSpec{corner, w, r.q}, family);
    ++r.boxes_checked;
    if (c.y_t0 > r.max_y) {
      r.max_y = c.y_t0;
      r.argmax = corner;
    }
    if (!c.holds) {
      r.holds = false;
      ++r.violation_count;
      if (r.violations.size() < 20) r.violations.push_back(corner);
    }
  }
  return r;
}

BoxingReport boxing_search(const ClassHistogram& h, const Catalog& catalog, int w, double epsilon) {
  if (w < 1) throw std::invalid_argument("box width must be at least 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1)");
  BoxingReport r;
  r.w = w;
  r.q = catalog.u_max();
  r.period = w + 2 * r.q;
  r.epsilon = epsilon;
  const std::size_t d = h.dims();
  const std::size_t u_count = catalog.u0().size();
  const int period = r.period;

  struct Point {
    std::size_t u;
    std::vector<int> beta;
    std::int64_t count;
  };
  std::vector<Point> points;
  r.totals.assign(u_count, 0);
  for (std::size_t u = 0; u < u_count; ++u) {
    for (const auto& [beta, count] : h.b_points(u)) {
      points.push_back({u, beta, count});
      r.totals[u] += count;
    }
  }
  {
    const double lhs_inner = std::pow(1.0 - static_cast<double>(period) / h.n(), static_cast<double>(d)) *
                             std::pow(1.0 + 2.0 * r.q / w, -static_cast<double>(d));
    r.precondition_lhs = 1.0 - lhs_inner;
    r.precondition_rhs = epsilon / static_cast<double>(u_count);
    r.precondition_holds = h.n() > period && r.precondition_lhs <= r.precondition_rhs;
  }
  // Coordinates on which every point agrees get a shift that captures them;
  // only the others are searched.
  std::vector<int> shift(d, 0);
  std::vector<std::size_t> free_dims;
  for (std::size_t i = 0; i < d; ++i) {
    bool constant = true;
    for (const auto& p : points) constant = constant && p.beta[i] == points.front().beta[i];
    if (constant && !points.empty()) {
      shift[i] = points.front().beta[i] % period;
    } else if (!points.empty()) {
      free_dims.push_back(i);
    }
  }
  auto captures = [&](const std::vector<int>& beta, const std::vector<int>& s) {
    for (std::size_t i = 0; i < d; ++i) {
      const int off = beta[i] - s[i];
      if (off < 0 || off % period >= w) return false;
    }
    return true;
  };
  auto score = [&](const std::vector<int>& s, std::vector<std::int64_t>& captured) {
    captured.assign(u_count, 0);
    for (const auto& p : points) {
      if (captures(p.beta, s)) captured[p.u] += p.count;
    }
    double worst = 1.0;
    std::int64_t total = 0;
    for (std::size_t u = 0; u < u_count; ++u) {
      total += captured[u];
      if (r.totals[u] > 0) worst = std::min(worst, static_cast<double>(captured[u]) / r.totals[u]);
    }
    return std::pair<double, std::int64_t>(worst, total);
  };

  std::vector<std::int64_t> captured;
  auto best = score(shift, captured);
  std::vector<int> best_shift = shift;
  const double space = std::pow(static_cast<double>(period), static_cast<double>(free_dims.size()));
  constexpr double kExhaustiveShifts = 2.0e6;
  if (space <= kExhaustiveShifts) {
    std::vector<int> s = shift;
    for (;;) {
      ++r.shifts_examined;
      auto sc = score(s, captured);
      if (sc > best) {
        best = sc;
        best_shift = s;
      }
      std::size_t i = 0;
      while (i < free_dims.size() && s[free_dims[i]] == period - 1) {
        s[free_dims[i]] = 0;
        ++i;
      }
      if (i == free_dims.size()) break;
      ++s[free_dims[i]];
    }
  } else {
    r.exhaustive = false;
    bool improved = true;
    for (int round = 0; improved && round < 50; ++round) {
      improved = false;
      for (std::size_t i : free_dims) {
        std::vector<int> s = best_shift;
        for (int v = 0; v < period; ++v) {
          s[i] = v;
          ++r.shifts_examined;
          auto sc = score(s, captured);
          if (sc > best) {
            best = sc;
            best_shift = s;
            improved = true;
          }
        }
      }
    }
  }
  r.shift = best_shift;
  score(best_shift, r.captured);
  r.min_fraction = best.first;
  std::set<std::vector<int>> boxes;
  for (const auto& p : points) {
    if (!captures(p.beta, best_shift)) continue;
    std::vector<int> corner(d);
    for (std::size_t i = 0; i < d; ++i) corner[i] = best_shift[i] + (p.beta[i] - best_shift[i]) / period * period;
    boxes.insert(std::move(corner));
  }
  r.boxes.assign(boxes.begin(), boxes.end());
  r.success = r.min_fraction >= 1.0 - epsilon - 1e-12;
  return r;
}

}  // namespace bridgelab
