#pragma once

// Explicit forest classes on [n]: bridge-addability, the A / B^U partition by
// alpha-boxes, and exhaustive checks of the counting inequalities on them.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "bridgelab/forestlab.hpp"
#include "bridgelab/weights.hpp"

namespace bridgelab {

class ForestClass {
 public:
  ForestClass(int n, std::vector<LabeledForest> members, std::string provenance);
  static ForestClass all_forests(int n);

  int n() const { return n_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<LabeledForest>& members() const { return members_; }
  const std::string& provenance() const { return provenance_; }
  bool contains(const LabeledForest& g) const;

 private:
  int n_;
  std::vector<LabeledForest> members_;  // sorted, distinct
  std::string provenance_;
  std::unordered_set<std::uint64_t> masks_;
};

class NotBridgeAddable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BridgeAddability {
  bool holds = true;
  std::optional<LabeledForest> witness;  // member whose extension is missing
  std::optional<Edge> witness_edge;
};
BridgeAddability is_bridge_addable(const ForestClass& c);

ForestClass bridge_addable_closure(std::span<const LabeledForest> seed, std::string provenance = "closure");
// Closure of 1..3 random seeds (random spanning trees with each edge kept with
// probability 1/2). Deterministic in (n, seed).
ForestClass random_bridge_addable_class(int n, std::uint64_t seed);

nlohmann::json class_to_json(const ForestClass& c);
ForestClass class_from_json(const nlohmann::json& j, std::string provenance);
ForestClass load_class(const std::filesystem::path& path);
void save_class(const ForestClass& c, const std::filesystem::path& path);

// Box [lower, lower + w) per coordinate, and its q-neighbourhood
// [lower - q, lower + w + q).
struct BoxSpec {
  std::vector<int> lower;
  int w = 1;
  int q = 0;

  bool contains(std::span<const int> alpha) const;
  bool in_neighbourhood(std::span<const int> alpha) const;
};

// Class counts the verification routines need: |G^(i)|, the alpha points of
// A (trees) and of every B^U (two components, smallest one isomorphic to U).
class ClassHistogram {
 public:
  ClassHistogram(const ForestClass& c, const Catalog& catalog);

  int n() const { return n_; }
  std::size_t dims() const { return dims_; }
  // component_counts()[i] = |G^(i)| for 1 <= i <= n.
  const std::vector<std::int64_t>& component_counts() const { return component_counts_; }
  const std::map<std::vector<int>, std::int64_t>& a_points() const { return a_points_; }
  const std::map<std::vector<int>, std::int64_t>& b_points(std::size_t u) const { return b_points_[u]; }
  std::int64_t a_total() const;
  std::int64_t b_total(std::size_t u) const;
  // Two-component members whose smallest component is not in u0.
  std::int64_t b_outside_u0() const { return b_outside_u0_; }

  std::int64_t a_in_neighbourhood(const BoxSpec& box) const;
  std::int64_t b_in_box(std::size_t u, const BoxSpec& box) const;

 private:
  int n_;
  std::size_t dims_;
  std::vector<std::int64_t> component_counts_;
  std::map<std::vector<int>, std::int64_t> a_points_;
  std::vector<std::map<std::vector<int>, std::int64_t>> b_points_;
  std::int64_t b_outside_u0_ = 0;
};

ClassHistogram class_histogram(const ForestClass& c, const Catalog& catalog);

struct SimpleCountingReport {
  bool holds = true;
  std::vector<std::int64_t> counts;         // counts[i] = |G^(i)|
  std::vector<std::optional<Rational>> ratios;  // ratios[i] = i |G^(i+1)| / |G^(i)|
  std::vector<int> violations;
};
// Throws NotBridgeAddable for a class that is not bridge-addable.
SimpleCountingReport verify_lemma_simple_counting(const ForestClass& c);

// One admissible edge split (or the degenerate case with no T_-), with its
// catalog indices.
struct SwitchingCase {
  RootedTreeCode t;
  std::optional<RootedTreeCode> t_minus;
  UnrootedTreeCode u_plus;
  std::size_t t_index = 0;
  std::optional<std::size_t> t_minus_index;
  std::size_t u_index = 0;
  std::int64_t m_edge = 1, m_vminus = 1, n_vplus = 1;

  bool degenerate() const { return !t_minus.has_value(); }
};
std::vector<SwitchingCase> switching_cases(const Catalog& catalog);
// The case of a given split; throws CatalogError if it is not admissible.
SwitchingCase switching_case(const EdgeSplit& split, const Catalog& catalog);

struct LocalCheck {
  bool holds = true;
  BigInt lhs, rhs;
  std::int64_t a_count = 0, b_count = 0;
};
LocalCheck verify_local_double_counting(const ClassHistogram& h, const BoxSpec& box, const SwitchingCase& sc);

struct LocalViolation {
  std::vector<int> lower;
  std::string t, t_minus, u_plus;
  BigInt lhs, rhs;
};
struct LocalSweepReport {
  bool holds = true;
  int w = 0, q = 0;
  BigInt grid_boxes;             // n^d lower corners in the parameter space
  std::size_t boxes_checked = 0; // corners where some B^U is non-empty
  std::size_t inequalities_checked = 0;
  std::size_t cases = 0;
  std::vector<LocalViolation> violations;  // at most 20 kept
  std::size_t violation_count = 0;
};
// Every lower corner of the grid with every admissible case, q = u_max. Boxes
// whose B^U parts are all empty satisfy every inequality trivially and are
// only counted.
LocalSweepReport sweep_local_double_counting(const ClassHistogram& h, const Catalog& catalog, int w);

class BridgeAddabilityViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

WeightVector z_from_class(const ClassHistogram& h, const Catalog& catalog, const BoxSpec& box);

// (w + q)(2 t_max)^(t_max - 1) |T0|
BigInt sum_bound_constant(const Catalog& catalog, int w, int q);

struct SumBoundCheck {
  bool holds = true;
  Rational y_t0;
  Rational bound;
  WeightVector z;
};
// Throws std::invalid_argument when the corner violates sum(lower) <= n - 1.
SumBoundCheck verify_cor_sum_bound(const ClassHistogram& h, const Catalog& catalog, const BoxSpec& box);

struct SumBoundSweepReport {
  bool holds = true;
  int w = 0, q = 0;
  Rational bound;
  Rational max_y;
  std::vector<int> argmax;
  std::size_t boxes_checked = 0;
  std::size_t violation_count = 0;
  std::vector<std::vector<int>> violations;  // at most 20 kept
};
SumBoundSweepReport sweep_cor_sum_bound(const ClassHistogram& h, const Catalog& catalog, int w);

struct BoxingReport {
  int w = 0, q = 0, period = 0;
  double epsilon = 0.0;
  std::vector<int> shift;
  std::vector<std::vector<int>> boxes;  // lower corners, pairwise 2q apart
  std::vector<std::int64_t> captured;   // per U in u0
  std::vector<std::int64_t> totals;
  double min_fraction = 1.0;
  bool success = false;  // every U captured at least (1 - epsilon)
  bool exhaustive = true;  // false when the shift space was searched greedily
  std::uint64_t shifts_examined = 0;
  // Size condition under which a capturing shift is guaranteed:
  // 1 - (1 - (w + 2q)/n)^d (1 + 2q/w)^(-d) <= epsilon / |u0|.
  double precondition_lhs = 0.0;
  double precondition_rhs = 0.0;
  bool precondition_holds = false;
};
BoxingReport boxing_search(const ClassHistogram& h, const Catalog& catalog, int w, double epsilon);

}  // namespace bridgelab
