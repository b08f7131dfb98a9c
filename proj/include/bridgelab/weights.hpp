#pragma once

// Weight vectors over u0, admissible decompositions, the maximum weight omega
// and the truncated rooted/unrooted partition functions built from it.

#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bridgelab/arith.hpp"
#include "bridgelab/treekit.hpp"

namespace bridgelab {

// Non-negative exact weights aligned with catalog.u0().
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<Rational> values);
  static WeightVector zeros(std::size_t d);
  static WeightVector from_double(std::span<const double> values);

  std::size_t size() const { return values_.size(); }
  const Rational& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Rational>& values() const { return values_; }
  std::vector<double> to_double() const;
  bool is_zero() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<Rational> values_;
};

void check_weights(const WeightVector& z, const Catalog& catalog);

struct DecompositionStep {
  std::size_t piece = 0;  // index into catalog.u0()
  int from_index = -1;    // vertex of the piece that gets the new edge
  int to_index = -1;      // vertex of the tree built so far
};

// Step 0 is the starting piece (its indices are -1). Every later step joins a
// copy of its piece to the current tree.
struct DecompositionTrace {
  std::vector<DecompositionStep> steps;

  std::size_t length() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  // The tree rebuilt by attach(), rooted at the root of the first piece.
  RootedTreeCode replay(const Catalog& catalog) const;
  Rational weight(const WeightVector& z) const;
  friend bool operator==(const DecompositionTrace&, const DecompositionTrace&) = default;
};

struct OmegaResult {
  Rational value;
  DecompositionTrace trace;  // empty when value is 0
};

// Memoized omega for one fixed weight vector, keyed by unrooted code. Safe for
// concurrent use.
class OmegaTable {
 public:
  OmegaTable(const Catalog& catalog, WeightVector z);

  const WeightVector& z() const { return z_; }
  Rational value(std::string_view code);
  OmegaResult evaluate(std::string_view code);

 private:
  struct Entry {
    Rational value;
    bool self = false;             // best decomposition is the tree itself
    std::size_t piece = 0;         // otherwise: last piece removed
    std::string rest;              // and the unrooted code that remains
  };
  Entry entry(const std::string& unrooted_code);

  const Catalog& catalog_;
  WeightVector z_;
  std::mutex mutex_;
  std::unordered_map<std::string, Entry> memo_;
};

// Accepts any code (rooted or not); omega only depends on the unrooted shape.
OmegaResult omega(std::string_view code, const WeightVector& z, const Catalog& catalog);

constexpr int kMaxBruteforceSize = 8;
std::vector<DecompositionTrace> decompositions_bruteforce(std::string_view code, const Catalog& catalog);

// Every unrooted tree up to size k with its edge-split transitions, so omega
// can be evaluated for all of them at once, in exact or floating arithmetic.
class TreeFamily {
 public:
  struct Node {
    UnrootedTreeCode tree;
    std::optional<std::size_t> self_piece;                       // index in u0
    std::vector<std::pair<std::size_t, std::size_t>> transitions; // (u0 piece, remaining node)
    Rational rooted_weight;   // sum over rootings T of 1 / aut_r(T)
    double rooted_weight_d = 0.0;
  };

  TreeFamily(const Catalog& catalog, int k);

  int k() const { return k_; }
  const Catalog& catalog() const { return catalog_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<RootedTreeCode>& rooted() const { return rooted_; }
  std::size_t rooted_node(std::size_t i) const { return rooted_node_[i]; }
  std::optional<std::size_t> node_index(std::string_view unrooted_code) const;
  std::optional<std::size_t> rooted_index(std::string_view rooted_code) const;

  // omega of every node; Scalar is Rational or double.
  template <class Scalar>
  std::vector<Scalar> omega_all(const std::vector<Scalar>& z) const;

  // Per-size contributions of Y: c[s] = sum over rooted T with |T| = s of
  // omega(T) / aut_r(T).
  std::vector<Rational> rooted_by_size(const WeightVector& z) const;
  std::vector<double> rooted_by_size(const std::vector<double>& z) const;
  // Same through the unrooted route: sum over W of omega(W) |W| / aut_u(W).
  std::vector<Rational> rooted_by_size_via_unrooted(const WeightVector& z) const;
  // Unrooted contributions sum omega(W) / aut_u(W) by size.
  std::vector<Rational> unrooted_by_size(const WeightVector& z) const;

  // sum over the given rooted trees (each of size <= k) of omega / aut_r.
  Rational rooted_sum(std::span<const RootedTreeCode> trees, const WeightVector& z) const;

 private:
  const Catalog& catalog_;
  int k_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> node_lookup_;
  std::vector<RootedTreeCode> rooted_;
  std::vector<std::size_t> rooted_node_;
  std::unordered_map<std::string, std::size_t> rooted_lookup_;
};

// Truncated partition functions, exact.
Rational Y_trunc(const WeightVector& z, int k, const Catalog& catalog);
Rational Y_eq(const WeightVector& z, int k, const Catalog& catalog);
Rational Y_T0(const WeightVector& z, std::span<const RootedTreeCode> t0, const Catalog& catalog);

struct UnrootedSum {
  Rational value;         // sum over unrooted W of omega / aut_u
  Rational rooted_form;   // sum over rooted T of omega / (|T| aut_r)
};
// Throws std::logic_error if the two forms disagree.
UnrootedSum Yu_trunc(const WeightVector& z, int k, const Catalog& catalog);

Rational Ytilde_u(const WeightVector& z, const Catalog& catalog);
Rational Yu_U0(const WeightVector& z, const Catalog& catalog);

WeightVector scaled_mul(const Rational& lambda, const WeightVector& z, const Catalog& catalog);
std::vector<double> scaled_mul(double lambda, const std::vector<double>& z, const Catalog& catalog);

WeightVector closure(const WeightVector& z, const Catalog& catalog);

struct DissymmetryReport {
  bool holds = false;
  int k = 0;
  Rational y, yu, y_half;
  Rational lhs, rhs;  // y - yu and y_half^2 / 2
};
DissymmetryReport verify_dissymmetry_trunc(const WeightVector& z, int k, const Catalog& catalog);
// Reuses a prebuilt family; k = family.k().
DissymmetryReport verify_dissymmetry_trunc(const WeightVector& z, const TreeFamily& family);

struct SupermultiplicativityReport {
  struct EdgeCheck {
    Edge edge;
    std::string left, right;  // unrooted codes of the two components
    Rational whole, product;
    bool holds = false;
  };
  bool holds = true;
  std::vector<EdgeCheck> edges;
};
SupermultiplicativityReport verify_supermultiplicativity(std::string_view code, const WeightVector& z,
                                                         const Catalog& catalog);

// u0 = {single vertex} closed forms: sum_{n<=k} n^(n-1) x^n / n! and
// sum_{n<=k} n^(n-2) x^n / n!.
Rational single_variable_Y(const Rational& x, int k);
Rational single_variable_Yu(const Rational& x, int k);
double single_variable_Y(double x, int k);

}  // namespace bridgelab
