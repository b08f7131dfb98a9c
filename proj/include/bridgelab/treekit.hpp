#pragma once

// Canonical forms, enumeration, automorphism counts and edge-split
// multiplicities for unlabeled rooted and unrooted trees.
//
// Codes are balanced-parentheses strings: a vertex is "(" followed by the codes
// of its children and ")", children sorted in non-increasing lexicographic
// order. Equal codes <=> isomorphic trees. Vertices of a code are addressed by
// their depth-first preorder position in that string (index 0 is the root).

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bridgelab/arith.hpp"

namespace bridgelab {

class InvalidTree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct RootedTreeCode {
  std::string code;
  int size = 0;
  BigInt aut_r = 1;

  friend bool operator==(const RootedTreeCode& a, const RootedTreeCode& b) { return a.code == b.code; }
  // Size first, then code.
  friend std::strong_ordering operator<=>(const RootedTreeCode& a, const RootedTreeCode& b) {
    if (auto c = a.size <=> b.size; c != 0) return c;
    return a.code.compare(b.code) <=> 0;
  }
};

enum class CentroidKind { One, Two };

struct UnrootedTreeCode {
  std::string code;  // rooted code at the canonical centroid
  int size = 0;
  BigInt aut_u = 1;
  CentroidKind centroid_kind = CentroidKind::One;

  friend bool operator==(const UnrootedTreeCode& a, const UnrootedTreeCode& b) { return a.code == b.code; }
  friend std::strong_ordering operator<=>(const UnrootedTreeCode& a, const UnrootedTreeCode& b) {
    if (auto c = a.size <=> b.size; c != 0) return c;
    return a.code.compare(b.code) <=> 0;
  }
};

// Adjacency-list tree on vertices 0..n-1.
class Tree {
 public:
  Tree() = default;

  // Rejects anything that is not a tree (wrong edge count, cycle, disconnected,
  // self loop, out-of-range endpoint).
  static Tree from_edges(int n, std::span<const Edge> edges);
  // Vertices numbered by preorder position in the code. Rejects malformed codes
  // but does not require the code to be canonical.
  static Tree from_code(std::string_view code);

  int size() const { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(v); }
  std::vector<Edge> edges() const;

  // Component of `start` after deleting edge {a, b}; sorted vertex list.
  std::vector<int> side_of(int start, int a, int b) const;
  // Subtree induced by `vertices` (must be connected). mapping[i] is the
  // original id of new vertex i.
  Tree induced(std::span<const int> vertices, std::vector<int>* mapping = nullptr) const;

 private:
  std::vector<std::vector<int>> adj_;
};

struct CanonicalForm {
  std::string code;
  BigInt aut;               // rooted automorphisms (marked vertex fixed, if any)
  std::vector<int> index;   // original vertex -> canonical preorder index
};

// AHU canonical form of `tree` rooted at `root`. A marked vertex is encoded
// with "[...]" so only automorphisms fixing it are counted and two marked
// trees compare equal iff some rooted isomorphism carries mark to mark.
CanonicalForm canonical_form(const Tree& tree, int root, int marked = -1);

struct UnrootedForm {
  UnrootedTreeCode code;
  std::vector<int> index;  // original vertex -> canonical preorder index
};
UnrootedForm unrooted_form(const Tree& tree);

RootedTreeCode canonicalize_rooted(int n, std::span<const Edge> edges, int root);
UnrootedTreeCode canonicalize_unrooted(int n, std::span<const Edge> edges);

// Parse a code string; the result is canonical (input need not be).
RootedTreeCode parse_rooted(std::string_view code);
UnrootedTreeCode parse_unrooted(std::string_view code);

struct EnumerationLimits {
  int max_size = 16;
};

// One code per isomorphism class, sizes 1..k, ordered by size then code.
std::vector<RootedTreeCode> enumerate_rooted(int k, EnumerationLimits limits = {});
std::vector<UnrootedTreeCode> enumerate_unrooted(int k, EnumerationLimits limits = {});

struct EdgeSplit {
  RootedTreeCode parent;
  RootedTreeCode t_minus;
  UnrootedTreeCode u_plus;
  std::int64_t m_edge = 0;
  std::int64_t m_vminus = 0;
  std::int64_t n_vplus = 0;
  // Canonical indices: child endpoint of the representative edge in `parent`,
  // its neighbours v- in t_minus and v+ in u_plus.
  int edge_child_index = 0;
  int v_minus_index = 0;
  int v_plus_index = 0;
};

// One split per orbit of edges under rooted automorphisms of t.
std::vector<EdgeSplit> splits(const RootedTreeCode& t);

struct AutIdentityCertificate {
  bool holds = false;
  Rational lhs;  // m_edge / aut_r(parent)
  Rational rhs;  // m_vminus * n_vplus / (aut_r(t_minus) * aut_u(u_plus))
};
AutIdentityCertificate verify_aut_identity(const EdgeSplit& s);

// Joins vertex v_index of t_minus to vertex u_index of u by a new edge; the
// result stays rooted at t_minus's root.
RootedTreeCode attach(const RootedTreeCode& t_minus, int v_index, const UnrootedTreeCode& u, int u_index);

struct CayleyCheck {
  bool holds = false;
  BigInt rooted_sum, rooted_expected;
  BigInt unrooted_sum, unrooted_expected;
};
CayleyCheck cayley_identity_check(int n);

// Number of vertices of `code` in the same orbit as vertex `index`, under
// rooted (root fixed) or unrooted automorphisms.
std::int64_t rooted_vertex_orbit_size(std::string_view code, int index);
std::int64_t unrooted_vertex_orbit_size(std::string_view code, int index);

// The families U0 / T0 the forest-class statistics and weights are built on.
class Catalog {
 public:
  // All rooted trees with at most t_max vertices, all unrooted trees with at
  // most u_max vertices.
  static Catalog standard(int t_max, int u_max);
  // Explicit lists of codes; validated (u0 holds the single vertex, t0 is
  // closed under rooted inclusion).
  static Catalog from_codes(std::span<const std::string> t0, std::span<const std::string> u0);

  const std::vector<RootedTreeCode>& t0() const { return t0_; }
  const std::vector<UnrootedTreeCode>& u0() const { return u0_; }
  int t_max() const { return t_max_; }
  int u_max() const { return u_max_; }

  std::optional<std::size_t> t0_index(std::string_view rooted_code) const;
  std::optional<std::size_t> u0_index(std::string_view unrooted_code) const;

 private:
  Catalog(std::vector<RootedTreeCode> t0, std::vector<UnrootedTreeCode> u0);

  std::vector<RootedTreeCode> t0_;
  std::vector<UnrootedTreeCode> u0_;
  std::unordered_map<std::string, std::size_t> t0_lookup_;
  std::unordered_map<std::string, std::size_t> u0_lookup_;
  int t_max_ = 0;
  int u_max_ = 0;
};

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace bridgelab
