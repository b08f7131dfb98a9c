#pragma once

// Maximisation of sum_U z^U / aut_u(U) over weight vectors that are closure
// fixed points with Y_{<=k}(z) <= cap. Floating point inside the search, exact
// re-verification of the returned point.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bridgelab/weights.hpp"

namespace bridgelab {

struct OptimizerConfig {
  Catalog catalog = Catalog::standard(1, 1);
  int k = 12;
  int budget = 10000;      // iterations per restart
  double tol = 1e-9;
  int restarts = 32;
  std::uint64_t seed = 0;
  double y_cap = 1.5;
  int threads = 1;
  // Extra starting points (u0 code -> weight; missing codes are 0), tried
  // right after the single-variable start.
  std::vector<std::map<std::string, double>> warm_starts;

  void validate() const;
};

struct FeasiblePoint {
  std::vector<double> z;  // aligned with catalog.u0()
  double y_value = 0.0;
  double objective = 0.0;
  bool closed = false;    // z^U = omega(U, z) within tol
};

struct ExactCertificate {
  WeightVector z;         // exact closure of the float point
  Rational y_value;
  Rational objective;
  bool feasible = false;  // y_value <= cap + tol
};

struct FeasibilityReport {
  bool feasible = false;
  bool closed = false;
  Rational y_value;
  Rational objective;
  std::vector<std::string> not_closed;  // codes U with z^U != omega(U, z)
};

// Exact check of both constraints.
FeasibilityReport feasibility(const WeightVector& z, const OptimizerConfig& config);
FeasibilityReport feasibility(const WeightVector& z, const OptimizerConfig& config, const TreeFamily& family);

// Float evaluator bound to one family (catalog and k).
class Objective {
 public:
  explicit Objective(const TreeFamily& family);

  const TreeFamily& family() const { return family_; }
  double y(const std::vector<double>& z) const;
  double objective(const std::vector<double>& z) const;
  std::vector<double> closure(const std::vector<double>& z) const;
  bool is_closed(const std::vector<double>& z, double tol) const;
  // Largest lambda (within 1e-15) with Y(lambda o z) <= cap; 1 if z already
  // satisfies the cap.
  double scale_factor(const std::vector<double>& z, double cap) const;

 private:
  const TreeFamily& family_;
  std::vector<std::size_t> u0_nodes_;
  std::vector<int> u0_sizes_;
  std::vector<double> u0_aut_;
};

// lambda o z with Y_{<=k}(lambda o z) <= cap, lambda as large as possible.
std::vector<double> project_scale(const std::vector<double>& z, const OptimizerConfig& config);

// Unique x > 0 with sum_{n<=k} n^(n-1) x^n / n! = cap (to 1e-12; the returned
// value is the feasible end of the final bracket).
double single_var_threshold(int k, double cap = 1.5);

struct TraceEntry {
  int restart = 0;
  int iteration = 0;
  double objective = 0.0;
  double y_value = 0.0;
};

struct OptimizerReport {
  FeasiblePoint best;
  ExactCertificate certificate;
  int best_restart = 0;
  int restarts_used = 0;
  long iterations = 0;
  bool budget_exhausted = false;
  double single_variable_threshold = 0.0;
  std::vector<TraceEntry> trace;  // improvements of the running best
};

OptimizerReport maximize(const OptimizerConfig& config);

struct BoundCheck {
  bool pass = false;
  double objective = 0.0;
  double bound = 0.0;  // (1 + epsilon) / 2
};
BoundCheck bound_check(const FeasiblePoint& point, double epsilon);

}  // namespace bridgelab
