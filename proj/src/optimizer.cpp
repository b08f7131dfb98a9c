#include "bridgelab/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace bridgelab {

void OptimizerConfig::validate() const {
  if (k < catalog.u_max()) throw std::invalid_argument("optimizer: k must be at least u_max");
  if (!(tol > 0.0)) throw std::invalid_argument("optimizer: tol must be positive");
  if (budget < 1) throw std::invalid_argument("optimizer: budget must be positive");
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts must be positive");
  if (!(y_cap > 0.0)) throw std::invalid_argument("optimizer: the Y cap must be positive");
  if (threads < 1) throw std::invalid_argument("optimizer: threads must be positive");
  for (const auto& warm : warm_starts) {
    for (const auto& [code, v] : warm) {
      if (!catalog.u0_index(parse_unrooted(code).code)) {
        throw std::invalid_argument("optimizer: warm start uses a tree outside u0: " + code);
      }
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("optimizer: warm start weights must be finite and >= 0");
    }
  }
}

FeasibilityReport feasibility(const WeightVector& z, const OptimizerConfig& config, const TreeFamily& family) {
  check_weights(z, config.catalog);
  FeasibilityReport r;
  const auto by_size = family.rooted_by_size(z);
  r.y_value = 0;
  for (int s = 1; s <= config.k; ++s) r.y_value += by_size[s];
  r.objective = Ytilde_u(z, config.catalog);
  const auto om = family.omega_all(z.values());
  r.closed = true;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto& code = config.catalog.u0()[i].code;
    if (om[*family.node_index(code)] != z[i]) {
      r.closed = false;
      r.not_closed.push_back(code);
    }
  }
  r.feasible = r.y_value <= rational_from_double(config.y_cap);
  return r;
}

FeasibilityReport feasibility(const WeightVector& z, const OptimizerConfig& config) {
  config.validate();
  TreeFamily family(config.catalog, config.k);
  return feasibility(z, config, family);
}

Objective::Objective(const TreeFamily& family) : family_(family) {
  for (const auto& u : family.catalog().u0()) {
    u0_nodes_.push_back(*family.node_index(u.code));
    u0_sizes_.push_back(u.size);
    u0_aut_.push_back(u.aut_u.get_d());
  }
}

double Objective::y(const std::vector<double>& z) const {
  const auto c = family_.rooted_by_size(z);
  double s = 0.0;
  for (double v : c) s += v;
  return s;
}

double Objective::objective(const std::vector<double>& z) const {
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) s += z[i] / u0_aut_[i];
  return s;
}

std::vector<double> Objective::closure(const std::vector<double>& z) const {
  const auto om = family_.omega_all(z);
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = om[u0_nodes_[i]];
  return out;
}

bool Objective::is_closed(const std::vector<double>& z, double tol) const {
  const auto c = closure(z);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (std::abs(c[i] - z[i]) > tol * std::max(1.0, std::abs(z[i]))) return false;
  }
  return true;
}

double Objective::scale_factor(const std::vector<double>& z, double cap) const {
  // Y(lambda o z) = sum_s lambda^s c_s(z), increasing in lambda.
  const auto c = family_.rooted_by_size(z);
  auto poly = [&](double lambda) {
    double acc = 0.0;
    for (std::size_t s = c.size(); s-- > 1;) acc = acc * lambda + c[s];
    return acc * lambda;
  };
  if (poly(1.0) <= cap) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (poly(mid) <= cap ? lo : hi) = mid;
  }
  return lo;
}

std::vector<double> project_scale(const std::vector<double>& z, const OptimizerConfig& config) {
  config.validate();
  if (std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; })) {
    throw std::invalid_argument("project_scale: the zero vector has no scaling direction");
  }
  for (double v : z) {
    if (!(v >= 0.0)) throw std::invalid_argument("project_scale: weights must be non-negative");
  }
  TreeFamily family(config.catalog, config.k);
  Objective obj(family);
  return scaled_mul(obj.scale_factor(z, config.y_cap), z, config.catalog);
}

double single_var_threshold(int k, double cap) {
  if (k < 1) throw std::invalid_argument("single_var_threshold: k must be positive");
  // Y_{<=k}(cap) >= cap because the first term is x itself.
  double lo = 0.0, hi = cap;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (single_variable_Y(mid, k) <= cap ? lo : hi) = mid;
  }
  return lo;
}

namespace {

struct RestartResult {
  FeasiblePoint point;
  long iterations = 0;
  bool exhausted = false;
  std::vector<TraceEntry> trace;
};

bool better(const FeasiblePoint& a, const FeasiblePoint& b) {
  if (a.objective != b.objective) return a.objective > b.objective;
  return a.z < b.z;
}

RestartResult run_restart(const OptimizerConfig& config, const Objective& obj, const std::vector<double>& start,
                          int restart) {
  RestartResult r;
  const double cap = config.y_cap;
  auto settle = [&](std::vector<double> z) {
    z = obj.closure(z);
    if (std::all_of(z.begin(), z.end(), [](double v) { return v == 0.0; })) return z;
    const double lambda = obj.scale_factor(z, cap);
    return scaled_mul(lambda, z, config.catalog);
  };
  std::vector<double> z = settle(start);
  double value = obj.objective(z);
  double step = 0.25;
  for (const double v : z) step = std::max(step, v);
  const std::size_t d = z.size();
  long it = 0;
  for (; it < config.budget; ++it) {
    bool moved = false;
    for (std::size_t i = 0; i < d; ++i) {
      for (int dir : {+1, -1}) {
        std::vector<double> cand = z;
        cand[i] = std::max(0.0, cand[i] + dir * step);
        if (cand[i] == z[i]) continue;
        cand = settle(std::move(cand));
        const double v = obj.objective(cand);
        if (v > value + config.tol * 1e-3) {
          z = std::move(cand);
          value = v;
          moved = true;
          r.trace.push_back({restart, static_cast<int>(it), value, obj.y(z)});
        }
      }
    }
    if (!moved) {
      step *= 0.5;
      if (step < config.tol * 1e-3) break;
    }
  }
  r.iterations = it;
  r.exhausted = it >= config.budget;
  r.point.z = z;
  r.point.y_value = obj.y(z);
  r.point.objective = value;
  r.point.closed = obj.is_closed(z, config.tol);
  return r;
}

}  // namespace

OptimizerReport maximize(const OptimizerConfig& config) {
  config.validate();
  const Catalog& catalog = config.catalog;
  TreeFamily family(catalog, config.k);
  Objective obj(family);
  const std::size_t d = catalog.u0().size();
  OptimizerReport report;
  report.single_variable_threshold = single_var_threshold(config.k, config.y_cap);
  const double x = report.single_variable_threshold;

  // Starting points: the embedded single-variable optimum, warm starts, then
  // seeded random points scaled like the single-variable optimum.
  std::vector<std::vector<double>> starts;
  {
    std::vector<double> s(d, 0.0);
    s[*catalog.u0_index("()")] = x;
    starts.push_back(std::move(s));
  }
  for (const auto& warm : config.warm_starts) {
    if (static_cast<int>(starts.size()) >= config.restarts) break;
    std::vector<double> s(d, 0.0);
    for (const auto& [code, v] : warm) {
      s[*catalog.u0_index(parse_unrooted(code).code)] = v;
    }
    starts.push_back(std::move(s));
  }
  for (int r = static_cast<int>(starts.size()); r < config.restarts; ++r) {
    Rng rng = derive_stream(config.seed, static_cast<std::uint64_t>(r));
    std::vector<double> s(d);
    for (std::size_t i = 0; i < d; ++i) s[i] = 2.0 * uniform_unit(rng) * std::pow(x, catalog.u0()[i].size);
    starts.push_back(std::move(s));
  }

  std::vector<RestartResult> results(starts.size());
  const int workers = std::min<int>(config.threads, static_cast<int>(starts.size()));
  if (workers <= 1) {
    for (std::size_t r = 0; r < starts.size(); ++r) results[r] = run_restart(config, obj, starts[r], static_cast<int>(r));
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = w; r < starts.size(); r += workers) {
          results[r] = run_restart(config, obj, starts[r], static_cast<int>(r));
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  report.restarts_used = static_cast<int>(results.size());
  double running = -1.0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& res = results[r];
    report.iterations += res.iterations;
    report.budget_exhausted = report.budget_exhausted || res.exhausted;
    if (r == 0 || better(res.point, report.best)) {
      report.best = res.point;
      report.best_restart = static_cast<int>(r);
    }
    for (const auto& t : res.trace) {
      if (t.objective > running) {
        running = t.objective;
        report.trace.push_back(t);
      }
    }
  }

  // Exact re-verification of the returned point.
  ExactCertificate& cert = report.certificate;
  cert.z = closure(WeightVector::from_double(report.best.z), catalog);
  const auto check = feasibility(cert.z, config, family);
  cert.y_value = check.y_value;
  cert.objective = check.objective;
  cert.feasible = cert.y_value <= rational_from_double(config.y_cap) + rational_from_double(config.tol);
  return report;
}

BoundCheck bound_check(const FeasiblePoint& point, double epsilon) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("bound_check: epsilon must be non-negative");
  BoundCheck b;
  b.objective = point.objective;
  b.bound = 0.5 * (1.0 + epsilon);
  b.pass = point.objective <= b.bound;
  return b;
}

}  // namespace bridgelab
