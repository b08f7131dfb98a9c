#include "bridgelab/report.hpp"

#include <stdexcept>

namespace bridgelab {

Json to_json(const Rational& q) { return Json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}}; }

Json to_json(const BigInt& z) { return z.get_str(); }

Json to_json(const RootedTreeCode& t) { return Json{{"code", t.code}, {"size", t.size}, {"aut", t.aut_r.get_str()}}; }

Json to_json(const UnrootedTreeCode& u) {
  return Json{{"code", u.code},
              {"size", u.size},
              {"aut", u.aut_u.get_str()},
              {"centroid", u.centroid_kind == CentroidKind::One ? "one" : "two"}};
}

Json to_json(const LabeledForest& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return edges;
}

Json to_json(const EdgeSplit& s) {
  return Json{{"parent", s.parent.code}, {"t_minus", s.t_minus.code}, {"u_plus", s.u_plus.code},
              {"m_edge", s.m_edge},      {"m_vminus", s.m_vminus},    {"n_vplus", s.n_vplus}};
}

Json to_json(const DecompositionTrace& t, const Catalog& catalog) {
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"piece", catalog.u0().at(s.piece).code}, {"from", s.from_index}, {"to", s.to_index}});
  }
  return steps;
}

Json weights_json(const WeightVector& z, const Catalog& catalog) {
  Json out = Json::object();
  for (std::size_t i = 0; i < z.size(); ++i) out[catalog.u0().at(i).code] = to_json(z[i]);
  return out;
}

Json weights_json(const std::vector<double>& z, const Catalog& catalog) {
  Json out = Json::object();
  for (std::size_t i = 0; i < z.size(); ++i) out[catalog.u0().at(i).code] = z[i];
  return out;
}

Json catalog_json(const Catalog& catalog) {
  Json t0 = Json::array(), u0 = Json::array();
  for (const auto& t : catalog.t0()) t0.push_back(t.code);
  for (const auto& u : catalog.u0()) u0.push_back(u.code);
  return Json{{"t_max", catalog.t_max()}, {"u_max", catalog.u_max()}, {"t0", t0}, {"u0", u0}};
}

Json to_json(const SimpleCountingReport& r) {
  Json ratios = Json::array();
  for (std::size_t i = 1; i < r.ratios.size(); ++i) ratios.push_back(r.ratios[i] ? to_json(*r.ratios[i]) : Json());
  Json counts = Json::array();
  for (std::size_t i = 1; i < r.counts.size(); ++i) counts.push_back(r.counts[i]);
  return Json{{"pass", r.holds}, {"counts", counts}, {"ratios", ratios}, {"violations", r.violations}};
}

Json to_json(const LocalSweepReport& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"lower", v.lower},
                          {"t", v.t},
                          {"t_minus", v.t_minus},
                          {"u_plus", v.u_plus},
                          {"lhs", to_json(v.lhs)},
                          {"rhs", to_json(v.rhs)}});
  }
  return Json{{"pass", r.holds},
              {"w", r.w},
              {"q", r.q},
              {"grid_boxes", to_json(r.grid_boxes)},
              {"boxes_checked", r.boxes_checked},
              {"cases", r.cases},
              {"inequalities_checked", r.inequalities_checked},
              {"violation_count", r.violation_count},
              {"violations", violations}};
}

Json to_json(const SumBoundSweepReport& r) {
  return Json{{"pass", r.holds},
              {"w", r.w},
              {"q", r.q},
              {"bound", to_json(r.bound)},
              {"max_y", to_json(r.max_y)},
              {"max_y_decimal", r.max_y.get_d()},
              {"argmax", r.argmax},
              {"boxes_checked", r.boxes_checked},
              {"violation_count", r.violation_count},
              {"violations", r.violations}};
}

Json to_json(const BoxingReport& r) {
  return Json{{"success", r.success},
              {"w", r.w},
              {"q", r.q},
              {"period", r.period},
              {"epsilon", r.epsilon},
              {"shift", r.shift},
              {"boxes", r.boxes},
              {"captured", r.captured},
              {"totals", r.totals},
              {"min_fraction", r.min_fraction},
              {"exhaustive", r.exhaustive},
              {"shifts_examined", r.shifts_examined},
              {"precondition", {{"lhs", r.precondition_lhs}, {"rhs", r.precondition_rhs}, {"holds", r.precondition_holds}}}};
}

Json to_json(const DissymmetryReport& r) {
  return Json{{"pass", r.holds},      {"k", r.k},
              {"y", to_json(r.y)},    {"yu", to_json(r.yu)},
              {"y_half", to_json(r.y_half)}, {"lhs", to_json(r.lhs)},
              {"rhs", to_json(r.rhs)}, {"slack", Rational(r.lhs - r.rhs).get_d()}};
}

Json to_json(const OptimizerReport& r, const Catalog& catalog) {
  Json trace = Json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"restart", t.restart}, {"iteration", t.iteration}, {"objective", t.objective}, {"y", t.y_value}});
  }
  Json u0 = Json::array();
  for (const auto& u : catalog.u0()) u0.push_back(u.code);
  return Json{{"u0", u0},
              {"objective", r.best.objective},
              {"z", weights_json(r.best.z, catalog)},
              {"y_value", r.best.y_value},
              {"closed", r.best.closed},
              {"restarts_used", r.restarts_used},
              {"best_restart", r.best_restart},
              {"iterations", r.iterations},
              {"budget_exhausted", r.budget_exhausted},
              {"single_variable_threshold", r.single_variable_threshold},
              {"exact",
               {{"z", weights_json(r.certificate.z, catalog)},
                {"y_value", to_json(r.certificate.y_value)},
                {"objective", to_json(r.certificate.objective)},
                {"feasible", r.certificate.feasible}}},
              {"trace", trace}};
}

Rational rational_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den")) {
    throw std::invalid_argument("rational must be an object with \"num\" and \"den\"");
  }
  Rational q(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
  if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator");
  q.canonicalize();
  return q;
}

}  // namespace bridgelab
