#include "dirac/report.hpp"

#include <cmath>
#include <ostream>

namespace dirac {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json Report::to_json() const {
  Json j;
  j["check"] = check;
  j["paper_ref"] = paper_ref;
  j["params"] = params;
  j["pass"] = pass;
  j["margin"] = number(margin);
  j["rows"] = rows;
  return j;
}

void Report::write(std::ostream& os) const { os << to_json().dump(2) << '\n'; }

Json to_json(const RatioReport& r) {
  return {{"mu", number(r.mu)},
          {"lambda", number(r.lambda)},
          {"theta", number(r.theta)},
          {"measured", number(r.measured)},
          {"bound", number(r.bound)},
          {"log_measured", number(r.log_measured)},
          {"log_bound", number(r.log_bound)},
          {"margin", number(r.margin())},
          {"hypotheses_checked", r.hypotheses_checked},
          {"pass", r.passed()}};
}

Json to_json(const CorollaryReport& r) {
  Json modes = Json::array();
  for (const auto& m : r.modes)
    modes.push_back({{"mu", number(m.mu)},
                     {"multiplicity", m.multiplicity},
                     {"theta", number(m.theta)},
                     {"measured", number(m.measured)},
                     {"per_mode_bound", number(m.per_mode_bound)},
                     {"bound", number(m.bound)},
                     {"pass", m.passed}});
  Json dyadic = Json::array();
  for (const auto& d : r.dyadic)
    dyadic.push_back({{"k", d.k},
                      {"mu", number(d.mu)},
                      {"t_2k", number(d.t_2)},
                      {"t_1k", number(d.t_1)},
                      {"t_m1k", number(d.t_m1)},
                      {"t_m2k", number(d.t_m2)},
                      {"measured", number(d.measured)},
                      {"bound", number(d.bound)},
                      {"pass", d.passed}});
  Json chain = Json::array();
  for (const auto& [name, value] : r.chain) chain.push_back({{"term", name}, {"value", number(value)}});
  return {{"check", r.check},
          {"n", r.n},
          {"t_2", number(r.t_2)},
          {"t_1", number(r.t_1)},
          {"t_m1", number(r.t_m1)},
          {"t_m2", number(r.t_m2)},
          {"Lambda", number(r.Lambda)},
          {"lambda", number(r.lambda)},
          {"mu_max", number(r.mu_max)},
          {"bound", number(r.bound)},
          {"aggregate_ratio", number(r.aggregate_ratio)},
          {"geometric_sum", number(r.geometric_sum)},
          {"chain", chain},
          {"modes", modes},
          {"dyadic", dyadic},
          {"pass", r.passed}};
}

Json to_json(const Prop33Report& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"theta", number(row.theta)},
                    {"inner", number(row.inner)},
                    {"outer", number(row.outer)},
                    {"rhs", number(row.rhs)},
                    {"pass", row.passed}});
  return {{"lambda", number(r.lambda)}, {"a", number(r.a)},   {"b", number(r.b)},
          {"c", number(r.c)},           {"mu", number(r.mu)}, {"hypothesis_value", number(r.hypothesis_value)},
          {"worst_quotient", number(r.worst_quotient())}, {"rows", rows}, {"pass", r.passed}};
}

Json to_json(const ClosenessReport& r) {
  Json pairs = Json::array();
  for (const auto& [a, b] : r.pairs) pairs.push_back({number(a), number(b)});
  return {{"status", to_string(r.status)},
          {"Lambda", number(r.Lambda)},
          {"epsilon", number(r.epsilon)},
          {"count1", r.count1},
          {"count2", r.count2},
          {"max_gap", number(r.max_gap)},
          {"detail", r.detail},
          {"pairs", pairs}};
}

Json to_json(const ClaimReport& r) {
  return {{"lambda", number(r.lambda)},       {"epsilon", number(r.epsilon)},
          {"point_count", r.point_count},     {"glued_count", r.glued_count},
          {"outer_count", r.outer_count},     {"pass", r.passed}};
}

Json to_json(const RayleighReport& r) {
  return {{"mu", number(r.mu)},
          {"lambda", number(r.lambda)},
          {"t_2", number(r.t_2)},
          {"chi_mass", number(r.chi_mass)},
          {"gradient_mass", number(r.gradient_mass)},
          {"quotient", number(r.quotient)},
          {"bound_b", number(r.bound_b)},
          {"bound_c", number(r.bound_c)},
          {"a_ok", r.a_ok},
          {"b_ok", r.b_ok},
          {"c_ok", r.c_ok},
          {"hypotheses_ok", r.hypotheses_ok},
          {"pass", r.passed()}};
}

Json to_json(const SignedCount& c) {
  return {{"negatives", c.negatives}, {"positives", c.positives}, {"zeros", c.zeros},
          {"balance", c.balance()}};
}

Json to_json(const CrossingReport& r) {
  return {{"T0", number(r.T0)},
          {"residual", number(r.residual)},
          {"bracket_lo", number(r.bracket_lo)},
          {"bracket_hi", number(r.bracket_hi)},
          {"at_a", to_json(r.at_a)},
          {"at_b", to_json(r.at_b)},
          {"evaluations", r.evaluations}};
}

Json to_json(const ComparisonReport& r) {
  return {{"status", to_string(r.status)},
          {"a_sup", number(r.a_sup)},
          {"anchor_mismatch", number(r.anchor_mismatch)},
          {"worst_defect_excess", number(r.worst_defect_excess)},
          {"worst_margin", number(r.worst_margin)},
          {"points", r.grid.size()},
          {"detail", r.detail}};
}

}  // namespace dirac
