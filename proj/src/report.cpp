#include "rhhh/report.hpp"

namespace rhhh {

using nlohmann::json;

json prefix_json(const Hierarchy& h, const Prefix& p) {
  json j;
  j["prefix"] = h.format(p);
  j["src"] = h.format_src(p);
  if (h.dims() == 2) j["dst"] = h.format_dst(p);
  j["level"] = h.level(p.node);
  return j;
}

json hhh_set_json(const Hierarchy& h, const HhhSet& set) {
  json entries = json::array();
  for (const HhhEntry& e : set.entries) {
    json j = prefix_json(h, e.prefix);
    j["lower"] = e.estimate.lower;
    j["upper"] = e.estimate.upper;
    j["conditioned_estimate"] = e.conditioned;
    entries.push_back(std::move(j));
  }
  return json{{"N", set.packets}, {"theta", set.theta}, {"delta", set.delta}, {"entries", std::move(entries)}};
}

json exact_hhh_json(const Hierarchy& h, const ExactIndex& index, const ExactHhhResult& result) {
  json entries = json::array();
  for (const Prefix& p : result.hhh) {
    json j = prefix_json(h, p);
    const auto f = static_cast<double>(index.frequency(p));
    j["lower"] = f;
    j["upper"] = f;
    entries.push_back(std::move(j));
  }
  return json{{"N", index.total()}, {"entries", std::move(entries)}};
}

json eval_report_json(const Hierarchy& h, const EvalReport& report) {
  json missed = json::array();
  for (const Prefix& q : report.coverage_errors) missed.push_back(h.format(q));
  json j;
  j["accuracy_error_ratio"] = report.accuracy_error_ratio;
  j["coverage_errors"] = json{{"count", report.coverage_errors.size()}, {"prefixes", std::move(missed)}};
  j["false_positive_rate"] = report.false_positive_rate;
  j["output_size"] = report.output_size;
  j["N"] = report.packets;
  j["wall_time"] = report.wall_time ? json(*report.wall_time) : json(nullptr);
  j["updates_per_second"] = report.updates_per_second ? json(*report.updates_per_second) : json(nullptr);
  return j;
}

json calibration_json(const Calibration& c) {
  return json{{"epsilon", c.epsilon}, {"delta", c.delta},     {"theta", c.theta},     {"V", c.v},
              {"r", c.r},             {"eps_a", c.eps_a},     {"eps_s", c.eps_s},     {"delta_a", c.delta_a},
              {"delta_s", c.delta_s}, {"capacity", c.capacity}, {"psi", c.psi}};
}

json bench_result_json(const BenchResult& r) {
  return json{{"algorithm", algorithm_name(r.algorithm)},
              {"N", r.packets},
              {"repetitions", r.repetitions},
              {"updates_per_second", r.median_updates_per_second},
              {"min_updates_per_second", r.min_updates_per_second},
              {"max_updates_per_second", r.max_updates_per_second},
              {"median_seconds", r.median_seconds}};
}

}  // namespace rhhh
