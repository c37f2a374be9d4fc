#pragma once

#include <json.hpp>

#include "rhhh/calibration.hpp"
#include "rhhh/hierarchy.hpp"
#include "rhhh/metrics.hpp"
#include "rhhh/sketch.hpp"

namespace rhhh {

// JSON views of the library's result types. Field names are stable.
nlohmann::json prefix_json(const Hierarchy& h, const Prefix& p);
nlohmann::json hhh_set_json(const Hierarchy& h, const HhhSet& set);
nlohmann::json exact_hhh_json(const Hierarchy& h, const ExactIndex& index, const ExactHhhResult& result);
nlohmann::json eval_report_json(const Hierarchy& h, const EvalReport& report);
nlohmann::json calibration_json(const Calibration& c);
nlohmann::json bench_result_json(const BenchResult& r);

}  // namespace rhhh
