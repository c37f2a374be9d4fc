#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rhhh/calibration.hpp"
#include "rhhh/hierarchy.hpp"
#include "rhhh/oracle.hpp"
#include "rhhh/sketch.hpp"

namespace rhhh {

struct EvalReport {
  // Output prefixes whose |f_p - upper estimate| exceeds epsilon * N.
  double accuracy_error_ratio = 0;
  uint64_t accuracy_errors = 0;
  // Excluded prefixes q with C_{q|P} >= theta * N.
  std::vector<Prefix> coverage_errors;
  uint64_t excluded_checked = 0;
  // Output prefixes outside the exact HHH set.
  double false_positive_rate = 0;
  size_t output_size = 0;
  uint64_t packets = 0;
  std::optional<double> wall_time;
  std::optional<double> updates_per_second;
};

/// Scores an output set against exact counts. Coverage is checked for every
/// prefix with nonzero exact frequency that is absent from the output.
EvalReport evaluate(const HhhSet& output, const ExactIndex& exact, double theta, double epsilon);
EvalReport evaluate(const HhhSet& output, const ExactIndex& exact, const ExactHhhResult& exact_hhh,
                    double theta, double epsilon);

// Serial, definition-level coverage count used to cross-check evaluate().
uint64_t coverage_errors_reference(const HhhSet& output, const ExactFrequencyTable& table,
                                   const Hierarchy& hierarchy, double theta);

enum class Algorithm { rhhh, mst, exact };
Algorithm parse_algorithm(std::string_view name);
std::string_view algorithm_name(Algorithm a);

struct BenchParams {
  Calibration calibration;
  uint64_t seed = 1;
  int repetitions = 5;
};

struct BenchResult {
  Algorithm algorithm = Algorithm::rhhh;
  uint64_t packets = 0;
  int repetitions = 0;
  double median_updates_per_second = 0;
  double min_updates_per_second = 0;
  double max_updates_per_second = 0;
  double median_seconds = 0;
};

// Times update() over a pre-loaded stream on the calling thread. A fresh
// sketch is built for every repetition; construction is not timed.
BenchResult bench_update(Algorithm algorithm, const Hierarchy& hierarchy, std::span<const PacketKey> stream,
                         const BenchParams& params);

}  // namespace rhhh
