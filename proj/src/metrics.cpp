#include "rhhh/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace rhhh {

EvalReport evaluate(const HhhSet& output, const ExactIndex& exact, const ExactHhhResult& exact_hhh,
                    double theta, double epsilon) {
  EvalReport report;
  report.packets = exact.total();
  report.output_size = output.entries.size();
  const double n = static_cast<double>(exact.total());

  const std::unordered_set<Prefix, PrefixHash> truth(exact_hhh.hhh.begin(), exact_hhh.hhh.end());
  uint64_t false_positives = 0;
  for (const HhhEntry& e : output.entries) {
    const double f = static_cast<double>(exact.frequency(e.prefix));
    if (std::abs(f - e.estimate.upper) > epsilon * n) ++report.accuracy_errors;
    if (!truth.contains(e.prefix)) ++false_positives;
  }
  if (!output.entries.empty()) {
    report.accuracy_error_ratio = static_cast<double>(report.accuracy_errors) / output.entries.size();
    report.false_positive_rate = static_cast<double>(false_positives) / output.entries.size();
  }

  const std::vector<Prefix> selected = output.prefixes();
  const std::unordered_set<Prefix, PrefixHash> in_output(selected.begin(), selected.end());
  std::vector<Prefix> excluded;
  for (const Prefix& q : exact.universe()) {
    if (!in_output.contains(q)) excluded.push_back(q);
  }
  report.excluded_checked = excluded.size();
  const std::vector<uint64_t> cond = conditioned_frequencies(exact, excluded, selected);
  for (size_t i = 0; i < excluded.size(); ++i) {
    if (static_cast<double>(cond[i]) >= theta * n) report.coverage_errors.push_back(excluded[i]);
  }
  return report;
}

EvalReport evaluate(const HhhSet& output, const ExactIndex& exact, double theta, double epsilon) {
  return evaluate(output, exact, exact_hhh(exact, theta), theta, epsilon);
}

uint64_t coverage_errors_reference(const HhhSet& output, const ExactFrequencyTable& table,
                                   const Hierarchy& hierarchy, double theta) {
  const std::vector<Prefix> selected = output.prefixes();
  std::vector<Prefix> universe;
  for (const auto& kv : table.counts()) {
    for (size_t node = 0; node < hierarchy.size(); ++node) {
      universe.push_back(hierarchy.generalize(PacketKey::from_packed(kv.first), node));
    }
  }
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  uint64_t errors = 0;
  const double threshold = theta * static_cast<double>(table.total());
  for (const Prefix& q : universe) {
    if (std::find(selected.begin(), selected.end(), q) != selected.end()) continue;
    if (static_cast<double>(exact_conditioned_frequency(table, hierarchy, q, selected)) >= threshold) ++errors;
  }
  return errors;
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "rhhh") return Algorithm::rhhh;
  if (name == "mst") return Algorithm::mst;
  if (name == "exact") return Algorithm::exact;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "' (expected rhhh, mst or exact)");
}

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::rhhh: return "rhhh";
    case Algorithm::mst: return "mst";
    case Algorithm::exact: return "exact";
  }
  return "?";
}

BenchResult bench_update(Algorithm algorithm, const Hierarchy& hierarchy, std::span<const PacketKey> stream,
                         const BenchParams& params) {
  if (params.repetitions < 1) throw std::invalid_argument("repetitions must be positive");
  BenchResult result;
  result.algorithm = algorithm;
  result.packets = stream.size();
  result.repetitions = params.repetitions;

  std::vector<double> seconds;
  uint64_t sink = 0;
  for (int rep = 0; rep < params.repetitions; ++rep) {
    const auto seed = params.seed + static_cast<uint64_t>(rep);
    std::chrono::steady_clock::duration elapsed{};
    if (algorithm == Algorithm::exact) {
      ExactFrequencyTable table;
      const auto t0 = std::chrono::steady_clock::now();
      for (const PacketKey& k : stream) table.add(k);
      elapsed = std::chrono::steady_clock::now() - t0;
      sink += table.distinct();
    } else {
      Sketch sketch = algorithm == Algorithm::rhhh
                          ? Sketch::randomized(hierarchy, params.calibration, seed)
                          : Sketch::deterministic(hierarchy, params.calibration.capacity);
      const auto t0 = std::chrono::steady_clock::now();
      if (algorithm == Algorithm::rhhh) {
        for (const PacketKey& k : stream) sketch.update(k);
      } else {
        for (const PacketKey& k : stream) mst_update(sketch, k);
      }
      elapsed = std::chrono::steady_clock::now() - t0;
      sink += sketch.instance(0).total_updates();
    }
    seconds.push_back(std::chrono::duration<double>(elapsed).count());
  }
  // Keeps the update loops observable.
  if (sink == UINT64_MAX) result.packets = 0;

  std::sort(seconds.begin(), seconds.end());
  result.median_seconds = seconds[seconds.size() / 2];
  if (stream.empty()) return result;
  auto rate = [&](double s) { return s > 0 ? static_cast<double>(stream.size()) / s : 0.0; };
  result.median_updates_per_second = rate(result.median_seconds);
  result.min_updates_per_second = rate(seconds.back());
  result.max_updates_per_second = rate(seconds.front());
  return result;
}

}  // namespace rhhh
