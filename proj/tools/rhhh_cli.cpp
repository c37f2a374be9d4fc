// rhhh: hierarchical heavy hitters over packet traces.
//
//   rhhh run   --algorithm rhhh --hierarchy 2d-byte --format zipf --packets 1000000 --out report.json
//   rhhh bench --hierarchy 2d-byte --format zipf --packets 10000000 --v-ratios 1,2,5,10

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "rhhh/calibration.hpp"
#include "rhhh/metrics.hpp"
#include "rhhh/oracle.hpp"
#include "rhhh/report.hpp"
#include "rhhh/sketch.hpp"
#include "rhhh/trace_io.hpp"

using nlohmann::json;

namespace {

struct RunConfig {
  std::string algorithm = "rhhh";
  std::string hierarchy = "1d-byte";
  double epsilon = 0.01;
  double delta = 0.05;
  double theta = 0.05;
  double v_ratio = 1.0;
  uint32_t r = 1;
  uint64_t seed = 1;
  double split_ratio = 0.5;
  double quantile_divisor = 8.0;
  std::string input;
  std::string format = "zipf";
  uint64_t zipf_flows = 10000;
  double zipf_s = 1.0;
  uint64_t packets = 1'000'000;
  std::vector<uint64_t> checkpoints;
  std::string out;
  bool timing = false;
  bool verify = false;
  bool no_eval = false;
  // bench only
  std::vector<double> v_ratios{1.0};
  int repetitions = 5;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::unique_ptr<rhhh::RecordSource> open_source(const RunConfig& cfg) {
  if (cfg.format == "zipf") {
    return std::make_unique<rhhh::ZipfStream>(
        rhhh::SyntheticSpec{cfg.zipf_flows, cfg.zipf_s, cfg.packets, cfg.seed});
  }
  if (cfg.input.empty()) throw ConfigError("--input is required for --format " + cfg.format);
  if (cfg.format == "csv") return std::make_unique<rhhh::CsvReader>(cfg.input);
  if (cfg.format == "bin") return std::make_unique<rhhh::BinaryReader>(cfg.input);
  throw ConfigError("unknown format '" + cfg.format + "'");
}

uint64_t v_for(double v_ratio, size_t lattice) {
  if (!(v_ratio >= 1)) throw ConfigError("--v-ratio must be at least 1");
  return rhhh::ceil_tolerant(v_ratio * static_cast<double>(lattice));
}

void emit(const RunConfig& cfg, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw ConfigError("cannot write '" + cfg.out + "'");
  out << text;
}

int run(const RunConfig& cfg) {
  const rhhh::Hierarchy h = rhhh::Hierarchy::from_name(cfg.hierarchy);
  const rhhh::Algorithm algorithm = rhhh::parse_algorithm(cfg.algorithm);
  if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end())) {
    throw ConfigError("--checkpoints must be sorted");
  }
  const uint64_t v = v_for(cfg.v_ratio, h.size());
  const bool sampled = algorithm == rhhh::Algorithm::rhhh;
  const rhhh::Calibration cal =
      rhhh::derive(cfg.epsilon, cfg.delta, cfg.theta, sampled ? v : h.size(), sampled ? cfg.r : 1, h.size(),
                   sampled ? cfg.split_ratio : 1.0);

  std::optional<rhhh::Sketch> sketch;
  if (algorithm == rhhh::Algorithm::rhhh) sketch.emplace(rhhh::Sketch::randomized(h, cal, cfg.seed, cfg.quantile_divisor));
  if (algorithm == rhhh::Algorithm::mst) sketch.emplace(rhhh::Sketch::deterministic(h, cal.capacity));

  rhhh::ExactFrequencyTable table;
  bool oracle = !cfg.no_eval || algorithm == rhhh::Algorithm::exact;
  bool verified = true;

  json params = rhhh::calibration_json(cal);
  params["seed"] = cfg.seed;
  params["v_ratio"] = cfg.v_ratio;
  params["quantile_divisor"] = cfg.quantile_divisor;
  params["format"] = cfg.format;
  if (cfg.format == "zipf") {
    params["zipf_flows"] = cfg.zipf_flows;
    params["zipf_s"] = cfg.zipf_s;
    params["packets"] = cfg.packets;
  } else {
    params["input"] = cfg.input;
  }
  json report{{"algorithm", cfg.algorithm}, {"hierarchy", cfg.hierarchy}, {"params", params}, {"psi", cal.psi}};
  json checkpoints = json::array();

  uint64_t n = 0;
  std::chrono::steady_clock::duration update_time{};
  auto checkpoint = [&] {
    json cp{{"N", n}};
    if (algorithm == rhhh::Algorithm::rhhh) {
      cp["converged"] = static_cast<double>(n) >= cal.psi;
      cp["eps_s_of_N"] = n > 0 ? json(rhhh::eps_s_of_n(cal.delta_s, cal.v, static_cast<double>(n) * cal.r)) : json(nullptr);
    } else {
      cp["converged"] = true;
      cp["eps_s_of_N"] = nullptr;
    }
    if (algorithm == rhhh::Algorithm::exact) {
      const rhhh::ExactIndex index(table, h);
      cp["hhh"] = rhhh::exact_hhh_json(h, index, rhhh::exact_hhh(index, cfg.theta));
      cp["eval"] = nullptr;
    } else {
      const rhhh::HhhSet out = sketch->output(cfg.theta, cfg.delta);
      cp["hhh"] = rhhh::hhh_set_json(h, out);
      if (oracle) {
        const rhhh::ExactIndex index(table, h);
        rhhh::EvalReport eval = rhhh::evaluate(out, index, cfg.theta, cfg.epsilon);
        if (cfg.timing) {
          const double secs = std::chrono::duration<double>(update_time).count();
          eval.wall_time = secs;
          eval.updates_per_second = secs > 0 ? static_cast<double>(n) / secs : 0.0;
        }
        if (cfg.verify && algorithm == rhhh::Algorithm::mst &&
            (!eval.coverage_errors.empty() || eval.accuracy_errors != 0)) {
          verified = false;
        }
        cp["eval"] = rhhh::eval_report_json(h, eval);
      } else {
        cp["eval"] = nullptr;
      }
    }
    checkpoints.push_back(std::move(cp));
  };

  auto source = open_source(cfg);
  size_t next_cp = 0;
  rhhh::PacketRecord rec;
  while (source->next(rec)) {
    if (h.dims() == 1) rec.dst = 0;
    const auto t0 = std::chrono::steady_clock::now();
    if (sketch) sketch->update(rec);
    update_time += std::chrono::steady_clock::now() - t0;
    ++n;
    if (oracle) {
      table.add(rec);
      if (table.distinct() > rhhh::kOracleMaxDistinctKeys) {
        if (algorithm == rhhh::Algorithm::exact) {
          throw ConfigError("trace exceeds the exact oracle limit of " +
                            std::to_string(rhhh::kOracleMaxDistinctKeys) + " distinct keys");
        }
        std::cerr << "warning: more than " << rhhh::kOracleMaxDistinctKeys
                  << " distinct keys; oracle evaluation disabled\n";
        oracle = false;
        table = rhhh::ExactFrequencyTable{};
      }
    }
    while (next_cp < cfg.checkpoints.size() && cfg.checkpoints[next_cp] < n) ++next_cp;
    if (next_cp < cfg.checkpoints.size() && cfg.checkpoints[next_cp] == n) {
      checkpoint();
      ++next_cp;
    }
  }
  if (checkpoints.empty() || checkpoints.back()["N"] != n) checkpoint();

  report["checkpoints"] = std::move(checkpoints);
  emit(cfg, report);
  return verified ? 0 : 3;
}

int bench(const RunConfig& cfg) {
  const rhhh::Hierarchy h = rhhh::Hierarchy::from_name(cfg.hierarchy);
  auto source = open_source(cfg);
  std::vector<rhhh::PacketKey> stream = rhhh::materialize(*source);
  if (h.dims() == 1) {
    for (auto& k : stream) k.dst = 0;
  }

  json results = json::array();
  for (const double ratio : cfg.v_ratios) {
    const uint64_t v = v_for(ratio, h.size());
    rhhh::BenchParams p{rhhh::derive(cfg.epsilon, cfg.delta, cfg.theta, v, cfg.r, h.size(), cfg.split_ratio),
                        cfg.seed, cfg.repetitions};
    json j = rhhh::bench_result_json(rhhh::bench_update(rhhh::Algorithm::rhhh, h, stream, p));
    j["v_ratio"] = ratio;
    j["V"] = v;
    j["r"] = cfg.r;
    results.push_back(std::move(j));
  }
  rhhh::BenchParams mst{rhhh::derive(cfg.epsilon, cfg.delta, cfg.theta, h.size(), 1, h.size(), 1.0), cfg.seed,
                        cfg.repetitions};
  json j = rhhh::bench_result_json(rhhh::bench_update(rhhh::Algorithm::mst, h, stream, mst));
  j["v_ratio"] = nullptr;
  j["V"] = h.size();
  j["r"] = 1;
  results.push_back(std::move(j));

  emit(cfg, json{{"hierarchy", cfg.hierarchy}, {"H", h.size()}, {"N", stream.size()}, {"results", results}});
  return 0;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--hierarchy", cfg.hierarchy, "1d-byte, 1d-bit or 2d-byte")
      ->check(CLI::IsMember({"1d-byte", "1d-bit", "2d-byte"}));
  cmd->add_option("--epsilon", cfg.epsilon, "overall estimation error, as a fraction of N");
  cmd->add_option("--delta", cfg.delta, "failure probability");
  cmd->add_option("--theta", cfg.theta, "HHH threshold, as a fraction of N");
  cmd->add_option("--r", cfg.r, "update operations per packet");
  cmd->add_option("--seed", cfg.seed, "seed for sampling and synthetic traces");
  cmd->add_option("--split-ratio", cfg.split_ratio, "share of epsilon given to the counters");
  cmd->add_option("--input", cfg.input, "trace path for csv or bin formats");
  cmd->add_option("--format", cfg.format, "csv, bin or zipf")->check(CLI::IsMember({"csv", "bin", "zipf"}));
  cmd->add_option("--zipf-flows", cfg.zipf_flows, "distinct flows in the synthetic trace");
  cmd->add_option("--zipf-s", cfg.zipf_s, "Zipf skew exponent");
  cmd->add_option("--packets", cfg.packets, "synthetic trace length");
  cmd->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized hierarchical heavy hitters"};
  app.require_subcommand(1);
  RunConfig cfg;

  CLI::App* run_cmd = app.add_subcommand("run", "stream a trace and report HHH sets");
  add_common(run_cmd, cfg);
  run_cmd->add_option("--algorithm", cfg.algorithm, "rhhh, mst or exact")
      ->check(CLI::IsMember({"rhhh", "mst", "exact"}));
  run_cmd->add_option("--v-ratio", cfg.v_ratio, "V = ceil(v_ratio * H)");
  run_cmd->add_option("--quantile-divisor", cfg.quantile_divisor, "correction uses Z_{1 - delta / divisor}");
  run_cmd->add_option("--checkpoints", cfg.checkpoints, "packet counts at which to report")->delimiter(',');
  run_cmd->add_flag("--timing", cfg.timing, "include update timing in evaluation reports");
  run_cmd->add_flag("--verify", cfg.verify, "exit 3 if the deterministic baseline breaks its guarantees");
  run_cmd->add_flag("--no-eval", cfg.no_eval, "skip oracle evaluation");

  CLI::App* bench_cmd = app.add_subcommand("bench", "update throughput of rhhh and mst");
  add_common(bench_cmd, cfg);
  bench_cmd->add_option("--v-ratios", cfg.v_ratios, "V / H values for rhhh")->delimiter(',');
  bench_cmd->add_option("--reps", cfg.repetitions, "timed repetitions per configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run(cfg);
    return bench(cfg);
  } catch (const std::exception& e) {
    std::cerr << "rhhh: " << e.what() << "\n";
    return 1;
  }
}
