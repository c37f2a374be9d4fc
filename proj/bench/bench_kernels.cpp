// Compares the OpenMP oracle kernels with their serial references, then
// times rhhh and mst updates on the same stream.
//
//   rhhh_bench [packets] [flows]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "rhhh/metrics.hpp"
#include "rhhh/oracle.hpp"
#include "rhhh/trace_io.hpp"

using namespace rhhh;

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const uint64_t packets = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2'000'000;
  const uint64_t flows = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20'000;
  const double theta = 0.01;
  std::printf("threads=%d packets=%llu flows=%llu\n", omp_get_max_threads(),
              static_cast<unsigned long long>(packets), static_cast<unsigned long long>(flows));

  ZipfStream z({.flows = flows, .zipf_s = 1.0, .packets = packets, .seed = 1});
  const auto stream = materialize(z);

  for (const auto& h : {Hierarchy::one_d_byte(), Hierarchy::one_d_bit(), Hierarchy::two_d_byte()}) {
    ExactFrequencyTable table;
    for (const auto& k : stream) table.add(h.dims() == 1 ? PacketKey{k.src, 0} : k);

    ExactHhhResult fast, ref;
    const double t_index = seconds([&] { ExactIndex index(table, h); fast = exact_hhh(index, theta); });
    const double t_ref = seconds([&] { ref = exact_hhh_reference(table, h, theta); });
    std::printf("H=%-3zu exact_hhh   indexed+omp %.3fs  serial reference %.3fs  speedup %.1fx  same=%s\n",
                h.size(), t_index, t_ref, t_ref / t_index, fast.hhh.size() == ref.hhh.size() ? "yes" : "no");

    const Calibration cal = derive(0.001, 0.01, theta, h.size(), 1, h.size());
    Sketch sketch = Sketch::randomized(h, cal, 1);
    for (const auto& k : stream) sketch.update(k);
    const HhhSet out = sketch.output(theta, 0.01);
    const ExactIndex index(table, h);
    const double t_eval = seconds([&] { evaluate(out, index, theta, 0.001); });
    uint64_t ref_errors = 0;
    const double t_eval_ref = seconds([&] { ref_errors = coverage_errors_reference(out, table, h, theta); });
    std::printf("H=%-3zu coverage    indexed+omp %.3fs  serial reference %.3fs  speedup %.1fx  errors=%llu\n",
                h.size(), t_eval, t_eval_ref, t_eval_ref / t_eval, static_cast<unsigned long long>(ref_errors));

    for (Algorithm a : {Algorithm::rhhh, Algorithm::mst}) {
      const BenchResult r = bench_update(a, h, stream, {cal, 1, 3});
      std::printf("H=%-3zu update      %-4s %.2f Mpps\n", h.size(), std::string(algorithm_name(a)).c_str(),
                  r.median_updates_per_second / 1e6);
    }
  }
}
