#pragma once

#include <cstddef>
#include <cstdint>

namespace rhhh {

// Inverse standard normal CDF. Absolute error below 1e-6 on (0, 1).
// Throws std::invalid_argument outside (0, 1).
double probit(double q);

// Stream length after which the sampling error is within eps_s with
// probability 1 - delta_s: ceil(Z_{1-delta_s/2} * V / eps_s^2 / r).
double psi(double delta_s, double eps_s, uint64_t v, uint32_t r = 1);

// Sampling error reached after n packets: sqrt(Z_{1-delta_s/2} * V / n).
double eps_s_of_n(double delta_s, uint64_t v, double n);

struct Calibration {
  double epsilon = 0;
  double delta = 0;
  double theta = 0;
  uint64_t v = 0;
  uint32_t r = 1;
  double eps_a = 0;
  double eps_s = 0;
  double delta_a = 0;
  double delta_s = 0;
  size_t capacity = 0;  // counters per lattice node
  double psi = 0;       // 0 when eps_s == 0 (no sampling)

  bool deterministic() const { return eps_s == 0; }
};

/// Splits (epsilon, delta) between the counter algorithm and the sampling
/// process and sizes each counter table.
///
/// eps_a = split_ratio * epsilon, eps_s = the rest. Space Saving has no
/// failure probability, so delta_s = delta / 2. The capacity absorbs an
/// over-sampled instance: ceil((1 + eps_s) / eps_a). split_ratio == 1 gives
/// the deterministic calibration with capacity ceil(1 / eps_a).
///
/// Throws std::invalid_argument unless 0 < epsilon < theta <= 1, 0 < delta < 1,
/// v >= lattice_size, 1 <= r <= v and 0 < split_ratio <= 1.
Calibration derive(double epsilon, double delta, double theta, uint64_t v, uint32_t r,
                   size_t lattice_size, double split_ratio = 0.5);

// ceil(x) that forgives floating noise just above an integer.
uint64_t ceil_tolerant(double x);

}  // namespace rhhh
