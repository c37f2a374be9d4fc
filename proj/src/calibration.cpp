#include "rhhh/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rhhh {

// Acklam's rational approximation (relative error below 1.2e-9), with the
// tails handled through sqrt(-2 log q).
double probit(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("probit: q must lie in (0, 1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  static constexpr double low = 0.02425;

  if (q == 0.5) return 0.0;
  if (q < low) {
    const double t = std::sqrt(-2.0 * std::log(q));
    return (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
           ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  if (q > 1.0 - low) {
    const double t = std::sqrt(-2.0 * std::log1p(-q));
    return -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
           ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  const double u = q - 0.5;
  const double s = u * u;
  return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * u /
         (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

uint64_t ceil_tolerant(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<uint64_t>(nearest);
  return static_cast<uint64_t>(std::ceil(x));
}

double psi(double delta_s, double eps_s, uint64_t v, uint32_t r) {
  if (!(delta_s > 0 && delta_s < 1)) throw std::invalid_argument("psi: delta_s must lie in (0, 1)");
  if (!(eps_s > 0)) throw std::invalid_argument("psi: eps_s must be positive");
  if (v == 0 || r == 0) throw std::invalid_argument("psi: V and r must be positive");
  const double z = probit(1.0 - delta_s / 2.0);
  return static_cast<double>(ceil_tolerant(z * static_cast<double>(v) / (eps_s * eps_s) / r));
}

double eps_s_of_n(double delta_s, uint64_t v, double n) {
  if (!(n > 0)) throw std::invalid_argument("eps_s_of_n: N must be positive");
  if (!(delta_s > 0 && delta_s < 1)) throw std::invalid_argument("eps_s_of_n: delta_s must lie in (0, 1)");
  return std::sqrt(probit(1.0 - delta_s / 2.0) * static_cast<double>(v) / n);
}

Calibration derive(double epsilon, double delta, double theta, uint64_t v, uint32_t r,
                   size_t lattice_size, double split_ratio) {
  if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be positive");
  if (!(theta <= 1)) throw std::invalid_argument("theta must be at most 1");
  if (!(epsilon < theta)) throw std::invalid_argument("epsilon must be smaller than theta");
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (v < lattice_size) throw std::invalid_argument("V must be at least the lattice size H");
  if (r < 1 || r > v) throw std::invalid_argument("r must lie in [1, V]");
  if (!(split_ratio > 0 && split_ratio <= 1)) throw std::invalid_argument("split ratio must lie in (0, 1]");

  Calibration c;
  c.epsilon = epsilon;
  c.delta = delta;
  c.theta = theta;
  c.v = v;
  c.r = r;
  c.eps_a = split_ratio * epsilon;
  c.eps_s = split_ratio == 1 ? 0.0 : epsilon - c.eps_a;
  c.delta_a = 0;
  c.delta_s = delta / 2;
  c.capacity = static_cast<size_t>(ceil_tolerant((1.0 + c.eps_s) / c.eps_a));
  c.psi = c.deterministic() ? 0.0 : psi(c.delta_s, c.eps_s, v, r);
  return c;
}

}  // namespace rhhh
