#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "rhhh/calibration.hpp"

using namespace rhhh;

namespace {

// Independent oracle: bisection on the erfc-based normal CDF.
double probit_by_bisection(double q) {
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double lo = -40, hi = 40;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < q ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("probit against bisection") {
  CHECK(probit(0.5) == 0.0);
  // Values frozen from the bisection oracle.
  CHECK(std::abs(probit(0.975) - 1.959964) < 1e-5);
  CHECK(std::abs(probit(0.9995) - 3.290527) < 1e-5);
  CHECK(std::abs(probit_by_bisection(0.975) - 1.959964) < 1e-5);
  CHECK(std::abs(probit_by_bisection(0.9995) - 3.290527) < 1e-5);

  double worst = 0;
  for (double q = 0.5; q < 1 - 1e-9; q = q + (1 - q) * 0.01) {
    worst = std::max(worst, std::abs(probit(q) - probit_by_bisection(q)));
  }
  for (double q = 0.001; q < 0.999; q += 0.001) worst = std::max(worst, std::abs(probit(q) - probit_by_bisection(q)));
  CHECK(worst <= 1e-6);
}

TEST_CASE("probit symmetry and monotonicity") {
  double prev = -1e9;
  for (double q = 1e-6; q < 1; q += 0.0037) {
    const double z = probit(q);
    CHECK(z > prev);
    prev = z;
    CHECK(std::abs(probit(1 - q) + z) < 1e-8);
  }
  CHECK_THROWS_AS(probit(0), std::invalid_argument);
  CHECK_THROWS_AS(probit(1), std::invalid_argument);
  CHECK_THROWS_AS(probit(-0.2), std::invalid_argument);
}

TEST_CASE("psi") {
  const double p25 = psi(0.001, 0.001, 25, 1);
  CHECK(std::abs(p25 - 3.290527 * 25e6) / p25 < 1e-5);  // about 8.23e7
  const double p250 = psi(0.001, 0.001, 250, 1);
  CHECK(std::abs(p250 / p25 - 10) < 1e-6);
  CHECK(std::abs(psi(0.001, 0.001, 25, 2) - std::ceil(probit(0.9995) * 25e6 / 2)) <= 1);
  // Inverse-quadratic in eps_s.
  // Both values are rounded up, so the ratio is exact only to 1 / psi.
  CHECK(std::abs(psi(0.01, 0.002, 10, 1) / psi(0.01, 0.004, 10, 1) - 4) <= 4 / psi(0.01, 0.004, 10, 1));
}

TEST_CASE("eps_s_of_n") {
  CHECK(std::abs(eps_s_of_n(0.005, 5, 1e6) - std::sqrt(2.80703 * 5e-6)) < 1e-6);
  CHECK(std::abs(eps_s_of_n(0.005, 5, 1e6) - 3.747e-3) < 1e-6);
  CHECK(std::abs(eps_s_of_n(0.005, 5, 4e6) * 2 - eps_s_of_n(0.005, 5, 1e6)) < 1e-12);
  for (double eps : {0.001, 0.005, 0.02}) {
    const double z = probit(1 - 0.01 / 2);
    const double exact_psi = z * 7 / (eps * eps);
    CHECK(std::abs(eps_s_of_n(0.01, 7, exact_psi) - eps) / eps < 1e-9);
  }
  CHECK_THROWS_AS(eps_s_of_n(0.01, 5, 0), std::invalid_argument);
}

TEST_CASE("derive") {
  const Calibration c = derive(0.002, 0.002, 0.01, 25, 1, 25);
  CHECK(c.eps_a == 0.001);
  CHECK(c.eps_s == 0.001);
  CHECK(c.delta_s == 0.001);
  CHECK(c.delta_a == 0);
  CHECK(c.capacity == 1001);
  CHECK(c.eps_a + c.eps_s == doctest::Approx(c.epsilon));
  CHECK(c.delta_a + 2 * c.delta_s == doctest::Approx(c.delta));
  CHECK(c.psi == psi(0.001, 0.001, 25, 1));

  const Calibration det = derive(0.001, 0.01, 0.01, 5, 1, 5, 1.0);
  CHECK(det.deterministic());
  CHECK(det.capacity == 1000);
  CHECK(det.psi == 0);

  const Calibration multi = derive(0.01, 0.05, 0.05, 5, 4, 5);
  CHECK(multi.psi == psi(0.025, 0.005, 5, 4));

  CHECK_THROWS_AS(derive(0.05, 0.01, 0.05, 5, 1, 5), std::invalid_argument);  // eps >= theta
  CHECK_THROWS_AS(derive(0.01, 0.01, 0.05, 4, 1, 5), std::invalid_argument);  // V < H
  CHECK_THROWS_AS(derive(0.01, 0.01, 0.05, 5, 6, 5), std::invalid_argument);  // r > V
  CHECK_THROWS_AS(derive(0.01, 1.0, 0.05, 5, 1, 5), std::invalid_argument);
}

TEST_CASE("capacity never shrinks below 1 / eps_a") {
  for (double eps : {0.0003, 0.001, 0.002, 0.007, 0.01, 0.03}) {
    for (double split : {0.1, 0.25, 0.5, 0.75, 1.0}) {
      const Calibration c = derive(eps, 0.01, 0.05, 25, 1, 25, split);
      CHECK(c.capacity >= ceil_tolerant(1.0 / c.eps_a));
    }
  }
}
