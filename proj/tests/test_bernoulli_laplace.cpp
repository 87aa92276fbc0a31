#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stein_pairs/bernoulli_laplace.hpp"

using namespace stein_pairs;
using namespace stein_pairs::bernoulli_laplace;

TEST_SUITE("bernoulli_laplace") {

TEST_CASE("n = 2 spectrum by hand") {
  const SpectralMeasure m = spectral_measure(2);
  REQUIRE(m.pi.size() == 3);
  CHECK(m.pi[0] == 1.0 / 6.0);
  CHECK(m.pi[1] == 1.0 / 2.0);
  CHECK(m.pi[2] == 1.0 / 3.0);
  CHECK(m.mu[0] == 3.0);
  CHECK(m.mu[1] == 1.0);
  CHECK(m.mu[2] == 0.0);
  CHECK(m.lambda[0] == 1.0);
  CHECK(m.lambda[1] == 0.0);
  CHECK(m.lambda[2] == -0.5);
}

TEST_CASE("spectral invariants") {
  for (long long n : {1LL, 3LL, 28LL, 29LL, 500LL, 100000LL}) {
    const SpectralMeasure m = spectral_measure(n);
    CAPTURE(n);
    double total = 0.0, mean = 0.0;
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < m.pi.size(); ++i) {
      total += m.pi[i];
      mean += m.pi[i] * m.mu[i];
      CHECK(m.pi[i] >= 0.0);
      CHECK(std::abs(m.mu[i] - (nd * m.lambda[i] + 1.0)) <= 1e-15 * nd * nd);
      if (i > 0) CHECK(m.lambda[i] < m.lambda[i - 1]);
    }
    CHECK(std::abs(total - 1.0) <= 1e-13);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.w_law.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("exact and logarithmic multiplicity weights agree at the switch") {
  // 2n = 56 uses the exact Pascal row; compare against an independent product.
  for (long long n : {28LL, 29LL, 40LL}) {
    const SpectralMeasure m = spectral_measure(n);
    for (long long i = 1; i <= n; ++i) {
      const double ratio = std::exp(oracle::log_binomial_product(2 * n, i) - oracle::log_binomial_product(2 * n, n));
      const double expected = ratio * (1.0 - static_cast<double>(i) / static_cast<double>(2 * n - i + 1));
      CHECK(m.pi[static_cast<std::size_t>(i)] == doctest::Approx(expected).epsilon(1e-11));
    }
  }
}

TEST_CASE("pair statistics") {
  const PairStatistics s2 = pair_statistics(2);
  CHECK(s2.e_abs_r == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  CHECK(s2.c0 == 8.0);
  CHECK(s2.e_abs_Wr == 0.0);
  CHECK(s2.e_abs_one_minus_half_c0_d2 == 0.0);
  CHECK(s2.delta_cubed_is_upper_bound);
  CHECK_THROWS_AS(spectral_measure(0), ParameterError);
  CHECK_THROWS_AS(pair_statistics(-3), ParameterError);
}

TEST_CASE("smooth distance examples") {
  CHECK(smooth_distance(100, test_functions::ramp(1.0)) <= 1.2);
  CHECK(smooth_distance(100, test_functions::constant(1.0)) <= 1e-13);
  // E W = 1 exactly, which is also the exponential mean.
  CHECK(smooth_distance(64, test_functions::identity()) <= 1e-12);
}

TEST_CASE("Kolmogorov distance to the exponential law") {
  CHECK(kolmogorov_to_exponential(2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  double prev = 1.0;
  for (long long n : {2LL, 10LL, 100LL, 1000LL}) {
    const double d = kolmogorov_to_exponential(n);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(kolmogorov_to_exponential(1000) == doctest::Approx(0.01358).epsilon(1e-3));
}

TEST_CASE("Lipschitz family obeys 12 ||h'|| / sqrt(n)") {
  const auto family = lipschitz_family();
  REQUIRE(family.size() == 10);
  for (long long n : {4LL, 16LL, 64LL, 256LL, 1024LL}) {
    const SpectralMeasure m = spectral_measure(n);
    for (const TestFunction& h : family) {
      CAPTURE(n);
      CAPTURE(h.name);
      REQUIRE(h.lip_norm.has_value());
      CHECK(smooth_distance(m, h) <= 12.0 / std::sqrt(static_cast<double>(n)) * *h.lip_norm);
    }
  }
}

TEST_CASE("Lipschitz norms are not understated") {
  for (const TestFunction& h : lipschitz_family()) {
    double worst = 0.0;
    for (double w = 0.0; w <= 30.0; w += 1e-3) {
      if (std::find(h.breakpoints.begin(), h.breakpoints.end(), w) != h.breakpoints.end()) continue;
      worst = std::max(worst, std::abs(h.h_prime(w)));
    }
    CAPTURE(h.name);
    CHECK(worst <= *h.lip_norm + 1e-12);
  }
}

}  // TEST_SUITE
