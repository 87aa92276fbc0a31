#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracles.hpp"
#include "stein_pairs/numerics.hpp"

using namespace stein_pairs;

TEST_SUITE("numerics") {

TEST_CASE("grid validation and construction") {
  CHECK_THROWS_AS(Grid({0.0}, Spacing::uniform_x), ParameterError);
  CHECK_THROWS_AS(Grid({0.0, 0.0}, Spacing::uniform_x), ParameterError);
  CHECK_THROWS_AS(Grid({1.0, 0.0}, Spacing::uniform_x), ParameterError);
  const Grid g = Grid::uniform(-1.0, 1.0, 5);
  REQUIRE(g.size() == 5);
  CHECK(g.lo() == -1.0);
  CHECK(g.hi() == 1.0);
  const Grid r = g.refined(4);
  CHECK(r.size() == 17);
  CHECK(r.lo() == -1.0);
  CHECK(r.hi() == 1.0);
  const std::vector<double> extra{0.1, 5.0, 0.0};
  const Grid w = g.with_points(extra);
  CHECK(w.size() == 6);  // 0.0 already present, 5.0 outside
  const Grid q = Grid::from_quantiles([](double u) { return u * u; }, 0.0, 1.0, 9);
  CHECK(q.lo() == 0.0);
  CHECK(q.hi() == 1.0);
  CHECK(q.spacing() == Spacing::uniform_quantile);
}

TEST_CASE("integrate: constant and Gaussian normalisation") {
  const QuadratureResult one = integrate([](double) { return 1.0; }, 0.0, 1.0, 1e-12);
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(one.abs_error_estimate >= 0.0);
  CHECK(one.evaluations >= 1);

  const QuadratureResult g = integrate([](double t) { return std::exp(-t * t / 2); }, -40.0, 40.0, 1e-12);
  CHECK(std::abs(g.value - std::sqrt(2.0 * std::numbers::pi)) <= 1e-12);
  CHECK(g.abs_error_estimate <= 1e-12);
}

TEST_CASE("integrate: quartic normaliser matches the closed form and an independent oracle") {
  const double closed = std::pow(3.0, 0.25) * std::tgamma(0.25) / std::sqrt(2.0);
  const double ref = oracle::integrate_real_line([](double w) { return std::exp(-w * w * w * w / 12.0); });
  CHECK(std::abs(ref - closed) <= 1e-12);
  CHECK(closed == doctest::Approx(3.3740).epsilon(1e-4));
  const QuadratureResult q = integrate([](double w) { return std::exp(-w * w * w * w / 12.0); }, -12.0, 12.0, 1e-12);
  CHECK(std::abs(q.value - closed) <= 1e-11);
}

TEST_CASE("integrate: reversed limits, breakpoints and linearity") {
  auto f = [](double x) { return std::sin(3 * x) + x * x; };
  auto g = [](double x) { return std::abs(x - 0.3); };
  const double tol = 1e-11;
  const double a = integrate(f, 0.0, 2.0, tol).value;
  CHECK(integrate(f, 2.0, 0.0, tol).value == doctest::Approx(-a).epsilon(1e-14));
  const std::vector<double> kinks{0.3};
  const double b = integrate(g, 0.0, 2.0, kinks, tol).value;
  CHECK(std::abs(b - (0.3 * 0.3 / 2 + 1.7 * 1.7 / 2)) <= tol);
  const double combo =
      integrate([&](double x) { return 2.5 * f(x) - 1.5 * g(x); }, 0.0, 2.0, kinks, tol).value;
  CHECK(std::abs(combo - (2.5 * a - 1.5 * b)) <= 2 * tol * 4);
}

TEST_CASE("integrate: failure carries the best estimate") {
  auto wild = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  try {
    integrate(wild, 0.0, 1.0, 1e-14, 50);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.best().value));
    CHECK(e.best().evaluations > 0);
  }
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, 0.0), ParameterError);
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-8), NumericError);
}

TEST_CASE("log_binomial: small cases, range convention, product oracle") {
  CHECK(log_binomial(4, 2) == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  CHECK(log_binomial(4, -1) == -std::numeric_limits<double>::infinity());
  CHECK(log_binomial(4, 5) == -std::numeric_limits<double>::infinity());
  CHECK(log_binomial(0, 0) == 0.0);
  CHECK_THROWS_AS(log_binomial(-1, 0), ParameterError);
  const double oracle_value = oracle::log_binomial_product(2000, 1000);
  CHECK(std::abs(log_binomial(2000, 1000) - oracle_value) <= 1e-12 * oracle_value);
  for (long long n : {10LL, 57LL, 300LL, 1000LL, 5000LL}) {
    for (long long k : {1LL, 2LL, n / 3, n / 2, n - 1}) {
      const double ref = oracle::log_binomial_product(n, k);
      // exp(result) = C(n,k) to 1e-12 relative <=> |ln error| <= 1e-12.
      CHECK(std::abs(log_binomial(n, k) - ref) <= 1e-12);
    }
  }
}

TEST_CASE("log_binomial: Pascal recurrence in log space") {
  for (long long n = 2; n <= 1000; n += 7) {
    for (long long k = 1; k < n; k += std::max<long long>(1, n / 9)) {
      const double lhs = log_binomial(n, k);
      const double rhs = log_add_exp(log_binomial(n - 1, k - 1), log_binomial(n - 1, k));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("log_binomial_difference is accurate where the terms are huge") {
  // C(2n, n-1) / C(2n, n) = n / (n+1).
  const long long n = 100000;
  CHECK(std::abs(log_binomial_difference(2 * n, n - 1, n) - std::log(100000.0 / 100001.0)) <= 1e-14);
  const long long m = 2000;
  CHECK(std::abs(log_binomial_difference(2 * m, m - 64, m) -
                 (oracle::log_binomial_product(2 * m, m - 64) - oracle::log_binomial_product(2 * m, m))) <= 1e-12);
  CHECK(std::abs(log_binomial_difference(2 * m, m - 500, m) -
                 (oracle::log_binomial_product(2 * m, m - 500) - oracle::log_binomial_product(2 * m, m))) <= 1e-11);
  CHECK(log_binomial_difference(10, 11, 5) == -std::numeric_limits<double>::infinity());
  CHECK(std::abs(log_binomial_difference(30, 3, 27)) <= 1e-15);
}

TEST_CASE("log_add_exp and pairwise_sum") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_add_exp(ninf, 1.5) == 1.5);
  CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
  CHECK(log_add_exp(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(v) == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("sup_on_grid") {
  const Grid g3({-1.0, 0.0, 1.0}, Spacing::uniform_x);
  const SupResult a = sup_on_grid([](double x) { return -x * x; }, g3);
  CHECK(a.value == 0.0);
  CHECK(a.argmax == 0.0);
  const Grid h3({0.0, 0.5, 1.0}, Spacing::uniform_x);
  const SupResult b = sup_on_grid([](double x) { return x; }, h3);
  CHECK(b.value == 1.0);
  CHECK(b.argmax == 1.0);
  CHECK_THROWS_AS(sup_on_grid([](double) { return std::nan(""); }, g3), NumericError);
  const SupResult s = sup_on_grid([](double x) { return -x * x; }, g3, Execution::serial);
  CHECK(s.index == 1);
}

TEST_CASE("certify_sup flags refinement instability") {
  const Grid g = Grid::uniform(-1.0, 1.0, 201);
  const SupCertificate smooth = certify_sup([](double x) { return 1.0 - x * x; }, g);
  CHECK(smooth.stable);
  CHECK(smooth.value == doctest::Approx(1.0));
  // A spike between coarse points is only seen after refinement.
  const SupCertificate spike =
      certify_sup([](double x) { return std::exp(-1e8 * (x - 0.0025) * (x - 0.0025)); }, g);
  CHECK_FALSE(spike.stable);
}

TEST_CASE("kolmogorov_distance: hand cases") {
  const DiscreteLaw point({0.0}, {1.0});
  const auto expo = [](double z) { return z <= 0 ? 0.0 : 1.0 - std::exp(-z); };
  CHECK(kolmogorov_distance(point, expo) == doctest::Approx(1.0));

  const DiscreteLaw two({-1.0, 1.0}, {0.5, 0.5});
  const auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  CHECK(kolmogorov_distance(two, phi) == doctest::Approx(phi(1.0) - 0.5).epsilon(1e-14));
  CHECK(kolmogorov_distance(two, phi) == doctest::Approx(0.3413).epsilon(1e-4));
  CHECK(kolmogorov_distance(two, phi, Execution::serial) == kolmogorov_distance(two, phi));

  // A law compared with its own staircase.
  CHECK(kolmogorov_distance(two, two) == 0.0);

  CHECK_THROWS_AS(kolmogorov_distance(DiscreteLaw(), phi), ParameterError);
}

TEST_CASE("kolmogorov_distance unchanged by zero-probability atoms") {
  const auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  const DiscreteLaw base({-1.0, 0.2, 1.5}, {0.3, 0.3, 0.4});
  const DiscreteLaw padded({-3.0, -1.0, 0.0, 0.2, 1.5, 2.0}, {0.0, 0.3, 0.0, 0.3, 0.4, 0.0});
  CHECK(kolmogorov_distance(base, phi) == doctest::Approx(kolmogorov_distance(padded, phi)).epsilon(1e-15));
}

TEST_CASE("discrete law construction") {
  const DiscreteLaw d({1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
  REQUIRE(d.size() == 2);
  CHECK(d.atoms()[0] == 0.0);
  CHECK(d.probabilities()[1] == 0.5);
  CHECK(d.cdf(-0.1) == 0.0);
  CHECK(d.cdf(0.0) == 0.5);
  CHECK(d.cdf(1.0) == 1.0);
  CHECK(d.expect([](double x) { return x; }) == 0.5);
  CHECK_THROWS_AS(DiscreteLaw({0.0}, {0.5}), ParameterError);
  CHECK_THROWS_AS(DiscreteLaw({0.0, 1.0}, {1.5, -0.5}), ParameterError);
  CHECK_THROWS_AS(DiscreteLaw({std::nan("")}, {1.0}), ParameterError);
}

TEST_CASE("least squares slope") {
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{3, 5, 7, 9};
  CHECK(least_squares_slope(x, y) == doctest::Approx(2.0));
  const std::vector<double> same{1, 1};
  CHECK_THROWS_AS(least_squares_slope(same, same), ParameterError);
}

}  // TEST_SUITE
