#include <doctest.h>

#include <cmath>

#include "stein_pairs/error.hpp"
#include "stein_pairs/kernels.hpp"
#include "stein_pairs/parallel.hpp"

using namespace stein_pairs;

namespace {

struct ThreadGuard {
  ~ThreadGuard() { set_worker_threads(0); }
};

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("map: omp equals serial exactly") {
  const auto x = ramp(5000);
  const auto f = [](double t) { return std::sin(t) * std::exp(-t * t); };
  CHECK(kernels::omp::map(f, x) == kernels::serial::map(f, x));
}

TEST_CASE("dot and normalisation agree with the serial reference") {
  const auto x = ramp(10001);
  std::vector<double> p(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(-x[i] * x[i]);
  CHECK(kernels::omp::dot(p, x) == doctest::Approx(kernels::serial::dot(p, x)).epsilon(1e-13));
  const auto a = kernels::serial::normalize_log_weights(x);
  const auto b = kernels::omp::normalize_log_weights(x);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15 * (1 + a[i]));
  CHECK_THROWS_AS(kernels::serial::dot(p, std::vector<double>{1.0}), ParameterError);
}

TEST_CASE("Curie-Weiss log weights: omp equals serial") {
  for (long long n : {2LL, 17LL, 1000LL}) {
    CHECK(kernels::omp::curie_weiss_log_weights(n, 1.0) == kernels::serial::curie_weiss_log_weights(n, 1.0));
  }
}

TEST_CASE("max_cdf_gap agrees") {
  std::vector<double> atoms{-1.0, 0.0, 2.0};
  std::vector<double> cum{0.2, 0.7, 1.0};
  const auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  CHECK(kernels::omp::max_cdf_gap(atoms, cum, cdf) == kernels::serial::max_cdf_gap(atoms, cum, cdf));
}

TEST_CASE("omp results do not depend on the thread count") {
  ThreadGuard guard;
  const auto x = ramp(20000);
  std::vector<double> p(x.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 1.0 / (1.0 + x[i] * x[i]);
  set_worker_threads(1);
  const double d1 = kernels::omp::dot(p, x);
  const auto n1 = kernels::omp::normalize_log_weights(x);
  set_worker_threads(3);
  const double d3 = kernels::omp::dot(p, x);
  const auto n3 = kernels::omp::normalize_log_weights(x);
  CHECK(d1 == d3);
  CHECK(n1 == n3);
  CHECK(worker_threads() >= 1);
}

TEST_CASE("for_each_index rethrows the lowest-index failure") {
  try {
    for_each_index(Execution::parallel, 100, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

}  // TEST_SUITE
