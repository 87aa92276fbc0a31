#include "stein_pairs/bernoulli_laplace.hpp"

#include <cmath>
#include <string>

namespace stein_pairs::bernoulli_laplace {

namespace {

constexpr double kTailEnd = 60.0;  // e^{-60} ~ 1e-26

// Row 2n of Pascal's triangle, exact while every entry fits in 53 bits.
std::vector<unsigned long long> pascal_row(long long m) {
  std::vector<unsigned long long> row{1};
  for (long long r = 1; r <= m; ++r) {
    std::vector<unsigned long long> next(static_cast<std::size_t>(r + 1), 1);
    for (long long k = 1; k < r; ++k)
      next[static_cast<std::size_t>(k)] =
          row[static_cast<std::size_t>(k - 1)] + row[static_cast<std::size_t>(k)];
    row = std::move(next);
  }
  return row;
}

constexpr long long kExactRowLimit = 56;  // C(56, 28) < 2^53

}  // namespace

SpectralMeasure spectral_measure(long long n) {
  if (n < 1) throw ParameterError("bernoulli-laplace: n must be >= 1");
  if (n > 100000) throw ParameterError("bernoulli-laplace: n must be <= 1e5");
  SpectralMeasure out;
  out.n = n;
  const auto size = static_cast<std::size_t>(n + 1);
  out.lambda.resize(size);
  out.pi.resize(size);
  out.mu.resize(size);
  const double nd = static_cast<double>(n);
  const std::vector<unsigned long long> row =
      2 * n <= kExactRowLimit ? pascal_row(2 * n) : std::vector<unsigned long long>{};
  for (long long i = 0; i <= n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double id = static_cast<double>(i);
    out.lambda[k] = 1.0 - id * (2.0 * nd - id + 1.0) / (nd * nd);
    out.mu[k] = (nd - id) * (nd + 1.0 - id) / nd;
    if (!row.empty()) {
      const unsigned long long below = i == 0 ? 0 : row[k - 1];
      out.pi[k] = static_cast<double>(row[k] - below) / static_cast<double>(row[static_cast<std::size_t>(n)]);
    } else {
      // C(2n,i) - C(2n,i-1) = C(2n,i) (1 - i / (2n - i + 1)).
      out.pi[k] = std::exp(log_binomial_difference(2 * n, i, n)) * (1.0 - id / (2.0 * nd - id + 1.0));
    }
  }
  out.w_law = DiscreteLaw(out.mu, out.pi);
  return out;
}

PairStatistics pair_statistics(long long n) {
  const SpectralMeasure m = spectral_measure(n);
  const double nd = static_cast<double>(n);
  PairStatistics st;
  st.c0 = 2.0 * nd * nd;
  // (c0 / 2) E(Delta^2 | W) = n^2 / n^2 = 1 identically.
  st.e_abs_one_minus_half_c0_d2 = 0.0;
  st.e_abs_delta_cubed = 6.0 / (nd * nd * std::sqrt(nd));
  st.delta_cubed_is_upper_bound = true;
  // r(W) = -((n+1) / (2n^2)) 1{W = 0}, and W = 0 only at i = n.
  st.e_abs_r = (nd + 1.0) / (2.0 * nd * nd) * m.pi.back();
  st.e_weighted_r = 3.0 * st.e_abs_r;  // (|W| + 3/c1) with W = 0 and c1 = 1
  st.e_abs_Wr = 0.0;
  st.e_abs_c0g_W = 1.0;  // c0 g = 1
  return st;
}

double smooth_distance(const SpectralMeasure& measure, const TestFunction& h) {
  const double discrete = measure.w_law.expect(h.h);
  const RealFunction weighted = [&](double t) { return h.h(t) * std::exp(-t); };
  const double limit = integrate(weighted, 0.0, kTailEnd, h.breakpoints, 1e-13).value;
  return std::abs(discrete - limit);
}

double smooth_distance(long long n, const TestFunction& h) {
  return smooth_distance(spectral_measure(n), h);
}

double kolmogorov_to_exponential(const SpectralMeasure& measure) {
  return kolmogorov_distance(measure.w_law, [](double z) { return z <= 0.0 ? 0.0 : -std::expm1(-z); });
}

double kolmogorov_to_exponential(long long n) { return kolmogorov_to_exponential(spectral_measure(n)); }

std::vector<TestFunction> lipschitz_family() {
  std::vector<TestFunction> family;
  family.push_back(test_functions::ramp(0.5));
  family.push_back(test_functions::ramp(1.0));
  family.push_back(test_functions::ramp(2.0));

  TestFunction decay;
  decay.name = "exp(-w)";
  decay.kind = TestKind::lipschitz;
  decay.h = [](double w) { return std::exp(-w); };
  decay.h_prime = [](double w) { return -std::exp(-w); };
  decay.lip_norm = 1.0;  // sup over w >= 0
  family.push_back(decay);

  family.push_back(test_functions::gaussian_bump(1.0, 0.5));

  const auto logistic = [](std::string name, double center, double rate) {
    TestFunction s;
    s.name = std::move(name);
    s.kind = TestKind::lipschitz;
    s.h = [=](double w) { return 1.0 / (1.0 + std::exp(-rate * (w - center))); };
    s.h_prime = [=](double w) {
      const double e = std::exp(-rate * (w - center));
      return rate * e / ((1.0 + e) * (1.0 + e));
    };
    s.sup_norm = 1.0;
    s.lip_norm = rate / 4.0;
    return s;
  };
  family.push_back(logistic("logistic(w-1)", 1.0, 1.0));
  family.push_back(logistic("logistic(4(w-2))", 2.0, 4.0));

  family.push_back(test_functions::sine());
  family.push_back(test_functions::identity());

  TestFunction vee;
  vee.name = "|w-1|";
  vee.kind = TestKind::lipschitz;
  vee.h = [](double w) { return std::abs(w - 1.0); };
  vee.h_prime = [](double w) { return w < 1.0 ? -1.0 : 1.0; };
  vee.lip_norm = 1.0;
  vee.breakpoints = {1.0};
  family.push_back(vee);
  return family;
}

}  // namespace stein_pairs::bernoulli_laplace
