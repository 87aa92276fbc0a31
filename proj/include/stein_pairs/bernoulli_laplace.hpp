#pragma once

#include <vector>

#include "stein_pairs/bounds.hpp"
#include "stein_pairs/discrete_law.hpp"
#include "stein_pairs/stein.hpp"

namespace stein_pairs::bernoulli_laplace {

// Spectral measure of the two-urn chain with n balls per urn. Index i runs
// over 0..n.
struct SpectralMeasure {
  long long n = 0;
  std::vector<double> lambda;  // 1 - i (2n - i + 1) / n^2
  std::vector<double> pi;      // (C(2n,i) - C(2n,i-1)) / C(2n,n)
  std::vector<double> mu;      // n lambda_i + 1 = (n - i)(n + 1 - i) / n
  DiscreteLaw w_law;           // law of W = mu_I
};

SpectralMeasure spectral_measure(long long n);

// Exact pair statistics for the exponential(1) approximation; E|Delta|^3 is
// the bound 6 n^{-5/2} and is flagged as such.
PairStatistics pair_statistics(long long n);

// |sum_i pi_i h(mu_i) - int_0^inf h(t) e^{-t} dt|.
double smooth_distance(const SpectralMeasure& measure, const TestFunction& h);
double smooth_distance(long long n, const TestFunction& h);

double kolmogorov_to_exponential(const SpectralMeasure& measure);
double kolmogorov_to_exponential(long long n);

// Ten Lipschitz test functions on [0, inf), each with a certified ||h'||.
std::vector<TestFunction> lipschitz_family();

}  // namespace stein_pairs::bernoulli_laplace
