#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// kernels::serial and an OpenMP version in kernels::omp. The OpenMP versions
// reduce in a fixed order, so their output does not depend on the thread
// count; they agree with the serial reference to rounding.

#include <functional>
#include <span>
#include <vector>

namespace stein_pairs::kernels {

using Fn = std::function<double(double)>;

namespace serial {

std::vector<double> map(const Fn& f, std::span<const double> x);

// Left-to-right compensated sum of p_k * v_k.
double dot(std::span<const double> p, std::span<const double> v);

// exp(w_k - logsumexp(w)), normalised by a left-to-right sum.
std::vector<double> normalize_log_weights(std::span<const double> log_w);

// Log Gibbs weights of the Curie-Weiss magnetisation S = -n + 2j, j = 0..n:
// ln C(n, j) - ln C(n, n/2) + (S^2 - n) / (2 T n); the constant offset keeps
// the values small and drops out on normalisation.
std::vector<double> curie_weiss_log_weights(long long n, double temperature);

// max_k max(cum_k - F(x_k), F(x_k) - cum_{k-1}), cum_{-1} = 0.
double max_cdf_gap(std::span<const double> atoms, std::span<const double> cumulative,
                   const Fn& cdf);

}  // namespace serial

namespace omp {

std::vector<double> map(const Fn& f, std::span<const double> x);
double dot(std::span<const double> p, std::span<const double> v);
std::vector<double> normalize_log_weights(std::span<const double> log_w);
std::vector<double> curie_weiss_log_weights(long long n, double temperature);
double max_cdf_gap(std::span<const double> atoms, std::span<const double> cumulative,
                   const Fn& cdf);

}  // namespace omp

}  // namespace stein_pairs::kernels
