#include "stein_pairs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stein_pairs/error.hpp"
#include "stein_pairs/numerics.hpp"
#include "stein_pairs/parallel.hpp"

namespace stein_pairs::kernels {

namespace {

void check_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("kernel inputs differ in length");
}

double max_of(std::span<const double> v) {
  if (v.empty()) throw ParameterError("empty input");
  return *std::max_element(v.begin(), v.end());
}

}  // namespace

namespace serial {

std::vector<double> map(const Fn& f, std::span<const double> x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return out;
}

double dot(std::span<const double> p, std::span<const double> v) {
  check_same_size(p, v);
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double term = p[i] * v[i];
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + carry;
}

std::vector<double> normalize_log_weights(std::span<const double> log_w) {
  const double pivot = max_of(log_w);
  std::vector<double> out(log_w.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    out[i] = std::exp(log_w[i] - pivot);
    total += out[i];
  }
  for (double& w : out) w /= total;
  return out;
}

std::vector<double> curie_weiss_log_weights(long long n, double temperature) {
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  const double nd = static_cast<double>(n);
  for (long long j = 0; j <= n; ++j) {
    const double s = static_cast<double>(2 * j - n);
    out[static_cast<std::size_t>(j)] =
        log_binomial_difference(n, j, n / 2) + (s * s - nd) / (2.0 * temperature * nd);
  }
  return out;
}

double max_cdf_gap(std::span<const double> atoms, std::span<const double> cumulative,
                   const Fn& cdf) {
  check_same_size(atoms, cumulative);
  double best = 0.0;
  double left = 0.0;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const double f = cdf(atoms[k]);
    best = std::max({best, cumulative[k] - f, f - left});
    left = cumulative[k];
  }
  return best;
}

}  // namespace serial

namespace omp {

std::vector<double> map(const Fn& f, std::span<const double> x) {
  std::vector<double> out(x.size());
  for_each_index(Execution::parallel, x.size(), [&](std::size_t i) { out[i] = f(x[i]); });
  return out;
}

double dot(std::span<const double> p, std::span<const double> v) {
  check_same_size(p, v);
  std::vector<double> terms(p.size());
  for_each_index(Execution::parallel, p.size(),
                 [&](std::size_t i) { terms[i] = p[i] * v[i]; });
  return pairwise_sum(terms);
}

std::vector<double> normalize_log_weights(std::span<const double> log_w) {
  const double pivot = max_of(log_w);
  std::vector<double> out(log_w.size());
  for_each_index(Execution::parallel, log_w.size(),
                 [&](std::size_t i) { out[i] = std::exp(log_w[i] - pivot); });
  const double total = pairwise_sum(out);
  for_each_index(Execution::parallel, out.size(), [&](std::size_t i) { out[i] /= total; });
  return out;
}

std::vector<double> curie_weiss_log_weights(long long n, double temperature) {
  std::vector<double> out(static_cast<std::size_t>(n + 1));
  const double nd = static_cast<double>(n);
  for_each_index(Execution::parallel, out.size(), [&](std::size_t idx) {
    const long long j = static_cast<long long>(idx);
    const double s = static_cast<double>(2 * j - n);
    out[idx] = log_binomial_difference(n, j, n / 2) + (s * s - nd) / (2.0 * temperature * nd);
  });
  return out;
}

double max_cdf_gap(std::span<const double> atoms, std::span<const double> cumulative,
                   const Fn& cdf) {
  check_same_size(atoms, cumulative);
  std::vector<double> gap(atoms.size());
  for_each_index(Execution::parallel, atoms.size(), [&](std::size_t k) {
    const double f = cdf(atoms[k]);
    const double left = k == 0 ? 0.0 : cumulative[k - 1];
    gap[k] = std::max(cumulative[k] - f, f - left);
  });
  double best = 0.0;
  for (double g : gap) best = std::max(best, g);
  return best;
}

}  // namespace omp

}  // namespace stein_pairs::kernels
