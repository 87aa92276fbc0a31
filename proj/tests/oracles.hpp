#pragma once

// Independent reference computations used to freeze expected values. None of
// these share code with the library.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/sinh_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

namespace oracle {

// Integral over the real line by double-exponential quadrature.
template <class F>
double integrate_real_line(F f) {
  boost::math::quadrature::sinh_sinh<double> q;
  return q.integrate(f);
}

// Integral over (a, inf).
template <class F>
double integrate_half_line(F f, double a) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([&](double t) { return f(t); }, a, std::numeric_limits<double>::infinity());
}

template <class F>
double integrate_interval(F f, double a, double b) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b);
}

// ln C(n, k) as a sum of ln((n - j + 1) / j), in long double.
inline double log_binomial_product(long long n, long long k) {
  long double s = 0.0L;
  for (long long j = 1; j <= k; ++j)
    s += std::log(static_cast<long double>(n - j + 1) / static_cast<long double>(j));
  return static_cast<double>(s);
}

// Full 2^n enumeration of the Curie-Weiss model with heat-bath single-site
// updates. Conditional moments are averaged over configurations with the same
// total spin, weighted by the Gibbs measure.
struct BruteForceCurieWeiss {
  std::map<long long, double> prob;       // P(S = s)
  std::map<long long, double> drift;      // E(W - W' | S = s)
  std::map<long long, double> quadratic;  // E((W - W')^2 | S = s)
  std::map<long long, double> cubic;      // E|W - W'|^3 given S = s

  BruteForceCurieWeiss(int n, double temperature) {
    const double scale = std::pow(static_cast<double>(n), -0.75);
    std::map<long long, double> mass;
    std::vector<int> sigma(static_cast<std::size_t>(n));
    double z = 0.0;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
      long long s = 0;
      for (int i = 0; i < n; ++i) {
        sigma[static_cast<std::size_t>(i)] = (mask >> i) & 1ul ? 1 : -1;
        s += sigma[static_cast<std::size_t>(i)];
      }
      double pair_sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          pair_sum += sigma[static_cast<std::size_t>(i)] * sigma[static_cast<std::size_t>(j)];
      const double weight = std::exp(pair_sum / (temperature * n));
      double d = 0.0, d2 = 0.0, d3 = 0.0;
      for (int i = 0; i < n; ++i) {
        double local = 0.0;
        for (int j = 0; j < n; ++j)
          if (j != i) local += sigma[static_cast<std::size_t>(j)];
        const double mi = local / n;
        const double up = std::exp(mi / temperature);
        const double down = std::exp(-mi / temperature);
        const double p_up = up / (up + down);
        const int si = sigma[static_cast<std::size_t>(i)];
        const double p_flip = si == 1 ? 1.0 - p_up : p_up;
        // W - W' = n^{-3/4} (sigma_i - sigma_i').
        d += scale * (si - (p_up - (1.0 - p_up)));
        const double jump = 2.0 * scale;
        d2 += jump * jump * p_flip;
        d3 += jump * jump * jump * p_flip;
      }
      d /= n;
      d2 /= n;
      d3 /= n;
      z += weight;
      mass[s] += weight;
      drift[s] += weight * d;
      quadratic[s] += weight * d2;
      cubic[s] += weight * d3;
    }
    for (auto& [s, w] : mass) {
      prob[s] = w / z;
      drift[s] /= w;
      quadratic[s] /= w;
      cubic[s] /= w;
    }
  }
};

}  // namespace oracle
