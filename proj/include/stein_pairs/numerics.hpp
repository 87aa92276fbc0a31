#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stein_pairs/discrete_law.hpp"
#include "stein_pairs/error.hpp"
#include "stein_pairs/parallel.hpp"

namespace stein_pairs {

using RealFunction = std::function<double(double)>;

enum class Spacing { uniform_x, uniform_quantile };

// An ordered evaluation grid. Strictly increasing, at least two points.
class Grid {
 public:
  Grid(std::vector<double> points, Spacing spacing);

  static Grid uniform(double lo, double hi, std::size_t count);
  // Points quantile(u_k) for u_k uniform on (0,1), with lo and hi appended.
  static Grid from_quantiles(const RealFunction& quantile, double lo, double hi,
                             std::size_t count);

  // Inserts factor-1 equally spaced points inside every cell.
  Grid refined(std::size_t factor) const;
  // Union with additional points that lie in [lo, hi]; duplicates dropped.
  Grid with_points(std::span<const double> extra) const;

  std::span<const double> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double lo() const { return points_.front(); }
  double hi() const { return points_.back(); }
  Spacing spacing() const { return spacing_; }

 private:
  std::vector<double> points_;
  Spacing spacing_;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

// Thrown when adaptive refinement is exhausted; carries the best estimate.
class QuadratureError : public NumericError {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : NumericError(what), best_(best) {}
  const QuadratureResult& best() const { return best_; }

 private:
  QuadratureResult best_;
};

inline constexpr double default_quadrature_tol = 1e-10;

// Globally adaptive Gauss-Kronrod (7/15) bisection on a finite interval.
// Absolute tolerance. lo > hi gives the negated integral.
QuadratureResult integrate(const RealFunction& f, double lo, double hi,
                           double tol = default_quadrature_tol,
                           std::size_t max_subintervals = 4000);

// Same, splitting at the given interior breakpoints (kinks, jumps). Points
// outside (lo, hi) are ignored. The tolerance is shared across pieces.
QuadratureResult integrate(const RealFunction& f, double lo, double hi,
                           std::span<const double> breakpoints, double tol);

// ln C(n, k); -inf for k outside [0, n].
double log_binomial(long long n, long long k);

// ln C(n, k) - ln C(n, j), formed before rounding to double. Within 64 steps
// of j it is a product of exact ratios; the absolute error stays near 1e-15
// even when both terms are large.
double log_binomial_difference(long long n, long long k, long long j);

double log_add_exp(double a, double b);

// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

struct SupResult {
  double value;
  double argmax;
  std::size_t index;
};

// Exact maximum over the grid points (first maximiser on ties).
SupResult sup_on_grid(const RealFunction& f, const Grid& grid,
                      Execution exec = Execution::parallel);

struct SupCertificate {
  double value;          // sup over the refined grid
  double argmax;
  double coarse_value;   // sup over the input grid
  bool stable;           // |value - coarse| <= rel_tol * max(|value|, tiny)
};

// Grid sup with a single 4x refinement as the stability criterion.
SupCertificate certify_sup(const RealFunction& f, const Grid& grid,
                           double rel_tol = 1e-6,
                           Execution exec = Execution::parallel);

// sup_z |P(W <= z) - F(z)| for a continuous CDF F, evaluated exactly at the
// atoms from both sides.
double kolmogorov_distance(const DiscreteLaw& discrete, const RealFunction& cdf,
                           Execution exec = Execution::parallel);

// sup_z |F_A(z) - F_B(z)| between two discrete laws.
double kolmogorov_distance(const DiscreteLaw& a, const DiscreteLaw& b);

// Ordinary least-squares slope of y on x. Requires at least two distinct x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace stein_pairs
