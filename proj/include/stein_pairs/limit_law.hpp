#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stein_pairs/numerics.hpp"

namespace stein_pairs {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// The dominant part g of the conditional drift E(W - W' | W) = g(W) + r(W).
struct DriftFunction {
  std::string name;
  RealFunction g;
  RealFunction g_prime;
  double lower = -kInfinity;  // support (lower, upper)
  double upper = kInfinity;
  // Closed-form G(t) = integral of g from the anchor (0, or the finite lower
  // end when 0 lies outside the support). Falls back to quadrature when empty.
  RealFunction antiderivative;
  // Points where g' is discontinuous or singular; H2/H3 use the larger
  // one-sided value there.
  std::vector<double> kinks;
  // Registered x -> +-inf limits of the H2 and H3 expressions, as functions
  // of (c0, c1). Optional.
  std::function<double(double c0, double c1)> h2_tail_limit;
  std::function<double(double c0, double c1)> h3_tail_limit;
};

// Density p(t) = c1 exp(-c0 G(t)) on (a, b). Immutable; cheap to copy.
class LimitLaw {
 public:
  const DriftFunction& drift() const;
  const std::string& name() const;
  double c0() const;
  double c1() const;
  double support_lower() const;  // a
  double support_upper() const;  // b
  double lo() const;             // effective numeric support
  double hi() const;
  double anchor() const;         // G(anchor) = 0; the mode under H1

  double G(double t) const;
  double log_pdf(double t) const;
  double pdf(double t) const;
  double cdf(double t) const;
  double survival(double t) const;  // 1 - F(t), accurate in the upper tail
  // p'(t) / p(t) = -c0 g(t) and its derivative -c0 g'(t).
  double score(double t) const;
  double score_prime(double t) const;

  double quantile(double u) const;
  double median() const;

  // E Y^k for 0 <= k <= 8.
  double moment(int k) const;
  double mean_abs() const;
  // E|Y| 1{Y <= x} and E|Y| 1{Y > x}.
  double abs_mean_below(double x) const;
  double abs_mean_above(double x) const;

  // Integration limits beyond which p(t) / p(w) < 1e-17 (or the support end).
  double lower_limit(double w) const;
  double upper_limit(double w) const;

  struct State;
  explicit LimitLaw(std::shared_ptr<const State> state) : state_(std::move(state)) {}

 private:
  std::shared_ptr<const State> state_;
};

// Builds the normalized law. Throws NotNormalizableError when e^{-c0 G} has no
// finite integral, HypothesisError when g violates (H1) on the support.
LimitLaw build_limit_law(const DriftFunction& drift, double c0,
                         double tol = default_quadrature_tol);

// alpha e^{-|x|^alpha / beta} / (2 beta^{1/alpha} Gamma(1/alpha)).
LimitLaw generalized_normal_law(double alpha, double beta);
// lambda e^{-lambda x} on (0, inf).
LimitLaw exponential_law(double lambda);

double generalized_normal_normalizer(double alpha, double beta);

struct HypothesisReport {
  double c2 = kInfinity;
  double c3 = kInfinity;
  bool h1_holds = false;
  double c2_argmax = 0.0;
  double c3_argmax = 0.0;
  bool c2_stable = false;  // grid sup unchanged under 4x refinement
  bool c3_stable = false;
  std::string c2_source;   // "grid", "tail-limit" or "divergent"
  std::string c3_source;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  std::size_t grid_points = 0;
};

// min(1/c1, 1/|c0 g(x)|) (|x| + 3/c1) max(1, c0 |g'(x)|)
double h2_expression(const LimitLaw& law, double x);
// min(1/c1, 1/|c0 g(x)|) (|x| + 3/c1) c0 |g'(x)|
double h3_expression(const LimitLaw& law, double x);

bool check_h1(const DriftFunction& drift, const Grid& grid);

// Default certification grid: uniform over the effective support.
Grid certification_grid(const LimitLaw& law, std::size_t points = 2001);

HypothesisReport certify_hypotheses(const LimitLaw& law, const Grid& grid);
HypothesisReport certify_hypotheses(const LimitLaw& law);

// Drift presets. Each registers a closed-form antiderivative.
DriftFunction gaussian_drift();                          // g(t) = t
DriftFunction quartic_drift(double n);                   // g(w) = w^3 n^{-3/2} / 3
DriftFunction polynomial_drift(double c3);               // g(w) = c3 w^3
DriftFunction generalized_normal_drift(double alpha, double beta);
DriftFunction exponential_drift(double lambda);          // g = lambda on (0, inf)

// c0 = 2 / E(Delta^2).
double default_c0(double pair_second_moment);

}  // namespace stein_pairs
