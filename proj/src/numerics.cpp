#include "stein_pairs/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "stein_pairs/kernels.hpp"

namespace stein_pairs {

// ---------------------------------------------------------------------------
// Grid

Grid::Grid(std::vector<double> points, Spacing spacing)
    : points_(std::move(points)), spacing_(spacing) {
  if (points_.size() < 2) throw ParameterError("Grid: at least two points required");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw ParameterError("Grid: non-finite point");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw ParameterError("Grid: points must be strictly increasing");
  }
}

Grid Grid::uniform(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw ParameterError("Grid::uniform: need lo < hi and count >= 2");
  std::vector<double> pts(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) pts[i] = lo + step * static_cast<double>(i);
  pts.back() = hi;
  return Grid(std::move(pts), Spacing::uniform_x);
}

Grid Grid::from_quantiles(const RealFunction& quantile, double lo, double hi,
                          std::size_t count) {
  if (count < 1 || !(hi > lo)) throw ParameterError("Grid::from_quantiles: bad arguments");
  std::vector<double> pts;
  pts.reserve(count + 2);
  pts.push_back(lo);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(count);
    const double x = quantile(u);
    if (x > lo && x < hi) pts.push_back(x);
  }
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Grid(std::move(pts), Spacing::uniform_quantile);
}

Grid Grid::refined(std::size_t factor) const {
  if (factor < 1) throw ParameterError("Grid::refined: factor must be >= 1");
  std::vector<double> pts;
  pts.reserve((points_.size() - 1) * factor + 1);
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    const double a = points_[i];
    const double b = points_[i + 1];
    for (std::size_t j = 0; j < factor; ++j)
      pts.push_back(a + (b - a) * static_cast<double>(j) / static_cast<double>(factor));
  }
  pts.push_back(points_.back());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Grid(std::move(pts), spacing_);
}

Grid Grid::with_points(std::span<const double> extra) const {
  std::vector<double> pts = points_;
  for (double x : extra)
    if (std::isfinite(x) && x >= lo() && x <= hi()) pts.push_back(x);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Grid(std::move(pts), spacing_);
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.27970539148927666790146777142378,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.58608723546769113029414483825873,  0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kKronrodWeights = {
    0.02293532201052922496373200805897,  0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.16900472663926790282658342659855,  0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double abs_value;
  bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const RealFunction& f, double x) {
  const double y = f(x);
  if (!std::isfinite(y)) throw NumericError("integrate: integrand not finite at x = " + std::to_string(x));
  return y;
}

Panel gauss_kronrod_15(const RealFunction& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(f, center);
  double res_gauss = fc * kGaussWeights[3];
  double res_kronrod = fc * kKronrodWeights[7];
  double res_abs = std::abs(res_kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = checked(f, center - dx);
    f2[j] = checked(f, center + dx);
    const double sum = f1[j] + f2[j];
    res_kronrod += kKronrodWeights[j] * sum;
    res_abs += kKronrodWeights[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_gauss += kGaussWeights[j / 2] * sum;
  }
  const double mean = 0.5 * res_kronrod;
  double res_asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j)
    res_asc += kKronrodWeights[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

  const double ah = std::abs(half);
  double err = std::abs((res_kronrod - res_gauss) * half);
  res_asc *= ah;
  res_abs *= ah;
  if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  err = std::max(err, eps * res_abs);
  return {a, b, res_kronrod * half, err, res_abs};
}

}  // namespace

QuadratureResult integrate(const RealFunction& f, double lo, double hi, double tol,
                           std::size_t max_subintervals) {
  if (!(tol > 0.0)) throw ParameterError("integrate: tolerance must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw ParameterError("integrate: endpoints must be finite (truncate infinite supports)");
  if (lo == hi) return {0.0, 0.0, 1};
  if (lo > hi) {
    QuadratureResult r = integrate(f, hi, lo, tol, max_subintervals);
    r.value = -r.value;
    return r;
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::priority_queue<Panel> heap;
  heap.push(gauss_kronrod_15(f, lo, hi));
  std::size_t evaluations = 15;
  double total_error = heap.top().error;
  double total_abs = heap.top().abs_value;

  auto converged = [&] { return total_error <= tol || total_error <= 8.0 * eps * total_abs; };

  while (!converged() && heap.size() < max_subintervals) {
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    heap.pop();
    Panel left = gauss_kronrod_15(f, worst.a, mid);
    Panel right = gauss_kronrod_15(f, mid, worst.b);
    evaluations += 30;
    total_error += left.error + right.error - worst.error;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    heap.push(left);
    heap.push(right);
  }
  const bool ok = converged();

  // Re-sum in interval order so the result is independent of heap layout.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<double> values(panels.size());
  std::vector<double> errors(panels.size());
  for (std::size_t i = 0; i < panels.size(); ++i) {
    values[i] = panels[i].value;
    errors[i] = panels[i].error;
  }
  QuadratureResult result{pairwise_sum(values), pairwise_sum(errors), evaluations};
  if (!ok)
    throw QuadratureError("integrate: no convergence on [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "], error estimate " +
                              std::to_string(result.abs_error_estimate),
                          result);
  return result;
}

QuadratureResult integrate(const RealFunction& f, double lo, double hi,
                           std::span<const double> breakpoints, double tol) {
  const bool flipped = lo > hi;
  const double a = flipped ? hi : lo;
  const double b = flipped ? lo : hi;
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double piece_tol = tol / static_cast<double>(cuts.size() - 1);
  std::vector<double> values;
  QuadratureResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const QuadratureResult piece = integrate(f, cuts[i], cuts[i + 1], piece_tol);
    values.push_back(piece.value);
    total.abs_error_estimate += piece.abs_error_estimate;
    total.evaluations += piece.evaluations;
  }
  total.value = pairwise_sum(values);
  if (flipped) total.value = -total.value;
  return total;
}

// ---------------------------------------------------------------------------
// Combinatorics

namespace {

// ln(n!) - [(n + 1/2) ln n - n + ln sqrt(2 pi)]
long double stirling_error(long long n) {
  constexpr long double half_log_2pi = 0.918938533204672741780329736405617639861L;
  const long double x = static_cast<long double>(n);
  if (n < 16) return std::lgamma(x + 1.0L) - (x + 0.5L) * std::log(x) + x - half_log_2pi;
  constexpr long double s0 = 1.0L / 12.0L;
  constexpr long double s1 = 1.0L / 360.0L;
  constexpr long double s2 = 1.0L / 1260.0L;
  constexpr long double s3 = 1.0L / 1680.0L;
  constexpr long double s4 = 1.0L / 1188.0L;
  const long double xx = x * x;
  return (s0 - (s1 - (s2 - (s3 - s4 / xx) / xx) / xx) / xx) / x;
}

}  // namespace

namespace {

long double log_binomial_ld(long long n, long long k) {
  k = std::min(k, n - k);
  if (k == 0) return 0.0L;
  constexpr long double two_pi = 6.283185307179586476925286766559005768394L;
  const long double nn = static_cast<long double>(n);
  const long double kk = static_cast<long double>(k);
  const long double rest = nn - kk;
  const long double entropy = -kk * std::log(kk / nn) - rest * std::log1p(-kk / nn);
  return entropy + 0.5L * std::log(nn / (two_pi * kk * rest)) + stirling_error(n) -
         stirling_error(k) - stirling_error(n - k);
}

}  // namespace

double log_binomial(long long n, long long k) {
  if (n < 0) throw ParameterError("log_binomial: n must be nonnegative");
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(log_binomial_ld(n, k));
}

double log_binomial_difference(long long n, long long k, long long j) {
  if (n < 0) throw ParameterError("log_binomial_difference: n must be nonnegative");
  if (j < 0 || j > n) throw ParameterError("log_binomial_difference: reference index out of range");
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  // Nearby indices: C(n, m+1) / C(n, m) = (n - m) / (m + 1), one term per step.
  if (std::abs(k - j) <= 64) {
    long double s = 0.0L;
    for (long long m = std::min(k, j); m < std::max(k, j); ++m)
      s += std::log(static_cast<long double>(n - m) / static_cast<long double>(m + 1));
    return static_cast<double>(k > j ? s : -s);
  }
  return static_cast<double>(log_binomial_ld(n, k) - log_binomial_ld(n, j));
}

double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t leaf = 32;
  if (values.size() <= leaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// ---------------------------------------------------------------------------
// Sup norms

SupResult sup_on_grid(const RealFunction& f, const Grid& grid, Execution exec) {
  const auto pts = grid.points();
  if (pts.empty()) throw ParameterError("sup_on_grid: empty grid");
  const std::vector<double> values =
      exec == Execution::serial ? kernels::serial::map(f, pts) : kernels::omp::map(f, pts);
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) throw NumericError("sup_on_grid: NaN value");
    if (values[i] > values[best]) best = i;
  }
  return {values[best], pts[best], best};
}

SupCertificate certify_sup(const RealFunction& f, const Grid& grid, double rel_tol,
                           Execution exec) {
  const SupResult coarse = sup_on_grid(f, grid, exec);
  const SupResult fine = sup_on_grid(f, grid.refined(4), exec);
  const double scale = std::max(std::abs(fine.value), std::numeric_limits<double>::min());
  const bool stable = std::abs(fine.value - coarse.value) <= rel_tol * scale;
  return {fine.value, fine.argmax, coarse.value, stable};
}

// ---------------------------------------------------------------------------
// Kolmogorov distance

double kolmogorov_distance(const DiscreteLaw& discrete, const RealFunction& cdf, Execution exec) {
  if (discrete.empty()) throw ParameterError("kolmogorov_distance: empty support");
  return exec == Execution::serial
             ? kernels::serial::max_cdf_gap(discrete.atoms(), discrete.cumulative(), cdf)
             : kernels::omp::max_cdf_gap(discrete.atoms(), discrete.cumulative(), cdf);
}

double kolmogorov_distance(const DiscreteLaw& a, const DiscreteLaw& b) {
  if (a.empty() || b.empty()) throw ParameterError("kolmogorov_distance: empty support");
  std::vector<double> atoms(a.atoms().begin(), a.atoms().end());
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  double best = 0.0;
  for (double x : atoms) best = std::max(best, std::abs(a.cdf(x) - b.cdf(x)));
  return best;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("least_squares_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ParameterError("least_squares_slope: x values are all equal");
  return sxy / sxx;
}

}  // namespace stein_pairs
