#include "stein_pairs/limit_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace stein_pairs {

namespace {

// ln(1e16): truncation where the density drops below 1e-16 x peak.
constexpr double kTruncationDrop = 36.841361487904734;
// Integration extents go further, to ratios below e^{-40}.
constexpr double kExtentDrop = 40.0;
constexpr int kMaxDoublings = 52;
constexpr std::size_t kPanels = 256;

// The pieces of a law that do not depend on its normalization tables.
struct Core {
  DriftFunction drift;
  double c0 = 1.0;
  double a = -kInfinity;
  double b = kInfinity;
  double anchor = 0.0;

  double G(double t) const {
    if (drift.antiderivative) return drift.antiderivative(t);
    return integrate(drift.g, anchor, t, drift.kinks, 1e-14).value;
  }
  double log_unnormalized(double t) const { return -c0 * G(t); }

  double lower_limit(double w) const {
    if (std::isfinite(a)) return a;
    const double base = log_unnormalized(w);
    double d = 1.0;
    for (int i = 0; i < kMaxDoublings; ++i, d *= 2.0) {
      const double t = w - d;
      if (t < anchor && log_unnormalized(t) - base < -kExtentDrop) return t;
    }
    throw NotNormalizableError("no lower tail decay for " + drift.name);
  }
  double upper_limit(double w) const {
    if (std::isfinite(b)) return b;
    const double base = log_unnormalized(w);
    double d = 1.0;
    for (int i = 0; i < kMaxDoublings; ++i, d *= 2.0) {
      const double t = w + d;
      if (t > anchor && log_unnormalized(t) - base < -kExtentDrop) return t;
    }
    throw NotNormalizableError("no upper tail decay for " + drift.name);
  }
};

// Running integrals of phi from the lower tail and from the upper tail over a
// fixed panel decomposition, with on-demand partial panels.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  // phi = exp(log_phi).
  CumulativeIntegral(const Core* core, RealFunction log_phi, std::vector<double> edges, double tol)
      : core_(core), log_phi_(std::move(log_phi)), edges_(std::move(edges)), tol_(tol) {
    const std::size_t m = edges_.size();
    below_.assign(m, 0.0);
    above_.assign(m, 0.0);
    std::vector<double> panel(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) panel[i] = piece(edges_[i], edges_[i + 1]);
    below_[0] = tail_piece(core_->lower_limit(edges_.front()), edges_.front(), edges_.front());
    above_[m - 1] = tail_piece(edges_.back(), core_->upper_limit(edges_.back()), edges_.back());
    accumulate_forward(panel);
    accumulate_backward(panel);
    total_ = below_[m - 1] + above_[m - 1];
  }

  double total() const { return total_; }

  double below(double x) const {
    if (x <= core_->a) return 0.0;
    if (x <= edges_.front()) return tail_piece(core_->lower_limit(x), x, x);
    if (x >= edges_.back()) return total_ - above(x);
    const std::size_t i = index_of(x);
    return below_[i] + piece(edges_[i], x);
  }

  double above(double x) const {
    if (x >= core_->b) return 0.0;
    if (x >= edges_.back()) return tail_piece(x, core_->upper_limit(x), x);
    if (x <= edges_.front()) return total_ - below(x);
    const std::size_t i = index_of(x);
    return above_[i + 1] + piece(x, edges_[i + 1]);
  }

 private:
  double piece(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    const RealFunction phi = [this](double t) { return std::exp(log_phi_(t)); };
    return integrate(phi, lo, hi, core_->drift.kinks, tol_).value;
  }

  // Beyond the panels the integrand decays away from `near`; dividing by its
  // value there turns the absolute tolerance into a relative one.
  double tail_piece(double lo, double hi, double near) const {
    if (!(hi > lo)) return 0.0;
    const double log_scale = log_phi_(near);
    if (!std::isfinite(log_scale)) return piece(lo, hi);
    const RealFunction scaled = [&](double t) { return std::exp(log_phi_(t) - log_scale); };
    return std::exp(log_scale) * integrate(scaled, lo, hi, core_->drift.kinks, tol_).value;
  }

  std::size_t index_of(double x) const {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    return static_cast<std::size_t>(it - edges_.begin()) - 1;
  }

  void accumulate_forward(const std::vector<double>& panel) {
    double carry = 0.0;
    for (std::size_t i = 0; i < panel.size(); ++i) {
      const double s = below_[i];
      const double t = s + panel[i];
      carry += std::abs(s) >= std::abs(panel[i]) ? (s - t) + panel[i] : (panel[i] - t) + s;
      below_[i + 1] = t;
    }
    below_.back() += carry;
  }

  void accumulate_backward(const std::vector<double>& panel) {
    double carry = 0.0;
    for (std::size_t i = panel.size(); i-- > 0;) {
      const double s = above_[i + 1];
      const double t = s + panel[i];
      carry += std::abs(s) >= std::abs(panel[i]) ? (s - t) + panel[i] : (panel[i] - t) + s;
      above_[i] = t;
    }
    above_.front() += carry;
  }

  const Core* core_ = nullptr;
  RealFunction log_phi_;
  std::vector<double> edges_;
  std::vector<double> below_;
  std::vector<double> above_;
  double total_ = 0.0;
  double tol_ = 1e-15;
};

double abs_g_prime(const DriftFunction& drift, double x) {
  if (std::find(drift.kinks.begin(), drift.kinks.end(), x) != drift.kinks.end()) {
    const double left = std::abs(drift.g_prime(std::nextafter(x, -kInfinity)));
    const double right = std::abs(drift.g_prime(std::nextafter(x, kInfinity)));
    return std::max(left, right);
  }
  return std::abs(drift.g_prime(x));
}

double min_term(const LimitLaw& law, double x) {
  const double c0g = law.c0() * std::abs(law.drift().g(x));
  const double inv_c1 = 1.0 / law.c1();
  return c0g == 0.0 ? inv_c1 : std::min(inv_c1, 1.0 / c0g);
}

// Doubling search for the point where the unnormalized density has dropped
// by kTruncationDrop from the anchor.
double truncation_end(const Core& core, double direction) {
  const double end = direction < 0 ? core.a : core.b;
  if (std::isfinite(end)) return end;
  const double base = core.log_unnormalized(core.anchor);
  double d = 1.0;
  for (int i = 0; i < kMaxDoublings; ++i, d *= 2.0) {
    const double t = core.anchor + direction * d;
    const double drop = base - core.log_unnormalized(t);
    if (!std::isfinite(drop)) break;
    if (drop >= kTruncationDrop) return t;
  }
  throw NotNormalizableError(core.drift.name + ": e^{-c0 G} does not decay in the " +
                             (direction < 0 ? std::string("lower") : std::string("upper")) +
                             " tail");
}

}  // namespace

struct LimitLaw::State {
  Core core;
  double c1 = 0.0;
  double log_c1 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double median = 0.0;
  double mean_abs = 0.0;
  std::array<double, 9> moments{};
  CumulativeIntegral mass;
  CumulativeIntegral abs_mass;
};

const DriftFunction& LimitLaw::drift() const { return state_->core.drift; }
const std::string& LimitLaw::name() const { return state_->core.drift.name; }
double LimitLaw::c0() const { return state_->core.c0; }
double LimitLaw::c1() const { return state_->c1; }
double LimitLaw::support_lower() const { return state_->core.a; }
double LimitLaw::support_upper() const { return state_->core.b; }
double LimitLaw::lo() const { return state_->lo; }
double LimitLaw::hi() const { return state_->hi; }
double LimitLaw::anchor() const { return state_->core.anchor; }
double LimitLaw::G(double t) const { return state_->core.G(t); }

double LimitLaw::log_pdf(double t) const {
  if (t < state_->core.a || t > state_->core.b) return -kInfinity;
  return state_->log_c1 + state_->core.log_unnormalized(t);
}

double LimitLaw::pdf(double t) const { return std::exp(log_pdf(t)); }

double LimitLaw::cdf(double t) const {
  return std::clamp(state_->c1 * state_->mass.below(t), 0.0, 1.0);
}

double LimitLaw::survival(double t) const {
  return std::clamp(state_->c1 * state_->mass.above(t), 0.0, 1.0);
}

double LimitLaw::score(double t) const { return -state_->core.c0 * state_->core.drift.g(t); }

double LimitLaw::score_prime(double t) const {
  return -state_->core.c0 * state_->core.drift.g_prime(t);
}

double LimitLaw::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw ParameterError("quantile: u must lie in (0, 1)");
  double lo = state_->lo;
  double hi = state_->hi;
  while (cdf(lo) > u) lo = lo - (hi - lo);
  while (cdf(hi) < u && survival(hi) > 1.0 - u) hi = hi + (hi - lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    // Compare in whichever tail keeps precision.
    const bool below = u <= 0.5 ? cdf(mid) < u : survival(mid) > 1.0 - u;
    (below ? lo : hi) = mid;
    if (hi - lo <= 1e-14 * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

double LimitLaw::median() const { return state_->median; }

double LimitLaw::moment(int k) const {
  if (k < 0 || k > 8) throw ParameterError("moment: order must be in [0, 8]");
  return state_->moments[static_cast<std::size_t>(k)];
}

double LimitLaw::mean_abs() const { return state_->mean_abs; }

double LimitLaw::abs_mean_below(double x) const { return state_->c1 * state_->abs_mass.below(x); }
double LimitLaw::abs_mean_above(double x) const { return state_->c1 * state_->abs_mass.above(x); }

double LimitLaw::lower_limit(double w) const { return state_->core.lower_limit(w); }
double LimitLaw::upper_limit(double w) const { return state_->core.upper_limit(w); }

// ---------------------------------------------------------------------------

bool check_h1(const DriftFunction& drift, const Grid& grid) {
  double previous = -kInfinity;
  for (double x : grid.points()) {
    if (x <= drift.lower || x >= drift.upper) continue;  // open support
    const double gx = drift.g(x);
    if (std::isnan(gx)) return false;
    const double slack = 1e-12 * (1.0 + std::abs(gx));
    if (x > 0.0 && gx < -slack) return false;
    if (x <= 0.0 && gx > slack) return false;
    if (gx < previous - slack) return false;
    previous = gx;
  }
  return true;
}

LimitLaw build_limit_law(const DriftFunction& drift, double c0, double tol) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw ParameterError("build_limit_law: c0 must be positive");
  if (!(tol > 0.0)) throw ParameterError("build_limit_law: tol must be positive");
  if (!drift.g || !drift.g_prime) throw ParameterError("build_limit_law: drift needs g and g'");
  if (!(drift.lower < drift.upper)) throw ParameterError("build_limit_law: empty support");

  auto state = std::make_shared<LimitLaw::State>();
  Core& core = state->core;
  core.drift = drift;
  core.c0 = c0;
  core.a = drift.lower;
  core.b = drift.upper;
  core.anchor = (core.a <= 0.0 && 0.0 <= core.b) ? 0.0 : (std::isfinite(core.a) ? core.a : core.b);

  {
    const double plo = std::isfinite(core.a) ? core.a : -8.0;
    const double phi = std::isfinite(core.b) ? core.b : 8.0;
    if (plo < phi && !check_h1(drift, Grid::uniform(plo, phi, 801)))
      throw HypothesisError(drift.name + ": drift violates (H1) (monotone, sign change at 0)");
  }

  state->lo = truncation_end(core, -1.0);
  state->hi = truncation_end(core, 1.0);
  if (!check_h1(drift, Grid::uniform(state->lo, state->hi, 2001)))
    throw HypothesisError(drift.name + ": drift violates (H1) on the effective support");

  const Grid panels = Grid::uniform(state->lo, state->hi, kPanels + 1)
                          .with_points(std::vector<double>{core.anchor})
                          .with_points(drift.kinks);
  const std::vector<double> edges(panels.points().begin(), panels.points().end());

  const Core* core_ptr = &state->core;
  const double panel_tol = std::min(tol, 1e-15);
  state->mass = CumulativeIntegral(
      core_ptr, [core_ptr](double t) { return core_ptr->log_unnormalized(t); }, edges,
      panel_tol);
  const double z = state->mass.total();
  if (!(z > 0.0) || !std::isfinite(z)) throw NotNormalizableError(drift.name + ": zero or infinite mass");
  state->c1 = 1.0 / z;
  state->log_c1 = -std::log(z);

  state->abs_mass = CumulativeIntegral(
      core_ptr,
      [core_ptr](double t) { return std::log(std::abs(t)) + core_ptr->log_unnormalized(t); },
      edges, panel_tol);
  state->mean_abs = state->abs_mass.total() / z;

  {
    const double from = core.lower_limit(state->lo);
    const double to = core.upper_limit(state->hi);
    std::vector<double> cuts = edges;
    for (int k = 0; k <= 8; ++k) {
      auto integrand = [core_ptr, k](double t) {
        return std::pow(t, k) * std::exp(core_ptr->log_unnormalized(t));
      };
      state->moments[static_cast<std::size_t>(k)] =
          integrate(integrand, from, to, cuts, 1e-13).value / z;
    }
  }

  LimitLaw law(state);
  state->median = law.quantile(0.5);
  return law;
}

// ---------------------------------------------------------------------------
// Presets

DriftFunction gaussian_drift() {
  DriftFunction d;
  d.name = "gaussian";
  d.g = [](double t) { return t; };
  d.g_prime = [](double) { return 1.0; };
  d.antiderivative = [](double t) { return 0.5 * t * t; };
  d.h2_tail_limit = [](double c0, double) { return std::max(1.0, c0) / c0; };
  d.h3_tail_limit = [](double, double) { return 1.0; };
  return d;
}

DriftFunction quartic_drift(double n) {
  if (!(n > 0.0)) throw ParameterError("quartic drift: n must be positive");
  const double scale = std::pow(n, -1.5);
  DriftFunction d;
  d.name = "quartic";
  d.g = [scale](double w) { return w * w * w * scale / 3.0; };
  d.g_prime = [scale](double w) { return w * w * scale; };
  d.antiderivative = [scale](double w) { return w * w * w * w * scale / 12.0; };
  d.h2_tail_limit = [](double, double) { return 3.0; };
  d.h3_tail_limit = [](double, double) { return 3.0; };
  return d;
}

DriftFunction polynomial_drift(double c3) {
  DriftFunction d;
  d.name = "poly";
  d.g = [c3](double w) { return c3 * w * w * w; };
  d.g_prime = [c3](double w) { return 3.0 * c3 * w * w; };
  d.antiderivative = [c3](double w) { return 0.25 * c3 * w * w * w * w; };
  return d;
}

DriftFunction generalized_normal_drift(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw ParameterError("generalized normal: alpha and beta must be positive");
  DriftFunction d;
  d.name = "gennorm";
  d.g = [alpha, beta](double x) {
    if (x == 0.0) return 0.0;
    const double mag = alpha / beta * std::pow(std::abs(x), alpha - 1.0);
    return x > 0.0 ? mag : -mag;
  };
  d.g_prime = [alpha, beta](double x) {
    if (alpha == 1.0) return 0.0;
    if (x == 0.0) {
      if (alpha > 2.0) return 0.0;
      if (alpha == 2.0) return 2.0 / beta;
      return kInfinity;
    }
    return alpha * (alpha - 1.0) / beta * std::pow(std::abs(x), alpha - 2.0);
  };
  d.antiderivative = [alpha, beta](double x) { return std::pow(std::abs(x), alpha) / beta; };
  if (alpha < 2.0) d.kinks.push_back(0.0);
  return d;
}

DriftFunction exponential_drift(double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("exponential: lambda must be positive");
  DriftFunction d;
  d.name = "exponential";
  d.g = [lambda](double) { return lambda; };
  d.g_prime = [](double) { return 0.0; };
  d.antiderivative = [lambda](double t) { return lambda * t; };
  d.lower = 0.0;
  d.upper = kInfinity;
  return d;
}

double generalized_normal_normalizer(double alpha, double beta) {
  return alpha / (2.0 * std::pow(beta, 1.0 / alpha) * std::tgamma(1.0 / alpha));
}

LimitLaw generalized_normal_law(double alpha, double beta) {
  return build_limit_law(generalized_normal_drift(alpha, beta), 1.0);
}

LimitLaw exponential_law(double lambda) { return build_limit_law(exponential_drift(lambda), 1.0); }

// ---------------------------------------------------------------------------
// Hypotheses

double h2_expression(const LimitLaw& law, double x) {
  const double gp = law.c0() * abs_g_prime(law.drift(), x);
  return min_term(law, x) * (std::abs(x) + 3.0 / law.c1()) * std::max(1.0, gp);
}

double h3_expression(const LimitLaw& law, double x) {
  const double gp = law.c0() * abs_g_prime(law.drift(), x);
  if (gp == 0.0) return 0.0;
  return min_term(law, x) * (std::abs(x) + 3.0 / law.c1()) * gp;
}

Grid certification_grid(const LimitLaw& law, std::size_t points) {
  return Grid::uniform(law.lo(), law.hi(), points);
}

namespace {

double bisect_root(const RealFunction& f, double a, double b) {
  double fa = f(a);
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    if (!(m > a && m < b)) break;
    const double fm = f(m);
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Points where one of the min/max selectors in the hypothesis expressions
// switches branch; the expressions have kinks there.
std::vector<double> switching_points(const LimitLaw& law, const Grid& grid) {
  const double c0 = law.c0();
  const double c1 = law.c1();
  const RealFunction min_switch = [&](double x) { return c0 * std::abs(law.drift().g(x)) - c1; };
  const RealFunction max_switch = [&](double x) {
    return c0 * abs_g_prime(law.drift(), x) - 1.0;
  };
  std::vector<double> out(law.drift().kinks);
  out.push_back(0.0);
  for (const RealFunction* f : {&min_switch, &max_switch}) {
    const auto pts = grid.points();
    double prev = (*f)(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double cur = (*f)(pts[i]);
      if (std::isfinite(prev) && std::isfinite(cur) && (prev > 0.0) != (cur > 0.0))
        out.push_back(bisect_root(*f, pts[i - 1], pts[i]));
      prev = cur;
    }
  }
  return out;
}

struct CertifiedConstant {
  double value;
  double argmax;
  bool stable;
  std::string source;
};

CertifiedConstant certify_expression(const LimitLaw& law, const Grid& grid, const RealFunction& expr,
                                     const std::function<double(double, double)>& tail_limit) {
  const SupCertificate cert = certify_sup(expr, grid);
  CertifiedConstant out{cert.value, cert.argmax, cert.stable, "grid"};
  if (!std::isfinite(cert.value)) {
    out.source = "divergent";
    out.value = kInfinity;
    return out;
  }
  if (!cert.stable) {
    out.source = "divergent";
    out.value = kInfinity;
    return out;
  }

  // Probe beyond the truncation on infinite sides.
  for (double direction : {-1.0, 1.0}) {
    const double end = direction < 0 ? law.support_lower() : law.support_upper();
    if (std::isfinite(end)) continue;
    const double start = direction < 0 ? grid.lo() : grid.hi();
    double x = start;
    double previous = expr(x);
    bool increasing = true;
    double probe_max = previous;
    for (int j = 0; j < 8; ++j) {
      x = x + direction * std::max(1.0, std::abs(x));
      const double v = expr(x);
      if (!(v > previous)) increasing = false;
      probe_max = std::max(probe_max, v);
      previous = v;
    }
    if (increasing && previous > out.value * (1.0 + 1e-6)) {
      out.value = kInfinity;
      out.source = "divergent";
      return out;
    }
    if (probe_max > out.value) {
      out.value = probe_max;
      out.argmax = x;
    }
  }

  if (tail_limit) {
    const double limit = tail_limit(law.c0(), law.c1());
    if (limit > out.value) {
      out.value = limit;
      out.source = "tail-limit";
    }
  }
  return out;
}

}  // namespace

HypothesisReport certify_hypotheses(const LimitLaw& law, const Grid& grid) {
  const Grid augmented = grid.with_points(switching_points(law, grid));
  HypothesisReport report;
  report.h1_holds = check_h1(law.drift(), augmented);
  report.grid_lo = augmented.lo();
  report.grid_hi = augmented.hi();
  report.grid_points = augmented.size();

  const CertifiedConstant c2 = certify_expression(
      law, augmented, [&](double x) { return h2_expression(law, x); }, law.drift().h2_tail_limit);
  const CertifiedConstant c3 = certify_expression(
      law, augmented, [&](double x) { return h3_expression(law, x); }, law.drift().h3_tail_limit);
  report.c2 = c2.value;
  report.c2_argmax = c2.argmax;
  report.c2_stable = c2.stable;
  report.c2_source = c2.source;
  report.c3 = c3.value;
  report.c3_argmax = c3.argmax;
  report.c3_stable = c3.stable;
  report.c3_source = c3.source;
  return report;
}

HypothesisReport certify_hypotheses(const LimitLaw& law) {
  return certify_hypotheses(law, certification_grid(law));
}

double default_c0(double pair_second_moment) {
  if (!(pair_second_moment > 0.0) || !std::isfinite(pair_second_moment))
    throw ParameterError("default_c0: E(Delta^2) must be positive");
  return 2.0 / pair_second_moment;
}

}  // namespace stein_pairs
