#include "stein_pairs/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stein_pairs {

namespace test_functions {

TestFunction constant(double c) {
  TestFunction t;
  t.name = "const";
  t.kind = TestKind::lipschitz;
  t.h = [c](double) { return c; };
  t.h_prime = [](double) { return 0.0; };
  t.sup_norm = std::abs(c);
  t.lip_norm = 0.0;
  return t;
}

TestFunction identity() {
  TestFunction t;
  t.name = "identity";
  t.kind = TestKind::lipschitz;
  t.h = [](double w) { return w; };
  t.h_prime = [](double) { return 1.0; };
  t.lip_norm = 1.0;
  return t;
}

TestFunction sine() {
  TestFunction t;
  t.name = "sin";
  t.kind = TestKind::lipschitz;
  t.h = [](double w) { return std::sin(w); };
  t.h_prime = [](double w) { return std::cos(w); };
  t.sup_norm = 1.0;
  t.lip_norm = 1.0;
  return t;
}

TestFunction cosine() {
  TestFunction t;
  t.name = "cos";
  t.kind = TestKind::lipschitz;
  t.h = [](double w) { return std::cos(w); };
  t.h_prime = [](double w) { return -std::sin(w); };
  t.sup_norm = 1.0;
  t.lip_norm = 1.0;
  return t;
}

TestFunction indicator(double z) {
  TestFunction t;
  t.name = "indicator";
  t.kind = TestKind::indicator;
  t.threshold = z;
  t.h = [z](double w) { return w <= z ? 1.0 : 0.0; };
  t.sup_norm = 1.0;
  if (std::isfinite(z)) t.breakpoints.push_back(z);
  return t;
}

TestFunction ramp(double a) {
  TestFunction t;
  t.name = "ramp";
  t.kind = TestKind::lipschitz;
  t.h = [a](double w) { return std::min(w, a); };
  t.h_prime = [a](double w) { return w < a ? 1.0 : 0.0; };
  t.lip_norm = 1.0;
  t.breakpoints.push_back(a);
  return t;
}

TestFunction arctangent() {
  TestFunction t;
  t.name = "atan";
  t.kind = TestKind::lipschitz;
  t.h = [](double w) { return std::atan(w); };
  t.h_prime = [](double w) { return 1.0 / (1.0 + w * w); };
  t.sup_norm = std::numbers::pi / 2.0;
  t.lip_norm = 1.0;
  return t;
}

TestFunction gaussian_bump(double center, double width) {
  if (!(width > 0.0)) throw ParameterError("gaussian_bump: width must be positive");
  TestFunction t;
  t.name = "bump";
  t.kind = TestKind::lipschitz;
  t.h = [center, width](double w) {
    const double u = (w - center) / width;
    return std::exp(-u * u);
  };
  t.h_prime = [center, width](double w) {
    const double u = (w - center) / width;
    return -2.0 * u / width * std::exp(-u * u);
  };
  t.sup_norm = 1.0;
  // max of 2u e^{-u^2} is sqrt(2) e^{-1/2} at u = 1/sqrt(2)
  t.lip_norm = std::sqrt(2.0) * std::exp(-0.5) / width;
  return t;
}

}  // namespace test_functions

namespace {

void validate(const TestFunction& h) {
  if (!h.h) throw ParameterError("test function has no h");
  if (!h.sup_norm && !h.lip_norm)
    throw ParameterError("test function " + h.name + " needs a finite sup or Lipschitz norm");
}

std::vector<double> law_cuts(const LimitLaw& law, const TestFunction& h) {
  std::vector<double> cuts = h.breakpoints;
  cuts.insert(cuts.end(), law.drift().kinks.begin(), law.drift().kinks.end());
  cuts.push_back(law.anchor());
  const Grid coarse = Grid::uniform(law.lo(), law.hi(), 65);
  cuts.insert(cuts.end(), coarse.points().begin(), coarse.points().end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

SteinSolver::SteinSolver(LimitLaw law, TestFunction h, double tol)
    : law_(std::move(law)), h_(std::move(h)), tol_(tol) {
  validate(h_);
  if (h_.kind == TestKind::indicator) {
    eh_ = std::isfinite(h_.threshold) ? law_.cdf(h_.threshold) : (h_.threshold > 0 ? 1.0 : 0.0);
  } else {
    const std::vector<double> cuts = law_cuts(law_, h_);
    const LimitLaw& L = law_;
    const RealFunction& hf = h_.h;
    auto integrand = [&L, &hf](double t) { return hf(t) * L.pdf(t); };
    eh_ = integrate(integrand, law_.lower_limit(law_.lo()), law_.upper_limit(law_.hi()), cuts, 1e-12)
              .value;
  }
  cuts_ = h_.breakpoints;
  cuts_.insert(cuts_.end(), law_.drift().kinks.begin(), law_.drift().kinks.end());
  cuts_.push_back(law_.anchor());
}

double SteinSolver::integrand(double t, double log_pw) const {
  return (h_.h(t) - eh_) * std::exp(law_.log_pdf(t) - log_pw);
}

double SteinSolver::forward(double w) const {
  if (w <= law_.support_lower()) return 0.0;
  const double log_pw = law_.log_pdf(w);
  const double from = law_.lower_limit(w);
  return integrate([&](double t) { return integrand(t, log_pw); }, from, w, cuts_, tol_).value;
}

double SteinSolver::backward(double w) const {
  if (w >= law_.support_upper()) return 0.0;
  const double log_pw = law_.log_pdf(w);
  const double to = law_.upper_limit(w);
  return -integrate([&](double t) { return integrand(t, log_pw); }, w, to, cuts_, tol_).value;
}

double SteinSolver::f(double w) const { return w <= law_.median() ? forward(w) : backward(w); }

double SteinSolver::f_prime(double w, double f_value) const {
  return h_.h(w) - eh_ - f_value * law_.score(w);
}

double SteinSolver::f_second(double w, double f_value, double f_prime_value) const {
  if (!h_.h_prime) return std::nan("");
  return h_.h_prime(w) - f_prime_value * law_.score(w) - f_value * law_.score_prime(w);
}

Grid default_solution_grid(const LimitLaw& law, std::size_t points) {
  return Grid::uniform(law.lo(), law.hi(), points);
}

namespace {

// Five-point derivative of f at w; one-sided when a jump of h or a support
// end lies inside the stencil.
double stencil_derivative(const SteinSolver& solver, double w, double s,
                          const std::vector<double>& forbidden) {
  enum class Side { central, left, right } side = Side::central;
  const double lower_end = solver.law().support_lower();
  for (double x : forbidden) {
    if (std::abs(x - w) > 4.0 * s) continue;
    if (x == w) {
      side = x == lower_end ? Side::right : Side::left;
    } else {
      side = x > w ? Side::left : Side::right;
    }
    break;
  }
  auto f = [&](double x) { return solver.f(x); };
  switch (side) {
    case Side::central:
      return (f(w - 2 * s) - 8 * f(w - s) + 8 * f(w + s) - f(w + 2 * s)) / (12 * s);
    case Side::left:
      return (25 * f(w) - 48 * f(w - s) + 36 * f(w - 2 * s) - 16 * f(w - 3 * s) + 3 * f(w - 4 * s)) /
             (12 * s);
    case Side::right:
      return (-25 * f(w) + 48 * f(w + s) - 36 * f(w + 2 * s) + 16 * f(w + 3 * s) - 3 * f(w + 4 * s)) /
             (12 * s);
  }
  return 0.0;
}

}  // namespace

SteinSolution solve(const LimitLaw& law, const TestFunction& h, const Grid& grid,
                    const SolveOptions& options) {
  const SteinSolver solver(law, h, options.tol);
  SteinSolution out{law, h, 0.0, 0.0, {}, {}, {}, {}, {}, 0.0, 0.0, 0.0};
  out.Eh = solver.Eh();
  out.median = law.median();
  out.w.assign(grid.points().begin(), grid.points().end());
  const std::size_t n = out.w.size();
  out.f.assign(n, 0.0);
  out.f_prime.assign(n, 0.0);
  out.residual.assign(n, 0.0);
  if (h.h_prime) out.f_second.assign(n, 0.0);

  std::vector<double> forbidden = h.breakpoints;
  if (std::isfinite(law.support_lower())) forbidden.push_back(law.support_lower());
  if (std::isfinite(law.support_upper())) forbidden.push_back(law.support_upper());

  for_each_index(options.exec, n, [&](std::size_t i) {
    const double w = out.w[i];
    const double fv = solver.f(w);
    const double fp = solver.f_prime(w, fv);
    out.f[i] = fv;
    out.f_prime[i] = fp;
    if (h.h_prime) out.f_second[i] = solver.f_second(w, fv, fp);
    if (options.compute_residual)
      out.residual[i] = std::abs(stencil_derivative(solver, w, options.fd_step, forbidden) - fp);
  });
  out.max_residual = *std::max_element(out.residual.begin(), out.residual.end());
  out.flux_lo = out.f.front() * law.pdf(out.w.front());
  out.flux_hi = out.f.back() * law.pdf(out.w.back());
  return out;
}

SteinSolution solve(const LimitLaw& law, const TestFunction& h) {
  return solve(law, h, default_solution_grid(law));
}

SteinSolution solve_indicator(const LimitLaw& law, double z, const Grid& grid,
                              const SolveOptions& options) {
  return solve(law, test_functions::indicator(z), grid, options);
}

SteinSolution solve_indicator(const LimitLaw& law, double z) {
  return solve_indicator(law, z, default_solution_grid(law));
}

IdentityResidual stein_identity_residual(const LimitLaw& law, const RealFunction& f,
                                         const RealFunction& f_prime, double tol) {
  const double from = law.lower_limit(law.lo());
  const double to = law.upper_limit(law.hi());
  std::vector<double> cuts = law.drift().kinks;
  cuts.push_back(law.anchor());
  const Grid coarse = Grid::uniform(law.lo(), law.hi(), 65);
  cuts.insert(cuts.end(), coarse.points().begin(), coarse.points().end());
  auto integrand = [&](double t) { return (f_prime(t) + f(t) * law.score(t)) * law.pdf(t); };
  IdentityResidual out;
  out.value = std::abs(integrate(integrand, from, to, cuts, tol).value);
  const double flux_lo = std::abs(f(from) * law.pdf(from));
  const double flux_hi = std::abs(f(to) * law.pdf(to));
  out.boundary_flux = std::max(flux_lo, flux_hi);
  out.in_class_d = out.boundary_flux <= 1e-8;
  return out;
}

// ---------------------------------------------------------------------------
// Audits

namespace {

double sup_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

InequalityCheck make_check(std::string label, double lhs, double rhs) {
  InequalityCheck c;
  c.label = std::move(label);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  return c;
}

InequalityCheck skipped(std::string label, std::string reason) {
  InequalityCheck c;
  c.label = std::move(label);
  c.applicable = false;
  c.skipped_reason = std::move(reason);
  return c;
}

void finalize(BoundAudit& audit) {
  audit.pass = true;
  for (const auto& c : audit.checks)
    if (c.applicable && !(c.margin >= -kAuditSlack)) audit.pass = false;
}

}  // namespace

BoundAudit audit_solution(const SteinSolution& s, const HypothesisReport& report) {
  const LimitLaw& law = s.law;
  const TestFunction& h = s.h;
  BoundAudit audit;
  audit.d1 = 1.0 / law.c1();
  audit.d2 = 1.0;
  audit.d3 = report.c2;
  audit.d4 = report.c2;

  if (h.sup_norm) {
    const double hn = *h.sup_norm;
    std::vector<double> f_score(s.w.size());
    for (std::size_t i = 0; i < s.w.size(); ++i) f_score[i] = s.f[i] * law.score(s.w[i]);
    audit.checks.push_back(make_check("||f|| <= 2 d1 ||h||", sup_abs(s.f), 2.0 * audit.d1 * hn));
    audit.checks.push_back(make_check("||f p'/p|| <= 2 d2 ||h||", sup_abs(f_score), 2.0 * audit.d2 * hn));
    audit.checks.push_back(
        make_check("||f'|| <= (2 + 2 d2) ||h||", sup_abs(s.f_prime), (2.0 + 2.0 * audit.d2) * hn));
  } else {
    for (const char* label : {"||f|| <= 2 d1 ||h||", "||f p'/p|| <= 2 d2 ||h||", "||f'|| <= (2 + 2 d2) ||h||"})
      audit.checks.push_back(skipped(label, "h is unbounded"));
  }

  const char* lip_labels[] = {"||f''|| <= (1 + d2)(1 + d3) ||h'||", "||f|| <= d4 ||h'||",
                              "||f'|| <= (1 + d3) d1 ||h'||"};
  if (!h.lip_norm || !h.h_prime || s.f_second.empty()) {
    for (const char* label : lip_labels) audit.checks.push_back(skipped(label, "h is not Lipschitz"));
  } else if (!std::isfinite(report.c2)) {
    for (const char* label : lip_labels) audit.checks.push_back(skipped(label, "c2 is not finite"));
  } else {
    const double hl = *h.lip_norm;
    audit.checks.push_back(make_check(lip_labels[0], sup_abs(s.f_second),
                                      (1.0 + audit.d2) * (1.0 + audit.d3) * hl));
    audit.checks.push_back(make_check(lip_labels[1], sup_abs(s.f), audit.d4 * hl));
    audit.checks.push_back(make_check(lip_labels[2], sup_abs(s.f_prime), (1.0 + audit.d3) * audit.d1 * hl));
  }
  finalize(audit);
  return audit;
}

BoundAudit audit_bounds(const LimitLaw& law, const TestFunction& h, const HypothesisReport& report,
                        const Grid& grid, const SolveOptions& options) {
  SolveOptions opts = options;
  opts.compute_residual = false;
  return audit_solution(solve(law, h, grid, opts), report);
}

BoundAudit audit_cdf_assumptions(const LimitLaw& law, const HypothesisReport& report,
                                 const Grid& grid) {
  BoundAudit audit;
  audit.d1 = 1.0 / law.c1();
  audit.d2 = 1.0;
  audit.d3 = report.c2;
  audit.d4 = report.c2;
  const double mean_abs = law.mean_abs();
  const auto pts = grid.points();

  struct Worst {
    double margin = kInfinity;
    double lhs = 0.0;
    double rhs = 0.0;
  };
  Worst w1, w2, w3, w4;
  auto record = [](Worst& w, double lhs, double rhs) {
    const double rel = rhs > 0.0 ? (rhs - lhs) / rhs : (lhs > 0.0 ? -kInfinity : 0.0);
    if (rel < w.margin) w = {rel, lhs, rhs};
  };

  std::vector<double> l[4], r[4];
  for (auto& v : l) v.assign(pts.size(), 0.0);
  for (auto& v : r) v.assign(pts.size(), 0.0);
  const bool have_d3 = std::isfinite(report.c2);
  for_each_index(Execution::parallel, pts.size(), [&](std::size_t i) {
    const double x = pts[i];
    const double p = law.pdf(x);
    const double F = law.cdf(x);
    const double S = law.survival(x);
    const double tail = std::min(F, S);
    l[0][i] = tail;
    r[0][i] = audit.d1 * p;
    l[1][i] = std::abs(law.score(x)) * tail;  // |p'| min(F, 1-F) <= d2 p^2, divided by p
    r[1][i] = audit.d2 * p;
    const double truncated = std::min(law.abs_mean_below(x) + mean_abs * F,
                                      law.abs_mean_above(x) + mean_abs * S);
    if (have_d3) {
      const double sp = std::abs(law.score_prime(x));
      l[2][i] = sp == 0.0 ? 0.0 : truncated * sp;
      r[2][i] = audit.d3 * p;
      l[3][i] = truncated;
      r[3][i] = audit.d4 * p;
    }
  });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    record(w1, l[0][i], r[0][i]);
    record(w2, l[1][i], r[1][i]);
    if (have_d3) {
      record(w3, l[2][i], r[2][i]);
      record(w4, l[3][i], r[3][i]);
    }
  }

  auto push = [&](const char* label, const Worst& w) {
    InequalityCheck c = make_check(label, w.lhs, w.rhs);
    c.margin = w.margin;
    audit.checks.push_back(c);
  };
  push("min(F, 1-F) <= d1 p", w1);
  push("|p'| min(F, 1-F) <= d2 p^2", w2);
  if (have_d3) {
    push("min(E|Y|1{Y<=x} + E|Y| F, E|Y|1{Y>x} + E|Y| (1-F)) |(p'/p)'| <= d3 p", w3);
    push("min(E|Y|1{Y<=x} + E|Y| F, E|Y|1{Y>x} + E|Y| (1-F)) <= d4 p", w4);
  } else {
    audit.checks.push_back(skipped("min(...) |(p'/p)'| <= d3 p", "c2 is not finite"));
    audit.checks.push_back(skipped("min(...) <= d4 p", "c2 is not finite"));
  }
  finalize(audit);
  return audit;
}

}  // namespace stein_pairs
