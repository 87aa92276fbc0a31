#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stein_pairs/curie_weiss.hpp"
#include "stein_pairs/presets.hpp"
#include "stein_pairs/stein.hpp"

using namespace stein_pairs;

namespace {

struct Pair {
  const char* name;
  RealFunction f;
  RealFunction fp;
};

std::vector<Pair> identity_functions() {
  return {
      {"sin", [](double y) { return std::sin(y); }, [](double y) { return std::cos(y); }},
      {"tanh", [](double y) { return std::tanh(y); },
       [](double y) { return 1.0 / (std::cosh(y) * std::cosh(y)); }},
      {"atan", [](double y) { return std::atan(y); }, [](double y) { return 1.0 / (1.0 + y * y); }},
      {"y exp(-y^2)", [](double y) { return y * std::exp(-y * y); },
       [](double y) { return (1.0 - 2.0 * y * y) * std::exp(-y * y); }},
      {"1 - cos", [](double y) { return 1.0 - std::cos(y); }, [](double y) { return std::sin(y); }},
  };
}

std::vector<TestFunction> audit_functions() {
  return {test_functions::sine(), test_functions::cosine(), test_functions::arctangent(),
          test_functions::gaussian_bump(0.0, 1.0), test_functions::gaussian_bump(1.0, 0.5)};
}

double gaussian_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

const InequalityCheck& find(const BoundAudit& a, const std::string& label) {
  for (const auto& c : a.checks)
    if (c.label == label) return c;
  throw std::runtime_error("missing check " + label);
}

}  // namespace

TEST_SUITE("stein") {

TEST_CASE("Stein identity holds for smooth f on every law") {
  for (const char* spec : {"gaussian", "quartic", "exponential:1", "gennorm:4:12"}) {
    const LimitLaw law = presets::law_from_spec(spec);
    for (const Pair& p : identity_functions()) {
      CAPTURE(spec);
      CAPTURE(p.name);
      const IdentityResidual r = stein_identity_residual(law, p.f, p.fp);
      CHECK(r.value <= 1e-6);
      CHECK(r.in_class_d);
    }
  }
}

TEST_CASE("identity fails for f outside class D") {
  // f = 1 on the exponential law: f p does not vanish at 0.
  const LimitLaw e = exponential_law(1.0);
  const IdentityResidual r =
      stein_identity_residual(e, [](double) { return 1.0; }, [](double) { return 0.0; });
  CHECK_FALSE(r.in_class_d);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("closed forms: exponential identity, Gaussian identity, constants") {
  const LimitLaw e = exponential_law(1.0);
  const SteinSolution s = solve(e, test_functions::identity());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.w.size(); ++i) worst = std::max(worst, std::abs(s.f[i] + s.w[i]));
  CHECK(worst <= 1e-8);
  CHECK(s.Eh == doctest::Approx(1.0).epsilon(1e-12));

  const LimitLaw g = build_limit_law(gaussian_drift(), 1.0);
  const SteinSolution sg = solve(g, test_functions::identity());
  for (std::size_t i = 0; i < sg.w.size(); ++i) CHECK(std::abs(sg.f[i] + 1.0) <= 1e-8);

  const SteinSolution sc = solve(g, test_functions::constant(2.5));
  for (double v : sc.f) CHECK(v == 0.0);
}

TEST_CASE("Kolmogorov solution against the Gaussian closed form") {
  const LimitLaw g = build_limit_law(gaussian_drift(), 1.0);
  for (double z : {-1.0, 0.0, 0.6}) {
    const SteinSolver solver(g, test_functions::indicator(z));
    for (double w = -4.0; w <= 4.0; w += 0.25) {
      const double p = std::exp(-w * w / 2) / std::sqrt(2.0 * std::numbers::pi);
      const double expected = (gaussian_cdf(std::min(w, z)) - gaussian_cdf(w) * gaussian_cdf(z)) / p;
      CHECK(std::abs(solver.f(w) - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("Kolmogorov solution on the exponential law at its median") {
  // f_z(w) = (F(min(w,z)) - F(w)F(z)) e^{w}, with F(z) = 1/2 at z = ln 2.
  const LimitLaw e = exponential_law(1.0);
  const double z = std::log(2.0);
  const SteinSolver solver(e, test_functions::indicator(z));
  for (double w : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double F = -std::expm1(-w);
    const double expected = ((w <= z ? F : 0.5) - 0.5 * F) * std::exp(w);
    CHECK(solver.f(w) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("forward and backward representations agree in the bulk") {
  for (const char* spec : {"gaussian", "quartic", "exponential"}) {
    const LimitLaw law = presets::law_from_spec(spec);
    const SteinSolver solver(law, test_functions::sine());
    for (double w = law.quantile(0.05); w <= law.quantile(0.95); w += 0.2) {
      CAPTURE(spec);
      CAPTURE(w);
      CHECK(std::abs(solver.forward(w) - solver.backward(w)) <= 1e-9);
    }
  }
}

TEST_CASE("solution satisfies the Stein equation on the grid") {
  const LimitLaw q = curie_weiss::quartic_limit();
  for (const TestFunction& h : audit_functions()) {
    const SteinSolution s = solve(q, h);
    CAPTURE(h.name);
    CHECK(s.max_residual <= 1e-5);
    CHECK(std::abs(s.flux_lo) <= 1e-8);
    CHECK(std::abs(s.flux_hi) <= 1e-8);
    REQUIRE(s.w.size() == s.f.size());
    REQUIRE(s.w.size() == s.f_prime.size());
  }
}

TEST_CASE("full sup-norm audit passes on quartic and Gaussian laws") {
  for (const char* spec : {"quartic", "gaussian"}) {
    const LimitLaw law = presets::law_from_spec(spec);
    const HypothesisReport report = certify_hypotheses(law);
    const Grid grid = default_solution_grid(law);
    for (const TestFunction& h : audit_functions()) {
      CAPTURE(spec);
      CAPTURE(h.name);
      const BoundAudit a = audit_bounds(law, h, report, grid);
      CHECK(a.pass);
      REQUIRE(a.checks.size() == 6);
      for (const auto& c : a.checks) {
        CAPTURE(c.label);
        CHECK(c.applicable);
        CHECK(c.margin >= 0.0);
      }
    }
  }
}

TEST_CASE("Kolmogorov-solution bounds on the quartic law") {
  const LimitLaw q = curie_weiss::quartic_limit();
  const HypothesisReport report = certify_hypotheses(q);
  for (int k = 0; k < 20; ++k) {
    const double z = -3.0 + 6.0 * k / 19.0;
    CAPTURE(z);
    const SteinSolution s = solve_indicator(q, z);
    const BoundAudit a = audit_solution(s, report);
    const InequalityCheck& sup = find(a, "||f|| <= 2 d1 ||h||");
    const InequalityCheck& slope = find(a, "||f'|| <= (2 + 2 d2) ||h||");
    CHECK(sup.rhs == doctest::Approx(2.0 / q.c1()));
    CHECK(slope.rhs == 4.0);
    CHECK(sup.margin >= 0.0);
    CHECK(slope.margin >= 0.0);
    CHECK(a.pass);
  }
}

TEST_CASE("unbounded h skips the sup-norm checks") {
  const LimitLaw q = curie_weiss::quartic_limit();
  const BoundAudit a = audit_bounds(q, test_functions::identity(), certify_hypotheses(q),
                                    default_solution_grid(q));
  int skipped = 0;
  for (const auto& c : a.checks)
    if (!c.applicable) {
      ++skipped;
      CHECK_FALSE(c.skipped_reason.empty());
    }
  CHECK(skipped == 3);
}

TEST_CASE("CDF assumptions hold on the quartic and Gaussian laws") {
  for (const char* spec : {"quartic", "gaussian"}) {
    const LimitLaw law = presets::law_from_spec(spec);
    const BoundAudit a = audit_cdf_assumptions(law, certify_hypotheses(law), certification_grid(law));
    CHECK(a.pass);
    CHECK(a.checks.size() == 4);
  }
}

TEST_CASE("solution sup norms are stable under grid refinement") {
  const LimitLaw q = curie_weiss::quartic_limit();
  const TestFunction h = test_functions::arctangent();
  auto sup = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  const SteinSolution coarse = solve(q, h, default_solution_grid(q, 401));
  const SteinSolution fine = solve(q, h, default_solution_grid(q, 1601));
  CHECK(sup(coarse.f) == doctest::Approx(sup(fine.f)).epsilon(1e-4));
  CHECK(sup(coarse.f_prime) == doctest::Approx(sup(fine.f_prime)).epsilon(1e-3));
}

TEST_CASE("test function specs") {
  CHECK(*presets::test_function_from_spec("const:2").sup_norm == 2.0);
  CHECK(presets::test_function_from_spec("indicator:0.5").threshold == 0.5);
  CHECK(presets::test_function_from_spec("ramp:1").h(3.0) == 1.0);
  CHECK(presets::test_function_from_spec("bump:1:0.5").h(1.0) == 1.0);
  CHECK_THROWS_AS(presets::test_function_from_spec("wiggle"), ParameterError);
  CHECK_THROWS_AS(presets::test_function_from_spec("ramp"), ParameterError);
}

}  // TEST_SUITE
