#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stein_pairs/limit_law.hpp"

namespace stein_pairs {

enum class TestKind { bounded, lipschitz, indicator };

struct TestFunction {
  std::string name;
  TestKind kind = TestKind::bounded;
  RealFunction h;
  RealFunction h_prime;            // empty when h is not differentiable
  std::optional<double> sup_norm;  // ||h||
  std::optional<double> lip_norm;  // ||h'||
  double threshold = 0.0;          // indicator: h = 1{w <= threshold}
  std::vector<double> breakpoints; // jumps or kinks of h
};

namespace test_functions {

TestFunction constant(double c);
TestFunction identity();
TestFunction sine();
TestFunction cosine();
TestFunction indicator(double z);
TestFunction ramp(double a);          // min(w, a)
TestFunction arctangent();            // atan(w)
TestFunction gaussian_bump(double center, double width);  // exp(-((w-c)/s)^2)

}  // namespace test_functions

struct SteinSolution {
  LimitLaw law;
  TestFunction h;
  double Eh = 0.0;  // E h(Y)
  double median = 0.0;
  std::vector<double> w;
  std::vector<double> f;
  std::vector<double> f_prime;   // algebraic, from the Stein equation
  std::vector<double> f_second;  // algebraic; empty when h' is absent
  // |finite-difference f' - algebraic f'| at each grid point.
  std::vector<double> residual;
  double max_residual = 0.0;
  // f p at the two grid ends; the boundary term in the Stein identity.
  double flux_lo = 0.0;
  double flux_hi = 0.0;
};

struct SolveOptions {
  double tol = 1e-13;
  double fd_step = 1e-3;
  bool compute_residual = true;
  Execution exec = Execution::parallel;
};

// Evaluates f_h = (1/p) int_a^w (h - Eh) p pointwise, switching to the
// equivalent -(1/p) int_w^b form above the median.
class SteinSolver {
 public:
  SteinSolver(LimitLaw law, TestFunction h, double tol = 1e-13);

  const LimitLaw& law() const { return law_; }
  const TestFunction& test_function() const { return h_; }
  double Eh() const { return eh_; }

  double forward(double w) const;
  double backward(double w) const;
  double f(double w) const;
  double f_prime(double w, double f_value) const;
  double f_second(double w, double f_value, double f_prime_value) const;

 private:
  double integrand(double t, double log_pw) const;

  LimitLaw law_;
  TestFunction h_;
  double tol_;
  double eh_ = 0.0;
  std::vector<double> cuts_;
};

Grid default_solution_grid(const LimitLaw& law, std::size_t points = 801);

SteinSolution solve(const LimitLaw& law, const TestFunction& h, const Grid& grid,
                    const SolveOptions& options = {});
SteinSolution solve(const LimitLaw& law, const TestFunction& h);

SteinSolution solve_indicator(const LimitLaw& law, double z, const Grid& grid,
                              const SolveOptions& options = {});
SteinSolution solve_indicator(const LimitLaw& law, double z);

struct IdentityResidual {
  double value = 0.0;      // |E f'(Y) + E f(Y) p'(Y)/p(Y)|
  bool in_class_d = true;  // f p vanishes at both ends of the support
  double boundary_flux = 0.0;
};

IdentityResidual stein_identity_residual(const LimitLaw& law, const RealFunction& f,
                                         const RealFunction& f_prime, double tol = 1e-12);

struct InequalityCheck {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool applicable = true;
  std::string skipped_reason;
};

struct BoundAudit {
  std::vector<InequalityCheck> checks;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
  double d4 = 0.0;
  bool pass = true;
};

inline constexpr double kAuditSlack = 1e-8;

// Lemma-style sup-norm bounds on f_h, f_h', f_h'' with d1 = 1/c1, d2 = 1,
// d3 = d4 = c2. Margins are rhs - lhs.
BoundAudit audit_bounds(const LimitLaw& law, const TestFunction& h, const HypothesisReport& report,
                        const Grid& grid, const SolveOptions& options = {});
BoundAudit audit_solution(const SteinSolution& solution, const HypothesisReport& report);

// Pointwise checks of the four CDF conditions behind those bounds. Margins
// are the worst (rhs - lhs) / rhs over the grid.
BoundAudit audit_cdf_assumptions(const LimitLaw& law, const HypothesisReport& report,
                                 const Grid& grid);

}  // namespace stein_pairs
