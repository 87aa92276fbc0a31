#include "stein_pairs/bounds.hpp"

#include <cmath>
#include <functional>

namespace stein_pairs {

void PairStatistics::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"c0", c0},
      {"e_abs_one_minus_half_c0_d2", e_abs_one_minus_half_c0_d2},
      {"e_abs_delta_cubed", e_abs_delta_cubed},
      {"e_abs_r", e_abs_r},
      {"e_weighted_r", e_weighted_r},
      {"e_abs_Wr", e_abs_Wr},
      {"e_abs_c0g_W", e_abs_c0g_W},
  };
  for (const auto& [name, value] : fields)
    if (!std::isfinite(value) || value < 0.0)
      throw ParameterError(std::string("PairStatistics.") + name + " must be finite and >= 0");
  if (delta_max && (!std::isfinite(*delta_max) || *delta_max < 0.0))
    throw ParameterError("PairStatistics.delta_max must be finite and >= 0");
}

namespace {

using Evaluator = std::function<BoundValue(const PairStatistics&)>;

double sum_terms(const BoundValue& b) {
  double s = 0.0;
  for (const auto& term : b.breakdown) s += term.second;
  return s;
}

double* field_ptr(PairStatistics& s, const std::string& name) {
  if (name == "e_abs_one_minus_half_c0_d2") return &s.e_abs_one_minus_half_c0_d2;
  if (name == "e_abs_delta_cubed") return &s.e_abs_delta_cubed;
  if (name == "e_abs_r") return &s.e_abs_r;
  if (name == "e_weighted_r") return &s.e_weighted_r;
  if (name == "e_abs_Wr") return &s.e_abs_Wr;
  if (name == "e_abs_c0g_W") return &s.e_abs_c0g_W;
  if (name == "delta_max" && s.delta_max) return &*s.delta_max;
  return nullptr;
}

// Validates, evaluates, and attaches Monte Carlo and provenance annotations.
BoundValue finish(const PairStatistics& stats, const Evaluator& eval) {
  stats.validate();
  BoundValue out = eval(stats);
  out.value = sum_terms(out);
  if (!stats.standard_errors.empty()) {
    double var = 0.0;
    for (const auto& [name, se] : stats.standard_errors) {
      PairStatistics up = stats;
      PairStatistics down = stats;
      double* pu = field_ptr(up, name);
      double* pd = field_ptr(down, name);
      if (pu == nullptr || pd == nullptr || !(se > 0.0)) continue;
      *pu += se;
      *pd -= se;
      const double slope = 0.5 * (sum_terms(eval(up)) - sum_terms(eval(down)));
      var += slope * slope;
    }
    out.plus_minus = 2.0 * std::sqrt(var);
    out.notes.push_back("Monte Carlo statistics; plus_minus is 2 standard errors");
  }
  if (stats.delta_cubed_is_upper_bound)
    out.notes.push_back("e_abs_delta_cubed is an upper bound, not an exact moment");
  if (stats.delta_is_empirical && stats.delta_max)
    out.notes.push_back("empirical-delta, not certified");
  return out;
}

void require_finite(double c, const char* name, const char* hypothesis) {
  if (!std::isfinite(c))
    throw HypothesisError(std::string(name) + " is not finite: hypothesis " + hypothesis +
                          " not certified");
}

}  // namespace

BoundValue theorem_1_1(const PairStatistics& stats, double c1, const HypothesisReport& report,
                       SmoothVariant variant) {
  if (!(c1 > 0.0)) throw ParameterError("theorem_1_1: c1 must be positive");
  if (variant == SmoothVariant::i) {
    require_finite(report.c2, "c2", "(H2)");
    const double c2 = report.c2;
    return finish(stats, [=](const PairStatistics& s) {
      BoundValue b;
      b.theorem = "theorem_1_1(i)";
      b.breakdown = {
          {"(1+c2)/c1 E|1-(c0/2)E(D^2|W)|", (1.0 + c2) / c1 * s.e_abs_one_minus_half_c0_d2},
          {"(1/2) c0 (1+c2) E|D|^3", 0.5 * s.c0 * (1.0 + c2) * s.e_abs_delta_cubed},
          {"c0 c2 E|r(W)|", s.c0 * c2 * s.e_abs_r},
      };
      return b;
    });
  }
  require_finite(report.c3, "c3", "(H3)");
  const double c3 = report.c3;
  return finish(stats, [=](const PairStatistics& s) {
    BoundValue b;
    b.theorem = "theorem_1_1(ii)";
    b.breakdown = {
        {"(1+c3)/c1 E|1-(c0/2)E(D^2|W)|", (1.0 + c3) / c1 * s.e_abs_one_minus_half_c0_d2},
        {"(1/2) c0 (1+c3) E|D|^3", 0.5 * s.c0 * (1.0 + c3) * s.e_abs_delta_cubed},
        {"(c0/c1) E[(|W|+3/c1)|r(W)|]", s.c0 / c1 * s.e_weighted_r},
    };
    return b;
  });
}

BoundValue theorem_1_1(const PairStatistics& stats, const LimitLaw& law,
                       const HypothesisReport& report, SmoothVariant variant) {
  return theorem_1_1(stats, law.c1(), report, variant);
}

BoundValue best_smooth_bound(const PairStatistics& stats, double c1, const HypothesisReport& report) {
  std::optional<BoundValue> best;
  for (SmoothVariant v : {SmoothVariant::i, SmoothVariant::ii}) {
    try {
      BoundValue b = theorem_1_1(stats, c1, report, v);
      if (!best || b.value < best->value) best = std::move(b);
    } catch (const HypothesisError&) {
    }
  }
  if (!best) throw HypothesisError("best_smooth_bound: neither (H2) nor (H3) is certified");
  best->notes.push_back("minimum of the two smooth-function variants");
  return *best;
}

BoundValue theorem_1_2(const PairStatistics& stats, double c1, const HypothesisReport& report) {
  if (!(c1 > 0.0)) throw ParameterError("theorem_1_2: c1 must be positive");
  if (!stats.delta_max) throw ParameterError("theorem_1_2: delta_max (a.s. bound on |W - W'|) is required");
  require_finite(report.c3, "c3", "(H3)");
  const double c3 = report.c3;
  return finish(stats, [=](const PairStatistics& s) {
    const double delta = s.delta_max.value_or(0.0);
    BoundValue b;
    b.theorem = "theorem_1_2";
    b.breakdown = {
        {"3 E|1-(c0/2)E(D^2|W)|", 3.0 * s.e_abs_one_minus_half_c0_d2},
        {"c1 max(1,c3) delta", c1 * std::max(1.0, c3) * delta},
        {"2 c0 E|r(W)|/c1", 2.0 * s.c0 * s.e_abs_r / c1},
        {"delta^3 c0 ((2+c3/2) E|c0 g(W)| + c1 c3/2)",
         delta * delta * delta * s.c0 * ((2.0 + 0.5 * c3) * s.e_abs_c0g_W + 0.5 * c1 * c3)},
    };
    return b;
  });
}

BoundValue theorem_1_2(const PairStatistics& stats, const LimitLaw& law,
                       const HypothesisReport& report) {
  return theorem_1_2(stats, law.c1(), report);
}

BoundValue theorem_3_1(const PairStatistics& stats, ExponentialVariant variant) {
  if (variant == ExponentialVariant::smooth) {
    return finish(stats, [](const PairStatistics& s) {
      BoundValue b;
      b.theorem = "theorem_3_1(smooth)";
      b.breakdown = {
          {"E|1-(c0/2)E(D^2|W)|", s.e_abs_one_minus_half_c0_d2},
          {"c0 E|D|^3", s.c0 * s.e_abs_delta_cubed},
          {"3 c0 E|W r(W)|", 3.0 * s.c0 * s.e_abs_Wr},
      };
      return b;
    });
  }
  if (!stats.delta_max) throw ParameterError("theorem_3_1(kolmogorov): delta_max is required");
  return finish(stats, [](const PairStatistics& s) {
    const double delta = s.delta_max.value_or(0.0);
    BoundValue b;
    b.theorem = "theorem_3_1(kolmogorov)";
    b.breakdown = {
        {"3 E|1-(c0/2)E(D^2|W)|", 3.0 * s.e_abs_one_minus_half_c0_d2},
        {"delta", delta},
        {"2 c0 delta^3", 2.0 * s.c0 * delta * delta * delta},
        {"3 c0 E|W r(W)|", 3.0 * s.c0 * s.e_abs_Wr},
    };
    return b;
  });
}

BoundValue scaled(BoundValue bound, double lipschitz_norm) {
  if (!(lipschitz_norm >= 0.0)) throw ParameterError("scaled: ||h'|| must be >= 0");
  for (auto& term : bound.breakdown) term.second *= lipschitz_norm;
  bound.value = sum_terms(bound);
  if (bound.plus_minus) *bound.plus_minus *= lipschitz_norm;
  return bound;
}

}  // namespace stein_pairs
