#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stein_pairs/limit_law.hpp"

namespace stein_pairs {

// Exchangeable-pair summary that the bound formulas consume. Field names
// match the JSON schema.
struct PairStatistics {
  double c0 = 1.0;
  double e_abs_one_minus_half_c0_d2 = 0.0;  // E|1 - (c0/2) E(Delta^2 | W)|
  double e_abs_delta_cubed = 0.0;           // E|Delta|^3
  double e_abs_r = 0.0;                     // E|r(W)|
  double e_weighted_r = 0.0;                // E[(|W| + 3/c1) |r(W)|]
  double e_abs_Wr = 0.0;                    // E|W r(W)|
  std::optional<double> delta_max;          // a.s. bound on |Delta|
  double e_abs_c0g_W = 0.0;                 // E|c0 g(W)|

  // Provenance flags.
  bool delta_cubed_is_upper_bound = false;
  bool delta_is_empirical = false;
  // Monte Carlo standard errors keyed by field name; empty for exact stats.
  std::map<std::string, double> standard_errors;

  void validate() const;
};

struct BoundValue {
  std::string theorem;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> breakdown;
  std::optional<double> plus_minus;  // 2 SE when the stats are Monte Carlo
  std::vector<std::string> notes;
};

enum class SmoothVariant { i, ii };
enum class ExponentialVariant { smooth, kolmogorov };

// Smooth-function bound per unit ||h'||. Variant i needs c2, ii needs c3.
BoundValue theorem_1_1(const PairStatistics& stats, const LimitLaw& law,
                       const HypothesisReport& report, SmoothVariant variant);
BoundValue theorem_1_1(const PairStatistics& stats, double c1, const HypothesisReport& report,
                       SmoothVariant variant);

// Whichever of the two smooth-function variants is smaller (and finite).
BoundValue best_smooth_bound(const PairStatistics& stats, double c1, const HypothesisReport& report);

// Kolmogorov-distance bound; needs delta_max and a finite c3.
BoundValue theorem_1_2(const PairStatistics& stats, const LimitLaw& law,
                       const HypothesisReport& report);
BoundValue theorem_1_2(const PairStatistics& stats, double c1, const HypothesisReport& report);

// Exponential(1) limit, constant drift g = 1/c0.
BoundValue theorem_3_1(const PairStatistics& stats, ExponentialVariant variant);

BoundValue scaled(BoundValue bound, double lipschitz_norm);

}  // namespace stein_pairs
