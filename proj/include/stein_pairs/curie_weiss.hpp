#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stein_pairs/bounds.hpp"
#include "stein_pairs/discrete_law.hpp"
#include "stein_pairs/limit_law.hpp"

namespace stein_pairs::curie_weiss {

struct SpinModel {
  long long n = 2;
  double temperature = 1.0;

  void validate() const;
};

// Exact law of the total spin S = sum sigma_i, S in {-n, -n+2, ..., n}.
struct MagnetizationLaw {
  SpinModel model;
  std::vector<long long> spin_sums;   // S_k, increasing
  std::vector<double> probabilities;  // P(S = S_k)
  std::vector<double> w;              // n^{-3/4} S_k
  std::vector<double> m;              // S_k / n
  DiscreteLaw w_law;                  // law of W

  double expect(const std::function<double(long long s)>& phi) const;
};

MagnetizationLaw exact_magnetization_law(const SpinModel& model,
                                         Execution exec = Execution::parallel);

// E(W - W' | S) for one heat-bath step. S must have the parity of n.
double conditional_drift(const SpinModel& model, long long s);
// E((W - W')^2 | S).
double conditional_quadratic(const SpinModel& model, long long s);
// Probability that the step changes the configuration.
double flip_probability(const SpinModel& model, long long s);

// Remainder r = E(W - W' | W) - n^{-3/2} W^3 / 3.
double remainder(const SpinModel& model, long long s);

struct LemmaReport {
  long long n = 0;
  double drift_dev = 0.0;  // E|E(W-W'|W) - n^{-3/2} W^3/3|
  double quad_dev = 0.0;   // E|E((W-W')^2|W) - 2 n^{-3/2}|
  double e_abs_w3 = 0.0;
  double e_w6 = 0.0;
  double max_delta = 0.0;  // largest attainable |W - W'|
  double drift_bound = 0.0;
  double quad_bound = 0.0;
  double w3_bound = 15.0;
  double w6_bound = 224.4;
  double delta_bound = 0.0;
  bool drift_pass = false;
  bool quad_pass = false;
  bool w3_pass = false;
  bool w6_pass = false;
  bool delta_pass = false;

  bool pass() const { return drift_pass && quad_pass && w3_pass && w6_pass && delta_pass; }
};

LemmaReport verify_lemma_5_1(const MagnetizationLaw& law);
LemmaReport verify_lemma_5_1(const SpinModel& model);

// Exact pair statistics against the quartic limit (c0 = n^{3/2}).
PairStatistics pair_statistics(const MagnetizationLaw& law);
PairStatistics pair_statistics(const SpinModel& model);

// The critical limit: density proportional to exp(-w^4 / 12).
LimitLaw quartic_limit(double n = 1.0);

// Heat-bath (Glauber) dynamics on the spin configuration. The chain is
// simulated through its sufficient statistic S, which is itself Markov.
struct SamplerOptions {
  std::size_t samples = 100000;  // recorded (W, W') pairs, over all chains
  std::size_t chains = 4;
  std::size_t burn_in = 0;       // steps per chain; 0 picks 20 n^{3/2}
  std::size_t thin = 0;          // steps between records; 0 picks 2 n^{3/2}
  std::uint64_t seed = 0;
};

struct PairSample {
  double w;
  double w_prime;
};

struct SamplePath {
  SpinModel model;
  SamplerOptions options;       // with defaults resolved
  std::vector<PairSample> pairs;  // chain-major: chain c owns a contiguous block
  std::vector<std::size_t> chain_offsets;  // chains + 1 entries
};

SamplePath glauber_sampler(const SpinModel& model, const SamplerOptions& options);

struct MeanEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

// Batch-means estimate of E phi(W, W') over a path.
MeanEstimate estimate(const SamplePath& path, const std::function<double(double, double)>& phi,
                      std::size_t batches = 50);

struct SamplerValidation {
  double ks = 0.0;  // empirical W law against the exact law
  MeanEstimate second_moment;
  double exact_second_moment = 0.0;
  MeanEstimate exchangeability;  // E[W^2 W' - W'^2 W]
};

SamplerValidation validate_sampler(const SamplePath& path, const MagnetizationLaw& exact);

// Monte Carlo pair statistics: conditional moments are estimated per S atom
// from the path, then plugged into the field definitions. Standard errors
// come from the spread across chains.
PairStatistics monte_carlo_pair_statistics(const SamplePath& path);

struct RateRow {
  long long n = 0;
  double ks = 0.0;
  double ks_sqrt_n = 0.0;
};

struct RateTable {
  std::vector<RateRow> rows;           // in the order of the n list
  std::optional<double> slope;         // log KS on log n; absent for one n
  double max_ks_sqrt_n = 0.0;
};

RateTable kolmogorov_rate_study(const std::vector<long long>& n_values, const LimitLaw& law,
                                double temperature = 1.0, Execution exec = Execution::parallel);

}  // namespace stein_pairs::curie_weiss
