#include "stein_pairs/curie_weiss.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "stein_pairs/kernels.hpp"

namespace stein_pairs::curie_weiss {

namespace {

struct SpinCounts {
  double n;
  double plus;   // spins equal to +1
  double minus;
  double m;      // S / n
  double t_plus;   // tanh((m - 1/n) / T), the local field seen by a + spin
  double t_minus;  // tanh((m + 1/n) / T)
};

SpinCounts counts(const SpinModel& model, long long s) {
  model.validate();
  if (s < -model.n || s > model.n || ((s + model.n) % 2) != 0)
    throw ParameterError("spin sum " + std::to_string(s) + " is not attainable for n = " +
                         std::to_string(model.n));
  SpinCounts c;
  c.n = static_cast<double>(model.n);
  c.plus = static_cast<double>((model.n + s) / 2);
  c.minus = static_cast<double>((model.n - s) / 2);
  c.m = static_cast<double>(s) / c.n;
  c.t_plus = std::tanh((c.m - 1.0 / c.n) / model.temperature);
  c.t_minus = std::tanh((c.m + 1.0 / c.n) / model.temperature);
  return c;
}

double scale(const SpinModel& model) { return std::pow(static_cast<double>(model.n), -0.75); }

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

}  // namespace

void SpinModel::validate() const {
  if (n < 2) throw ParameterError("curie-weiss: n must be >= 2");
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw ParameterError("curie-weiss: temperature must be positive");
}

double MagnetizationLaw::expect(const std::function<double(long long)>& phi) const {
  std::vector<double> terms(spin_sums.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = probabilities[k] * phi(spin_sums[k]);
  return pairwise_sum(terms);
}

MagnetizationLaw exact_magnetization_law(const SpinModel& model, Execution exec) {
  model.validate();
  if (model.n > 1000000) throw ParameterError("curie-weiss: n must be <= 1e6");
  MagnetizationLaw law;
  law.model = model;
  const std::vector<double> log_w = exec == Execution::parallel
                                        ? kernels::omp::curie_weiss_log_weights(model.n, model.temperature)
                                        : kernels::serial::curie_weiss_log_weights(model.n, model.temperature);
  law.probabilities = exec == Execution::parallel ? kernels::omp::normalize_log_weights(log_w)
                                                  : kernels::serial::normalize_log_weights(log_w);
  const double n = static_cast<double>(model.n);
  const double sc = scale(model);
  law.spin_sums.resize(log_w.size());
  law.w.resize(log_w.size());
  law.m.resize(log_w.size());
  for (long long j = 0; j <= model.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    law.spin_sums[k] = 2 * j - model.n;
    law.w[k] = sc * static_cast<double>(law.spin_sums[k]);
    law.m[k] = static_cast<double>(law.spin_sums[k]) / n;
  }
  law.w_law = DiscreteLaw(law.w, law.probabilities);
  return law;
}

double conditional_drift(const SpinModel& model, long long s) {
  const SpinCounts c = counts(model, s);
  return scale(model) * c.m - std::pow(c.n, -1.75) * (c.plus * c.t_plus + c.minus * c.t_minus);
}

double conditional_quadratic(const SpinModel& model, long long s) {
  const SpinCounts c = counts(model, s);
  return 2.0 * std::pow(c.n, -1.5) -
         2.0 * std::pow(c.n, -2.5) * (c.plus * c.t_plus - c.minus * c.t_minus);
}

double flip_probability(const SpinModel& model, long long s) {
  const SpinCounts c = counts(model, s);
  return (c.plus * 0.5 * (1.0 - c.t_plus) + c.minus * 0.5 * (1.0 + c.t_minus)) / c.n;
}

double remainder(const SpinModel& model, long long s) {
  const double n = static_cast<double>(model.n);
  const double w = scale(model) * static_cast<double>(s);
  return conditional_drift(model, s) - std::pow(n, -1.5) * w * w * w / 3.0;
}

LemmaReport verify_lemma_5_1(const MagnetizationLaw& law) {
  const SpinModel& model = law.model;
  const double n = static_cast<double>(model.n);
  const double sc = scale(model);
  LemmaReport r;
  r.n = model.n;
  r.drift_dev = law.expect([&](long long s) { return std::abs(remainder(model, s)); });
  r.quad_dev = law.expect(
      [&](long long s) { return std::abs(conditional_quadratic(model, s) - 2.0 * std::pow(n, -1.5)); });
  r.e_abs_w3 = law.expect([&](long long s) { return std::pow(std::abs(sc * static_cast<double>(s)), 3); });
  r.e_w6 = law.expect([&](long long s) { return std::pow(sc * static_cast<double>(s), 6); });
  // |W - W'| is 0 or n^{-3/4} |sigma_i - sigma_i'| = 2 n^{-3/4}; the jump is
  // attained from every atom that has a positive flip probability.
  r.max_delta = 0.0;
  for (std::size_t k = 0; k < law.spin_sums.size(); ++k)
    if (law.probabilities[k] > 0.0 && flip_probability(model, law.spin_sums[k]) > 0.0)
      r.max_delta = 2.0 * sc;
  r.drift_bound = 15.0 / (n * n);
  r.quad_bound = 15.0 / (n * n);
  r.delta_bound = 2.0 * sc;
  r.drift_pass = r.drift_dev <= r.drift_bound;
  r.quad_pass = r.quad_dev <= r.quad_bound;
  r.w3_pass = r.e_abs_w3 <= r.w3_bound;
  r.w6_pass = r.e_w6 <= r.w6_bound;
  r.delta_pass = r.max_delta <= r.delta_bound;
  return r;
}

LemmaReport verify_lemma_5_1(const SpinModel& model) {
  return verify_lemma_5_1(exact_magnetization_law(model));
}

LimitLaw quartic_limit(double n) { return build_limit_law(quartic_drift(n), std::pow(n, 1.5)); }

namespace {

double quartic_c1() {
  return std::sqrt(2.0) / (std::pow(3.0, 0.25) * std::tgamma(0.25));
}

}  // namespace

PairStatistics pair_statistics(const MagnetizationLaw& law) {
  const SpinModel& model = law.model;
  const double n = static_cast<double>(model.n);
  const double c0 = std::pow(n, 1.5);
  const double c1 = quartic_c1();
  const double sc = scale(model);
  PairStatistics st;
  st.c0 = c0;
  st.e_abs_one_minus_half_c0_d2 =
      law.expect([&](long long s) { return std::abs(1.0 - 0.5 * c0 * conditional_quadratic(model, s)); });
  // |Delta| takes the value 2n^{-3/4} exactly when a spin flips.
  const double jump = 2.0 * sc;
  st.e_abs_delta_cubed =
      law.expect([&](long long s) { return jump * jump * jump * flip_probability(model, s); });
  st.e_abs_r = law.expect([&](long long s) { return std::abs(remainder(model, s)); });
  st.e_weighted_r = law.expect([&](long long s) {
    const double w = sc * static_cast<double>(s);
    return (std::abs(w) + 3.0 / c1) * std::abs(remainder(model, s));
  });
  st.e_abs_Wr = law.expect(
      [&](long long s) { return std::abs(sc * static_cast<double>(s) * remainder(model, s)); });
  st.delta_max = jump;
  st.e_abs_c0g_W =
      law.expect([&](long long s) { return std::pow(std::abs(sc * static_cast<double>(s)), 3) / 3.0; });
  return st;
}

PairStatistics pair_statistics(const SpinModel& model) {
  return pair_statistics(exact_magnetization_law(model));
}

SamplePath glauber_sampler(const SpinModel& model, const SamplerOptions& options) {
  model.validate();
  if (options.chains == 0) throw ParameterError("sampler: chains must be >= 1");
  if (options.samples < options.chains) throw ParameterError("sampler: need at least one sample per chain");
  SamplePath path;
  path.model = model;
  path.options = options;
  const double relax = std::pow(static_cast<double>(model.n), 1.5);
  if (path.options.burn_in == 0) path.options.burn_in = static_cast<std::size_t>(std::ceil(20.0 * relax));
  if (path.options.thin == 0) path.options.thin = static_cast<std::size_t>(std::ceil(2.0 * relax));

  // Transition probabilities of S per atom index j, S = 2j - n.
  const std::size_t atoms = static_cast<std::size_t>(model.n + 1);
  std::vector<double> p_down(atoms), p_up(atoms);
  for (std::size_t j = 0; j < atoms; ++j) {
    const SpinCounts c = counts(model, 2 * static_cast<long long>(j) - model.n);
    p_down[j] = c.plus * 0.5 * (1.0 - c.t_plus) / c.n;
    p_up[j] = c.minus * 0.5 * (1.0 + c.t_minus) / c.n;
  }
  const double sc = scale(model);
  const auto to_w = [&](std::size_t j) {
    return sc * static_cast<double>(2 * static_cast<long long>(j) - model.n);
  };

  const std::size_t chains = path.options.chains;
  path.chain_offsets.resize(chains + 1, 0);
  for (std::size_t c = 0; c < chains; ++c) {
    const std::size_t share = options.samples / chains + (c < options.samples % chains ? 1 : 0);
    path.chain_offsets[c + 1] = path.chain_offsets[c] + share;
  }
  path.pairs.resize(options.samples);

  for_each_index(Execution::parallel, chains, [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(options.seed >> 32), static_cast<std::uint32_t>(c)};
    std::mt19937_64 rng(seq);
    std::size_t j = atoms / 2;  // S = 0, or S = -1 for odd n
    const auto step = [&]() {
      const double u = unit(rng);
      if (u < p_down[j]) {
        --j;
      } else if (u < p_down[j] + p_up[j]) {
        ++j;
      }
    };
    for (std::size_t s = 0; s < path.options.burn_in; ++s) step();
    for (std::size_t k = path.chain_offsets[c]; k < path.chain_offsets[c + 1]; ++k) {
      for (std::size_t s = 1; s < path.options.thin; ++s) step();
      const double w = to_w(j);
      step();
      path.pairs[k] = {w, to_w(j)};
    }
  });
  return path;
}

MeanEstimate estimate(const SamplePath& path, const std::function<double(double, double)>& phi,
                      std::size_t batches) {
  const std::size_t total = path.pairs.size();
  if (total == 0) throw ParameterError("estimate: empty path");
  batches = std::clamp<std::size_t>(batches, 2, total);
  std::vector<double> values(total);
  for (std::size_t k = 0; k < total; ++k) values[k] = phi(path.pairs[k].w, path.pairs[k].w_prime);
  MeanEstimate out;
  out.mean = pairwise_sum(values) / static_cast<double>(total);
  // Contiguous batches; chains are concatenated so a batch rarely straddles
  // two chains, and those that do only reduce the apparent dependence.
  std::vector<double> means(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * total / batches;
    const std::size_t hi = (b + 1) * total / batches;
    means[b] = pairwise_sum(std::span<const double>(values).subspan(lo, hi - lo)) /
               static_cast<double>(hi - lo);
  }
  double ss = 0.0;
  for (double m : means) ss += (m - out.mean) * (m - out.mean);
  out.standard_error = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  return out;
}

namespace {

DiscreteLaw empirical_w_law(const SamplePath& path) {
  const std::size_t atoms = static_cast<std::size_t>(path.model.n + 1);
  const double sc = scale(path.model);
  std::vector<double> count(atoms, 0.0);
  for (const PairSample& p : path.pairs) {
    const long long s = std::llround(p.w / sc);
    count[static_cast<std::size_t>((s + path.model.n) / 2)] += 1.0;
  }
  std::vector<double> w(atoms), prob(atoms);
  const double total = static_cast<double>(path.pairs.size());
  for (std::size_t j = 0; j < atoms; ++j) {
    w[j] = sc * static_cast<double>(2 * static_cast<long long>(j) - path.model.n);
    prob[j] = count[j] / total;
  }
  return DiscreteLaw(std::move(w), std::move(prob));
}

struct BinnedMoments {
  std::vector<double> count, sum_d, sum_d2;
  double sum_abs_d3 = 0.0;
  double max_abs_d = 0.0;
  double total = 0.0;
};

BinnedMoments bin(const SamplePath& path, std::size_t lo, std::size_t hi) {
  const std::size_t atoms = static_cast<std::size_t>(path.model.n + 1);
  const double sc = scale(path.model);
  BinnedMoments b;
  b.count.assign(atoms, 0.0);
  b.sum_d.assign(atoms, 0.0);
  b.sum_d2.assign(atoms, 0.0);
  for (std::size_t k = lo; k < hi; ++k) {
    const PairSample& p = path.pairs[k];
    const long long s = std::llround(p.w / sc);
    const std::size_t j = static_cast<std::size_t>((s + path.model.n) / 2);
    const double d = p.w - p.w_prime;
    b.count[j] += 1.0;
    b.sum_d[j] += d;
    b.sum_d2[j] += d * d;
    b.sum_abs_d3 += std::abs(d * d * d);
    b.max_abs_d = std::max(b.max_abs_d, std::abs(d));
  }
  b.total = static_cast<double>(hi - lo);
  return b;
}

PairStatistics plug_in(const SpinModel& model, const BinnedMoments& b) {
  const double n = static_cast<double>(model.n);
  const double c0 = std::pow(n, 1.5);
  const double c1 = quartic_c1();
  const double sc = scale(model);
  PairStatistics st;
  st.c0 = c0;
  std::vector<double> t1, tr, tw, twr, tg;
  for (std::size_t j = 0; j < b.count.size(); ++j) {
    if (b.count[j] == 0.0) continue;
    const double freq = b.count[j] / b.total;
    const double w = sc * static_cast<double>(2 * static_cast<long long>(j) - model.n);
    const double d2 = b.sum_d2[j] / b.count[j];
    const double r = b.sum_d[j] / b.count[j] - std::pow(n, -1.5) * w * w * w / 3.0;
    t1.push_back(freq * std::abs(1.0 - 0.5 * c0 * d2));
    tr.push_back(freq * std::abs(r));
    tw.push_back(freq * (std::abs(w) + 3.0 / c1) * std::abs(r));
    twr.push_back(freq * std::abs(w * r));
    tg.push_back(freq * std::abs(w * w * w) / 3.0);
  }
  st.e_abs_one_minus_half_c0_d2 = pairwise_sum(t1);
  st.e_abs_delta_cubed = b.sum_abs_d3 / b.total;
  st.e_abs_r = pairwise_sum(tr);
  st.e_weighted_r = pairwise_sum(tw);
  st.e_abs_Wr = pairwise_sum(twr);
  st.e_abs_c0g_W = pairwise_sum(tg);
  st.delta_max = b.max_abs_d;
  st.delta_is_empirical = true;
  return st;
}

}  // namespace

SamplerValidation validate_sampler(const SamplePath& path, const MagnetizationLaw& exact) {
  if (exact.model.n != path.model.n) throw ParameterError("validate_sampler: n mismatch");
  SamplerValidation v;
  v.ks = kolmogorov_distance(empirical_w_law(path), exact.w_law);
  v.second_moment = estimate(path, [](double w, double) { return w * w; });
  v.exact_second_moment = exact.w_law.expect([](double w) { return w * w; });
  v.exchangeability = estimate(path, [](double w, double wp) { return w * w * wp - wp * wp * w; });
  return v;
}

PairStatistics monte_carlo_pair_statistics(const SamplePath& path) {
  PairStatistics pooled = plug_in(path.model, bin(path, 0, path.pairs.size()));
  const std::size_t chains = path.chain_offsets.size() - 1;
  if (chains < 2) return pooled;
  std::vector<PairStatistics> per_chain;
  for (std::size_t c = 0; c < chains; ++c)
    per_chain.push_back(plug_in(path.model, bin(path, path.chain_offsets[c], path.chain_offsets[c + 1])));
  const auto se = [&](double PairStatistics::*field) {
    double mean = 0.0;
    for (const auto& s : per_chain) mean += s.*field;
    mean /= static_cast<double>(chains);
    double ss = 0.0;
    for (const auto& s : per_chain) ss += (s.*field - mean) * (s.*field - mean);
    return std::sqrt(ss / static_cast<double>(chains - 1) / static_cast<double>(chains));
  };
  pooled.standard_errors["e_abs_one_minus_half_c0_d2"] = se(&PairStatistics::e_abs_one_minus_half_c0_d2);
  pooled.standard_errors["e_abs_delta_cubed"] = se(&PairStatistics::e_abs_delta_cubed);
  pooled.standard_errors["e_abs_r"] = se(&PairStatistics::e_abs_r);
  pooled.standard_errors["e_weighted_r"] = se(&PairStatistics::e_weighted_r);
  pooled.standard_errors["e_abs_Wr"] = se(&PairStatistics::e_abs_Wr);
  pooled.standard_errors["e_abs_c0g_W"] = se(&PairStatistics::e_abs_c0g_W);
  return pooled;
}

RateTable kolmogorov_rate_study(const std::vector<long long>& n_values, const LimitLaw& law,
                                double temperature, Execution exec) {
  if (n_values.empty()) throw ParameterError("rate study: n list is empty");
  RateTable table;
  table.rows.resize(n_values.size());
  for_each_index(exec, n_values.size(), [&](std::size_t i) {
    const SpinModel model{n_values[i], temperature};
    const MagnetizationLaw exact = exact_magnetization_law(model, Execution::serial);
    RateRow row;
    row.n = model.n;
    row.ks = kolmogorov_distance(exact.w_law, [&](double z) { return law.cdf(z); }, Execution::serial);
    row.ks_sqrt_n = row.ks * std::sqrt(static_cast<double>(model.n));
    table.rows[i] = row;
  });
  std::vector<double> x, y;
  for (const RateRow& row : table.rows) {
    x.push_back(std::log(static_cast<double>(row.n)));
    y.push_back(std::log(row.ks));
    table.max_ks_sqrt_n = std::max(table.max_ks_sqrt_n, row.ks_sqrt_n);
  }
  bool distinct = false;
  for (double v : x) distinct = distinct || v != x.front();
  if (distinct) table.slope = least_squares_slope(x, y);
  return table;
}

}  // namespace stein_pairs::curie_weiss
