#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "stein_pairs/bernoulli_laplace.hpp"
#include "stein_pairs/bounds.hpp"
#include "stein_pairs/curie_weiss.hpp"
#include "stein_pairs/io.hpp"
#include "stein_pairs/presets.hpp"
#include "stein_pairs/stein.hpp"
#include "stein_pairs/svg_plot.hpp"

namespace stein_pairs::cli {

namespace {

using io::cell;
using io::CsvWriter;
using io::Json;

struct RunConfig {
  std::string out_path;
  std::string format;  // empty: the command's own default
  std::uint64_t seed = 0;
  std::optional<double> tol;

  std::string law_spec;
  std::string h_spec;
  std::string n_list;
  std::size_t points = 0;
  double temperature = 1.0;
  std::string audit_out;
  std::string stats_out;
  std::string stats_in;
  std::string plot_out;
  std::string path_out;
  std::string theorem = "exp-smooth";
  double lip = 1.0;
  std::size_t samples = 100000;
  std::size_t chains = 4;
  std::size_t burn_in = 0;
  std::size_t thin = 0;
};

void add_globals(CLI::App* app, RunConfig& cfg) {
  app->add_option("--out", cfg.out_path, "Write the report to this file instead of stdout");
  app->add_option("--format", cfg.format, "Report format (bounds: json, others: csv)")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--seed", cfg.seed, "Random seed (default 0)");
  app->add_option("--tol", cfg.tol, "Quadrature tolerance override");
}

// Opens --out or falls back to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ParameterError("cannot open output file '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot open output file '" + path + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<long long> n_values(const RunConfig& cfg, const char* fallback) {
  return presets::parse_integer_list(cfg.n_list.empty() ? std::string(fallback) : cfg.n_list);
}

// ---------------------------------------------------------------------------

int cmd_law(const RunConfig& cfg, std::ostream& out) {
  const LimitLaw law = presets::law_from_spec(cfg.law_spec);
  const HypothesisReport rep = certify_hypotheses(law);
  std::vector<double> extra{law.anchor()};
  if (law.lo() < 0.0 && 0.0 < law.hi()) extra.push_back(0.0);
  const Grid grid = Grid::uniform(law.lo(), law.hi(), cfg.points ? cfg.points : 401).with_points(extra);
  Sink sink(cfg.out_path, out);
  if (cfg.format == "json") {
    Json j;
    j["law"] = cfg.law_spec;
    j["c0"] = law.c0();
    j["c1"] = law.c1();
    j["median"] = law.median();
    j["hypotheses"] = io::to_json(rep);
    Json rows = Json::array();
    for (double t : grid.points()) rows.push_back({{"t", t}, {"p", law.pdf(t)}, {"F", law.cdf(t)}});
    j["rows"] = rows;
    sink.get() << dump(j);
    return kSuccess;
  }
  std::ostream& o = sink.get();
  o << "# law," << cfg.law_spec << '\n';
  o << "# c0," << cell(law.c0()) << '\n';
  o << "# c1," << cell(law.c1()) << '\n';
  o << "# c2," << cell(rep.c2) << '\n';
  o << "# c3," << cell(rep.c3) << '\n';
  CsvWriter csv(o, {"t", "p", "F"});
  for (double t : grid.points()) csv.row({cell(t), cell(law.pdf(t)), cell(law.cdf(t))});
  return kSuccess;
}

int cmd_stein(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const TestFunction h = presets::test_function_from_spec(cfg.h_spec);
  Json audit_json;
  int code = kSuccess;
  std::optional<SteinSolution> solution;
  try {
    const LimitLaw law = presets::law_from_spec(cfg.law_spec);
    const HypothesisReport rep = certify_hypotheses(law);
    SolveOptions opts;
    if (cfg.tol) opts.tol = *cfg.tol;
    solution = solve(law, h, default_solution_grid(law, cfg.points ? cfg.points : 801), opts);
    const BoundAudit audit = audit_solution(*solution, rep);
    audit_json = io::to_json(audit);
    audit_json["law"] = cfg.law_spec;
    audit_json["h"] = cfg.h_spec;
    audit_json["max_residual"] = solution->max_residual;
    audit_json["hypotheses"] = io::to_json(rep);
    if (!audit.pass) code = kInputError;
  } catch (const HypothesisError& e) {
    audit_json = {{"pass", false}, {"law", cfg.law_spec}, {"h", cfg.h_spec}, {"error", e.what()}};
    code = kInputError;
  }

  Sink sink(cfg.out_path, out);
  if (cfg.format == "json") {
    Json j = {{"audit", audit_json}};
    if (solution) {
      Json rows = Json::array();
      for (std::size_t i = 0; i < solution->w.size(); ++i)
        rows.push_back({{"w", solution->w[i]},
                        {"f", solution->f[i]},
                        {"f_prime", solution->f_prime[i]},
                        {"residual", solution->residual[i]}});
      j["solution"] = rows;
    }
    sink.get() << dump(j);
  } else {
    if (solution) {
      CsvWriter csv(sink.get(), {"w", "f", "f_prime", "residual"});
      for (std::size_t i = 0; i < solution->w.size(); ++i)
        csv.row({cell(solution->w[i]), cell(solution->f[i]), cell(solution->f_prime[i]),
                 cell(solution->residual[i])});
    }
    std::string audit_path = cfg.audit_out;
    if (audit_path.empty() && !cfg.out_path.empty()) audit_path = cfg.out_path + ".audit.json";
    if (audit_path.empty())
      err << dump(audit_json);
    else
      write_file(audit_path, dump(audit_json));
  }
  if (code != kSuccess) err << "stein: audit did not pass\n";
  return code;
}

int cmd_cw_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<long long> ns = n_values(cfg, "16,64,256,1024");
  if (!cfg.stats_out.empty() && ns.size() != 1)
    throw ParameterError("--stats-out needs exactly one n");
  std::vector<curie_weiss::LemmaReport> reports(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const curie_weiss::MagnetizationLaw law =
        curie_weiss::exact_magnetization_law({ns[i], cfg.temperature});
    reports[i] = curie_weiss::verify_lemma_5_1(law);
    if (!cfg.stats_out.empty()) write_file(cfg.stats_out, dump(io::to_json(curie_weiss::pair_statistics(law))));
  }
  Sink sink(cfg.out_path, out);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& r : reports) arr.push_back(io::to_json(r));
    sink.get() << dump(arr);
  } else {
    CsvWriter csv(sink.get(), {"n", "drift_dev", "quad_dev", "e_abs_w3", "e_w6", "pass"});
    for (const auto& r : reports)
      csv.row({cell(r.n), cell(r.drift_dev), cell(r.quad_dev), cell(r.e_abs_w3), cell(r.e_w6), cell(r.pass())});
  }
  return kSuccess;
}

int cmd_cw_rate(const RunConfig& cfg, std::ostream& out) {
  const std::vector<long long> ns = n_values(cfg, "50,100,200,400,800,1600");
  const LimitLaw law = curie_weiss::quartic_limit(1.0);
  const curie_weiss::RateTable table = curie_weiss::kolmogorov_rate_study(ns, law, cfg.temperature);
  Sink sink(cfg.out_path, out);
  if (cfg.format == "json") {
    Json rows = Json::array();
    for (const auto& r : table.rows) rows.push_back({{"n", r.n}, {"ks", r.ks}, {"ks_sqrt_n", r.ks_sqrt_n}});
    Json j = {{"rows", rows},
              {"slope", table.slope ? Json(*table.slope) : Json(nullptr)},
              {"max_ks_sqrt_n", table.max_ks_sqrt_n}};
    sink.get() << dump(j);
  } else {
    CsvWriter csv(sink.get(), {"n", "ks", "ks_sqrt_n"});
    for (const auto& r : table.rows) csv.row({cell(r.n), cell(r.ks), cell(r.ks_sqrt_n)});
    csv.comment("slope," + (table.slope ? cell(*table.slope) : std::string()));
  }
  if (!cfg.plot_out.empty()) {
    svg::LogLogPlot plot;
    plot.title = "Kolmogorov distance to the quartic limit";
    plot.x_label = "n";
    plot.y_label = "KS";
    for (const auto& r : table.rows) {
      plot.x.push_back(static_cast<double>(r.n));
      plot.y.push_back(r.ks);
    }
    plot.slope = table.slope;
    write_file(cfg.plot_out, svg::render(plot));
  }
  return kSuccess;
}

int cmd_cw_sample(const RunConfig& cfg, std::ostream& out) {
  const std::vector<long long> ns = n_values(cfg, "100");
  if (ns.size() != 1) throw ParameterError("cw sample needs exactly one n");
  const curie_weiss::SpinModel model{ns.front(), cfg.temperature};
  curie_weiss::SamplerOptions opts;
  opts.samples = cfg.samples;
  opts.chains = cfg.chains;
  opts.burn_in = cfg.burn_in;
  opts.thin = cfg.thin;
  opts.seed = cfg.seed;
  const curie_weiss::SamplePath path = curie_weiss::glauber_sampler(model, opts);
  const curie_weiss::SamplerValidation v =
      curie_weiss::validate_sampler(path, curie_weiss::exact_magnetization_law(model));
  if (!cfg.path_out.empty()) {
    std::ostringstream s;
    CsvWriter csv(s, {"chain", "w", "w_prime"});
    for (std::size_t c = 0; c + 1 < path.chain_offsets.size(); ++c)
      for (std::size_t k = path.chain_offsets[c]; k < path.chain_offsets[c + 1]; ++k)
        csv.row({cell(static_cast<long long>(c)), cell(path.pairs[k].w), cell(path.pairs[k].w_prime)});
    write_file(cfg.path_out, s.str());
  }
  if (!cfg.stats_out.empty())
    write_file(cfg.stats_out, dump(io::to_json(curie_weiss::monte_carlo_pair_statistics(path))));
  Sink sink(cfg.out_path, out);
  const auto& o = path.options;
  if (cfg.format == "json") {
    Json j = {{"n", model.n},
              {"samples", o.samples},
              {"chains", o.chains},
              {"burn_in", o.burn_in},
              {"thin", o.thin},
              {"seed", o.seed},
              {"ks", v.ks},
              {"e_w2", v.second_moment.mean},
              {"e_w2_se", v.second_moment.standard_error},
              {"e_w2_exact", v.exact_second_moment},
              {"exchangeability", v.exchangeability.mean},
              {"exchangeability_se", v.exchangeability.standard_error}};
    sink.get() << dump(j);
  } else {
    CsvWriter csv(sink.get(), {"n", "samples", "chains", "burn_in", "thin", "ks", "e_w2", "e_w2_se",
                               "e_w2_exact", "exch", "exch_se"});
    csv.row({cell(model.n), cell(static_cast<long long>(o.samples)), cell(static_cast<long long>(o.chains)),
             cell(static_cast<long long>(o.burn_in)), cell(static_cast<long long>(o.thin)), cell(v.ks),
             cell(v.second_moment.mean), cell(v.second_moment.standard_error), cell(v.exact_second_moment),
             cell(v.exchangeability.mean), cell(v.exchangeability.standard_error)});
  }
  return kSuccess;
}

int cmd_bl_spectrum(const RunConfig& cfg, std::ostream& out) {
  const std::vector<long long> ns = n_values(cfg, "");
  std::vector<bernoulli_laplace::SpectralMeasure> measures;
  for (long long n : ns) measures.push_back(bernoulli_laplace::spectral_measure(n));
  Sink sink(cfg.out_path, out);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const auto& m : measures)
      arr.push_back({{"n", m.n}, {"lambda", m.lambda}, {"pi", m.pi}, {"mu", m.mu}});
    sink.get() << dump(arr);
  } else {
    CsvWriter csv(sink.get(), {"n", "i", "lambda", "pi", "mu"});
    for (const auto& m : measures)
      for (std::size_t i = 0; i < m.pi.size(); ++i)
        csv.row({cell(m.n), cell(static_cast<long long>(i)), cell(m.lambda[i]), cell(m.pi[i]), cell(m.mu[i])});
  }
  return kSuccess;
}

int cmd_bl_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<long long> ns = n_values(cfg, "4,16,64,256,1024");
  if (!cfg.stats_out.empty() && ns.size() != 1)
    throw ParameterError("--stats-out needs exactly one n");
  const std::vector<TestFunction> family = bernoulli_laplace::lipschitz_family();
  struct Row {
    long long n;
    double bound, family, ks;
  };
  std::vector<Row> rows;
  for (long long n : ns) {
    const bernoulli_laplace::SpectralMeasure m = bernoulli_laplace::spectral_measure(n);
    const PairStatistics stats = bernoulli_laplace::pair_statistics(n);
    Row r{n, theorem_3_1(stats, ExponentialVariant::smooth).value, 0.0,
          bernoulli_laplace::kolmogorov_to_exponential(m)};
    for (const TestFunction& h : family)
      r.family = std::max(r.family, bernoulli_laplace::smooth_distance(m, h) / *h.lip_norm);
    rows.push_back(r);
    if (!cfg.stats_out.empty()) write_file(cfg.stats_out, dump(io::to_json(stats)));
  }
  Sink sink(cfg.out_path, out);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (const Row& r : rows)
      arr.push_back({{"n", r.n},
                     {"bound_12_over_sqrt_n", r.bound},
                     {"max_family_distance", r.family},
                     {"ks_to_exp", r.ks}});
    sink.get() << dump(arr);
  } else {
    CsvWriter csv(sink.get(), {"n", "bound_12_over_sqrt_n", "max_family_distance", "ks_to_exp"});
    for (const Row& r : rows) csv.row({cell(r.n), cell(r.bound), cell(r.family), cell(r.ks)});
  }
  return kSuccess;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.stats_in, std::ios::binary);
  if (!in) throw ParameterError("cannot read stats file '" + cfg.stats_in + "'");
  Json json;
  try {
    json = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParameterError(std::string("malformed JSON: ") + e.what());
  }
  const PairStatistics stats = io::pair_statistics_from_json(json);

  BoundValue bound;
  if (cfg.theorem == "exp-smooth") {
    bound = theorem_3_1(stats, ExponentialVariant::smooth);
  } else if (cfg.theorem == "exp-kolmogorov") {
    bound = theorem_3_1(stats, ExponentialVariant::kolmogorov);
  } else {
    if (cfg.law_spec.empty()) throw ParameterError("--theorem " + cfg.theorem + " needs --law");
    const LimitLaw law = presets::law_from_spec(cfg.law_spec);
    const HypothesisReport rep = certify_hypotheses(law);
    if (cfg.theorem == "smooth-c2")
      bound = theorem_1_1(stats, law, rep, SmoothVariant::i);
    else if (cfg.theorem == "smooth-c3")
      bound = theorem_1_1(stats, law, rep, SmoothVariant::ii);
    else if (cfg.theorem == "smooth-best")
      bound = best_smooth_bound(stats, law.c1(), rep);
    else
      bound = theorem_1_2(stats, law, rep);
  }
  if (cfg.lip != 1.0) bound = scaled(bound, cfg.lip);

  Sink sink(cfg.out_path, out);
  if (cfg.format == "csv") {
    CsvWriter csv(sink.get(), {"term", "value"});
    for (const auto& [label, value] : bound.breakdown) csv.row({"\"" + label + "\"", cell(value)});
    csv.row({"total", cell(bound.value)});
    if (bound.plus_minus) csv.row({"plus_minus", cell(*bound.plus_minus)});
  } else {
    sink.get() << dump(io::to_json(bound));
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Stein's method with exchangeable pairs: limit laws, bounds and model studies",
               "stein-pairs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  add_globals(&app, cfg);

  CLI::App* law = app.add_subcommand("law", "Tabulate density and CDF of a limit law (t,p,F)");
  law->add_option("--spec", cfg.law_spec, "gaussian | quartic[:n] | poly:c3 | gennorm:a:b | exponential[:l]")
      ->required();
  law->add_option("--points", cfg.points, "Grid points (default 401)");
  add_globals(law, cfg);

  CLI::App* stein = app.add_subcommand("stein", "Solve the Stein equation and audit the solution bounds");
  stein->add_option("--law", cfg.law_spec, "Limit law spec")->required();
  stein->add_option("--h", cfg.h_spec, "identity | const:c | sin | cos | atan | indicator:z | ramp:a | bump:c:s")
      ->required();
  stein->add_option("--points", cfg.points, "Solution grid points (default 801)");
  stein->add_option("--audit-out", cfg.audit_out, "Audit JSON path (default <out>.audit.json, else stderr)");
  add_globals(stein, cfg);

  CLI::App* cw = app.add_subcommand("cw", "Critical Curie-Weiss model");
  cw->require_subcommand(1);
  CLI::App* cw_verify = cw->add_subcommand("verify", "Exact drift and moment inequalities per n");
  cw_verify->add_option("--n", cfg.n_list, "Comma-separated spin counts (default 16,64,256,1024)");
  cw_verify->add_option("--T", cfg.temperature, "Temperature (default 1)");
  cw_verify->add_option("--stats-out", cfg.stats_out, "Write exact pair statistics JSON (one n)");
  add_globals(cw_verify, cfg);
  CLI::App* cw_rate = cw->add_subcommand("rate", "Exact Kolmogorov distance to the quartic limit");
  cw_rate->add_option("--n", cfg.n_list, "Comma-separated spin counts (default 50,100,200,400,800,1600)");
  cw_rate->add_option("--T", cfg.temperature, "Temperature (default 1)");
  cw_rate->add_option("--plot", cfg.plot_out, "Write an SVG log-log plot");
  add_globals(cw_rate, cfg);
  CLI::App* cw_sample = cw->add_subcommand("sample", "Glauber sampler validation against the exact law");
  cw_sample->add_option("--n", cfg.n_list, "Spin count (default 100)");
  cw_sample->add_option("--T", cfg.temperature, "Temperature (default 1)");
  cw_sample->add_option("--samples", cfg.samples, "Recorded pairs (default 100000)");
  cw_sample->add_option("--chains", cfg.chains, "Independent chains (default 4)");
  cw_sample->add_option("--burn-in", cfg.burn_in, "Burn-in steps per chain (default 20 n^1.5)");
  cw_sample->add_option("--thin", cfg.thin, "Steps between records (default 2 n^1.5)");
  cw_sample->add_option("--path-out", cfg.path_out, "Write the (W, W') pairs as CSV");
  cw_sample->add_option("--stats-out", cfg.stats_out, "Write Monte Carlo pair statistics JSON");
  add_globals(cw_sample, cfg);

  CLI::App* bl = app.add_subcommand("bl", "Bernoulli-Laplace chain");
  bl->require_subcommand(1);
  CLI::App* bl_spectrum = bl->add_subcommand("spectrum", "Eigenvalues, weights and atoms (n,i,lambda,pi,mu)");
  bl_spectrum->add_option("--n", cfg.n_list, "Comma-separated n values")->required();
  add_globals(bl_spectrum, cfg);
  CLI::App* bl_verify = bl->add_subcommand("verify", "Smooth-function bound and exact distances");
  bl_verify->add_option("--n", cfg.n_list, "Comma-separated n values (default 4,16,64,256,1024)");
  bl_verify->add_option("--stats-out", cfg.stats_out, "Write pair statistics JSON (one n)");
  add_globals(bl_verify, cfg);

  CLI::App* bounds = app.add_subcommand("bounds", "Evaluate a bound from a pair-statistics JSON file");
  bounds->add_option("--stats", cfg.stats_in, "Pair statistics JSON")->required();
  bounds->add_option("--theorem", cfg.theorem, "Bound to evaluate (default exp-smooth)")
      ->check(CLI::IsMember({"exp-smooth", "exp-kolmogorov", "smooth-c2", "smooth-c3", "smooth-best", "kolmogorov"}));
  bounds->add_option("--law", cfg.law_spec, "Limit law spec (needed unless exp-*)");
  bounds->add_option("--lip", cfg.lip, "Scale by ||h'|| (default 1)");
  add_globals(bounds, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }
  if (cfg.tol && !(*cfg.tol > 0.0)) {
    err << "error: --tol must be positive\n";
    return kInputError;
  }

  try {
    if (*law) return cmd_law(cfg, out);
    if (*stein) return cmd_stein(cfg, out, err);
    if (*cw_verify) return cmd_cw_verify(cfg, out);
    if (*cw_rate) return cmd_cw_rate(cfg, out);
    if (*cw_sample) return cmd_cw_sample(cfg, out);
    if (*bl_spectrum) return cmd_bl_spectrum(cfg, out);
    if (*bl_verify) return cmd_bl_verify(cfg, out);
    if (*bounds) return cmd_bounds(cfg, out);
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericFailure;
  }
  return kInputError;
}

}  // namespace stein_pairs::cli
