// qthermo: Cramer-Rao limits to quantum thermometry from the command line.
//
// Exit codes: 0 success, 2 input-format error, 3 numeric-validation error,
// 4 degenerate experiment.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qthermo/error.hpp"
#include "qthermo/estimation.hpp"
#include "qthermo/experiment.hpp"
#include "qthermo/fisher.hpp"
#include "qthermo/gap_family.hpp"
#include "qthermo/lowtemp.hpp"
#include "qthermo/serialize.hpp"

namespace {

using namespace qthermo;

enum ExitCode : int { kOk = 0, kFormat = 2, kNumeric = 3, kDegenerate = 4 };

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("--out: cannot open '" + path + "' for writing");
    out << text;
  }
};

void require_positive(double v, const char* flag) {
  if (!std::isfinite(v) || v <= 0.0) throw DomainError(flag, "must be a finite positive number");
}

void require_at_least_one(std::uint64_t v, const char* flag) {
  if (v < 1) throw DomainError(flag, "must be at least 1");
}

std::optional<Interval> as_interval(const std::vector<double>& v, const char* flag) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 2) throw DomainError(flag, "expects exactly two values lo,hi");
  if (!(v[0] > 0.0) || !(v[1] > v[0]) || !std::isfinite(v[1])) {
    throw DomainError(flag, "must satisfy 0 < lo < hi");
  }
  return Interval{v[0], v[1]};
}

// Number of grid points on [lo, hi] with the given step, hi included up to
// round-off.
std::size_t grid_count(double lo, double hi, double step, const char* prefix) {
  const std::string p(prefix);
  if (!std::isfinite(lo) || lo <= 0.0) throw DomainError(p + "-min", "must be a finite positive number");
  if (!std::isfinite(hi) || !(hi > lo)) throw DomainError(p + "-max", "must exceed " + p + "-min");
  if (!std::isfinite(step) || step <= 0.0) throw DomainError("step", "must be a finite positive number");
  if (step > hi - lo) throw DomainError("step", "step is larger than the range");
  return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

struct BoundArgs {
  std::string spectrum;
  double temperature = 0.0;
  std::uint64_t shots = 1;
};

std::string run_bound(const BoundArgs& a) {
  require_positive(a.temperature, "T");
  require_at_least_one(a.shots, "M");
  const Spectrum s = load_spectrum(a.spectrum);
  const FisherReport r = fisher_report(s, a.temperature);
  Json j = to_json(r, a.shots);
  j["spectrum_label"] = s.label();
  return dump(j);
}

struct GridArgs {
  double x_min = 0.5, x_max = 10.0, y_min = 0.0, y_max = 0.0, step = 0.01;
};

std::string run_gfun(const GridArgs& a) {
  const std::size_t n = grid_count(a.x_min, a.x_max, a.step, "x");
  std::ostringstream os;
  os << "x,g\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a.x_min + a.step * static_cast<double>(i);
    os << format_real(x) << ',' << format_real(two_level_factor(x)) << '\n';
  }
  return os.str();
}

std::string run_hfun(GridArgs a) {
  if (a.y_min == 0.0) a.y_min = a.x_min;
  if (a.y_max == 0.0) a.y_max = a.x_max;
  const std::size_t nx = grid_count(a.x_min, a.x_max, a.step, "x");
  const std::size_t ny = grid_count(a.y_min, a.y_max, a.step, "y");
  std::ostringstream os;
  os << "x,y,h\n";
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = a.x_min + a.step * static_cast<double>(i);
    for (std::size_t k = 0; k < ny; ++k) {
      const double y = a.y_min + a.step * static_cast<double>(k);
      os << format_real(x) << ',' << format_real(y) << ',' << format_real(three_level_factor(x, y))
         << '\n';
    }
  }
  return os.str();
}

std::string run_minima(double tol) {
  require_positive(tol, "tol");
  const MinimumResult g = minimize_two_level(kDefaultTwoLevelBracket, tol);
  const PairMinimumResult h = minimize_three_level(tol);
  return dump(minima_document(g, h, kDefaultTwoLevelBracket, tol));
}

struct SweepArgs {
  std::string spectrum;
  std::vector<double> temperatures;
  std::uint64_t shots = 1000, trials = 10000, seed = 1;
  std::string estimator = "mle";
  std::vector<double> prior;
  std::size_t grid = 512;
  unsigned threads = 0;
};

EstimatorChoice make_estimator(const std::string& kind, const std::vector<double>& prior, std::size_t grid,
                               bool prior_required) {
  if (kind == "mle") return MleEstimator{};
  if (kind != "bayes") throw DomainError("estimator", "must be 'mle' or 'bayes'");
  BayesEstimator b;
  b.prior = as_interval(prior, "prior");
  if (prior_required && !b.prior) throw DomainError("prior", "the bayes estimator needs an explicit --prior lo,hi");
  if (grid < kMinPosteriorGrid) throw DomainError("grid", "posterior grid needs at least 64 points");
  b.grid_size = grid;
  return b;
}

std::string run_sweep(const SweepArgs& a) {
  if (a.temperatures.empty()) throw DomainError("T", "at least one temperature is required");
  for (double t : a.temperatures) require_positive(t, "T");
  require_at_least_one(a.shots, "M");
  require_at_least_one(a.trials, "R");
  const EstimatorChoice est = make_estimator(a.estimator, a.prior, a.grid, false);
  const Spectrum s = load_spectrum(a.spectrum);
  const auto reports = sweep_saturation(s, a.temperatures, a.shots, a.trials, est, a.seed, a.threads);
  return sweep_csv(reports);
}

std::string run_simulate(const std::string& config, std::optional<unsigned> threads) {
  ExperimentConfig cfg = load_experiment_config(config);
  if (threads) cfg.threads = *threads;
  const SaturationReport r = run_experiment(cfg);
  return dump(saturation_document(r, cfg));
}

std::string run_tune(const std::string& family, double temperature, double tol) {
  require_positive(temperature, "T");
  require_positive(tol, "tol");
  const GapFamily f = load_gap_family(family);
  const TuneResult r = tune_gap(f, temperature, tol);
  Json j = to_json(r, temperature);
  j["family"] = to_json(f);
  return dump(j);
}

struct EstimateArgs {
  std::string spectrum, sample, estimator = "mle";
  std::vector<double> prior, bracket;
  std::size_t grid = 4096;
};

std::string run_estimate(const EstimateArgs& a) {
  const EstimatorChoice est = make_estimator(a.estimator, a.prior, a.grid, true);
  const std::optional<Interval> bracket = as_interval(a.bracket, "bracket");
  const Spectrum s = load_spectrum(a.spectrum);
  const SampleSet sample = load_sample_set(a.sample);
  if (!sample.spectrum_label.empty() && !s.label().empty() && sample.spectrum_label != s.label()) {
    throw FormatError("sample: spectrum_label '" + sample.spectrum_label + "' does not match spectrum '" +
                      s.label() + "'");
  }
  EstimateResult r;
  Json j;
  if (const auto* b = std::get_if<BayesEstimator>(&est)) {
    r = bayes_temperature(s, sample, *b->prior, b->grid_size);
    j = to_json(r);
    j["estimator"] = {{"kind", "bayes"}, {"prior", {b->prior->lo, b->prior->hi}}, {"grid_size", b->grid_size}};
  } else {
    const Interval br = bracket.value_or(default_mle_bracket(s));
    r = mle_temperature(s, sample, br);
    j = to_json(r);
    j["estimator"] = {{"kind", "mle"}, {"bracket", {br.lo, br.hi}}, {"relative_tolerance", kMleRelativeTolerance}};
  }
  j["M"] = sample.shots;
  return dump(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cramer-Rao limits to temperature estimation in finite quantum systems"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  app.add_option("--out", out.path, "Write output to PATH instead of standard output");

  std::string result;
  auto guarded = [&result](auto fn) { return [&result, fn] { result = fn(); }; };

  BoundArgs bound;
  auto* c_bound = app.add_subcommand("bound", "Fisher information and Cramer-Rao floor of a spectrum");
  c_bound->add_option("--spectrum", bound.spectrum, "Spectrum JSON file")->required();
  c_bound->add_option("-T,--temperature", bound.temperature, "Temperature (k_B = 1)")->required();
  c_bound->add_option("-M,--shots", bound.shots, "Number of measurements")->capture_default_str();
  c_bound->callback(guarded([&] { return run_bound(bound); }));

  GridArgs gargs;
  auto* c_g = app.add_subcommand("gfun", "Tabulate the two-level factor g(x) as CSV");
  c_g->add_option("--x-min", gargs.x_min)->capture_default_str();
  c_g->add_option("--x-max", gargs.x_max)->capture_default_str();
  c_g->add_option("--step", gargs.step)->capture_default_str();
  c_g->callback(guarded([&] { return run_gfun(gargs); }));

  GridArgs hargs{1.0, 6.0, 0.0, 0.0, 0.05};
  auto* c_h = app.add_subcommand("hfun", "Tabulate the three-level factor h(x, y) as CSV");
  c_h->add_option("--x-min", hargs.x_min)->capture_default_str();
  c_h->add_option("--x-max", hargs.x_max)->capture_default_str();
  c_h->add_option("--y-min", hargs.y_min, "Defaults to --x-min");
  c_h->add_option("--y-max", hargs.y_max, "Defaults to --x-max");
  c_h->add_option("--step", hargs.step)->capture_default_str();
  c_h->callback(guarded([&] { return run_hfun(hargs); }));

  double minima_tol = kDefaultMinimizeTolerance;
  auto* c_min = app.add_subcommand("minima", "Minima of g and h with convergence diagnostics");
  c_min->add_option("--tol", minima_tol)->capture_default_str();
  c_min->callback(guarded([&] { return run_minima(minima_tol); }));

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Monte Carlo saturation sweep over temperatures (CSV)");
  c_sweep->add_option("--spectrum", sweep.spectrum)->required();
  c_sweep->add_option("-T,--temperature", sweep.temperatures, "Comma-separated temperatures")
      ->required()
      ->delimiter(',');
  c_sweep->add_option("-M,--shots", sweep.shots)->capture_default_str();
  c_sweep->add_option("-R,--trials", sweep.trials)->capture_default_str();
  c_sweep->add_option("--seed", sweep.seed)->capture_default_str();
  c_sweep->add_option("--estimator", sweep.estimator, "mle or bayes")->capture_default_str();
  c_sweep->add_option("--prior", sweep.prior, "Flat prior lo,hi (default [T/5, 5T])")->delimiter(',');
  c_sweep->add_option("--grid", sweep.grid, "Posterior grid size")->capture_default_str();
  c_sweep->add_option("--threads", sweep.threads);
  c_sweep->callback(guarded([&] { return run_sweep(sweep); }));

  std::string config;
  std::optional<unsigned> sim_threads;
  auto* c_sim = app.add_subcommand("simulate", "Run a saturation experiment from a config file");
  c_sim->add_option("--config", config, "Experiment config JSON")->required();
  c_sim->add_option("--threads", sim_threads, "Override worker thread count");
  c_sim->callback(guarded([&] { return run_simulate(config, sim_threads); }));

  std::string family;
  double tune_t = 0.0, tune_tol = 1e-10;
  auto* c_tune = app.add_subcommand("tune", "Optimise a gap family's control parameter");
  c_tune->add_option("--family", family, "Gap family JSON")->required();
  c_tune->add_option("-T,--temperature", tune_t)->required();
  c_tune->add_option("--tol", tune_tol)->capture_default_str();
  c_tune->callback(guarded([&] { return run_tune(family, tune_t, tune_tol); }));

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Estimate temperature from a sample file");
  c_est->add_option("--spectrum", est.spectrum)->required();
  c_est->add_option("--sample", est.sample)->required();
  c_est->add_option("--estimator", est.estimator, "mle or bayes")->capture_default_str();
  c_est->add_option("--prior", est.prior, "Flat prior lo,hi (required for bayes)")->delimiter(',');
  c_est->add_option("--bracket", est.bracket, "MLE search bracket lo,hi")->delimiter(',');
  c_est->add_option("--grid", est.grid)->capture_default_str();
  c_est->callback(guarded([&] { return run_estimate(est); }));

  try {
    app.parse(argc, argv);
    out.write(result);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ConversionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFormat;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DegenerateExperimentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
