// Acceptance checks. Prints one line per criterion, exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qthermo/fisher.hpp"
#include "qthermo/lowtemp.hpp"
#include "qthermo/optimize.hpp"
#include "qthermo/serialize.hpp"

using namespace qthermo;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

const std::string kData = QTHERMO_DATA_DIR;

std::vector<std::pair<Spectrum, double>> random_family() {
  std::mt19937_64 rng(20240601);
  std::vector<std::pair<Spectrum, double>> out;
  for (int i = 0; i < 100; ++i) {
    Spectrum s = oracle::random_spectrum(rng, 8, -10.0, 10.0);
    while (s.size() < 2) s = oracle::random_spectrum(rng, 8, -10.0, 10.0);
    out.emplace_back(std::move(s), oracle::random_temperature(rng, 0.01, 100.0));
  }
  return out;
}

Outcome g_minimum() {
  const MinimumResult r = minimize_two_level();
  const bool ok = r.converged && std::abs(r.argmin - 2.4) <= 0.05 && std::abs(r.value - 2.27) <= 0.01;
  return {ok, fmt("x_m=%.10g g=%.10g", r.argmin, r.value)};
}

Outcome h_minimum() {
  const PairMinimumResult r = minimize_three_level();
  const bool ok = r.converged && r.stationary && std::abs(r.argmin[0] - 2.66) <= 0.05 &&
                  std::abs(r.argmin[1] - 2.66) <= 0.05 && std::abs(r.value - 1.31) <= 0.01;
  return {ok, fmt("x_h=%.10g y_h=%.10g h=%.10g", r.argmin[0], r.argmin[1], r.value)};
}

Outcome closed_form_equivalence() {
  double worst2 = 0.0, worst3 = 0.0;
  for (double t : {0.1, 0.5, 1.0, 3.0}) {
    for (double gap : {0.1, 1.0, 2.4, 10.0}) {
      const double num2 = 1.0 / fisher_information(make_spectrum({{0.0, 1}, {gap, 1}}), t);
      worst2 = std::max(worst2, oracle::rel_diff(std::get<double>(two_level_crb(t, gap)), num2));
      for (double ratio : {1.5, 2.0}) {
        const double gap2 = ratio * gap;
        const double num3 = 1.0 / fisher_information(make_spectrum({{0.0, 1}, {gap, 1}, {gap2, 1}}), t);
        worst3 = std::max(worst3, oracle::rel_diff(t * t * three_level_factor(gap / t, gap2 / t), num3));
      }
    }
  }
  return {worst2 <= 1e-12 && worst3 <= 1e-10, fmt("max rel two-level=%.3g three-level=%.3g", worst2, worst3)};
}

Outcome fisher_fd() {
  double worst = 0.0;
  for (const auto& [s, t] : random_family()) {
    const double f = fisher_information(s, t);
    const double fd = static_cast<double>(oracle::fisher_fd(s, t));
    worst = std::max(worst, oracle::rel_diff(f, fd));
  }
  return {worst <= 1e-6, fmt("max rel=%.3g over 100 spectra", worst)};
}

Outcome sld_identities() {
  double worst_mean = 0.0, worst_second = 0.0;
  for (const auto& [s, t] : random_family()) {
    const FisherReport r = fisher_report(s, t);
    const ThermalState st = gibbs_state(s, t);
    double first = 0.0, second = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      first += st.prob(n) * r.sld_eigenvalues[n];
      second += st.prob(n) * r.sld_eigenvalues[n] * r.sld_eigenvalues[n];
    }
    worst_mean = std::max(worst_mean, std::abs(first));
    worst_second = std::max(worst_second, oracle::rel_diff(second, r.fisher));
  }
  return {worst_mean <= 1e-12 && worst_second <= 1e-12,
          fmt("max |Tr rho L|=%.3g max rel Tr rho L^2 vs F=%.3g", worst_mean, worst_second)};
}

Outcome saturation() {
  const ExperimentConfig cfg = load_experiment_config(kData + "/saturation_x24.cfg");
  const bool setup = cfg.spectrum.size() == 2 && std::abs(cfg.spectrum.gap(1) / cfg.true_temperature - 2.4) < 1e-12 &&
                     cfg.shots_per_trial == 1000 && cfg.trials == 10000 &&
                     std::holds_alternative<MleEstimator>(cfg.estimator);
  const SaturationReport r = run_experiment(cfg);
  const double excluded = static_cast<double>(r.excluded_trials) / static_cast<double>(cfg.trials);
  const bool ok = setup && r.ratio >= 0.9 && r.ratio <= 1.15 && excluded < 1e-3;
  return {ok, fmt("ratio=%.6g excluded=%.3g%%", r.ratio, 100.0 * excluded)};
}

Outcome gapped_divergence() {
  const double f02 = gapped_divergence_factor(0.2, 1.0);
  const double f01 = gapped_divergence_factor(0.1, 1.0);
  const double f005 = gapped_divergence_factor(0.05, 1.0);
  const bool monotone = std::abs(f02 - 1.0) > std::abs(f01 - 1.0) && std::abs(f01 - 1.0) > std::abs(f005 - 1.0);
  const bool ok = monotone && f005 >= 0.999 && f005 <= 1.001;
  return {ok, fmt("T=0.2:%.10g T=0.1:%.10g T=0.05:%.12g", f02, f01, f005)};
}

Outcome landau_invariance() {
  std::vector<double> mins;
  for (double t : {0.01, 1.0, 100.0}) {
    const auto objective = [t](double x) { return std::get<double>(two_level_crb(t, x * t)) / (t * t); };
    mins.push_back(brent_minimize(objective, 0.5, 10.0, 1e-10).value);
  }
  double spread = 0.0;
  for (double m : mins) spread = std::max(spread, oracle::rel_diff(m, mins[1]));
  return {spread <= 1e-6 && std::abs(mins[1] - 2.27) <= 0.01,
          fmt("min factor T=0.01:%.12g T=1:%.12g T=100:%.12g", mins[0], mins[1], mins[2]) +
              fmt(" spread=%.3g", spread)};
}

Outcome h_to_g() {
  double worst = 0.0;
  for (double x : {1.0, 2.4, 5.0}) worst = std::max(worst, std::abs(three_level_factor(x, 30.0) - two_level_factor(x)));
  return {worst <= 1e-3, fmt("max |h(x,30)-g(x)|=%.3g", worst)};
}

Outcome determinism() {
  const ExperimentConfig cfg = load_experiment_config(kData + "/saturation_x24.cfg");
  const std::string a = dump(saturation_document(run_experiment(cfg), cfg));
  const ExperimentConfig again = load_experiment_config(kData + "/saturation_x24.cfg");
  const std::string b = dump(saturation_document(run_experiment(again), again));
  return {a == b && !a.empty(), fmt("%.0f bytes, identical=%.0f", static_cast<double>(a.size()), a == b ? 1.0 : 0.0)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "g minimum location and value", 1.0, g_minimum},
      {2, "h global minimum on the diagonal", 5.0, h_minimum},
      {3, "closed-form bounds match numeric Fisher information", 1.0, closed_form_equivalence},
      {4, "Fisher information matches finite differences", 5.0, fisher_fd},
      {5, "SLD trace identities", 0.0, sld_identities},
      {6, "MLE saturates the bound at x = 2.4", 60.0, saturation},
      {7, "gapped divergence approaches T^4 exp(gap/T)", 1.0, gapped_divergence},
      {8, "optimal factor independent of T", 0.0, landau_invariance},
      {9, "h(x, y) approaches g(x) for large y", 0.0, h_to_g},
      {10, "identical seeds give byte-identical reports", 0.0, determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += fmt(" (limit %.0f s exceeded)", c.time_limit);
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d. %s (%.3f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
