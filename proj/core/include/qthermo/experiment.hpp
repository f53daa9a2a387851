#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qthermo/estimation.hpp"
#include "qthermo/rng.hpp"
#include "qthermo/thermal.hpp"

namespace qthermo {

struct MleEstimator {
  /// Defaults to default_mle_bracket() of the spectrum.
  std::optional<Interval> bracket;
};

struct BayesEstimator {
  /// Defaults to [T0/5, 5 T0] around the simulated temperature.
  std::optional<Interval> prior;
  std::size_t grid_size = 512;
};

using EstimatorChoice = std::variant<MleEstimator, BayesEstimator>;

enum class DegeneratePolicy { exclude_and_report, abort };

std::string_view to_string(DegeneratePolicy policy);

struct ExperimentConfig {
  Spectrum spectrum;
  double true_temperature = 1.0;
  std::uint64_t shots_per_trial = 1;
  std::uint64_t trials = 1;
  EstimatorChoice estimator = MleEstimator{};
  std::uint64_t seed = 0;
  DegeneratePolicy policy = DegeneratePolicy::exclude_and_report;
  /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results do
  /// not depend on this value.
  unsigned threads = 0;
};

/// Throws DomainError on a non-positive temperature, zero shots or trials, or
/// a bad prior/bracket.
void validate(const ExperimentConfig& cfg);

struct SaturationReport {
  double true_temperature = 0.0;
  /// Mean of (T_hat - T)^2 over used trials.
  double empirical_mse = 0.0;
  /// 1 / (M F(T)).
  double crb = 0.0;
  double ratio = 0.0;
  double mean_estimate = 0.0;
  std::uint64_t excluded_trials = 0;
  std::uint64_t trials_used = 0;
  std::uint64_t excluded_at_lower_bound = 0;
  std::uint64_t excluded_at_upper_bound = 0;
  std::uint64_t excluded_non_invertible = 0;
  std::string generator{kGeneratorIdentity};
};

/// M multinomial energy outcomes at temperature T by inverse-CDF sampling.
SampleSet draw_sample(const Spectrum& s, double temperature, std::uint64_t shots, TrialRng& rng);

/// Runs R trials of M shots, estimates T in each, and compares the mean squared
/// error with the Cramer-Rao floor. Trials run concurrently but are reduced in
/// trial order, so reports are bitwise reproducible.
///
/// Throws DegenerateExperimentError under the abort policy on the first
/// boundary or non-invertible trial, and whenever no trial is usable.
SaturationReport run_experiment(const ExperimentConfig& cfg);

/// One experiment per temperature. Experiment k is seeded with
/// derive_stream(seed, k) and uses the exclude-and-report policy.
std::vector<SaturationReport> sweep_saturation(const Spectrum& s, std::span<const double> temperatures,
                                               std::uint64_t shots, std::uint64_t trials,
                                               const EstimatorChoice& estimator, std::uint64_t seed,
                                               unsigned threads = 0);

}  // namespace qthermo
