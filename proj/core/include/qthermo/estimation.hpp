#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qthermo/optimize.hpp"
#include "qthermo/thermal.hpp"

namespace qthermo {

/// Outcome counts of M energy measurements, one count per spectrum level.
/// Energy outcomes are exchangeable, so counts are a sufficient statistic.
struct SampleSet {
  std::string spectrum_label;
  std::vector<std::uint64_t> counts;
  std::uint64_t shots = 0;
};

/// Validates counts against the spectrum (length, M >= 1) and fills in M.
SampleSet make_sample_set(const Spectrum& s, std::vector<std::uint64_t> counts);

/// Collapses a raw sequence of observed level indices into counts.
SampleSet collapse_outcomes(const Spectrum& s, const std::vector<std::size_t>& outcomes);

/// Throws DomainError unless `sample` is consistent with `s`.
void check_sample(const Spectrum& s, const SampleSet& sample);

enum class EstimateStatus { interior, at_lower_bound, at_upper_bound, non_invertible };

std::string_view to_string(EstimateStatus status);

struct EstimateResult {
  /// Absent for non-invertible samples; the bracket edge for boundary cases.
  std::optional<double> estimate;
  EstimateStatus status = EstimateStatus::non_invertible;
  std::optional<double> posterior_mean;
  std::optional<double> posterior_sd;
  int iterations = 0;
};

/// Relative bracket width at which the MLE bisection stops.
inline constexpr double kMleRelativeTolerance = 1e-12;

/// [1e-4, 1e4] times the spectrum spread E_max - E_0.
Interval default_mle_bracket(const Spectrum& s);

/// sum_n counts[n] log p_n(T).
double log_likelihood(const Spectrum& s, const SampleSet& sample, double temperature);

/// Maximum-likelihood temperature.
///
/// The multinomial likelihood is stationary exactly where the thermal mean
/// energy matches the sample mean energy, and <H>_T is strictly increasing, so
/// the MLE is found by geometric bisection on <H>_T - E_bar. Samples with
/// E_bar at the ground energy are AT_LOWER_BOUND. Samples with E_bar at or
/// above the infinite-temperature mean cannot be reached by any finite
/// positive T and are NON_INVERTIBLE, as is any sample on a spectrum with a
/// single distinct energy.
EstimateResult mle_temperature(const Spectrum& s, const SampleSet& sample,
                               std::optional<Interval> bracket = std::nullopt);

struct PosteriorPoint {
  double temperature;
  double density;
};

struct Posterior {
  double mean = 0.0;
  double sd = 0.0;
  std::vector<PosteriorPoint> grid;
};

inline constexpr std::size_t kMinPosteriorGrid = 64;

/// Posterior on a uniform temperature grid over `prior` (flat density),
/// normalised by the trapezoid rule.
Posterior bayes_posterior(const Spectrum& s, const SampleSet& sample, Interval prior,
                          std::size_t grid_size);

/// Posterior mean as a point estimate; status is always INTERIOR.
EstimateResult bayes_temperature(const Spectrum& s, const SampleSet& sample, Interval prior,
                                 std::size_t grid_size);

}  // namespace qthermo
