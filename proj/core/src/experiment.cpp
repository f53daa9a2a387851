#include "qthermo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "qthermo/error.hpp"
#include "qthermo/fisher.hpp"

namespace qthermo {

std::string_view to_string(DegeneratePolicy policy) {
  return policy == DegeneratePolicy::abort ? "abort" : "exclude_and_report";
}

namespace {

std::vector<double> cumulative(const ThermalState& st) {
  std::vector<double> cdf(st.probs().size());
  double acc = 0.0;
  for (std::size_t n = 0; n < cdf.size(); ++n) {
    acc += st.probs()[n];
    cdf[n] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

std::vector<std::uint64_t> draw_counts(const std::vector<double>& cdf, std::uint64_t shots,
                                       TrialRng& rng) {
  std::vector<std::uint64_t> counts(cdf.size(), 0);
  for (std::uint64_t k = 0; k < shots; ++k) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    ++counts[n];
  }
  return counts;
}

Interval default_prior(double t0) { return {t0 / 5.0, 5.0 * t0}; }

struct TrialOutcome {
  EstimateStatus status = EstimateStatus::non_invertible;
  double estimate = 0.0;
};

}  // namespace

void validate(const ExperimentConfig& cfg) {
  require_temperature(cfg.true_temperature, "true_temperature");
  if (cfg.shots_per_trial < 1) throw DomainError("shots_per_trial", "must be at least 1");
  if (cfg.trials < 1) throw DomainError("trials", "must be at least 1");
  if (const auto* b = std::get_if<BayesEstimator>(&cfg.estimator)) {
    const Interval p = b->prior.value_or(default_prior(cfg.true_temperature));
    if (!(p.lo > 0.0) || !(p.hi > p.lo) || !std::isfinite(p.hi)) {
      throw DomainError("prior", "prior must satisfy 0 < lo < hi < inf");
    }
    if (b->grid_size < kMinPosteriorGrid) {
      throw DomainError("grid_size", "posterior grid needs at least " +
                                         std::to_string(kMinPosteriorGrid) + " points");
    }
  }
  if (const auto* m = std::get_if<MleEstimator>(&cfg.estimator); m && m->bracket) {
    if (!(m->bracket->lo > 0.0) || !(m->bracket->hi > m->bracket->lo)) {
      throw DomainError("bracket", "bracket must satisfy 0 < lo < hi");
    }
  }
}

SampleSet draw_sample(const Spectrum& s, double temperature, std::uint64_t shots, TrialRng& rng) {
  require_temperature(temperature);
  if (shots < 1) throw DomainError("M", "number of shots must be at least 1");
  return make_sample_set(s, draw_counts(cumulative(gibbs_state(s, temperature)), shots, rng));
}

SaturationReport run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const Spectrum& s = cfg.spectrum;
  const double t0 = cfg.true_temperature;
  const double fisher = fisher_information(s, t0);
  if (!(fisher > 0.0)) {
    throw DomainError("spectrum", "zero Fisher information: the Cramer-Rao floor is unbounded");
  }
  const std::vector<double> cdf = cumulative(gibbs_state(s, t0));
  const std::uint64_t trials = cfg.trials;

  auto estimate = [&](const SampleSet& sample) -> EstimateResult {
    if (const auto* b = std::get_if<BayesEstimator>(&cfg.estimator)) {
      return bayes_temperature(s, sample, b->prior.value_or(default_prior(t0)), b->grid_size);
    }
    return mle_temperature(s, sample, std::get<MleEstimator>(cfg.estimator).bracket);
  };

  const bool abort_on_degenerate = cfg.policy == DegeneratePolicy::abort;
  std::vector<TrialOutcome> outcomes(trials);
  std::atomic<std::uint64_t> next{0};
  std::atomic<std::uint64_t> first_bad{trials};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  // Indices are handed out in increasing order, so every trial below
  // first_bad is completed before workers stop; the reported first
  // degenerate trial is therefore schedule-independent.
  auto worker = [&] {
    try {
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= trials || (abort_on_degenerate && i > first_bad.load())) break;
        TrialRng rng(cfg.seed, i);
        SampleSet sample;
        sample.spectrum_label = s.label();
        sample.counts = draw_counts(cdf, cfg.shots_per_trial, rng);
        sample.shots = cfg.shots_per_trial;
        const EstimateResult r = estimate(sample);
        outcomes[i] = {r.status, r.estimate.value_or(0.0)};
        if (abort_on_degenerate && r.status != EstimateStatus::interior) {
          std::uint64_t cur = first_bad.load();
          while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
          }
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(trials);
    }
  };

  unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::uint64_t>(n_threads, trials));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  if (abort_on_degenerate && first_bad.load() < trials) {
    const std::uint64_t i = first_bad.load();
    throw DegenerateExperimentError("trial " + std::to_string(i) + " produced a degenerate sample (" +
                                    std::string(to_string(outcomes[i].status)) +
                                    ") and the policy is abort");
  }

  SaturationReport rep;
  rep.true_temperature = t0;
  rep.crb = 1.0 / (static_cast<double>(cfg.shots_per_trial) * fisher);
  double sq = 0.0, sum = 0.0;
  for (const TrialOutcome& o : outcomes) {
    switch (o.status) {
      case EstimateStatus::interior: {
        const double d = o.estimate - t0;
        sq += d * d;
        sum += o.estimate;
        ++rep.trials_used;
        break;
      }
      case EstimateStatus::at_lower_bound: ++rep.excluded_at_lower_bound; break;
      case EstimateStatus::at_upper_bound: ++rep.excluded_at_upper_bound; break;
      case EstimateStatus::non_invertible: ++rep.excluded_non_invertible; break;
    }
  }
  rep.excluded_trials = trials - rep.trials_used;
  if (rep.trials_used == 0) {
    throw DegenerateExperimentError("no usable trials: all " + std::to_string(trials) +
                                    " samples were boundary or non-invertible");
  }
  const double used = static_cast<double>(rep.trials_used);
  rep.empirical_mse = sq / used;
  rep.mean_estimate = sum / used;
  rep.ratio = rep.empirical_mse / rep.crb;
  return rep;
}

std::vector<SaturationReport> sweep_saturation(const Spectrum& s, std::span<const double> temperatures,
                                               std::uint64_t shots, std::uint64_t trials,
                                               const EstimatorChoice& estimator, std::uint64_t seed,
                                               unsigned threads) {
  std::vector<SaturationReport> out;
  out.reserve(temperatures.size());
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    ExperimentConfig cfg{s};
    cfg.true_temperature = temperatures[k];
    cfg.shots_per_trial = shots;
    cfg.trials = trials;
    cfg.estimator = estimator;
    cfg.seed = derive_stream(seed, k);
    cfg.policy = DegeneratePolicy::exclude_and_report;
    cfg.threads = threads;
    out.push_back(run_experiment(cfg));
  }
  return out;
}

}  // namespace qthermo
