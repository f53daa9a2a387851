#include "qthermo/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qthermo/error.hpp"

namespace qthermo {

SampleSet make_sample_set(const Spectrum& s, std::vector<std::uint64_t> counts) {
  SampleSet out;
  out.spectrum_label = s.label();
  out.shots = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  out.counts = std::move(counts);
  check_sample(s, out);
  return out;
}

SampleSet collapse_outcomes(const Spectrum& s, const std::vector<std::size_t>& outcomes) {
  std::vector<std::uint64_t> counts(s.size(), 0);
  for (std::size_t o : outcomes) {
    if (o >= s.size()) throw DomainError("outcomes", "outcome index outside the spectrum");
    ++counts[o];
  }
  return make_sample_set(s, std::move(counts));
}

void check_sample(const Spectrum& s, const SampleSet& sample) {
  if (sample.counts.size() != s.size()) {
    throw DomainError("counts", "expected " + std::to_string(s.size()) + " counts, got " +
                                    std::to_string(sample.counts.size()));
  }
  const std::uint64_t total =
      std::accumulate(sample.counts.begin(), sample.counts.end(), std::uint64_t{0});
  if (total != sample.shots) throw DomainError("M", "counts do not sum to M");
  if (sample.shots < 1) throw DomainError("M", "sample must contain at least one shot");
}

std::string_view to_string(EstimateStatus status) {
  switch (status) {
    case EstimateStatus::interior: return "interior";
    case EstimateStatus::at_lower_bound: return "at_lower_bound";
    case EstimateStatus::at_upper_bound: return "at_upper_bound";
    case EstimateStatus::non_invertible: return "non_invertible";
  }
  return "unknown";
}

Interval default_mle_bracket(const Spectrum& s) {
  const double spread = s.spread();
  return {1e-4 * spread, 1e4 * spread};
}

double log_likelihood(const Spectrum& s, const SampleSet& sample, double temperature) {
  const ThermalState st = gibbs_state(s, temperature);
  double acc = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    if (sample.counts[n] == 0) continue;
    acc += static_cast<double>(sample.counts[n]) * st.log_probs()[n];
  }
  return acc;
}

namespace {

void check_interval(Interval iv, const char* field) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo > 0.0) || !(iv.hi > iv.lo)) {
    throw DomainError(field, "interval must satisfy 0 < lo < hi < inf");
  }
}

}  // namespace

EstimateResult mle_temperature(const Spectrum& s, const SampleSet& sample,
                               std::optional<Interval> bracket) {
  check_sample(s, sample);

  EstimateResult r;
  if (s.size() < 2) {
    r.status = EstimateStatus::non_invertible;
    return r;
  }
  const Interval br = bracket.value_or(default_mle_bracket(s));
  check_interval(br, "bracket");

  // Work with energies above the ground level throughout.
  const double m = static_cast<double>(sample.shots);
  double sample_mean = 0.0;
  double uniform_num = 0.0, uniform_den = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    sample_mean += static_cast<double>(sample.counts[n]) * s.gap(n);
    uniform_num += s.levels()[n].multiplicity * s.gap(n);
    uniform_den += s.levels()[n].multiplicity;
  }
  sample_mean /= m;
  const double uniform_mean = uniform_num / uniform_den;

  if (sample_mean <= 0.0) {
    r.status = EstimateStatus::at_lower_bound;
    r.estimate = br.lo;
    return r;
  }
  if (sample_mean >= uniform_mean) {
    r.status = EstimateStatus::non_invertible;
    return r;
  }

  auto excess = [&](double t) { return mean_excitation(gibbs_state(s, t)) - sample_mean; };
  if (excess(br.lo) >= 0.0) {
    r.status = EstimateStatus::at_lower_bound;
    r.estimate = br.lo;
    return r;
  }
  if (excess(br.hi) <= 0.0) {
    r.status = EstimateStatus::at_upper_bound;
    r.estimate = br.hi;
    return r;
  }

  // Geometric bisection: the bracket can span many decades.
  double lo = br.lo, hi = br.hi;
  int iter = 0;
  while (hi / lo - 1.0 > kMleRelativeTolerance && iter < 200) {
    ++iter;
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.status = EstimateStatus::interior;
  r.estimate = std::sqrt(lo * hi);
  r.iterations = iter;
  return r;
}

Posterior bayes_posterior(const Spectrum& s, const SampleSet& sample, Interval prior,
                          std::size_t grid_size) {
  check_sample(s, sample);
  check_interval(prior, "prior");
  if (grid_size < kMinPosteriorGrid) {
    throw DomainError("grid_size", "posterior grid needs at least " +
                                       std::to_string(kMinPosteriorGrid) + " points");
  }

  Posterior post;
  post.grid.resize(grid_size);
  const double step = prior.width() / static_cast<double>(grid_size - 1);
  double max_ll = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double t = (i + 1 == grid_size) ? prior.hi : prior.lo + step * static_cast<double>(i);
    const double ll = log_likelihood(s, sample, t);
    post.grid[i] = {t, ll};
    max_ll = std::max(max_ll, ll);
  }

  auto trapezoid = [&](auto&& fn) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid_size; ++i) {
      const double w = (i == 0 || i + 1 == grid_size) ? 0.5 : 1.0;
      acc += w * fn(post.grid[i]);
    }
    return acc * step;
  };

  for (auto& p : post.grid) p.density = std::exp(p.density - max_ll);
  const double norm = trapezoid([](const PosteriorPoint& p) { return p.density; });
  for (auto& p : post.grid) p.density /= norm;

  post.mean = trapezoid([](const PosteriorPoint& p) { return p.temperature * p.density; });
  const double var = trapezoid([&](const PosteriorPoint& p) {
    const double d = p.temperature - post.mean;
    return d * d * p.density;
  });
  post.sd = std::sqrt(std::max(var, 0.0));
  return post;
}

EstimateResult bayes_temperature(const Spectrum& s, const SampleSet& sample, Interval prior,
                                 std::size_t grid_size) {
  const Posterior post = bayes_posterior(s, sample, prior, grid_size);
  EstimateResult r;
  r.status = EstimateStatus::interior;
  r.estimate = post.mean;
  r.posterior_mean = post.mean;
  r.posterior_sd = post.sd;
  return r;
}

}  // namespace qthermo
