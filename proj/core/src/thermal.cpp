#include "qthermo/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qthermo/error.hpp"

namespace qthermo {

namespace {

bool same_energy(double a, double b) {
  if (a == b) return true;
  return std::abs(a - b) <= kLevelMergeTolerance * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Spectrum make_spectrum(std::vector<Level> levels, std::string label) {
  if (levels.empty()) throw DomainError("levels", "spectrum needs at least one level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!std::isfinite(levels[i].energy)) {
      throw DomainError("levels[" + std::to_string(i) + "].energy", "energy must be finite");
    }
    if (levels[i].multiplicity < 1) {
      throw DomainError("levels[" + std::to_string(i) + "].degeneracy",
                        "multiplicity must be at least 1");
    }
  }

  std::stable_sort(levels.begin(), levels.end(),
                   [](const Level& a, const Level& b) { return a.energy < b.energy; });

  std::vector<Level> merged;
  merged.reserve(levels.size());
  for (const Level& lv : levels) {
    if (!merged.empty() && same_energy(merged.back().energy, lv.energy)) {
      merged.back().multiplicity += lv.multiplicity;
    } else {
      merged.push_back(lv);
    }
  }
  return Spectrum(std::move(merged), std::move(label));
}

void require_temperature(double temperature, const char* field) {
  if (!std::isfinite(temperature)) throw DomainError(field, "temperature must be finite");
  if (temperature <= 0.0) throw DomainError(field, "temperature must be strictly positive");
}

ThermalState gibbs_state(const Spectrum& s, double temperature) {
  require_temperature(temperature);

  const auto& lv = s.levels();
  const double e0 = s.ground_energy();
  std::vector<double> logw(lv.size());
  double max_logw = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < lv.size(); ++n) {
    logw[n] = std::log(static_cast<double>(lv[n].multiplicity)) - (lv[n].energy - e0) / temperature;
    max_logw = std::max(max_logw, logw[n]);
  }

  double acc = 0.0;
  for (double w : logw) acc += std::exp(w - max_logw);
  const double log_z = max_logw + std::log(acc);

  std::vector<double> probs(lv.size());
  for (std::size_t n = 0; n < lv.size(); ++n) {
    logw[n] -= log_z;
    probs[n] = std::exp(logw[n]);
  }
  return ThermalState(s, temperature, std::move(probs), std::move(logw), log_z);
}

double mean_excitation(const ThermalState& st) {
  const auto& s = st.spectrum();
  double acc = 0.0;
  for (std::size_t n = 1; n < s.size(); ++n) acc += st.prob(n) * s.gap(n);
  return acc;
}

double mean_energy(const ThermalState& st) {
  return st.energy_shift() + mean_excitation(st);
}

double energy_variance(const ThermalState& st) {
  const auto& s = st.spectrum();
  const double mean = mean_excitation(st);
  double acc = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n) {
    const double d = s.gap(n) - mean;
    acc += st.prob(n) * d * d;
  }
  return acc;
}

double specific_heat(const Spectrum& s, double temperature) {
  const ThermalState st = gibbs_state(s, temperature);
  return energy_variance(st) / (temperature * temperature);
}

}  // namespace qthermo
