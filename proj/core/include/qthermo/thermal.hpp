#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qthermo {

/// One energy level of a finite spectrum. Units have k_B = 1, so energies and
/// temperatures share a scale.
struct Level {
  double energy = 0.0;
  std::uint32_t multiplicity = 1;

  bool operator==(const Level&) const = default;
};

/// An ordered finite spectrum: energies strictly increasing, each with a
/// positive multiplicity. Construct through make_spectrum().
class Spectrum {
 public:
  const std::vector<Level>& levels() const noexcept { return levels_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return levels_.size(); }

  double energy(std::size_t n) const { return levels_.at(n).energy; }
  double ground_energy() const noexcept { return levels_.front().energy; }
  /// E_k - E_0.
  double gap(std::size_t k) const { return energy(k) - ground_energy(); }
  /// E_max - E_0.
  double spread() const noexcept { return levels_.back().energy - ground_energy(); }

  bool operator==(const Spectrum&) const = default;

 private:
  friend Spectrum make_spectrum(std::vector<Level> levels, std::string label);
  Spectrum(std::vector<Level> levels, std::string label)
      : levels_(std::move(levels)), label_(std::move(label)) {}

  std::vector<Level> levels_;
  std::string label_;
};

/// Relative tolerance under which two input energies are treated as the same
/// level and merged into one multiplicity.
inline constexpr double kLevelMergeTolerance = 1e-12;

/// Sorts levels by energy and merges coincident energies.
/// Throws DomainError on an empty list, non-finite energies or zero
/// multiplicity.
Spectrum make_spectrum(std::vector<Level> levels, std::string label = {});

/// Canonical (Gibbs) occupation of each level at temperature T.
///
/// Weights are formed relative to the ground energy E_0 and normalised with
/// log-sum-exp, so only the shifted partition function
/// log Z' = log sum_k m_k exp(-(E_k - E_0)/T) is stored. The physical
/// log Z equals log_partition() - E_0 / T.
class ThermalState {
 public:
  const Spectrum& spectrum() const noexcept { return spectrum_; }
  double temperature() const noexcept { return temperature_; }
  double beta() const noexcept { return 1.0 / temperature_; }

  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> log_probs() const noexcept { return log_probs_; }
  double prob(std::size_t n) const { return probs_.at(n); }

  double log_partition() const noexcept { return log_partition_; }
  double energy_shift() const noexcept { return spectrum_.ground_energy(); }

 private:
  friend ThermalState gibbs_state(const Spectrum& s, double temperature);
  ThermalState(Spectrum s, double t, std::vector<double> p,
               std::vector<double> logp, double log_z)
      : spectrum_(std::move(s)),
        temperature_(t),
        probs_(std::move(p)),
        log_probs_(std::move(logp)),
        log_partition_(log_z) {}

  Spectrum spectrum_;
  double temperature_;
  std::vector<double> probs_;
  std::vector<double> log_probs_;
  double log_partition_;
};

/// Throws DomainError(field) unless T is finite and strictly positive.
void require_temperature(double temperature, const char* field = "T");

ThermalState gibbs_state(const Spectrum& s, double temperature);

double mean_energy(const ThermalState& st);

/// <H> - E_0, evaluated without reintroducing the ground energy.
double mean_excitation(const ThermalState& st);

/// <(H - <H>)^2>, never negative.
double energy_variance(const ThermalState& st);

/// c_V = <dH^2> / T^2 (canonical ensemble, k_B = 1).
double specific_heat(const Spectrum& s, double temperature);

}  // namespace qthermo
