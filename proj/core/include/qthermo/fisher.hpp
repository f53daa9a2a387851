#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "qthermo/thermal.hpp"

namespace qthermo {

/// Marker for a variance floor that does not exist because the measurement
/// carries zero information about temperature.
struct Unbounded {
  bool operator==(const Unbounded&) const = default;
};

/// A Cramer-Rao variance floor (units of T^2), or Unbounded.
using VarianceBound = std::variant<double, Unbounded>;

inline bool is_unbounded(const VarianceBound& b) noexcept {
  return std::holds_alternative<Unbounded>(b);
}

/// 1/F, or Unbounded for F == 0.
VarianceBound bound_from_information(double fisher);

/// Divides a bound by the number of independent shots.
VarianceBound per_shots(const VarianceBound& single_shot, std::uint64_t shots);

struct FisherReport {
  double temperature = 0.0;
  double fisher = 0.0;
  double specific_heat = 0.0;
  /// Eigenvalues of the symmetric logarithmic derivative in the energy basis,
  /// one per level, in spectrum order.
  std::vector<double> sld_eigenvalues;
  VarianceBound crb_single_shot = Unbounded{};

  VarianceBound crb_m_shots(std::uint64_t shots) const {
    return per_shots(crb_single_shot, shots);
  }
};

/// (E_n - <H>) / T^2 for every level. The Gibbs state and its SLD are
/// co-diagonal, so these eigenvalues define the optimal (energy) measurement.
std::vector<double> sld_eigenvalues(const Spectrum& s, double temperature);

/// Fisher information of an energy measurement: <dH^2> / T^4.
double fisher_information(const Spectrum& s, double temperature);

FisherReport fisher_report(const Spectrum& s, double temperature);

}  // namespace qthermo
