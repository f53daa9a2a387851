#pragma once

#include <array>

#include "qthermo/fisher.hpp"
#include "qthermo/optimize.hpp"

namespace qthermo {

/// Dimensionless Cramer-Rao factor of a two-level system,
///   g(x) = 2 (1 + cosh x) / x^2,   x = gap / T,
/// so that Var(T_hat) >= T^2 g(x) for a single energy measurement.
/// Above x = 700 it is evaluated as exp(x + 2 log1p(e^-x) - 2 log x).
/// Throws DomainError for x <= 0 or non-finite x.
double two_level_factor(double x);

/// log g(x), finite for every positive finite x.
double log_two_level_factor(double x);

/// Dimensionless Cramer-Rao factor of a three-level system with x = gap1/T,
/// y = gap2/T:
///   h(x, y) = e^{-x-y} (e^x + e^y + e^{x+y})^2
///             / ((1 + e^y) x^2 - 2 x y + (1 + e^x) y^2).
/// Evaluated with the larger exponent factored out of numerator and
/// denominator. The denominator equals (x-y)^2 + x^2 e^y + y^2 e^x, which is
/// positive on the open quadrant; a zero (only reachable through underflow of
/// tiny arguments) raises DomainError("denominator").
double three_level_factor(double x, double y);

/// h(x, x) = (2 + e^x)^2 / (2 x^2 e^x).
double three_level_diagonal(double x);

inline constexpr Interval kDefaultTwoLevelBracket{0.5, 10.0};
inline constexpr Interval kDefaultThreeLevelDomain{0.0, 50.0};
inline constexpr double kDefaultMinimizeTolerance = 1e-10;

struct MinimumResult {
  double argmin = 0.0;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Minimum of h over (0, 50]^2, located on the symmetric diagonal and then
/// confirmed by an unconstrained two-dimensional polish.
struct PairMinimumResult {
  std::array<double, 2> argmin{};
  double value = 0.0;
  bool converged = false;
  int iterations = 0;

  // Diagnostics of the confirmation step.
  std::array<double, 2> polish_argmin{};
  double polish_value = 0.0;
  int polish_iterations = 0;
  /// Central-difference gradient of h at argmin.
  std::array<double, 2> gradient{};
  bool stationary = false;
};

/// Minimises g on `bracket`: Brent search followed by bisection on the
/// stationarity condition x sinh x = 2 (1 + cosh x). Throws DomainError if the
/// bracket has no interior minimum.
MinimumResult minimize_two_level(Interval bracket = kDefaultTwoLevelBracket,
                                 double tol = kDefaultMinimizeTolerance);

PairMinimumResult minimize_three_level(double tol = kDefaultMinimizeTolerance);

/// T^2 g(gap/T); Unbounded when gap == 0. Throws DomainError for gap < 0.
VarianceBound two_level_crb(double temperature, double gap);

/// T^2 h(gap1/T, gap2/T) for gaps 0 < gap1 <= gap2.
VarianceBound three_level_crb(double temperature, double gap1, double gap2);

/// two_level_crb * gap^2 / (T^4 e^{gap/T}), evaluated in log space. Tends to
/// 1 as T -> 0, which is the statement Var(T_hat) ~ T^4 e^{gap/T} / gap^2.
double gapped_divergence_factor(double temperature, double gap);

}  // namespace qthermo
