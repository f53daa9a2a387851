#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qthermo/optimize.hpp"

namespace qthermo {

/// gap(lambda) = slope * lambda + intercept
struct LinearGap {
  double slope = 1.0;
  double intercept = 0.0;
};

/// gap(lambda) = curvature * (lambda - center)^2 + minimum
struct QuadraticGap {
  double curvature = 1.0;
  double center = 0.0;
  double minimum = 0.0;
};

/// Piecewise monotone cubic (Fritsch-Carlson / PCHIP) interpolant through
/// tabulated (lambda, gap) pairs. It never overshoots the data, so
/// non-negative tables stay non-negative.
class TabulatedGap {
 public:
  explicit TabulatedGap(std::vector<std::pair<double, double>> points);

  double operator()(double lambda) const;
  Interval range() const noexcept { return {xs_.front(), xs_.back()}; }
  const std::vector<double>& lambdas() const noexcept { return xs_; }
  const std::vector<double>& gaps() const noexcept { return ys_; }

 private:
  std::vector<double> xs_, ys_, slopes_;
};

using GapCurve = std::variant<LinearGap, QuadraticGap, TabulatedGap>;

double evaluate_gap(const GapCurve& curve, double lambda);
std::string_view gap_curve_kind(const GapCurve& curve);

/// A control-parameter family of gaps on [lambda_min, lambda_max]: one gap
/// for a two-level system, or (gap1, gap2) with gap2 >= gap1 for three levels.
class GapFamily {
 public:
  /// Validates the family on a dense grid of its domain: every gap finite and
  /// non-negative, and gap2 >= gap1 when a second curve is present.
  GapFamily(GapCurve first, Interval domain, std::string description = {},
            std::optional<GapCurve> second = std::nullopt);

  const GapCurve& first() const noexcept { return first_; }
  const std::optional<GapCurve>& second() const noexcept { return second_; }
  Interval domain() const noexcept { return domain_; }
  const std::string& description() const noexcept { return description_; }
  bool three_level() const noexcept { return second_.has_value(); }

  double gap(double lambda) const { return evaluate_gap(first_, lambda); }
  double second_gap(double lambda) const;

 private:
  GapCurve first_;
  std::optional<GapCurve> second_;
  Interval domain_;
  std::string description_;
};

struct TuneResult {
  double lambda = 0.0;
  double gap = 0.0;
  std::optional<double> second_gap;
  double bound = 0.0;
  double bound_over_t2 = 0.0;
  /// "golden-section", "golden-section-split" or "grid-refine".
  std::string method;
  bool converged = false;
  int evaluations = 0;
};

inline constexpr int kTuneGridPoints = 1000;

/// Finds the control value minimising the Cramer-Rao floor at temperature T:
/// T^2 g(gap/T) for two-level families, T^2 h(gap1/T, gap2/T) for three.
/// Domain endpoints are always considered, so boundary optima are exact.
/// Throws DomainError when the floor is unbounded on the whole domain.
TuneResult tune_gap(const GapFamily& family, double temperature, double tol = 1e-10);

}  // namespace qthermo
