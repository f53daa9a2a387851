#include "qthermo/lowtemp.hpp"

#include <algorithm>
#include <cmath>

#include "qthermo/error.hpp"

namespace qthermo {

namespace {

constexpr double kAsymptoticSwitch = 700.0;

void require_positive(double v, const char* field) {
  if (!std::isfinite(v)) throw DomainError(field, "argument must be finite");
  if (v <= 0.0) throw DomainError(field, "argument must be strictly positive");
}

void require_gap(double gap, const char* field) {
  if (!std::isfinite(gap)) throw DomainError(field, "gap must be finite");
  if (gap < 0.0) throw DomainError(field, "gap must be non-negative");
}

// x sinh x - 2(1 + cosh x), multiplied by 2 e^{-x} so it stays finite.
double two_level_stationarity(double x) {
  const double em = std::exp(-x);
  return x * (1.0 - em * em) - 2.0 * (1.0 + em) * (1.0 + em);
}

// d/dx of h(x, x) up to a positive factor: x (e^x - 4 e^{-x}) - 2 (e^x + 4 + 4 e^{-x}),
// scaled by e^{-x}.
double diagonal_stationarity(double x) {
  const double em = std::exp(-x);
  return x * (1.0 - 4.0 * em * em) - 2.0 * (1.0 + 4.0 * em + 4.0 * em * em);
}

}  // namespace

double two_level_factor(double x) {
  require_positive(x, "x");
  if (x > kAsymptoticSwitch) return std::exp(log_two_level_factor(x));
  return 2.0 * (1.0 + std::cosh(x)) / (x * x);
}

double log_two_level_factor(double x) {
  require_positive(x, "x");
  // 2 (1 + cosh x) = e^x (1 + e^{-x})^2
  return x + 2.0 * std::log1p(std::exp(-x)) - 2.0 * std::log(x);
}

double three_level_factor(double x, double y) {
  require_positive(x, "x");
  require_positive(y, "y");
  const double m = std::max(x, y);
  const double lo = std::min(x, y);
  const double em = std::exp(-m);
  const double ex = std::exp(-x);
  const double ey = std::exp(-y);

  // Numerator and denominator divided by e^m; numerator becomes e^{lo} Z^2.
  const double denom = (em + std::exp(y - m)) * x * x - 2.0 * x * y * em +
                       (em + std::exp(x - m)) * y * y;
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw DomainError("denominator", "three-level factor denominator vanishes");
  }
  const double z = 1.0 + ex + ey;
  return std::exp(lo + 2.0 * std::log(z) - std::log(denom));
}

double three_level_diagonal(double x) {
  require_positive(x, "x");
  const double em = std::exp(-x);
  // (2 + e^x)^2 e^{-x} / (2 x^2) = (e^x + 4 + 4 e^{-x}) / (2 x^2)
  if (x > kAsymptoticSwitch) {
    return std::exp(x + std::log1p(4.0 * em + 4.0 * em * em) - std::log(2.0 * x * x));
  }
  return (std::exp(x) + 4.0 + 4.0 * em) / (2.0 * x * x);
}

MinimumResult minimize_two_level(Interval bracket, double tol) {
  if (!(tol > 0.0)) throw DomainError("tol", "tolerance must be positive");
  if (!(bracket.lo > 0.0) || !(bracket.hi > bracket.lo) || !std::isfinite(bracket.hi)) {
    throw DomainError("bracket", "bracket must be a finite interval inside (0, inf)");
  }
  if (!(two_level_stationarity(bracket.lo) < 0.0 && two_level_stationarity(bracket.hi) > 0.0)) {
    throw DomainError("bracket", "bracket does not contain an interior minimum of g");
  }

  const ScalarMinimum coarse =
      brent_minimize([](double x) { return two_level_factor(x); }, bracket.lo, bracket.hi, tol);

  // Tighten around the Brent estimate; fall back to the full bracket if the
  // sign change is not local.
  const double pad = std::max(1e-6, 1e-6 * coarse.argmin);
  double a = std::max(bracket.lo, coarse.argmin - pad);
  double b = std::min(bracket.hi, coarse.argmin + pad);
  if (!(two_level_stationarity(a) < 0.0 && two_level_stationarity(b) > 0.0)) {
    a = bracket.lo;
    b = bracket.hi;
  }
  const RootResult root = bisect_root(two_level_stationarity, a, b, tol);

  MinimumResult r;
  r.argmin = root.root;
  r.value = two_level_factor(root.root);
  r.converged = coarse.converged && root.converged;
  r.iterations = coarse.iterations + root.iterations;
  return r;
}

PairMinimumResult minimize_three_level(double tol) {
  if (!(tol > 0.0)) throw DomainError("tol", "tolerance must be positive");

  // h(x, x) -> infinity at both ends of (0, 50], so [0.5, 50] brackets it.
  const double lo = 0.5;
  const double hi = kDefaultThreeLevelDomain.hi;
  const ScalarMinimum coarse = brent_minimize(three_level_diagonal, lo, hi, tol);
  const double pad = std::max(1e-6, 1e-6 * coarse.argmin);
  double a = std::max(lo, coarse.argmin - pad);
  double b = std::min(hi, coarse.argmin + pad);
  if (!(diagonal_stationarity(a) < 0.0 && diagonal_stationarity(b) > 0.0)) {
    a = lo;
    b = hi;
  }
  const RootResult root = bisect_root(diagonal_stationarity, a, b, tol);
  const double xd = root.root;

  PairMinimumResult r;
  r.argmin = {xd, xd};
  r.value = three_level_factor(xd, xd);
  r.iterations = coarse.iterations + root.iterations;

  // Unconstrained polish from a point displaced off the diagonal, so that a
  // saddle on the diagonal would be escaped rather than confirmed.
  auto h = [](double x, double y) {
    if (!(x > 0.0) || !(y > 0.0) || x > 50.0 || y > 50.0) {
      return std::numeric_limits<double>::infinity();
    }
    return three_level_factor(x, y);
  };
  const double polish_tol = std::max(tol, 1e-7);
  const PlanarMinimum nm = nelder_mead_2d(h, {xd + 0.05, xd - 0.03}, 0.1, polish_tol);
  r.polish_argmin = nm.argmin;
  r.polish_value = nm.value;
  r.polish_iterations = nm.iterations;

  const double step = 1e-5;
  r.gradient = {(h(xd + step, xd) - h(xd - step, xd)) / (2.0 * step),
                (h(xd, xd + step) - h(xd, xd - step)) / (2.0 * step)};
  const double drift = std::hypot(nm.argmin[0] - xd, nm.argmin[1] - xd);
  r.stationary = std::hypot(r.gradient[0], r.gradient[1]) < 1e-6 && drift < 1e-3 &&
                 nm.value >= r.value * (1.0 - 1e-12);
  r.converged = coarse.converged && root.converged && nm.converged && r.stationary;
  return r;
}

VarianceBound two_level_crb(double temperature, double gap) {
  require_temperature(temperature);
  require_gap(gap, "gap");
  if (gap == 0.0) return Unbounded{};
  return temperature * temperature * two_level_factor(gap / temperature);
}

VarianceBound three_level_crb(double temperature, double gap1, double gap2) {
  require_temperature(temperature);
  require_gap(gap1, "gap1");
  require_gap(gap2, "gap2");
  if (gap2 < gap1) throw DomainError("gap2", "second gap must not be below the first");
  if (gap2 == 0.0) return Unbounded{};
  if (gap1 == 0.0) {
    // Degenerate ground doublet: fall back to the numeric Fisher information.
    const Spectrum s = make_spectrum({{0.0, 1}, {gap1, 1}, {gap2, 1}});
    return bound_from_information(fisher_information(s, temperature));
  }
  return temperature * temperature * three_level_factor(gap1 / temperature, gap2 / temperature);
}

double gapped_divergence_factor(double temperature, double gap) {
  require_temperature(temperature);
  require_positive(gap, "gap");
  const double x = gap / temperature;
  // log g(x) + 2 log x - x collapses to 2 log1p(e^{-x}).
  return std::exp(2.0 * std::log1p(std::exp(-x)));
}

}  // namespace qthermo
