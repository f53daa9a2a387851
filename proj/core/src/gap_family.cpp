#include "qthermo/gap_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qthermo/error.hpp"
#include "qthermo/lowtemp.hpp"

namespace qthermo {

TabulatedGap::TabulatedGap(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw DomainError("table", "a gap table needs at least two points");
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("table", "entries must be finite");
    if (y < 0.0) throw DomainError("table", "tabulated gaps must be non-negative");
  }
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].first > points[i - 1].first)) {
      throw DomainError("table", "lambda values must be distinct");
    }
  }
  for (const auto& [x, y] : points) {
    xs_.push_back(x);
    ys_.push_back(y);
  }

  const std::size_t n = xs_.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs_[k + 1] - xs_[k];
    delta[k] = (ys_[k + 1] - ys_[k]) / h[k];
  }
  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  // One-sided three-point end slopes, clipped to keep the ends monotone.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) {
      d = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) {
      d = 3.0 * d0;
    }
    return d;
  };
  slopes_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double TabulatedGap::operator()(double lambda) const {
  if (lambda <= xs_.front()) return ys_.front();
  if (lambda >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), lambda);
  const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double h = xs_[k + 1] - xs_[k];
  const double t = (lambda - xs_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  const double v = h00 * ys_[k] + h10 * h * slopes_[k] + h01 * ys_[k + 1] + h11 * h * slopes_[k + 1];
  return std::max(v, 0.0);
}

namespace {

struct Evaluate {
  double lambda;
  double operator()(const LinearGap& c) const { return c.slope * lambda + c.intercept; }
  double operator()(const QuadraticGap& c) const {
    const double d = lambda - c.center;
    return c.curvature * d * d + c.minimum;
  }
  double operator()(const TabulatedGap& c) const { return c(lambda); }
};

}  // namespace

double evaluate_gap(const GapCurve& curve, double lambda) {
  return std::visit(Evaluate{lambda}, curve);
}

std::string_view gap_curve_kind(const GapCurve& curve) {
  switch (curve.index()) {
    case 0: return "linear";
    case 1: return "quadratic";
    default: return "table";
  }
}

GapFamily::GapFamily(GapCurve first, Interval domain, std::string description,
                     std::optional<GapCurve> second)
    : first_(std::move(first)),
      second_(std::move(second)),
      domain_(domain),
      description_(std::move(description)) {
  if (!std::isfinite(domain_.lo) || !std::isfinite(domain_.hi) || !(domain_.hi > domain_.lo)) {
    throw DomainError("lambda_min", "domain must be a finite interval with lambda_min < lambda_max");
  }
  auto check_table = [&](const GapCurve& c) {
    if (const auto* t = std::get_if<TabulatedGap>(&c)) {
      const Interval r = t->range();
      if (domain_.lo < r.lo || domain_.hi > r.hi) {
        throw DomainError("lambda_max", "domain extends beyond the tabulated range");
      }
    }
  };
  check_table(first_);
  if (second_) check_table(*second_);

  for (int i = 0; i <= kTuneGridPoints; ++i) {
    const double lam = domain_.lo + domain_.width() * i / kTuneGridPoints;
    const double g1 = gap(lam);
    if (!std::isfinite(g1) || g1 < 0.0) {
      throw DomainError("gap", "gap must be finite and non-negative on the domain (lambda = " +
                                   std::to_string(lam) + ")");
    }
    if (second_) {
      const double g2 = evaluate_gap(*second_, lam);
      if (!std::isfinite(g2) || g2 < g1) {
        throw DomainError("second_gap", "second gap must be finite and >= first gap (lambda = " +
                                            std::to_string(lam) + ")");
      }
    }
  }
}

double GapFamily::second_gap(double lambda) const {
  if (!second_) throw DomainError("second_gap", "family has a single gap");
  return evaluate_gap(*second_, lambda);
}

TuneResult tune_gap(const GapFamily& family, double temperature, double tol) {
  require_temperature(temperature);
  if (!(tol > 0.0)) throw DomainError("tol", "tolerance must be positive");

  int evaluations = 0;
  auto objective = [&](double lam) {
    ++evaluations;
    const VarianceBound b =
        family.three_level()
            ? three_level_crb(temperature, family.gap(lam), family.second_gap(lam))
            : two_level_crb(temperature, family.gap(lam));
    return is_unbounded(b) ? std::numeric_limits<double>::infinity() : std::get<double>(b);
  };

  const Interval dom = family.domain();
  double best_lam = dom.lo;
  double best = objective(dom.lo);
  bool converged = true;
  auto consider = [&](double lam, double val) {
    if (val < best) {
      best = val;
      best_lam = lam;
    }
  };
  consider(dom.hi, objective(dom.hi));

  auto refine = [&](double a, double b) {
    const ScalarMinimum m = brent_minimize(objective, a, b, tol);
    converged = converged && m.converged;
    consider(m.argmin, m.value);
  };

  std::string method;
  const bool two_level = !family.three_level();
  if (two_level && std::holds_alternative<LinearGap>(family.first())) {
    // g is unimodal and the gap is monotone in lambda.
    method = "golden-section";
    refine(dom.lo, dom.hi);
  } else if (two_level && std::holds_alternative<QuadraticGap>(family.first())) {
    // Monotone on either side of the vertex; each side is unimodal.
    method = "golden-section-split";
    const double c = std::get<QuadraticGap>(family.first()).center;
    if (c > dom.lo && c < dom.hi) {
      consider(c, objective(c));
      refine(dom.lo, c);
      refine(c, dom.hi);
    } else {
      refine(dom.lo, dom.hi);
    }
  } else {
    method = "grid-refine";
    const double step = dom.width() / (kTuneGridPoints - 1);
    int best_i = 0;
    double best_grid = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kTuneGridPoints; ++i) {
      const double lam = (i == kTuneGridPoints - 1) ? dom.hi : dom.lo + step * i;
      const double v = objective(lam);
      consider(lam, v);
      if (v < best_grid) {
        best_grid = v;
        best_i = i;
      }
    }
    if (std::isfinite(best_grid)) {
      const double a = dom.lo + step * std::max(0, best_i - 1);
      const double b = std::min(dom.hi, dom.lo + step * std::min(kTuneGridPoints - 1, best_i + 1));
      refine(a, b);
    }
  }

  if (!std::isfinite(best)) {
    throw DomainError("gap", "gap vanishes on the whole domain; the bound is unbounded everywhere");
  }

  TuneResult r;
  r.lambda = best_lam;
  r.gap = family.gap(best_lam);
  if (family.three_level()) r.second_gap = family.second_gap(best_lam);
  r.bound = best;
  r.bound_over_t2 = best / (temperature * temperature);
  r.method = std::move(method);
  r.converged = converged;
  r.evaluations = evaluations;
  return r;
}

}  // namespace qthermo
