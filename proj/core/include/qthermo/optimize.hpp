#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>

#include "qthermo/error.hpp"

namespace qthermo {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool operator==(const Interval&) const = default;
};

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct RootResult {
  double root = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Brent's golden-section / parabolic-interpolation minimiser on [a, b].
///
/// The achievable accuracy in x is ~sqrt(eps)*|x| because it only compares
/// function values; callers needing more should polish a stationarity
/// condition with bisect_root(). Non-finite function values force golden
/// steps.
template <std::invocable<double> F>
ScalarMinimum brent_minimize(F&& f, double a, double b, double tol, int max_iter = 500) {
  constexpr double cgold = 0.38196601125010515;  // (3 - sqrt 5) / 2
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

  double x = a + cgold * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  ScalarMinimum out;
  for (int iter = 1; iter <= max_iter; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol1 = sqrt_eps * std::abs(x) + tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
      out = {x, fx, true, iter - 1};
      return out;
    }

    bool golden = true;
    if (std::abs(e) > tol1 && std::isfinite(fx) && std::isfinite(fw) && std::isfinite(fv)) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) {
        p = -p;
      } else {
        q = -q;
      }
      r = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * r) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x < m) ? b - x : a - x;
      d = cgold * e;
    }

    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      (u < x ? b : a) = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  out = {x, fx, false, max_iter};
  return out;
}

/// Bisection for a sign change of f on [a, b]; stops when the bracket is
/// narrower than tol. Throws DomainError(field) if f(a) and f(b) share a sign.
template <std::invocable<double> F>
RootResult bisect_root(F&& f, double a, double b, double tol, const char* field = "bracket",
                       int max_iter = 400) {
  double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return {a, true, 0};
  if (fb == 0.0) return {b, true, 0};
  if ((fa < 0.0) == (fb < 0.0)) throw DomainError(field, "no sign change on the bracket");

  int iter = 0;
  while (b - a > tol && iter < max_iter) {
    ++iter;
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return {m, true, iter};
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return {0.5 * (a + b), iter < max_iter, iter};
}

struct PlanarMinimum {
  std::array<double, 2> argmin{};
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Nelder-Mead simplex minimiser in two dimensions, started from `start` with
/// an axis-aligned initial simplex of edge `scale`.
template <typename F>
  requires std::invocable<F, double, double>
PlanarMinimum nelder_mead_2d(F&& f, std::array<double, 2> start, double scale, double tol,
                             int max_iter = 2000) {
  using Point = std::array<double, 2>;
  std::array<Point, 3> p = {start, Point{start[0] + scale, start[1]},
                            Point{start[0], start[1] + scale}};
  std::array<double, 3> fp{};
  for (int i = 0; i < 3; ++i) fp[i] = f(p[i][0], p[i][1]);

  auto lerp = [](const Point& a, const Point& b, double t) {
    return Point{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  PlanarMinimum out;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::array<int, 3> idx = {0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return fp[i] < fp[j]; });
    const int best = idx[0], mid = idx[1], worst = idx[2];

    double size = 0.0;
    for (int i = 0; i < 3; ++i) {
      size = std::max(size, std::hypot(p[i][0] - p[best][0], p[i][1] - p[best][1]));
    }
    if (size <= tol && fp[worst] - fp[best] <= tol * (std::abs(fp[best]) + tol)) {
      out = {p[best], fp[best], true, iter};
      return out;
    }

    const Point centroid = {0.5 * (p[best][0] + p[mid][0]), 0.5 * (p[best][1] + p[mid][1])};
    const Point refl = lerp(p[worst], centroid, 2.0);
    const double fr = f(refl[0], refl[1]);
    if (fr < fp[best]) {
      const Point expd = lerp(p[worst], centroid, 3.0);
      const double fe = f(expd[0], expd[1]);
      if (fe < fr) {
        p[worst] = expd;
        fp[worst] = fe;
      } else {
        p[worst] = refl;
        fp[worst] = fr;
      }
      continue;
    }
    if (fr < fp[mid]) {
      p[worst] = refl;
      fp[worst] = fr;
      continue;
    }
    const bool outside = fr < fp[worst];
    const Point contr = outside ? lerp(centroid, refl, 0.5) : lerp(centroid, p[worst], 0.5);
    const double fc = f(contr[0], contr[1]);
    if (fc < (outside ? fr : fp[worst])) {
      p[worst] = contr;
      fp[worst] = fc;
      continue;
    }
    for (int i : {mid, worst}) {
      p[i] = lerp(p[best], p[i], 0.5);
      fp[i] = f(p[i][0], p[i][1]);
    }
  }

  int best = 0;
  for (int i = 1; i < 3; ++i) {
    if (fp[i] < fp[best]) best = i;
  }
  out = {p[best], fp[best], false, iter};
  return out;
}

}  // namespace qthermo
