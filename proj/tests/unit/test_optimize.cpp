#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qthermo/error.hpp"
#include "qthermo/optimize.hpp"

using namespace qthermo;
using Catch::Approx;

TEST_CASE("brent_minimize on smooth unimodal functions", "[optimize]") {
  const auto quad = brent_minimize([](double x) { return (x - 1.25) * (x - 1.25) + 3.0; }, -4.0, 9.0, 1e-12);
  CHECK(quad.converged);
  CHECK(quad.argmin == Approx(1.25).margin(1e-7));
  CHECK(quad.value == Approx(3.0).epsilon(1e-14));

  const auto cosine = brent_minimize([](double x) { return std::cos(x); }, 2.0, 4.5, 1e-10);
  CHECK(cosine.argmin == Approx(M_PI).margin(1e-7));

  // Minimum at the left edge: converges towards the edge.
  const auto edge = brent_minimize([](double x) { return x; }, 0.0, 1.0, 1e-10);
  CHECK(edge.argmin == Approx(0.0).margin(1e-7));
}

TEST_CASE("brent_minimize tolerates infinite values", "[optimize]") {
  const auto r = brent_minimize(
      [](double x) { return x < 0.3 ? std::numeric_limits<double>::infinity() : (x - 0.7) * (x - 0.7); },
      0.0, 1.0, 1e-10);
  CHECK(r.argmin == Approx(0.7).margin(1e-6));
}

TEST_CASE("bisect_root", "[optimize]") {
  const auto r = bisect_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-14);
  CHECK(r.converged);
  CHECK(r.root == Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(bisect_root([](double x) { return x; }, 0.0, 1.0, 1e-10).root == 0.0);
  CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-10), DomainError);
}

TEST_CASE("nelder_mead_2d", "[optimize]") {
  const auto bowl = nelder_mead_2d(
      [](double x, double y) { return (x - 1.0) * (x - 1.0) + 4.0 * (y + 0.5) * (y + 0.5); }, {3.0, 3.0}, 0.5,
      1e-9);
  CHECK(bowl.converged);
  CHECK(bowl.argmin[0] == Approx(1.0).margin(1e-6));
  CHECK(bowl.argmin[1] == Approx(-0.5).margin(1e-6));

  const auto rosen = nelder_mead_2d(
      [](double x, double y) { return 100.0 * (y - x * x) * (y - x * x) + (1.0 - x) * (1.0 - x); }, {-1.2, 1.0},
      0.2, 1e-10, 5000);
  CHECK(rosen.argmin[0] == Approx(1.0).margin(1e-4));
  CHECK(rosen.argmin[1] == Approx(1.0).margin(1e-4));
}
