#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "qthermo/error.hpp"
#include "qthermo/fisher.hpp"
#include "qthermo/lowtemp.hpp"

using namespace qthermo;
using Catch::Approx;

TEST_CASE("sld eigenvalues", "[fisher]") {
  const auto one = sld_eigenvalues(make_spectrum({{2.0, 1}}), 0.3);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 0.0);

  const Spectrum two = make_spectrum({{0.0, 1}, {1.5, 1}});
  for (double t : {0.1, 0.7, 4.0}) {
    const auto l = sld_eigenvalues(two, t);
    const ThermalState st = gibbs_state(two, t);
    const double h = mean_energy(st);
    CHECK(l[0] == Approx(-h / (t * t)).epsilon(1e-13));
    CHECK(l[1] == Approx((1.5 - h) / (t * t)).epsilon(1e-13));
    CHECK(st.prob(0) * l[0] + st.prob(1) * l[1] == Approx(0.0).margin(1e-12));
  }

  const Spectrum three = make_spectrum({{0.0, 1}, {1.0, 1}, {2.0, 1}});
  const double h = static_cast<double>(oracle::mean_energy(three, 1.0L));
  const auto l = sld_eigenvalues(three, 1.0);
  for (int n = 0; n < 3; ++n) CHECK(l[n] == Approx(n - h).epsilon(1e-13));

  CHECK_THROWS_AS(sld_eigenvalues(three, 0.0), DomainError);
}

TEST_CASE("fisher information examples", "[fisher]") {
  CHECK(fisher_information(make_spectrum({{1.0, 1}}), 2.0) == 0.0);
  for (double t : {0.2, 1.0, 5.0}) {
    for (double gap : {0.3, 1.0, 2.4}) {
      const double f = fisher_information(make_spectrum({{0.0, 1}, {gap, 1}}), t);
      CHECK(oracle::rel_diff(f, 1.0 / (t * t * two_level_factor(gap / t))) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(fisher_information(make_spectrum({{0.0, 1}, {1.0, 1}}), -2.0), DomainError);
}

TEST_CASE("fisher report examples", "[fisher]") {
  const FisherReport single = fisher_report(make_spectrum({{0.0, 1}}), 1.0);
  CHECK(is_unbounded(single.crb_single_shot));
  CHECK(is_unbounded(single.crb_m_shots(10)));

  const Spectrum two = make_spectrum({{0.0, 1}, {1.0, 1}});
  const double t = 1.0 / 2.4;
  const FisherReport r = fisher_report(two, t);
  REQUIRE_FALSE(is_unbounded(r.crb_single_shot));
  const double factor = std::get<double>(r.crb_single_shot) / (t * t);
  CHECK(factor == Approx(2.27).margin(0.01));
  CHECK(factor == Approx(2.2767177663074677).epsilon(1e-12));

  const FisherReport unit = fisher_report(two, 1.0);
  CHECK(std::get<double>(unit.crb_m_shots(100)) == std::get<double>(unit.crb_single_shot) / 100.0);
  CHECK_THROWS_AS(unit.crb_m_shots(0), DomainError);
  CHECK_THROWS_AS(fisher_report(two, 0.0), DomainError);
}

TEST_CASE("fisher report invariants on random spectra", "[fisher]") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const Spectrum s = oracle::random_spectrum(rng);
    const double t = oracle::random_temperature(rng);
    const FisherReport r = fisher_report(s, t);
    const ThermalState st = gibbs_state(s, t);
    INFO("levels=" << s.size() << " T=" << t);

    CHECK(oracle::rel_diff(r.fisher, r.specific_heat / (t * t)) <= 1e-12);
    CHECK(oracle::rel_diff(r.fisher, fisher_information(s, t)) <= 1e-12);

    double tr_l = 0.0, tr_l2 = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n) {
      tr_l += st.prob(n) * r.sld_eigenvalues[n];
      tr_l2 += st.prob(n) * r.sld_eigenvalues[n] * r.sld_eigenvalues[n];
    }
    // Tr[rho L] is a difference of O(spread/T^2) terms.
    const double scale = std::max(1.0, s.spread() / (t * t));
    CHECK(std::abs(tr_l) <= 1e-12 * scale);
    CHECK(oracle::rel_diff(tr_l2, r.fisher) <= 1e-12);

    if (r.fisher > 0.0) {
      CHECK(std::get<double>(r.crb_single_shot) == 1.0 / r.fisher);
    } else {
      CHECK(is_unbounded(r.crb_single_shot));
    }
  }
}

TEST_CASE("fisher information equals the finite-difference score variance", "[fisher]") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const Spectrum s = oracle::random_spectrum(rng);
    const double t = oracle::random_temperature(rng);
    const double f = fisher_information(s, t);
    const double fd = static_cast<double>(oracle::fisher_fd(s, t));
    INFO("levels=" << s.size() << " T=" << t << " F=" << f << " fd=" << fd);
    if (s.size() == 1) {
      CHECK(f == 0.0);
    } else {
      CHECK(oracle::rel_diff(f, fd) <= 1e-6);
    }
  }
}

TEST_CASE("fisher information shift invariance and scale covariance", "[fisher]") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const Spectrum s = oracle::random_spectrum(rng, 8, 0.0, 10.0);
    if (s.size() < 2) continue;
    const double t = oracle::random_temperature(rng, 0.1, 10.0);
    const double f = fisher_information(s, t);
    const double c = std::uniform_real_distribution<double>(-20.0, 20.0)(rng);
    CHECK(oracle::rel_diff(fisher_information(oracle::shifted(s, c), t), f) <= 1e-12);

    const double a = std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
    const Spectrum sa = oracle::scaled(s, a);
    if (sa.size() != s.size()) continue;
    CHECK(oracle::rel_diff(fisher_information(sa, a * t), f / (a * a)) <= 1e-12);
    const FisherReport r = fisher_report(s, t), ra = fisher_report(sa, a * t);
    CHECK(oracle::rel_diff(std::get<double>(ra.crb_single_shot), a * a * std::get<double>(r.crb_single_shot)) <=
          1e-12);
  }
}
