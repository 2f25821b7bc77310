#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle_values.hpp"
#include "oracles.hpp"
#include "sibuya/dist.hpp"

using namespace sibuya;

TEST_SUITE("dist") {
  TEST_CASE("progeny law and its tail") {
    const auto pmf = progeny_pmf(AlphaParam(1, 3), 6);
    for (unsigned n = 1; n <= 6; ++n) CHECK(pmf.at(n) == parse_rational(frozen::kProgenyAt1over3[n - 1]));
    REQUIRE(pmf.tail);
    CHECK(pmf.is_normalized());
    CHECK(pmf.is_nonnegative());
    // P(N > n) = [1 - alpha]_n / n!.
    CHECK(*pmf.tail == rising_factorial(Rational(2, 3), 6) / Rational(factorial(6)));
    CHECK(progeny_pmf(AlphaParam(1, 2), 1).at(1) == Rational(1, 2));
    CHECK_THROWS_AS(progeny_pmf(AlphaParam(1, 2), 0), std::invalid_argument);
  }

  TEST_CASE("float progeny law keeps the tail accurate") {
    const AlphaParam a(2, 3);
    const auto exact = progeny_pmf(a, 40);
    const auto fl = progeny_pmf_float(a, 40);
    CHECK(*fl.tail == doctest::Approx(to_double(*exact.tail)).epsilon(1e-13));
    CHECK(fl.is_normalized());
    CHECK(fl.mass[39] == doctest::Approx(to_double(exact.mass[39])).epsilon(1e-13));
  }

  TEST_CASE("low-order K_n laws") {
    for (const auto& a : {AlphaParam(1, 2), AlphaParam(1, 3), AlphaParam(5, 7)}) {
      const Rational& x = a.exact();
      const auto k2 = kn_pmf(a, 2);
      CHECK(k2.at(1) == (1 - x) / (x + 1));
      CHECK(k2.at(2) == 2 * x / (x + 1));
      const auto k3 = kn_pmf(a, 3);
      CHECK(k3.at(1) == (1 - x) * (2 - x) / ((x + 1) * (x + 2)));
      CHECK(k3.at(2) == 6 * x * (1 - x) / ((x + 1) * (x + 2)));
      CHECK(k3.at(3) == 6 * x * x / ((x + 1) * (x + 2)));
    }
    const auto k4 = kn_pmf(AlphaParam(2, 5), 4);
    for (unsigned k = 1; k <= 4; ++k) CHECK(k4.at(k) == parse_rational(frozen::kK4At2over5[k - 1]));
    CHECK(kn_pmf(AlphaParam(1, 2), 1).at(1) == 1);
  }

  TEST_CASE("K_n law equals path enumeration") {
    for (const auto& a : {AlphaParam(1, 5), AlphaParam(3, 4)}) {
      for (unsigned n = 1; n <= 10; ++n) {
        const auto law = oracle::kn_law_by_paths(a.exact(), n);
        const auto pmf = kn_pmf(a, n);
        for (unsigned k = 1; k <= n; ++k) {
          const auto it = law.find(k);
          CHECK(pmf.at(k) == (it == law.end() ? Rational(0) : it->second));
        }
      }
    }
  }

  TEST_CASE("three K_n routes agree") {
    for (const auto& a : {AlphaParam(1, 5), AlphaParam(1, 2), AlphaParam(2, 3)}) {
      for (unsigned n = 1; n <= 14; ++n) {
        const auto rec = kn_pmf(a, n);
        CHECK(rec.is_normalized());
        CHECK(kn_pmf_from_counts(a, n).mass == rec.mass);
        CHECK(kn_pmf_from_lagrange(a, n).mass == rec.mass);
      }
    }
  }

  TEST_CASE("mean of K_n") {
    CHECK(kn_mean<Rational>(AlphaParam(1, 2), 10) == parse_rational(frozen::kMeanK10AtHalf));
    CHECK(kn_pmf(AlphaParam(1, 2), 10).mean() == parse_rational(frozen::kMeanK10AtHalf));
    CHECK(kn_mean<double>(AlphaParam(1, 2), 10) == doctest::Approx(to_double(parse_rational(frozen::kMeanK10AtHalf))));
    CHECK(kn_mean_ode(AlphaParam(1, 2), 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(kn_mean_ode(AlphaParam(1, 2), 0.5), std::domain_error);
  }

  TEST_CASE("occupancy law is exchangeable and normalized") {
    const AlphaParam a(2, 7);
    for (unsigned n = 1; n <= 8; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        Rational total(0);
        for (const auto& [parts, mass] : occupancy_law(a, n, k)) {
          total += mass;
          auto p = parts.parts();
          std::sort(p.begin(), p.end());
          do {
            CHECK(occupancy_pmf(a, OccupancyVector(p)) == mass);
          } while (std::next_permutation(p.begin(), p.end()));
        }
        CHECK(total == 1);
      }
    }
    CHECK_THROWS_AS(OccupancyVector({2, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(OccupancyVector({}), std::invalid_argument);
  }

  TEST_CASE("marginal of the first tree") {
    const auto m = marginal_pmf(AlphaParam(1, 2), 4, 2);
    CHECK(m.at(1) == Rational(2, 5));
    CHECK(m.at(2) == Rational(1, 5));
    CHECK(m.at(3) == Rational(2, 5));
    CHECK(m.mean() == 2);
    for (unsigned n = 1; n <= 9; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        const auto mk = marginal_pmf(AlphaParam(3, 5), n, k);
        CHECK(mk.is_normalized());
        CHECK(mk.mean() == Rational(n, k));
      }
    }
  }

  TEST_CASE("tilted K_n law") {
    const AlphaParam a(1, 2);
    CHECK(tilted_kn_pmf(a, Rational(1), 7).mass == kn_pmf(a, 7).mass);
    const auto t = tilted_kn_pmf(a, Rational(1, 3), 7);
    CHECK(t.is_normalized());
    CHECK(t.mean() > kn_pmf(a, 7).mean());
    // P(k) / P(k') = c1^{k'-k} C_{n,k} / C_{n,k'}.
    const auto base = kn_pmf(a, 7);
    CHECK(t.at(2) / t.at(3) == Rational(1, 3) * base.at(2) / base.at(3));
    CHECK_THROWS_AS(tilted_kn_pmf(a, Rational(3, 2), 4), std::domain_error);
    CHECK_THROWS_AS(tilted_kn_pmf(a, Rational(0), 4), std::domain_error);
  }

  TEST_CASE("Mittag-Leffler moments") {
    CHECK(ml_moment(AlphaParam(1, 2), 0.5, 0.0) == 1.0);
    CHECK(ml_moment(AlphaParam(1, 2), 0.5, 1.0) == doctest::Approx(frozen::kSqrtPi).epsilon(1e-13));
    CHECK(ml_variance(AlphaParam(1, 2), 0.5) == doctest::Approx(4.0 - M_PI).epsilon(1e-12));
    CHECK(ml_moment(AlphaParam(1, 3), 1.0, 2.0) ==
          doctest::Approx(frozen::kMlSecondMoment_1over3_theta1).epsilon(1e-13));
    CHECK_THROWS_AS(ml_moment(AlphaParam(1, 2), 0.5, -1.0), std::domain_error);
    CHECK_THROWS_AS(ml_moment(AlphaParam(1, 2), 0.0, 1.0), std::domain_error);
  }

  TEST_CASE("CRP table counts") {
    const auto p = crp_sn_pmf(AlphaParam(1, 2), Rational(1), 2);
    CHECK(p.at(1) == Rational(1, 4));
    CHECK(p.at(2) == Rational(3, 4));
    CHECK(p.at(0) == 0);
    CHECK(crp_sn_pmf(AlphaParam(1, 2), 1.0, 2).at(2) == doctest::Approx(0.75));
    for (unsigned n = 1; n <= 12; ++n) {
      const auto c = crp_sn_pmf(AlphaParam(2, 5), Rational(2, 5), n);
      for (unsigned k = 1; k <= n; ++k) CHECK(c.at(k) == kn_pmf(AlphaParam(2, 5), n).at(k));
    }
    // theta = 0 and negative theta > -alpha are admissible.
    CHECK(crp_sn_pmf(AlphaParam(1, 2), Rational(0), 5).is_normalized());
    CHECK(crp_sn_pmf(AlphaParam(1, 2), Rational(-1, 4), 5).is_normalized());
    CHECK(crp_sn_pmf(AlphaParam(1, 2), Rational(7, 3), 1).at(1) == 1);
    CHECK_THROWS_AS(crp_sn_pmf(AlphaParam(1, 2), Rational(-1, 2), 3), std::domain_error);
  }

  TEST_CASE("martingale step is exact") {
    for (const auto& a : {AlphaParam(1, 3), AlphaParam(4, 5)}) {
      for (unsigned n = 1; n <= 20; ++n) {
        for (const auto& s : kn_martingale_steps(a, n)) CHECK(s.current == s.expected_next);
      }
    }
  }

  TEST_CASE("first-tree decomposition") {
    for (unsigned n = 1; n <= 12; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        const auto r = renewal_convolution(AlphaParam(3, 8), n, k);
        CHECK(r.direct == r.convolution);
      }
    }
  }
}
