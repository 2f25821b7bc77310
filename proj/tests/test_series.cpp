#include <doctest.h>

#include <type_traits>

#include "oracle_values.hpp"
#include "sibuya/series.hpp"

using namespace sibuya;

TEST_SUITE("series") {
  TEST_CASE("exact and float series are distinct types") {
    static_assert(!std::is_same_v<ExactSeries, FloatSeries>);
    static_assert(ExactSeries::mode == Mode::exact);
    static_assert(FloatSeries::mode == Mode::float_);
  }

  TEST_CASE("binomial series of the square root") {
    const auto s = binomial_series(Rational(1, 2), 4);
    CHECK(s[0] == 1);
    CHECK(s[1] == Rational(-1, 2));
    CHECK(s[2] == Rational(-1, 8));
    CHECK(s[3] == Rational(-1, 16));
    CHECK(s[4] == Rational(-5, 128));
  }

  TEST_CASE("Sibuya pgf coefficients are the progeny law") {
    const auto phi = sibuya_pgf_series<Rational>(AlphaParam(1, 3), 6);
    CHECK(phi[0] == 0);
    for (unsigned n = 1; n <= 6; ++n) CHECK(phi[n] == parse_rational(frozen::kProgenyAt1over3[n - 1]));
  }

  TEST_CASE("offspring law at alpha 1/2 is geometric(1/2)") {
    const auto g = offspring_series<Rational>(AlphaParam(1, 2), 12);
    Rational p(1, 2);
    for (unsigned j = 0; j <= 12; ++j) {
      CHECK(g[j] == p);
      p /= 2;
    }
  }

  TEST_CASE("reciprocal and product") {
    const auto a = sibuya_pgf_series<Rational>(AlphaParam(2, 5), 10).shifted_down(1);
    const auto prod = series_mul(a, series_reciprocal(a));
    CHECK(prod == ExactSeries::constant(Rational(1), 9));
    CHECK_THROWS_AS(series_reciprocal(ExactSeries::identity(3)), std::domain_error);
  }

  TEST_CASE("composition inverts the primitive") {
    // Phi is the compositional inverse of P = 1 - (1 - z)^(1/alpha).
    const AlphaParam a(2, 7);
    const auto p = primitive_series<Rational>(a, 10);
    const auto phi = sibuya_pgf_series<Rational>(a, 10);
    CHECK(series_compose(p, phi) == ExactSeries::identity(10));
    CHECK_THROWS_AS(series_compose(p, ExactSeries::constant(Rational(1), 3)), std::domain_error);
  }

  TEST_CASE("power and integration") {
    const auto z = ExactSeries::identity(5);
    const auto one_plus = ExactSeries::constant(Rational(1), 5) + z;
    const auto cube = series_pow(one_plus, 3);
    CHECK(cube[0] == 1);
    CHECK(cube[1] == 3);
    CHECK(cube[2] == 3);
    CHECK(cube[3] == 1);
    CHECK(cube[4] == 0);
    const auto in = series_integrate(cube);
    CHECK(in.order() == 6);
    CHECK(in[4] == Rational(1, 4));
  }

  TEST_CASE("coefficient access beyond the order throws") {
    const auto s = ExactSeries::identity(3);
    CHECK_THROWS_AS(s.coeff(4), std::out_of_range);
    CHECK_THROWS_AS(s.truncated(5), std::invalid_argument);
    CHECK_THROWS_AS(ExactSeries::constant(Rational(1), 2).shifted_down(1), std::domain_error);
  }

  TEST_CASE("float series tracks the exact one") {
    const AlphaParam a(3, 5);
    const auto e = offspring_series<Rational>(a, 30);
    const auto f = offspring_series<double>(a, 30);
    for (unsigned j = 0; j <= 30; ++j) CHECK(f[j] == doctest::Approx(to_double(e[j])).epsilon(1e-12));
  }

  TEST_CASE("Lagrange inversion through the offspring pgf") {
    for (const auto& a : {AlphaParam(1, 2), AlphaParam(2, 3), AlphaParam(1, 5)}) {
      for (unsigned n = 1; n <= 10; ++n) {
        for (unsigned k = 1; k <= n; ++k) CHECK(lagrange_check_progeny(a, n, k).agrees());
      }
    }
    CHECK_THROWS_AS(lagrange_check_progeny(AlphaParam(1, 2), 3, 4), std::invalid_argument);
  }

  TEST_CASE("increasing-tree route coincides with the offspring pgf") {
    for (const auto& a : {AlphaParam(1, 5), AlphaParam(1, 3), AlphaParam(3, 4)}) {
      const auto r = lagrange_check_increasing(a, 9, 4);
      CHECK(r.pair.agrees());
      CHECK(r.r_matches_offspring);
    }
  }

  TEST_CASE("Lagrange tables agree with the pointwise checks") {
    const AlphaParam a(1, 4);
    const LagrangeTables t(a, 8, LagrangeTables::Route::increasing_primitive);
    for (unsigned n = 1; n <= 8; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        CHECK(t.check(n, k).agrees());
        CHECK(t.progeny_power(k, n) == lagrange_check_progeny(a, n, k).coefficient);
      }
    }
  }
}
