#include <doctest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "oracles.hpp"
#include "sibuya/thermo.hpp"

using namespace sibuya;

TEST_SUITE("thermo") {
  TEST_CASE("saddle point at alpha 1/2 has a closed form") {
    const AlphaParam a(1, 2);
    for (double rho : {1.1, 1.5, 2.0, 3.0, 5.0, 20.0}) {
      const auto s = solve_z_rho(a, rho);
      CHECK(std::abs(s.z_rho - 4 * rho * (rho - 1) / ((2 * rho - 1) * (2 * rho - 1))) <= 1e-12);
      CHECK(s.phi_at_z_rho == doctest::Approx(2 * (rho - 1) / (2 * rho - 1)).epsilon(1e-12));
      CHECK(induced_offspring_slope(a, s) == doctest::Approx(1 - 1 / rho).epsilon(1e-9));
    }
  }

  TEST_CASE("saddle point against frozen values") {
    CHECK(solve_z_rho(AlphaParam(1, 3), 2.0).z_rho == doctest::Approx(frozen::kZRho_1over3_rho2).epsilon(1e-13));
    CHECK(solve_z_rho(AlphaParam(2, 3), 3.0).z_rho == doctest::Approx(frozen::kZRho_2over3_rho3).epsilon(1e-13));
  }

  TEST_CASE("residual and limiting pgf") {
    for (const auto& a : {AlphaParam(1, 5), AlphaParam(1, 3), AlphaParam(1, 2), AlphaParam(2, 3), AlphaParam(4, 5),
                          AlphaParam::from_float(0.37)}) {
      for (double rho : {1.1, 1.5, 2.0, 3.0, 5.0, 10.0}) {
        const auto s = solve_z_rho(a, rho);
        CHECK(s.residual <= 1e-12);
        CHECK(s.z_rho > 0.0);
        CHECK(s.z_rho < 1.0);
        CHECK(phi_rho(a, s, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(s.free_energy == doctest::Approx(rho * std::log(s.z_rho) - std::log(s.phi_at_z_rho)));
        CHECK(s.z_rho + s.one_minus_z == doctest::Approx(1.0).epsilon(1e-15));
        // The limiting law has mean rho: d/dz log Phi_rho at 1 is Psi(z_rho).
        CHECK(psi(a, s.z_rho) == doctest::Approx(rho).epsilon(1e-9));
      }
    }
    // Near alpha = 1 the root crowds against 1; 1 - z_rho still carries it.
    const auto edge = solve_z_rho(AlphaParam(9, 10), 11.0);
    CHECK(edge.one_minus_z < 1e-10);
    CHECK(edge.residual <= 1e-12);
    CHECK_THROWS_AS(solve_z_rho(AlphaParam(1, 2), 1.0), std::domain_error);
    CHECK_THROWS_AS(psi(AlphaParam(1, 2), 1.0), std::domain_error);
  }

  TEST_CASE("psi derivative matches finite differences") {
    const AlphaParam a(2, 5);
    for (double z : {0.1, 0.5, 0.9}) {
      const double h = 1e-6;
      const double fd = (psi(a, z + h) - psi(a, z - h)) / (2 * h);
      CHECK(psi_derivative(a, z) == doctest::Approx(fd).epsilon(1e-7));
    }
  }

  TEST_CASE("offspring pgf") {
    const AlphaParam a(2, 3);
    CHECK(offspring_pgf(a, 0.0) == doctest::Approx(2.0 / 3.0));
    CHECK(offspring_pgf(a, 1.0) == 1.0);
    for (double x : {1e-6, 1e-4, 0.01, 0.3, 0.8}) {
      const double h = std::min(1e-6, x / 4);
      const double fd = (offspring_pgf(a, x + h) - offspring_pgf(a, x - h)) / (2 * h);
      CHECK(offspring_pgf_derivative(a, x) == doctest::Approx(fd).epsilon(1e-5));
    }
  }

  TEST_CASE("rate function") {
    CHECK(rate_function(AlphaParam(1, 2), 2.0, 3.0) == doctest::Approx(frozen::kRate_half_rho2_r3).epsilon(1e-10));
    CHECK(rate_function(AlphaParam(2, 3), 3.0, 1.5) ==
          doctest::Approx(frozen::kRate_2over3_rho3_r1p5).epsilon(1e-10));
    const AlphaParam a(1, 3);
    for (double rho : {1.5, 4.0}) {
      CHECK(std::abs(rate_function(a, rho, rho)) <= 1e-12);
      const auto s = solve_z_rho(a, rho);
      auto log_phi = [&](double z) { return std::log(phi_rho(a, s, z)); };
      double prev = INFINITY;
      for (double r = 1.2; r < rho; r += 0.1) {
        const double f = rate_function(a, rho, r);
        CHECK(f >= 0.0);
        CHECK(f <= prev);
        prev = f;
        CHECK(f == doctest::Approx(oracle::legendre_rate(log_phi, -std::log(s.z_rho), r)).epsilon(1e-7));
      }
    }
    CHECK_THROWS_AS(rate_function(a, 2.0, 1.0), std::domain_error);
  }

  TEST_CASE("free energy from exact coefficients") {
    CHECK(free_energy_oracle(AlphaParam(1, 2), 20, 10) ==
          doctest::Approx(frozen::kFreeEnergyOracle_k10).epsilon(1e-13));
    CHECK_THROWS_AS(free_energy_oracle(AlphaParam(1, 2), 201, 10), std::invalid_argument);
    CHECK_THROWS_AS(free_energy_oracle(AlphaParam(1, 2), 5, 6), std::invalid_argument);
  }

  TEST_CASE("simply generated rescaling") {
    const AlphaParam a(2, 3);
    const auto crit = classify_rescaled(a, 1.0, 1.0);
    CHECK(crit.classification == Criticality::critical);
    CHECK(crit.offspring_slope == doctest::Approx(1.0));
    for (double c1 : {0.05, 0.4, 0.95}) {
      const auto reg = classify_rescaled(a, c1, regular_boundary_c2(a, c1));
      CHECK(reg.classification == Criticality::subcritical_regular);
      CHECK(std::abs(reg.offspring_at_one - 1.0) <= 1e-12);
      CHECK(reg.offspring_slope < 1.0);
      CHECK(reg.progeny_mass == doctest::Approx(1.0).epsilon(1e-12));
    }
    const double c2 = 0.5 * regular_boundary_c2(a, 0.4);
    const auto sup = classify_rescaled(a, 0.4, c2);
    CHECK(sup.classification == Criticality::supercritical_defective);
    CHECK(sup.extinction_prob == doctest::Approx(frozen::kExtinction_2over3_c1_0p4).epsilon(1e-13));
    CHECK(sup.fixed_point_residual <= 1e-12);
    CHECK(sup.extinction_prob < 1.0);
    CHECK_THROWS_AS(classify_rescaled(a, 0.4, 1.01 * regular_boundary_c2(a, 0.4)), std::domain_error);
    CHECK_THROWS_AS(classify_rescaled(a, 0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(classify_rescaled(a, 0.5, -1.0), std::domain_error);
  }

  TEST_CASE("increasing rescaling") {
    const auto inc = classify_increasing_rescaled(AlphaParam(2, 3), 0.3);
    CHECK(inc.progeny_mass_ode == doctest::Approx(frozen::kIncreasingMass_2over3_c1_0p3).epsilon(1e-8));
    CHECK(inc.progeny_mass_scaled == doctest::Approx(inc.progeny_mass_ode).epsilon(1e-8));
    CHECK(std::abs(inc.family.offspring_at_one - 1.0) <= 1e-12);
    CHECK(inc.family.kind == TreeKind::increasing);
    CHECK(inc.family.classification == Criticality::supercritical_defective);
    CHECK(inc.family.extinction_prob == doctest::Approx(0.3));
    CHECK_THROWS_AS(classify_increasing_rescaled(AlphaParam(2, 3), 1.0), std::domain_error);
  }

  TEST_CASE("lambda-scaled family is never a progeny law") {
    const auto f = lambda_scaled_family(AlphaParam(1, 2), 0.25);
    CHECK(f.value_at_zero == doctest::Approx(0.75));
    CHECK(f.value_at_one == 1.0);
    CHECK_FALSE(f.can_be_progeny);
    CHECK_THROWS_AS(lambda_scaled_family(AlphaParam(1, 2), 1.0), std::domain_error);
  }

  TEST_CASE("labels") {
    CHECK(to_string(Criticality::supercritical_defective) == "supercritical-defective");
    CHECK(to_string(TreeKind::simply_generated) == "simply-generated");
  }
}
