#include "sibuya/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "sibuya/compositions.hpp"
#include "sibuya/dist.hpp"
#include "sibuya/series.hpp"
#include "sibuya/stirling.hpp"
#include "sibuya/thermo.hpp"

namespace sibuya {

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

// Each check returns an empty string on success, otherwise the first mismatch.
using Check = std::function<std::string()>;

std::string where(const char* what, unsigned n, unsigned k) {
  std::ostringstream s;
  s << what << " at n=" << n << ", k=" << k;
  return s.str();
}

std::string check_stirling(const AlphaParam& alpha, unsigned n_max) {
  const auto tri = build_triangle(alpha, n_max);
  const auto bell = stirling_bell_table(alpha, n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      const Rational& s = tri.at(n, k);
      if (stirling_alt_sum(alpha, n, k) != s) return where("alternating sum", n, k);
      if (n <= kFaaDiBrunoMaxN && stirling_faa_di_bruno(alpha, n, k) != s) return where("composition sum", n, k);
      if (bell[n][k] != s) return where("Bell route", n, k);
    }
  }
  return {};
}

std::string check_general_triangle(const AlphaParam& alpha, unsigned n_max) {
  const auto tri = build_triangle(alpha, n_max);
  const auto gen = build_general_triangle(alpha.exact(), Rational(1), Rational(0), n_max);
  for (unsigned n = 0; n <= n_max; ++n) {
    if (tri.row(n) != gen.row(n)) return where("general triangle", n, 0);
  }
  return {};
}

std::string check_polynomials(const AlphaParam& alpha, unsigned n_max) {
  const auto polys = sibuya_polynomials(alpha, n_max);
  const auto tri = build_triangle(alpha, n_max);
  for (unsigned n = 0; n <= n_max; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      if (polys[n].coeffs[k] != tri.forest_count(n, k)) return where("polynomial coefficient", n, k);
    }
    if (polys[n].evaluate(Rational(1)) != rising_factorial(alpha.exact(), n)) return where("s_n(1)", n, 0);
  }
  if (n_max >= 3 && !s3_real_zero_check(alpha).has_nonreal_roots) return "s_3 has only real roots";
  return {};
}

std::string check_lagrange(const AlphaParam& alpha, unsigned n_max) {
  const LagrangeTables bgw(alpha, n_max, LagrangeTables::Route::bgw_offspring);
  const LagrangeTables inc(alpha, n_max, LagrangeTables::Route::increasing_primitive);
  if (!(bgw.generator() == inc.generator())) return "increasing-tree generator differs from the offspring pgf";
  for (unsigned n = 1; n <= n_max; ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      if (!bgw.check(n, k).agrees()) return where("offspring route", n, k);
      if (!inc.check(n, k).agrees()) return where("increasing route", n, k);
    }
  }
  return {};
}

std::string check_kn(const AlphaParam& alpha, unsigned n_max) {
  for (unsigned n = 1; n <= std::min(n_max, 25U); ++n) {
    const auto rec = kn_pmf(alpha, n);
    if (!rec.is_normalized()) return where("K_n normalization", n, 0);
    if (rec.mean() != kn_mean<Rational>(alpha, n)) return where("K_n mean", n, 0);
    const auto counts = kn_pmf_from_counts(alpha, n);
    const auto lag = kn_pmf_from_lagrange(alpha, n);
    if (rec.mass != counts.mass) return where("forest-count law", n, 0);
    if (rec.mass != lag.mass) return where("Lagrange-ratio law", n, 0);
  }
  return {};
}

std::string check_martingale(const AlphaParam& alpha, unsigned n_max) {
  for (unsigned n = 1; n <= std::min(n_max, 50U); ++n) {
    for (const auto& step : kn_martingale_steps(alpha, n)) {
      if (step.current != step.expected_next) return where("martingale", step.n, step.k);
    }
  }
  return {};
}

std::string check_crp(const AlphaParam& alpha, unsigned n_max) {
  for (unsigned n = 1; n <= std::min(n_max, 20U); ++n) {
    const auto crp = crp_sn_pmf(alpha, alpha.exact(), n);
    const auto kn = kn_pmf(alpha, n);
    if (crp.at(0) != 0) return where("CRP empty state", n, 0);
    for (unsigned k = 1; k <= n; ++k) {
      if (crp.at(k) != kn.at(k)) return where("CRP table law", n, k);
    }
  }
  return {};
}

std::string check_occupancy(const AlphaParam& alpha, unsigned n_max) {
  for (unsigned n = 1; n <= std::min(n_max, 10U); ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      const auto law = occupancy_law(alpha, n, k);
      Rational total(0);
      std::vector<Rational> first(n + 1, Rational(0));
      for (const auto& [parts, mass] : law) {
        total += mass;
        first[parts.parts()[0]] += mass;
        auto rev = parts.parts();
        std::reverse(rev.begin(), rev.end());
        if (occupancy_pmf(alpha, OccupancyVector(rev)) != mass) return where("exchangeability", n, k);
      }
      if (total != 1) return where("occupancy normalization", n, k);
      const auto marg = marginal_pmf(alpha, n, k);
      for (unsigned n1 = 1; n1 <= n - k + 1; ++n1) {
        if (marg.at(n1) != first[n1]) return where("marginal", n, k);
      }
      if (marg.mean() != Rational(n, k)) return where("marginal mean", n, k);
    }
  }
  return {};
}

std::string check_renewal(const AlphaParam& alpha, unsigned n_max) {
  for (unsigned n = 1; n <= std::min(n_max, 20U); ++n) {
    for (unsigned k = 1; k <= n; ++k) {
      const auto r = renewal_convolution(alpha, n, k);
      if (r.direct != r.convolution) return where("first-tree decomposition", n, k);
    }
  }
  return {};
}

std::string check_progeny(const AlphaParam& alpha, unsigned n_max) {
  const auto pmf = progeny_pmf(alpha, n_max);
  if (!pmf.is_normalized() || !pmf.is_nonnegative()) return "progeny law with tail is not a probability law";
  const Rational& a = alpha.exact();
  Rational survive(1);
  for (unsigned n = 1; n <= n_max; ++n) {
    // Sequential-trial form (a/n) prod_{j<n} (1 - a/j).
    if (pmf.at(n) != survive * a / Rational(n)) return where("sequential-trial form", n, 1);
    survive *= Rational(1) - a / Rational(n);
  }
  const auto phi = sibuya_pgf_series<Rational>(alpha, n_max);
  for (unsigned n = 1; n <= n_max; ++n) {
    if (phi[n] != pmf.at(n)) return where("pgf coefficient", n, 1);
  }
  return {};
}

std::string check_thermo(const AlphaParam& alpha) {
  for (double rho : {1.25, 1.5, 2.0, 3.0, 5.0, 10.0}) {
    const auto sol = solve_z_rho(alpha, rho);
    if (!(sol.residual <= 1e-12)) return "saddle-point residual above 1e-12 at rho=" + std::to_string(rho);
    if (!(std::abs(rate_function(alpha, rho, rho)) <= 1e-10)) return "rate function nonzero at r = rho";
    if (std::abs(phi_rho(alpha, sol, 1.0) - 1.0) > 1e-12) return "limiting pgf is not regular";
  }
  return {};
}

std::string check_rescaling(const AlphaParam& alpha) {
  for (double c1 : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto reg = classify_rescaled(alpha, c1, regular_boundary_c2(alpha, c1));
    if (std::abs(reg.offspring_at_one - 1.0) > 1e-12) return "regular boundary misses phi~(1) = 1";
    const auto sup = classify_rescaled(alpha, c1, 0.5 * regular_boundary_c2(alpha, c1));
    if (sup.classification != Criticality::supercritical_defective) return "expected a supercritical family";
    if (!(sup.fixed_point_residual <= 1e-12)) return "extinction probability is not a fixed point";
    const auto inc = classify_increasing_rescaled(alpha, c1);
    if (std::abs(inc.family.offspring_at_one - 1.0) > 1e-12) return "increasing boundary misses phi~(1) = 1";
  }
  return {};
}

}  // namespace

VerifyReport run_identity_suite(const AlphaParam& alpha, unsigned n_max) {
  if (!alpha.is_exact()) throw std::domain_error("verify requires a rational alpha");
  if (n_max < 1 || n_max > 60) throw std::invalid_argument("verify requires 1 <= n_max <= 60");
  const std::vector<std::pair<std::string, Check>> suite = {
      {"stirling_routes", [&] { return check_stirling(alpha, n_max); }},
      {"general_triangle", [&] { return check_general_triangle(alpha, n_max); }},
      {"sibuya_polynomials", [&] { return check_polynomials(alpha, n_max); }},
      {"lagrange_inversion", [&] { return check_lagrange(alpha, n_max); }},
      {"kn_law", [&] { return check_kn(alpha, n_max); }},
      {"martingale", [&] { return check_martingale(alpha, n_max); }},
      {"crp_bridge", [&] { return check_crp(alpha, n_max); }},
      {"occupancy", [&] { return check_occupancy(alpha, n_max); }},
      {"renewal", [&] { return check_renewal(alpha, n_max); }},
      {"progeny_law", [&] { return check_progeny(alpha, n_max); }},
      {"thermo", [&] { return check_thermo(alpha); }},
      {"rescaling", [&] { return check_rescaling(alpha); }},
  };
  VerifyReport report;
  report.alpha = alpha.to_string();
  report.n_max = n_max;
  for (const auto& [name, check] : suite) {
    CheckResult r;
    r.name = name;
    try {
      r.detail = check();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    report.checks.push_back(std::move(r));
  }
  return report;
}

}  // namespace sibuya
