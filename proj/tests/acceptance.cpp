// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sibuya/dist.hpp"
#include "sibuya/series.hpp"
#include "sibuya/simulate.hpp"
#include "sibuya/stirling.hpp"
#include "sibuya/thermo.hpp"

using namespace sibuya;

namespace {

// Tolerances and sizes, fixed here and nowhere else.
constexpr double kStirlingSeconds = 30.0;
constexpr unsigned kStirlingN = 20;
constexpr double kLagrangeSeconds = 60.0;
constexpr unsigned kLagrangeN = 30;
constexpr unsigned kKnLawN = 25;
constexpr unsigned kOccupancyN = 12;
constexpr unsigned kMartingaleN = 50;
constexpr double kZRhoTol = 1e-12;
constexpr double kSlopeTol = 1e-8;
constexpr double kFreeEnergyTol = 0.05;
constexpr unsigned kFreeEnergyK = 50;
constexpr double kRateZeroTol = 1e-10;
constexpr double kRateOracleTol = 1e-6;
constexpr double kFixedPointTol = 1e-12;
constexpr double kBoundaryTol = 1e-12;
constexpr std::uint64_t kDraws = 1'000'000;
constexpr unsigned kMaxBin = 30;
constexpr std::uint64_t kBgwCap = 10'000;
constexpr double kChiSquareP = 0.001;
constexpr double kSigmas = 4.0;
constexpr double kSimulationSeconds = 300.0;
constexpr unsigned kLimitN = 10'000;
constexpr std::uint64_t kLimitTrials = 10'000;
constexpr double kLimitMeanRel = 0.05;
constexpr std::uint64_t kStableK = 10'000;
constexpr std::uint64_t kStableTrials = 20'000;
constexpr double kStableRel = 0.02;
constexpr unsigned kCrpN = 20;
constexpr double kSlopeWindow = 0.05;
constexpr std::uint64_t kSeed = 20240601;

const std::vector<AlphaParam> kExactAlphas = {AlphaParam(1, 5), AlphaParam(1, 3), AlphaParam(1, 2), AlphaParam(2, 3),
                                              AlphaParam(4, 5)};
const std::vector<AlphaParam> kSimAlphas = {AlphaParam(1, 2), AlphaParam(2, 3)};

struct Outcome {
  bool passed = true;
  std::string failure;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && passed) failure = what;
    passed = passed && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

void stirling_routes(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& a : kExactAlphas) {
    const auto tri = build_triangle(a, kStirlingN);
    const auto bell = stirling_bell_table(a, kStirlingN);
    for (unsigned n = 1; n <= kStirlingN; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        const auto& v = tri.at(n, k);
        const std::string at = "alpha=" + a.to_string() + " n=" + std::to_string(n) + " k=" + std::to_string(k);
        o.require(stirling_alt_sum(a, n, k) == v, "alt-sum " + at);
        o.require(stirling_faa_di_bruno(a, n, k) == v, "faa-di-bruno " + at);
        o.require(bell[n][k] == v, "bell " + at);
      }
    }
  }
  const double s = seconds_since(t0);
  o.require(s < kStirlingSeconds, "runtime");
  o.detail << "n<=" << kStirlingN << ", 5 alphas, " << fmt(s) << " s";
}

void lagrange(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& a : kExactAlphas) {
    for (auto route : {LagrangeTables::Route::bgw_offspring, LagrangeTables::Route::increasing_primitive}) {
      const LagrangeTables t(a, kLagrangeN, route);
      for (unsigned n = 1; n <= kLagrangeN; ++n) {
        for (unsigned k = 1; k <= n; ++k) {
          o.require(t.check(n, k).agrees(), "alpha=" + a.to_string() + " n=" + std::to_string(n));
        }
      }
    }
    o.require(increasing_offspring_series(a, kLagrangeN) == offspring_series<Rational>(a, kLagrangeN),
              "R = phi at alpha=" + a.to_string());
  }
  const double s = seconds_since(t0);
  o.require(s < kLagrangeSeconds, "runtime");
  o.detail << "n<=" << kLagrangeN << ", both generator routes, " << fmt(s) << " s";
}

void kn_law(Outcome& o) {
  for (const auto& a : kExactAlphas) {
    for (unsigned n = 1; n <= kKnLawN; ++n) {
      const auto rec = kn_pmf(a, n);
      const std::string at = "alpha=" + a.to_string() + " n=" + std::to_string(n);
      o.require(rec.mass == kn_pmf_from_counts(a, n).mass, "counts " + at);
      o.require(rec.mass == kn_pmf_from_lagrange(a, n).mass, "lagrange " + at);
    }
    const Rational x = a.exact();
    const Rational d2 = x + 1;
    const Rational d3 = (x + 1) * (x + 2);
    const auto k2 = kn_pmf(a, 2);
    const auto k3 = kn_pmf(a, 3);
    o.require(k2.at(1) == (1 - x) / d2 && k2.at(2) == 2 * x / d2, "K_2 at " + a.to_string());
    o.require(k3.at(1) == (1 - x) * (2 - x) / d3 && k3.at(2) == 6 * x * (1 - x) / d3 && k3.at(3) == 6 * x * x / d3,
              "K_3 at " + a.to_string());
  }
  o.detail << "n<=" << kKnLawN << ", closed forms for K_2, K_3";
}

void occupancy(Outcome& o) {
  for (const auto& a : kExactAlphas) {
    for (unsigned n = 1; n <= kOccupancyN; ++n) {
      for (unsigned k = 1; k <= n; ++k) {
        const std::string at = "alpha=" + a.to_string() + " n=" + std::to_string(n) + " k=" + std::to_string(k);
        const auto law = occupancy_law(a, n, k);
        Rational total(0);
        std::vector<Rational> first(n + 1, Rational(0));
        bool exchangeable = true;
        for (const auto& [parts, mass] : law) {
          total += mass;
          first[parts.parts().front()] += mass;
          auto reversed = parts.parts();
          std::reverse(reversed.begin(), reversed.end());
          auto rotated = parts.parts();
          std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
          exchangeable = exchangeable && occupancy_pmf(a, OccupancyVector(reversed)) == mass &&
                         occupancy_pmf(a, OccupancyVector(rotated)) == mass;
        }
        o.require(total == 1, "normalization " + at);
        o.require(exchangeable, "exchangeability " + at);
        const auto marg = marginal_pmf(a, n, k);
        bool match = true;
        for (std::size_t i = 0; i < marg.support.size(); ++i) match = match && marg.mass[i] == first[marg.support[i]];
        o.require(match, "marginal " + at);
        o.require(marg.mean() == Rational(n, k), "mean " + at);
      }
    }
  }
  o.detail << "n<=" << kOccupancyN << ", all k";
}

void martingale(Outcome& o) {
  for (const auto& a : kExactAlphas) {
    for (unsigned n = 1; n <= kMartingaleN; ++n) {
      for (const auto& step : kn_martingale_steps(a, n)) {
        o.require(step.current == step.expected_next, "alpha=" + a.to_string() + " n=" + std::to_string(n));
      }
    }
  }
  o.detail << "n<=" << kMartingaleN;
}

void thermo_closed_form(Outcome& o) {
  const AlphaParam a(1, 2);
  double worst_z = 0.0;
  double worst_slope = 0.0;
  for (double rho : {1.5, 2.0, 3.0, 5.0}) {
    const auto sol = solve_z_rho(a, rho);
    const double z = 4 * rho * (rho - 1) / ((2 * rho - 1) * (2 * rho - 1));
    worst_z = std::max(worst_z, std::abs(sol.z_rho - z));
    o.require(std::abs(sol.phi_at_z_rho - 2 * (rho - 1) / (2 * rho - 1)) <= kZRhoTol, "Phi(z_rho)");
    worst_slope = std::max(worst_slope, std::abs(induced_offspring_slope(a, sol) - (1 - 1 / rho)));
  }
  o.require(worst_z <= kZRhoTol, "z_rho");
  o.require(worst_slope <= kSlopeTol, "slope");
  o.detail << "max |dz| " << fmt(worst_z) << ", max |dslope| " << fmt(worst_slope);
}

void free_energy(Outcome& o) {
  const AlphaParam a(1, 2);
  const double fe = solve_z_rho(a, 2.0).free_energy;
  double previous = INFINITY;
  bool monotone = true;
  double at_target = NAN;
  o.detail << "gaps";
  for (unsigned k : {10U, 25U, 50U, 100U}) {
    const double gap = std::abs(fe - free_energy_oracle(a, 2 * k, k));
    o.detail << " k=" << k << ":" << fmt(gap);
    monotone = monotone && gap < previous;
    previous = gap;
    if (k == kFreeEnergyK) at_target = gap;
  }
  o.require(monotone, "monotone shrink");
  o.require(at_target <= kFreeEnergyTol, "gap at k=50 exceeds " + fmt(kFreeEnergyTol));
}

void rate(Outcome& o) {
  const AlphaParam a(1, 2);
  double worst_zero = 0.0;
  double worst = 0.0;
  for (double rho : {2.0, 3.0}) {
    worst_zero = std::max(worst_zero, std::abs(rate_function(a, rho, rho)));
    const auto sol = solve_z_rho(a, rho);
    auto log_phi_rho = [&](double x) { return std::log(sibuya_pgf(a, x * sol.z_rho)) - std::log(sol.phi_at_z_rho); };
    for (int i = 0; i <= 48; ++i) {
      const double r = 1.2 + 0.1 * i;
      const double oracle_value = oracle::legendre_rate(log_phi_rho, -std::log(sol.z_rho), r);
      worst = std::max(worst, std::abs(rate_function(a, rho, r) - oracle_value));
    }
  }
  o.require(worst_zero <= kRateZeroTol, "f(rho) = 0");
  o.require(worst <= kRateOracleTol, "Legendre oracle");
  o.detail << "max |f(rho)| " << fmt(worst_zero) << ", max oracle gap " << fmt(worst);
}

void rescaling(Outcome& o) {
  double worst_fixed = 0.0;
  double worst_boundary = 0.0;
  double worst_increasing = 0.0;
  unsigned supercritical = 0;
  for (const auto& a : kExactAlphas) {
    for (int i = 1; i <= 9; ++i) {
      const double c1 = 0.1 * i;
      const double boundary = regular_boundary_c2(a, c1);
      const auto edge = classify_rescaled(a, c1, boundary);
      worst_boundary = std::max(worst_boundary, std::abs(edge.offspring_at_one - 1.0));
      for (double frac : {0.1, 0.5, 0.9, 0.99}) {
        const auto f = classify_rescaled(a, c1, frac * boundary);
        if (f.classification != Criticality::supercritical_defective) continue;
        ++supercritical;
        worst_fixed = std::max(worst_fixed, f.fixed_point_residual);
      }
      const auto inc = classify_increasing_rescaled(a, c1);
      worst_increasing = std::max(worst_increasing, std::abs(inc.family.offspring_at_one - 1.0));
    }
  }
  o.require(supercritical > 0, "no supercritical cases");
  o.require(worst_fixed <= kFixedPointTol, "fixed point");
  o.require(worst_boundary <= kBoundaryTol, "regular boundary");
  o.require(worst_increasing <= kBoundaryTol, "increasing boundary");
  o.detail << supercritical << " supercritical, max residual " << fmt(worst_fixed) << ", boundary "
           << fmt(worst_boundary) << ", increasing " << fmt(worst_increasing);
}

// Counts 1..max_bin, (max_bin, cap], > cap against the exact law.
double histogram_p_value(const AlphaParam& a, const ProgenyHistogram& h) {
  const auto pmf = progeny_pmf_float(a, static_cast<unsigned>(h.cap));
  std::vector<std::uint64_t> observed(h.counts.begin() + 1, h.counts.end());
  observed.push_back(h.beyond);
  observed.push_back(h.overflow);
  std::vector<double> expected(pmf.mass.begin(), pmf.mass.begin() + kMaxBin);
  double middle = 0.0;
  for (std::size_t i = kMaxBin; i < pmf.mass.size(); ++i) middle += pmf.mass[i];
  expected.push_back(middle);
  expected.push_back(*pmf.tail);
  return chi_square_test(observed, expected).p_value;
}

bool within_sigmas(std::uint64_t hits, std::uint64_t trials, double p) {
  const double sd = std::sqrt(p * (1 - p) / static_cast<double>(trials));
  return std::abs(static_cast<double>(hits) / static_cast<double>(trials) - p) <= kSigmas * sd;
}

void simulation(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double min_p = 1.0;
  for (const auto& a : kSimAlphas) {
    for (auto kind : {ProgenySampler::sibuya, ProgenySampler::bgw}) {
      const auto h = progeny_histogram(a, kind, kDraws, kMaxBin, kBgwCap, RngStream(kSeed, kind == ProgenySampler::bgw));
      const double p = histogram_p_value(a, h);
      min_p = std::min(min_p, p);
      o.require(p > kChiSquareP, std::string(kind == ProgenySampler::bgw ? "bgw" : "sibuya") + " at " + a.to_string());
    }
  }

  const AlphaParam half(1, 2);
  constexpr unsigned kForestN = 6;
  std::vector<std::vector<std::uint64_t>> k_counts(kForestN + 1, std::vector<std::uint64_t>(kForestN + 1, 0));
  std::vector<std::uint64_t> marginal(4, 0);
  std::uint64_t conditioned = 0;
  const RngStream base(kSeed, 7);
  for (std::uint64_t i = 0; i < kDraws; ++i) {
    RngStream rng = base.child(i);
    const auto f = grow_forest(half, kForestN, rng);
    for (unsigned n = 1; n <= kForestN; ++n) ++k_counts[n][f.k_path[n - 1]];
    // Labelled sizes need a forest stopped at n = 4.
    RngStream rng4 = base.child(kDraws + i);
    const auto f4 = grow_forest(half, 4, rng4);
    if (f4.k == 2) {
      ++conditioned;
      ++marginal[random_labelling(f4, rng4).front()];
    }
  }
  bool law_ok = true;
  for (unsigned n = 1; n <= kForestN; ++n) {
    const auto exact = kn_pmf(half, n);
    for (unsigned k = 1; k <= n; ++k) law_ok = law_ok && within_sigmas(k_counts[n][k], kDraws, to_double(exact.at(k)));
  }
  o.require(law_ok, "grow_forest K_n law");
  const auto marg = marginal_pmf(half, 4, 2);
  bool marg_ok = marg.mass == std::vector<Rational>{Rational(2, 5), Rational(1, 5), Rational(2, 5)};
  for (unsigned s = 1; s <= 3; ++s) marg_ok = marg_ok && within_sigmas(marginal[s], conditioned, to_double(marg.at(s)));
  o.require(marg_ok, "n=4, k=2 marginal");

  const double s = seconds_since(t0);
  o.require(s < kSimulationSeconds, "runtime");
  o.detail << "min chi-square p " << fmt(min_p) << ", marginal freq " << fmt(marginal[1] / double(conditioned)) << "/"
           << fmt(marginal[2] / double(conditioned)) << "/" << fmt(marginal[3] / double(conditioned)) << ", "
           << fmt(s) << " s";
}

void limits(Outcome& o) {
  for (const auto& a : kSimAlphas) {
    const auto r = estimate_kn_limit(a, kLimitN, kLimitTrials, RngStream(kSeed, 11));
    const double target = std::exp(log_gamma(a.value()) - log_gamma(2 * a.value()));
    const double rel = std::abs(r.moments[1].estimate / target - 1);
    o.require(rel <= kLimitMeanRel, "K_n mean at " + a.to_string());
    o.detail << "alpha=" << a.to_string() << " mean rel " << fmt(rel);
    const auto s = estimate_stable_limit(a, kStableK, kStableTrials, {0.5, 1.0, 2.0}, RngStream(kSeed, 13));
    double worst = 0.0;
    for (const auto& p : s.points) worst = std::max(worst, std::abs(p.estimate / p.target - 1));
    o.require(worst <= kStableRel, "Laplace functional at " + a.to_string());
    o.detail << ", Laplace rel " << fmt(worst) << " ";
  }
}

void crp_bridge(Outcome& o) {
  for (const auto& a : kExactAlphas) {
    for (unsigned n = 1; n <= kCrpN; ++n) {
      const auto crp = crp_sn_pmf(a, a.exact(), n);
      const auto kn = kn_pmf(a, n);
      o.require(crp.at(0) == 0, "S_n = 0");
      for (unsigned k = 1; k <= n; ++k) {
        o.require(crp.at(k) == kn.at(k), "alpha=" + a.to_string() + " n=" + std::to_string(n));
      }
    }
    const double slope =
        std::log(kn_mean<double>(a, 100000) / kn_mean<double>(a, 1000)) / std::log(100.0);
    o.require(std::abs(slope - a.value()) <= kSlopeWindow, "slope at " + a.to_string());
    o.detail << a.to_string() << ":" << fmt(slope) << " ";
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"stirling four-way agreement", stirling_routes},
      {"Lagrange identities", lagrange},
      {"K_n law triple agreement", kn_law},
      {"occupancy coherence", occupancy},
      {"martingale identity", martingale},
      {"saddle point closed form", thermo_closed_form},
      {"free energy against exact coefficients", free_energy},
      {"rate function", rate},
      {"rescaling fixed points and boundaries", rescaling},
      {"simulation against exact laws", simulation},
      {"limit laws", limits},
      {"CRP bridge and mean growth", crp_bridge},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.passed) ++failures;
    std::string line = o.detail.str();
    if (!o.passed) line += " [first failure: " + o.failure + "]";
    std::printf("%s %2zu %s: %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
