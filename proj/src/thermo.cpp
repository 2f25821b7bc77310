#include "sibuya/thermo.hpp"

#include <array>
#include <cmath>
#include <utility>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "sibuya/series.hpp"

namespace sibuya {

double sibuya_pgf(const AlphaParam& alpha, double z) {
  if (z >= 1.0) return 1.0;
  return -std::expm1(alpha.value() * std::log1p(-z));
}

namespace {

// P(x) = 1 - (1 - x)^(1/alpha).
double primitive(double a, double x) {
  if (x >= 1.0) return 1.0;
  return -std::expm1(std::log1p(-x) / a);
}

constexpr double kSmallX = 1e-3;

}  // namespace

double offspring_pgf(const AlphaParam& alpha, double x) {
  const double a = alpha.value();
  if (x == 0.0) return a;
  return x / primitive(a, x);
}

double offspring_pgf_derivative(const AlphaParam& alpha, double x) {
  const double a = alpha.value();
  if (x < kSmallX) {
    // P - x P' cancels to O(x^2) near zero; differentiate the power series instead.
    const auto s = offspring_series<double>(alpha, 8);
    double acc = 0.0;
    for (std::size_t j = 8; j >= 1; --j) acc = acc * x + static_cast<double>(j) * s[j];
    return acc;
  }
  const double p = primitive(a, x);
  const double dp = (x >= 1.0) ? (a < 1.0 && 1.0 / a - 1.0 > 0.0 ? 0.0 : 1.0 / a)
                               : std::pow(1.0 - x, 1.0 / a - 1.0) / a;
  return (p - x * dp) / (p * p);
}

namespace {

// Psi at a point carried as (z, u = 1 - z); the smaller coordinate is exact.
double psi_at(double a, double z, double u) {
  const double log_u = z < 0.5 ? std::log1p(-z) : std::log(u);
  return a * z * std::exp((a - 1.0) * log_u) / -std::expm1(a * log_u);
}

double dpsi_dz(double a, double z, double u) {
  const double v = psi_at(a, z, u);
  return v * ((1.0 - v) / z + (1.0 - a) / u);
}

}  // namespace

double psi(const AlphaParam& alpha, double z) {
  if (!(z > 0.0 && z < 1.0)) throw std::domain_error("psi requires 0 < z < 1");
  return psi_at(alpha.value(), z, 1.0 - z);
}

double psi_derivative(const AlphaParam& alpha, double z) {
  if (!(z > 0.0 && z < 1.0)) throw std::domain_error("psi requires 0 < z < 1");
  return dpsi_dz(alpha.value(), z, 1.0 - z);
}

ThermoSolution solve_z_rho(const AlphaParam& alpha, double rho) {
  if (!(rho > 1.0)) throw std::domain_error("solve_z_rho requires rho > 1");
  const double a = alpha.value();
  // Psi increases from 1 to infinity. Roots above 1/2 are located through u = 1 - z so
  // that z_rho close to 1 keeps full relative precision in 1 - z_rho.
  const bool in_u = psi_at(a, 0.5, 0.5) < rho;
  auto point = [in_u](double x) { return in_u ? std::pair{1.0 - x, x} : std::pair{x, 1.0 - x}; };
  // g(x) = Psi - rho, increasing in x.
  auto g = [&](double x) {
    const auto [z, u] = point(x);
    const double v = psi_at(a, z, u) - rho;
    return in_u ? -v : v;
  };
  double lo = 0.0;
  double hi = 0.5;
  for (int it = 0; it < 4000 && hi - lo > 1e-10 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!(hi > 0.0) || !std::isnormal(hi)) throw std::domain_error("rho beyond the representable range of Psi");
  double x = 0.5 * (lo + hi);
  for (int step = 0; step < 5; ++step) {
    const double f = g(x);
    if (f == 0.0) break;
    const auto [z, u] = point(x);
    const double next = x - f / dpsi_dz(a, z, u);
    if (!(next > 0.0 && next <= 0.5) || next == x) break;
    if (std::abs(g(next)) >= std::abs(f)) break;
    x = next;
  }
  const auto [z, u] = point(x);
  const double log_u = in_u ? std::log(u) : std::log1p(-z);
  const double log_z = in_u ? std::log1p(-u) : std::log(z);
  ThermoSolution sol;
  sol.rho = rho;
  sol.z_rho = z;
  sol.one_minus_z = u;
  sol.phi_at_z_rho = -std::expm1(a * log_u);
  sol.free_energy = rho * log_z - std::log(sol.phi_at_z_rho);
  sol.residual = std::abs(psi_at(a, z, u) - rho);
  return sol;
}

double log_z_rho(const ThermoSolution& sol) {
  return sol.one_minus_z < 0.5 ? std::log1p(-sol.one_minus_z) : std::log(sol.z_rho);
}

double phi_rho(const AlphaParam& alpha, const ThermoSolution& sol, double z) {
  if (z < 0.0 || z * sol.z_rho > 1.0) throw std::domain_error("phi_rho argument out of range");
  return sibuya_pgf(alpha, z * sol.z_rho) / sol.phi_at_z_rho;
}

double phi_rho(const AlphaParam& alpha, double rho, double z) {
  return phi_rho(alpha, solve_z_rho(alpha, rho), z);
}

double induced_offspring_pgf(const AlphaParam& alpha, const ThermoSolution& sol, double z) {
  return sol.z_rho * offspring_pgf(alpha, sol.phi_at_z_rho * z) / sol.phi_at_z_rho;
}

double induced_offspring_slope(const AlphaParam& alpha, const ThermoSolution& sol) {
  return sol.z_rho * offspring_pgf_derivative(alpha, sol.phi_at_z_rho);
}

double rate_function(const AlphaParam& alpha, double rho, double r) {
  if (!(r > 1.0)) throw std::domain_error("rate_function requires r > 1");
  const auto at_rho = solve_z_rho(alpha, rho);
  const auto at_r = solve_z_rho(alpha, r);
  // z_r = w / z_rho where Psi(w) = r.
  return r * (log_z_rho(at_r) - log_z_rho(at_rho)) -
         (std::log(at_r.phi_at_z_rho) - std::log(at_rho.phi_at_z_rho));
}

double free_energy_oracle(const AlphaParam& alpha, unsigned n, unsigned k) {
  if (k < 1 || k > n) throw std::invalid_argument("free_energy_oracle requires 1 <= k <= n");
  if (n > 200) throw std::invalid_argument("free_energy_oracle is limited to n <= 200");
  const auto power = series_pow(sibuya_pgf_series<Rational>(alpha, n), k);
  return -log_rational(power[n]) / static_cast<double>(k);
}

std::string to_string(TreeKind kind) {
  return kind == TreeKind::simply_generated ? "simply-generated" : "increasing";
}

std::string to_string(Criticality c) {
  switch (c) {
    case Criticality::critical:
      return "critical";
    case Criticality::subcritical_regular:
      return "subcritical-regular";
    case Criticality::supercritical_defective:
      return "supercritical-defective";
  }
  return "unknown";
}

double regular_boundary_c2(const AlphaParam& alpha, double c1) {
  return primitive(alpha.value(), c1) / c1;
}

namespace {

constexpr double kRegularTol = 1e-12;

// c1^{-1}(1 - (1 - x)^alpha) with x = c1 c2.
double scaled_progeny_mass(double a, double c1, double x) {
  if (x >= 1.0) return 1.0 / c1;
  return -std::expm1(a * std::log1p(-x)) / c1;
}

}  // namespace

RescaledFamily classify_rescaled(const AlphaParam& alpha, double c1, double c2) {
  if (!(c1 > 0.0 && c1 <= 1.0)) throw std::domain_error("classify_rescaled requires 0 < c1 <= 1");
  if (!(c2 > 0.0)) throw std::domain_error("classify_rescaled requires c2 > 0");
  if (c1 * c2 > 1.0 + 1e-15) throw std::domain_error("classify_rescaled requires c1 c2 <= 1");
  const double a = alpha.value();
  const double boundary = regular_boundary_c2(alpha, c1);
  if (c2 > boundary * (1.0 + kRegularTol)) {
    throw std::domain_error("c2 above c1^{-1}(1 - (1 - c1)^{1/alpha}) gives a progeny mass above one");
  }

  RescaledFamily f;
  f.c1 = c1;
  f.c2 = c2;
  f.kind = TreeKind::simply_generated;
  f.offspring_at_one = c2 * offspring_pgf(alpha, c1);
  f.progeny_mass = scaled_progeny_mass(a, c1, c1 * c2);
  f.offspring_regular = std::abs(f.offspring_at_one - 1.0) <= kRegularTol;

  if (f.offspring_regular) {
    const double q = std::pow(1.0 - c1, 1.0 / a);
    f.offspring_slope = 1.0 - (c1 / a) * std::pow(1.0 - c1, 1.0 / a - 1.0) / (1.0 - q);
    f.extinction_prob = 1.0;
    const bool unscaled = c1 == 1.0 && std::abs(c2 - 1.0) <= kRegularTol;
    f.classification = unscaled ? Criticality::critical : Criticality::subcritical_regular;
    return f;
  }

  f.classification = Criticality::supercritical_defective;
  f.extinction_prob = f.progeny_mass;
  f.offspring_slope = c1 * c2 * offspring_pgf_derivative(alpha, c1);
  const double rho_e = f.extinction_prob;
  f.fixed_point_residual = std::abs(c2 * offspring_pgf(alpha, c1 * rho_e) - rho_e);
  return f;
}

IncreasingRescaled classify_increasing_rescaled(const AlphaParam& alpha, double c1) {
  if (!(c1 > 0.0 && c1 < 1.0)) throw std::domain_error("classify_increasing_rescaled requires 0 < c1 < 1");
  const double a = alpha.value();
  const double theta = (1.0 - a) / a;
  const double c2 = std::pow(1.0 - c1, theta) / a;

  auto generator = [&](double y) { return a * c2 * std::pow(1.0 - c1 * y, -theta); };

  using State = std::array<double, 1>;
  State y = {0.0};
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(1e-10, 1e-10, odeint::runge_kutta_dopri5<State>());
  bool blew_up = false;
  auto rhs = [&](const State& s, State& dsdt, double) {
    if (!(c1 * s[0] < 1.0)) {
      blew_up = true;
      dsdt[0] = 0.0;
      return;
    }
    dsdt[0] = generator(s[0]);
  };
  odeint::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 1e-3);
  if (blew_up || !std::isfinite(y[0])) {
    throw std::runtime_error("integration failure: Phi~ reached the singularity 1/c1");
  }

  IncreasingRescaled out;
  auto& f = out.family;
  f.c1 = c1;
  f.c2 = c2;
  f.kind = TreeKind::increasing;
  f.offspring_at_one = generator(1.0);
  f.offspring_regular = std::abs(f.offspring_at_one - 1.0) <= kRegularTol;
  f.offspring_slope = theta * c1 / (1.0 - c1);
  f.progeny_mass = y[0];
  if (f.progeny_mass < 1.0) {
    f.classification = Criticality::supercritical_defective;
    f.extinction_prob = c1;
  } else {
    f.classification = Criticality::subcritical_regular;
    f.extinction_prob = 1.0;
  }
  out.progeny_mass_ode = y[0];
  out.progeny_mass_scaled = scaled_progeny_mass(a, c1, c1 * c2);
  out.progeny_mass_alternative = (1.0 - std::pow(c1 * c2, a)) / c1;
  out.alternative_threshold_holds = c1 >= a / (1.0 + a);
  return out;
}

LambdaScaledFamily lambda_scaled_family(const AlphaParam& /*alpha*/, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::domain_error("lambda must lie in (0, 1)");
  LambdaScaledFamily f;
  f.lambda = lambda;
  f.value_at_zero = 1.0 - lambda;
  f.value_at_one = 1.0;
  f.can_be_progeny = f.value_at_zero == 0.0;
  return f;
}

}  // namespace sibuya
