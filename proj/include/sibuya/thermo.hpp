#pragma once

// Thermodynamic limit of large Sibuya forests (n, k -> infinity, n/k -> rho)
// and the rescaled sub/super-critical families. Everything here is float-only;
// the exact coefficient oracles live in series/dist.

#include <string>

#include "sibuya/numerics.hpp"

namespace sibuya {

/// Sibuya pgf Phi(z) = 1 - (1 - z)^alpha for z in [0, 1].
double sibuya_pgf(const AlphaParam& alpha, double z);

/// Offspring pgf phi(x) = x / (1 - (1 - x)^(1/alpha)) and its derivative, x in [0, 1].
double offspring_pgf(const AlphaParam& alpha, double x);
double offspring_pgf_derivative(const AlphaParam& alpha, double x);

/// Psi(z) = z Phi'(z) / Phi(z); throws std::domain_error outside (0, 1).
double psi(const AlphaParam& alpha, double z);
double psi_derivative(const AlphaParam& alpha, double z);

struct ThermoSolution {
  double rho = 0.0;
  double z_rho = 0.0;
  /// 1 - z_rho, carried separately so roots near 1 keep their precision.
  double one_minus_z = 1.0;
  /// Phi(z_rho).
  double phi_at_z_rho = 0.0;
  /// rho log z_rho - log Phi(z_rho).
  double free_energy = 0.0;
  /// |Psi(z_rho) - rho|.
  double residual = 0.0;
};

/// Root of Psi(z) = rho: bisection to relative width 1e-10 in z, or in 1 - z when
/// the root exceeds 1/2, then at most five Newton steps. Requires rho > 1.
ThermoSolution solve_z_rho(const AlphaParam& alpha, double rho);

/// log z_rho, from whichever of z_rho and 1 - z_rho is held exactly.
double log_z_rho(const ThermoSolution& sol);

/// Phi_rho(z) = Phi(z z_rho) / Phi(z_rho), z in [0, 1/z_rho).
double phi_rho(const AlphaParam& alpha, double rho, double z);
double phi_rho(const AlphaParam& alpha, const ThermoSolution& sol, double z);

/// Induced offspring pgf phi_rho(z) = z_rho phi(Phi(z_rho) z) / Phi(z_rho) and
/// its derivative at 1, z_rho phi'(Phi(z_rho)).
double induced_offspring_pgf(const AlphaParam& alpha, const ThermoSolution& sol, double z);
double induced_offspring_slope(const AlphaParam& alpha, const ThermoSolution& sol);

/// Cramer rate f_rho(r) = r log z_r - log Phi_rho(z_r) with Psi(z_rho z_r) = r.
double rate_function(const AlphaParam& alpha, double rho, double r);

/// -(1/k) log [z^n] Phi^k from exact coefficients. Requires 1 <= k <= n <= 200.
double free_energy_oracle(const AlphaParam& alpha, unsigned n, unsigned k);

enum class TreeKind { simply_generated, increasing };
enum class Criticality { critical, subcritical_regular, supercritical_defective };

std::string to_string(TreeKind kind);
std::string to_string(Criticality c);

struct RescaledFamily {
  double c1 = 1.0;
  double c2 = 1.0;
  TreeKind kind = TreeKind::simply_generated;
  Criticality classification = Criticality::critical;
  double extinction_prob = 1.0;
  /// Whether phi~(1) = 1.
  bool offspring_regular = true;
  /// phi~(1) = c2 phi(c1).
  double offspring_at_one = 1.0;
  /// phi~'(1) when the offspring law is regular.
  double offspring_slope = 1.0;
  /// Phi~(1), the total mass of the rescaled progeny law.
  double progeny_mass = 1.0;
  /// |phi~(rho_e) - rho_e| in the supercritical case, 0 otherwise.
  double fixed_point_residual = 0.0;
};

/// Simply generated family Phi~(z) = c1^{-1} Phi(c1 c2 z), phi~(z) = c2 phi(c1 z).
/// Requires 0 < c1 <= 1, c2 > 0, c1 c2 <= 1 and c2 <= c1^{-1}(1 - (1 - c1)^{1/alpha})
/// (otherwise Phi~(1) > 1 and the family is not a law); throws std::domain_error.
RescaledFamily classify_rescaled(const AlphaParam& alpha, double c1, double c2);

/// Regular boundary c2 = c1^{-1}(1 - (1 - c1)^{1/alpha}).
double regular_boundary_c2(const AlphaParam& alpha, double c1);

struct IncreasingRescaled {
  RescaledFamily family;
  /// Phi~(1) from adaptive integration of Phi~' = phi~(Phi~), Phi~(0) = 0.
  double progeny_mass_ode = 0.0;
  /// c1^{-1}(1 - (1 - c1 c2)^alpha), the value implied by Phi~ = c1^{-1} Phi(c1 c2 z).
  double progeny_mass_scaled = 0.0;
  /// c1^{-1}(1 - (c1 c2)^alpha), an alternative closed form that disagrees with the ODE.
  double progeny_mass_alternative = 0.0;
  /// Whether c1 >= alpha/(1+alpha), the threshold under which the alternative form stays <= 1.
  bool alternative_threshold_holds = false;
};

/// Increasing family with c2 = alpha^{-1}(1 - c1)^{(1-alpha)/alpha}, making
/// phi~(z) = alpha c2 (1 - c1 z)^{-(1-alpha)/alpha} a regular pgf. Requires 0 < c1 < 1.
IncreasingRescaled classify_increasing_rescaled(const AlphaParam& alpha, double c1);

/// Phi~(z) = 1 - lambda (1 - z)^alpha, lambda in (0, 1): a regular pgf with
/// Phi~(0) = 1 - lambda != 0, hence never a rooted-BGW progeny law.
struct LambdaScaledFamily {
  double lambda = 0.0;
  double value_at_zero = 0.0;
  double value_at_one = 1.0;
  bool can_be_progeny = false;
};
LambdaScaledFamily lambda_scaled_family(const AlphaParam& alpha, double lambda);

}  // namespace sibuya
