#include "sibuya/series.hpp"

namespace sibuya {

namespace {

void require_nk(unsigned n, unsigned k) {
  if (k < 1 || n < k) throw std::invalid_argument("Lagrange check requires 1 <= k <= n");
}

Rational lagrange_rhs(const ExactSeries& generator, unsigned n, unsigned k) {
  auto power = series_pow(generator.truncated(n - k), n);
  return Rational(k, n) * power[n - k];
}

}  // namespace

ExactSeries increasing_offspring_series(const AlphaParam& alpha, std::size_t order) {
  auto inverse_generator = series_reciprocal(increasing_generator_series<Rational>(alpha, order));
  auto primitive = series_integrate(inverse_generator);  // order + 1, P(0) = 0
  return series_reciprocal(primitive.shifted_down(1));
}

LagrangePair lagrange_check_progeny(const AlphaParam& alpha, unsigned n, unsigned k) {
  require_nk(n, k);
  auto phi_k = series_pow(sibuya_pgf_series<Rational>(alpha, n), k);
  auto offspring = offspring_series<Rational>(alpha, n - k);
  return {phi_k[n], lagrange_rhs(offspring, n, k)};
}

IncreasingLagrangeResult lagrange_check_increasing(const AlphaParam& alpha, unsigned n, unsigned k) {
  require_nk(n, k);
  auto r = increasing_offspring_series(alpha, n);
  auto phi_k = series_pow(sibuya_pgf_series<Rational>(alpha, n), k);
  IncreasingLagrangeResult out;
  out.pair = {phi_k[n], lagrange_rhs(r, n, k)};
  out.r_matches_offspring = (r == offspring_series<Rational>(alpha, n));
  return out;
}

LagrangeTables::LagrangeTables(const AlphaParam& alpha, unsigned n_max, Route route)
    : n_max_(n_max),
      generator_(route == Route::bgw_offspring
                     ? offspring_series<Rational>(alpha, n_max)
                     : increasing_offspring_series(alpha, n_max)) {
  if (n_max < 1) throw std::invalid_argument("LagrangeTables needs n_max >= 1");
  const auto phi = sibuya_pgf_series<Rational>(alpha, n_max);
  auto power = ExactSeries::constant(Rational(1), n_max);
  phi_pow_.reserve(n_max + 1);
  for (unsigned k = 0; k <= n_max; ++k) {
    phi_pow_.emplace_back(power.coeffs().begin(), power.coeffs().end());
    power = series_mul(power, phi);
  }
  auto gpow = ExactSeries::constant(Rational(1), n_max);
  gen_pow_.reserve(n_max + 1);
  for (unsigned n = 0; n <= n_max; ++n) {
    gen_pow_.emplace_back(gpow.coeffs().begin(), gpow.coeffs().end());
    gpow = series_mul(gpow, generator_);
  }
}

Rational LagrangeTables::lagrange_side(unsigned n, unsigned k) const {
  require_nk(n, k);
  if (n > n_max_) throw std::out_of_range("n beyond LagrangeTables range");
  return Rational(k, n) * gen_pow_[n][n - k];
}

LagrangePair LagrangeTables::check(unsigned n, unsigned k) const {
  return {progeny_power(k, n), lagrange_side(n, k)};
}

}  // namespace sibuya
