#include "sibuya/dist.hpp"

#include <cmath>

#include "sibuya/compositions.hpp"
#include "sibuya/series.hpp"
#include "sibuya/stirling.hpp"

namespace sibuya {

OccupancyVector::OccupancyVector(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw std::invalid_argument("occupancy vector needs at least one part");
  for (unsigned p : parts_) {
    if (p == 0) throw std::invalid_argument("occupancy parts must be positive");
    total_ += p;
  }
}

Pmf<Rational> progeny_pmf(const AlphaParam& alpha, unsigned n_max) {
  if (n_max < 1) throw std::invalid_argument("progeny_pmf requires n_max >= 1");
  const Rational& a = alpha.exact();
  Pmf<Rational> out;
  Rational m = a;  // P(N = 1)
  Rational sum(0);
  for (unsigned n = 1; n <= n_max; ++n) {
    out.support.push_back(n);
    out.mass.push_back(m);
    sum += m;
    m *= (Rational(n) - a) / Rational(n + 1);
  }
  out.tail = Rational(1) - sum;
  return out;
}

Pmf<double> progeny_pmf_float(const AlphaParam& alpha, unsigned n_max) {
  if (n_max < 1) throw std::invalid_argument("progeny_pmf requires n_max >= 1");
  const double a = alpha.value();
  Pmf<double> out;
  double m = a;
  // P(N > n) = [1-alpha]_n / n! is computed as its own product so the tail
  // does not suffer from 1 - sum cancellation.
  double survival = 1.0 - a;
  for (unsigned n = 1; n <= n_max; ++n) {
    out.support.push_back(n);
    out.mass.push_back(m);
    m *= (n - a) / (n + 1.0);
    if (n < n_max) survival *= 1.0 - a / (n + 1.0);
  }
  out.tail = survival;
  return out;
}

Pmf<Rational> kn_pmf(const AlphaParam& alpha, unsigned n) {
  if (n < 1) throw std::invalid_argument("kn_pmf requires n >= 1");
  const Rational& a = alpha.exact();
  std::vector<Rational> p = {Rational(0), Rational(1)};  // index k, K_1 = 1
  for (unsigned m = 1; m < n; ++m) {
    std::vector<Rational> q(m + 2, Rational(0));
    const Rational denom = a + Rational(m);
    for (unsigned k = 1; k <= m + 1; ++k) {
      Rational v(0);
      if (k >= 2) v += Rational(k) * a / denom * p[k - 1];
      if (k <= m) v += (Rational(m) - Rational(k) * a) / denom * p[k];
      q[k] = std::move(v);
    }
    p = std::move(q);
  }
  Pmf<Rational> out;
  for (unsigned k = 1; k <= n; ++k) {
    out.support.push_back(k);
    out.mass.push_back(p[k]);
  }
  return out;
}

Pmf<Rational> kn_pmf_from_counts(const AlphaParam& alpha, unsigned n) {
  if (n < 1) throw std::invalid_argument("kn_pmf requires n >= 1");
  const auto table = build_triangle(alpha, n);
  const Rational total = rising_factorial(alpha.exact(), n);
  Pmf<Rational> out;
  for (unsigned k = 1; k <= n; ++k) {
    out.support.push_back(k);
    out.mass.push_back(table.forest_count(n, k) / total);
  }
  return out;
}

Pmf<Rational> kn_pmf_from_lagrange(const AlphaParam& alpha, unsigned n) {
  if (n < 1) throw std::invalid_argument("kn_pmf requires n >= 1");
  const unsigned order = n - 1;
  const auto phi_n = series_pow(offspring_series<Rational>(alpha, order), n);
  const auto weighted = series_mul(binomial_series(Rational(-2), order), phi_n);
  const Rational denominator = Rational(1, n) * weighted[n - 1];
  Pmf<Rational> out;
  for (unsigned k = 1; k <= n; ++k) {
    out.support.push_back(k);
    out.mass.push_back(Rational(k, n) * phi_n[n - k] / denominator);
  }
  return out;
}

double kn_mean_ode(const AlphaParam& alpha, double t) {
  if (!(t >= 1.0)) throw std::domain_error("kn_mean_ode requires t >= 1");
  const double a = alpha.value();
  return 2.0 * std::pow((t + a) / (1.0 + a), a) - 1.0;
}

namespace {

// w(m) = [1-alpha]_{m-1} / m! for m = 0..n (w(0) unused).
std::vector<Rational> tree_weights(const Rational& a, unsigned n) {
  std::vector<Rational> w(n + 1, Rational(0));
  if (n >= 1) w[1] = 1;
  for (unsigned m = 1; m < n; ++m) w[m + 1] = w[m] * (Rational(m) - a) / Rational(m + 1);
  return w;
}

Rational occupancy_mass(const Rational& a, const std::vector<Rational>& w, const Rational& prefactor,
                        const std::vector<unsigned>& parts) {
  Rational mass = prefactor;
  for (unsigned p : parts) mass *= a * w[p];
  return mass;
}

}  // namespace

Rational occupancy_pmf(const AlphaParam& alpha, const OccupancyVector& parts) {
  const unsigned n = parts.n();
  const unsigned k = parts.k();
  const Rational& a = alpha.exact();
  const auto table = build_triangle(alpha, n);
  const Rational prefactor = Rational(factorial(n)) / table.forest_count(n, k);
  return occupancy_mass(a, tree_weights(a, n), prefactor, parts.parts());
}

std::vector<std::pair<OccupancyVector, Rational>> occupancy_law(const AlphaParam& alpha, unsigned n,
                                                                unsigned k) {
  if (k < 1 || k > n) throw std::invalid_argument("occupancy_law requires 1 <= k <= n");
  const Rational& a = alpha.exact();
  const auto table = build_triangle(alpha, n);
  const Rational prefactor = Rational(factorial(n)) / table.forest_count(n, k);
  const auto w = tree_weights(a, n);
  std::vector<std::pair<OccupancyVector, Rational>> out;
  for_each_composition(n, k, [&](const std::vector<unsigned>& parts) {
    out.emplace_back(OccupancyVector(parts), occupancy_mass(a, w, prefactor, parts));
  });
  return out;
}

Pmf<Rational> marginal_pmf(const AlphaParam& alpha, unsigned n, unsigned k) {
  if (k < 1 || k > n) throw std::invalid_argument("marginal_pmf requires 1 <= k <= n");
  const auto phi = sibuya_pgf_series<Rational>(alpha, n);
  const auto rest = series_pow(phi, k - 1);
  const auto all = series_mul(rest, phi);
  Pmf<Rational> out;
  for (unsigned n1 = 1; n1 <= n - k + 1; ++n1) {
    out.support.push_back(n1);
    out.mass.push_back(phi[n1] * rest[n - n1] / all[n]);
  }
  return out;
}

Pmf<Rational> tilted_kn_pmf(const AlphaParam& alpha, const Rational& c1, unsigned n) {
  if (!(c1 > 0 && c1 <= 1)) throw std::domain_error("tilted_kn_pmf requires 0 < c1 <= 1");
  if (n < 1) throw std::invalid_argument("tilted_kn_pmf requires n >= 1");
  const auto table = build_triangle(alpha, n);
  const Rational inv = Rational(1) / c1;
  std::vector<Rational> weights;
  Rational total(0);
  Rational scale(1);
  for (unsigned k = 1; k <= n; ++k) {
    scale *= inv;
    weights.push_back(scale * table.forest_count(n, k));
    total += weights.back();
  }
  Pmf<Rational> out;
  for (unsigned k = 1; k <= n; ++k) {
    out.support.push_back(k);
    out.mass.push_back(weights[k - 1] / total);
  }
  return out;
}

double ml_moment(const AlphaParam& alpha, double theta, double q) {
  const double a = alpha.value();
  if (!(theta > 0.0)) throw std::domain_error("ml_moment requires theta > 0");
  if (!(q > -theta / a)) throw std::domain_error("ml_moment requires q > -theta/alpha");
  if (q == 0.0) return 1.0;
  return std::exp(log_gamma(theta) - log_gamma(theta + q * a) + log_gamma(theta / a + q) -
                  log_gamma(theta / a));
}

double ml_variance(const AlphaParam& alpha, double theta) {
  const double m1 = ml_moment(alpha, theta, 1.0);
  return ml_moment(alpha, theta, 2.0) - m1 * m1;
}

namespace {

// [theta:alpha]_k / [theta]_n with the common factor theta cancelled, valid
// for every theta > -alpha including theta = 0 (k, n >= 1).
template <class T>
T crp_prefactor(const T& theta, const T& a, unsigned k, unsigned n) {
  T num(1);
  for (unsigned l = 1; l < k; ++l) num *= theta + T(l) * a;
  T den(1);
  for (unsigned j = 1; j < n; ++j) den *= theta + T(j);
  return num / den;
}

}  // namespace

Pmf<double> crp_sn_pmf(const AlphaParam& alpha, double theta, unsigned n) {
  if (n < 1) throw std::invalid_argument("crp_sn_pmf requires n >= 1");
  const double a = alpha.value();
  if (!(theta > -a)) throw std::domain_error("crp_sn_pmf requires theta > -alpha");
  const auto table = build_triangle(alpha, n);
  Pmf<double> out;
  out.support.push_back(0);
  out.mass.push_back(0.0);
  for (unsigned k = 1; k <= n; ++k) {
    out.support.push_back(k);
    out.mass.push_back(crp_prefactor(theta, a, k, n) * to_double(table.at(n, k)));
  }
  return out;
}

Pmf<Rational> crp_sn_pmf(const AlphaParam& alpha, const Rational& theta, unsigned n) {
  if (n < 1) throw std::invalid_argument("crp_sn_pmf requires n >= 1");
  const Rational& a = alpha.exact();
  if (!(theta > -a)) throw std::domain_error("crp_sn_pmf requires theta > -alpha");
  const auto table = build_triangle(alpha, n);
  Pmf<Rational> out;
  out.support.push_back(0);
  out.mass.push_back(Rational(0));
  for (unsigned k = 1; k <= n; ++k) {
    out.support.push_back(k);
    out.mass.push_back(crp_prefactor(theta, a, k, n) * table.at(n, k));
  }
  return out;
}

std::vector<MartingaleStep> kn_martingale_steps(const AlphaParam& alpha, unsigned n) {
  if (n < 1) throw std::invalid_argument("kn_martingale_steps requires n >= 1");
  const Rational& a = alpha.exact();
  // g_n = Gamma(n+a)/Gamma(n+2a) relative to g_1 = [1+a]_{n-1} / [1+2a]_{n-1}.
  const Rational g_n =
      rising_factorial(Rational(1) + a, n - 1) / rising_factorial(Rational(1) + Rational(2) * a, n - 1);
  const Rational g_next = g_n * (Rational(n) + a) / (Rational(n) + Rational(2) * a);
  std::vector<MartingaleStep> out;
  for (unsigned k = 1; k <= n; ++k) {
    const Rational up = Rational(k + 1) * a / (a + Rational(n));
    MartingaleStep step;
    step.n = n;
    step.k = k;
    step.current = g_n * Rational(k + 1);
    step.expected_next = g_next * (Rational(k + 2) * up + Rational(k + 1) * (Rational(1) - up));
    out.push_back(std::move(step));
  }
  return out;
}

RenewalCheck renewal_convolution(const AlphaParam& alpha, unsigned n, unsigned k) {
  if (k < 1 || k > n) throw std::invalid_argument("renewal_convolution requires 1 <= k <= n");
  const auto phi = sibuya_pgf_series<Rational>(alpha, n);
  const auto rest = series_pow(phi, k - 1);
  RenewalCheck out;
  out.direct = series_pow(phi, k)[n];
  out.convolution = 0;
  for (unsigned m = 1; m <= n; ++m) out.convolution += phi[m] * rest[n - m];
  return out;
}

}  // namespace sibuya
