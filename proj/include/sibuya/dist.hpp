#pragma once

// Exact finite-n laws of Sibuya trees and forests: progeny, number of trees
// K_n, joint and marginal tree sizes, tilted K_n, CRP table counts, and the
// Mittag-Leffler moments governing K_n / n^alpha.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sibuya/numerics.hpp"

namespace sibuya {

/// Finite discrete law. `tail`, when present, is the explicitly labelled
/// residual mass on values beyond the largest support label.
template <class T>
struct Pmf {
  std::vector<std::int64_t> support;
  std::vector<T> mass;
  std::optional<T> tail;

  static constexpr Mode mode = is_exact_v<T> ? Mode::exact : Mode::float_;

  T total() const {
    T sum(0);
    for (const auto& m : mass) sum += m;
    if (tail) sum += *tail;
    return sum;
  }

  bool is_normalized() const {
    if constexpr (is_exact_v<T>) {
      return total() == T(1);
    } else {
      return std::abs(total() - 1.0) <= 1e-12;
    }
  }

  bool is_nonnegative() const {
    for (const auto& m : mass) {
      if (m < T(0)) return false;
    }
    return !tail || *tail >= T(0);
  }

  /// Mass at a label; zero when the label is outside the support.
  T at(std::int64_t label) const {
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] == label) return mass[i];
    }
    return T(0);
  }

  /// Mean over the labelled support (the tail is excluded).
  T mean() const {
    T sum(0);
    for (std::size_t i = 0; i < support.size(); ++i) sum += T(support[i]) * mass[i];
    return sum;
  }

  Pmf<double> to_float() const {
    Pmf<double> out;
    out.support = support;
    for (const auto& m : mass) out.mass.push_back(to_double(m));
    if (tail) out.tail = to_double(*tail);
    return out;
  }
};

/// Positive parts n_1..n_k summing to n.
class OccupancyVector {
 public:
  explicit OccupancyVector(std::vector<unsigned> parts);

  const std::vector<unsigned>& parts() const { return parts_; }
  unsigned k() const { return static_cast<unsigned>(parts_.size()); }
  unsigned n() const { return total_; }

  friend bool operator==(const OccupancyVector&, const OccupancyVector&) = default;

 private:
  std::vector<unsigned> parts_;
  unsigned total_ = 0;
};

/// P(N(1) = n) = alpha [1-alpha]_{n-1} / n! for n = 1..n_max, tail = P(N(1) > n_max).
Pmf<Rational> progeny_pmf(const AlphaParam& alpha, unsigned n_max);

/// Float version for large n_max.
Pmf<double> progeny_pmf_float(const AlphaParam& alpha, unsigned n_max);

/// Law of K_n from the pure-birth recurrence, K_1 = 1.
Pmf<Rational> kn_pmf(const AlphaParam& alpha, unsigned n);

/// Law of K_n as C_{n,k} / [alpha]_n from the Stirling triangle.
Pmf<Rational> kn_pmf_from_counts(const AlphaParam& alpha, unsigned n);

/// Law of K_n as the ratio of Lagrange coefficients
/// ((k/n)[z^{n-k}] phi^n) / ((1/n)[z^{n-1}] (1-z)^{-2} phi^n).
Pmf<Rational> kn_pmf_from_lagrange(const AlphaParam& alpha, unsigned n);

/// Mean of K_n from (n + alpha) mu_{n+1} = alpha (2 mu_n + 1) + n mu_n, mu_1 = 1.
template <class T>
T kn_mean(const AlphaParam& alpha, unsigned n) {
  if (n < 1) throw std::invalid_argument("kn_mean requires n >= 1");
  const T a = alpha.as<T>();
  T mu(1);
  for (unsigned m = 1; m < n; ++m) mu = (a * (T(2) * mu + T(1)) + T(m) * mu) / (T(m) + a);
  return mu;
}

/// Continuous-time approximation mu_t = 2 ((t + alpha)/(1 + alpha))^alpha - 1, t >= 1.
double kn_mean_ode(const AlphaParam& alpha, double t);

/// P(N_{n,k} = parts) = (n!/C_{n,k}) alpha^k prod [1-alpha]_{n_l-1}/n_l!.
Rational occupancy_pmf(const AlphaParam& alpha, const OccupancyVector& parts);

/// Every composition of n into k parts (colexicographic order) with its mass.
std::vector<std::pair<OccupancyVector, Rational>> occupancy_law(const AlphaParam& alpha, unsigned n,
                                                                unsigned k);

/// P(N_{n,1}(k) = n1) = [z^{n1}]Phi [z^{n-n1}]Phi^{k-1} / [z^n]Phi^k, n1 = 1..n-k+1.
Pmf<Rational> marginal_pmf(const AlphaParam& alpha, unsigned n, unsigned k);

/// Law of K_n for the rescaled family: P(K_n = k) proportional to c1^{-k} C_{n,k}.
/// c1 = 1 gives kn_pmf. Requires 0 < c1 <= 1.
Pmf<Rational> tilted_kn_pmf(const AlphaParam& alpha, const Rational& c1, unsigned n);

/// E(W_{alpha,theta}^q) = Gamma(theta) Gamma(theta/alpha + q) / (Gamma(theta + q alpha) Gamma(theta/alpha)).
/// Throws std::domain_error unless q > -theta/alpha.
double ml_moment(const AlphaParam& alpha, double theta, double q);

/// Var(W_{alpha,theta}).
double ml_variance(const AlphaParam& alpha, double theta);

/// CRP(alpha, theta) table count: P(S_n = k) = [theta:alpha]_k S_{n,k} / [theta]_n, k = 0..n.
Pmf<double> crp_sn_pmf(const AlphaParam& alpha, double theta, unsigned n);
/// Exact version for rational theta > -alpha.
Pmf<Rational> crp_sn_pmf(const AlphaParam& alpha, const Rational& theta, unsigned n);

/// One martingale step for M_n = (Gamma(n+alpha)/Gamma(n+2alpha)) (K_n + 1),
/// written with rational rising-factorial ratios relative to n = 1.
struct MartingaleStep {
  unsigned n = 0;
  unsigned k = 0;
  Rational current;        // M_n(k)
  Rational expected_next;  // E[M_{n+1} | K_n = k]
};

/// All states k = 1..n of K_n.
std::vector<MartingaleStep> kn_martingale_steps(const AlphaParam& alpha, unsigned n);

/// First-tree decomposition [z^n]Phi^k = sum_m [z^m]Phi [z^{n-m}]Phi^{k-1}.
struct RenewalCheck {
  Rational direct;
  Rational convolution;
};
RenewalCheck renewal_convolution(const AlphaParam& alpha, unsigned n, unsigned k);

}  // namespace sibuya
