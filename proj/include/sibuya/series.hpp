#pragma once

// Truncated formal power series over exact rationals or doubles.
//
// A TruncatedSeries<T> of order N stores the coefficients of z^0 .. z^N.
// Exact and float series are distinct types, so the two modes can never be
// mixed in one expression.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sibuya/numerics.hpp"

namespace sibuya {

template <class T>
class TruncatedSeries {
 public:
  static constexpr Mode mode = is_exact_v<T> ? Mode::exact : Mode::float_;

  explicit TruncatedSeries(std::size_t order) : coeffs_(order + 1, T(0)) {}

  explicit TruncatedSeries(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw std::invalid_argument("series needs at least one coefficient");
  }

  static TruncatedSeries constant(const T& c, std::size_t order) {
    TruncatedSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }

  /// z, truncated at the given order (order >= 1).
  static TruncatedSeries identity(std::size_t order) {
    TruncatedSeries s(order);
    if (order >= 1) s.coeffs_[1] = T(1);
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }

  const T& operator[](std::size_t n) const { return coeffs_[n]; }
  T& operator[](std::size_t n) { return coeffs_[n]; }

  /// [z^n]; zero for n beyond the truncation order is NOT assumed, so this throws.
  const T& coeff(std::size_t n) const {
    if (n >= coeffs_.size()) throw std::out_of_range("coefficient beyond truncation order");
    return coeffs_[n];
  }

  std::span<const T> coeffs() const { return coeffs_; }

  TruncatedSeries truncated(std::size_t order) const {
    if (order > this->order()) throw std::invalid_argument("cannot extend a truncated series");
    return TruncatedSeries(std::vector<T>(coeffs_.begin(), coeffs_.begin() + order + 1));
  }

  /// Divides by z^shift; the dropped low coefficients must be zero.
  TruncatedSeries shifted_down(std::size_t shift) const {
    if (shift > order()) throw std::invalid_argument("shift exceeds series order");
    for (std::size_t i = 0; i < shift; ++i) {
      if (coeffs_[i] != T(0)) throw std::domain_error("series is not divisible by z^shift");
    }
    return TruncatedSeries(std::vector<T>(coeffs_.begin() + shift, coeffs_.end()));
  }

  /// Horner evaluation at a point (meaningful for float mode or polynomials).
  T evaluate(const T& z) const {
    T acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

 private:
  std::vector<T> coeffs_;
};

using ExactSeries = TruncatedSeries<Rational>;
using FloatSeries = TruncatedSeries<double>;

template <class T>
TruncatedSeries<T> operator+(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries<T> out(n);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a[i] + b[i];
  return out;
}

template <class T>
TruncatedSeries<T> operator-(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries<T> out(n);
  for (std::size_t i = 0; i <= n; ++i) out[i] = a[i] - b[i];
  return out;
}

template <class T>
TruncatedSeries<T> operator*(const T& c, const TruncatedSeries<T>& a) {
  TruncatedSeries<T> out(a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) out[i] = c * a[i];
  return out;
}

/// Cauchy product, truncated to the smaller of the two orders.
template <class T>
TruncatedSeries<T> series_mul(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  const std::size_t n = std::min(a.order(), b.order());
  TruncatedSeries<T> out(n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (a[i] == T(0)) continue;
    for (std::size_t j = 0; i + j <= n; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

template <class T>
TruncatedSeries<T> operator*(const TruncatedSeries<T>& a, const TruncatedSeries<T>& b) {
  return series_mul(a, b);
}

/// a^k by binary exponentiation.
template <class T>
TruncatedSeries<T> series_pow(const TruncatedSeries<T>& a, unsigned k) {
  auto result = TruncatedSeries<T>::constant(T(1), a.order());
  auto base = a;
  while (k > 0) {
    if (k & 1U) result = series_mul(result, base);
    k >>= 1U;
    if (k > 0) base = series_mul(base, base);
  }
  return result;
}

/// 1/a; throws std::domain_error when the constant term is zero.
template <class T>
TruncatedSeries<T> series_reciprocal(const TruncatedSeries<T>& a) {
  if (a[0] == T(0)) throw std::domain_error("reciprocal of a series with zero constant term");
  const std::size_t n = a.order();
  TruncatedSeries<T> out(n);
  const T inv0 = T(1) / a[0];
  out[0] = inv0;
  for (std::size_t m = 1; m <= n; ++m) {
    T acc(0);
    for (std::size_t j = 1; j <= m; ++j) acc += a[j] * out[m - j];
    out[m] = -acc * inv0;
  }
  return out;
}

/// outer(inner(z)) for inner with zero constant term, by Horner on series.
template <class T>
TruncatedSeries<T> series_compose(const TruncatedSeries<T>& outer, const TruncatedSeries<T>& inner) {
  if (inner[0] != T(0)) throw std::domain_error("composition needs inner(0) = 0");
  const std::size_t n = std::min(outer.order(), inner.order());
  auto acc = TruncatedSeries<T>::constant(outer[n], n);
  auto in = inner.truncated(n);
  for (std::size_t i = n; i-- > 0;) {
    acc = series_mul(acc, in);
    acc[0] += outer[i];
  }
  return acc;
}

/// Term-by-term primitive with zero constant; the order grows by one.
template <class T>
TruncatedSeries<T> series_integrate(const TruncatedSeries<T>& a) {
  TruncatedSeries<T> out(a.order() + 1);
  for (std::size_t i = 0; i <= a.order(); ++i) out[i + 1] = a[i] / T(i + 1);
  return out;
}

/// (1 - z)^r up to z^N via c_{n+1} = c_n (n - r) / (n + 1).
template <class T>
TruncatedSeries<T> binomial_series(const T& r, std::size_t order) {
  TruncatedSeries<T> out(order);
  out[0] = T(1);
  for (std::size_t n = 0; n < order; ++n) out[n + 1] = out[n] * (T(n) - r) / T(n + 1);
  return out;
}

/// Sibuya pgf 1 - (1 - z)^alpha.
template <class T>
TruncatedSeries<T> sibuya_pgf_series(const AlphaParam& alpha, std::size_t order) {
  auto s = binomial_series(alpha.as<T>(), order);
  for (std::size_t i = 0; i <= order; ++i) s[i] = -s[i];
  s[0] += T(1);
  return s;
}

/// P(z) = 1 - (1 - z)^(1/alpha), the primitive whose inverse is the Sibuya pgf.
template <class T>
TruncatedSeries<T> primitive_series(const AlphaParam& alpha, std::size_t order) {
  auto s = binomial_series(T(1) / alpha.as<T>(), order);
  for (std::size_t i = 0; i <= order; ++i) s[i] = -s[i];
  s[0] += T(1);
  return s;
}

/// Critical BGW offspring pgf z / (1 - (1 - z)^(1/alpha)); constant term alpha.
template <class T>
TruncatedSeries<T> offspring_series(const AlphaParam& alpha, std::size_t order) {
  return series_reciprocal(primitive_series<T>(alpha, order + 1).shifted_down(1));
}

/// Increasing-tree generator alpha (1 - z)^(-(1 - alpha)/alpha).
template <class T>
TruncatedSeries<T> increasing_generator_series(const AlphaParam& alpha, std::size_t order) {
  const T a = alpha.as<T>();
  return a * binomial_series(-(T(1) - a) / a, order);
}

/// Lagrange-inversion cross-check: first = [z^n] Phi^k, second = (k/n) [z^{n-k}] g^n.
struct LagrangePair {
  Rational coefficient;
  Rational lagrange;
  bool agrees() const { return coefficient == lagrange; }
};

/// BGW route with g = offspring_series. Requires 1 <= k <= n.
LagrangePair lagrange_check_progeny(const AlphaParam& alpha, unsigned n, unsigned k);

struct IncreasingLagrangeResult {
  LagrangePair pair;
  /// R(z) = z / P(z), with P obtained by integrating 1 / increasing generator,
  /// matches offspring_series coefficient-wise up to order n.
  bool r_matches_offspring = false;
};

/// Increasing-tree route with g = R = z / P. Requires 1 <= k <= n.
IncreasingLagrangeResult lagrange_check_increasing(const AlphaParam& alpha, unsigned n, unsigned k);

/// Precomputed powers for sweeping Lagrange identities over a whole (n, k) grid.
class LagrangeTables {
 public:
  enum class Route { bgw_offspring, increasing_primitive };

  LagrangeTables(const AlphaParam& alpha, unsigned n_max, Route route);

  /// [z^n] Phi^k.
  const Rational& progeny_power(unsigned k, unsigned n) const { return phi_pow_[k][n]; }
  /// (k/n) [z^{n-k}] g^n.
  Rational lagrange_side(unsigned n, unsigned k) const;
  LagrangePair check(unsigned n, unsigned k) const;

  const ExactSeries& generator() const { return generator_; }
  unsigned n_max() const { return n_max_; }

 private:
  unsigned n_max_;
  ExactSeries generator_;
  std::vector<std::vector<Rational>> phi_pow_;  // [k][n]
  std::vector<std::vector<Rational>> gen_pow_;  // [n][m] = [z^m] g^n
};

/// R(z) = z / P(z) where P(z) = integral of 1 / increasing generator.
ExactSeries increasing_offspring_series(const AlphaParam& alpha, std::size_t order);

}  // namespace sibuya
