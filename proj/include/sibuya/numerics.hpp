#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

namespace sibuya {

/// Arbitrary-precision rational, always held in canonical form by GMP.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

enum class Mode { exact, float_ };

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

/// "p/q" with the denominator always spelled out, "-3/4", "0/1".
std::string to_string(const Rational& x);

/// Accepts "p/q", "p" or a decimal literal such as "0.25" (converted exactly).
Rational parse_rational(std::string_view text);

/// Natural log of a positive rational without overflowing to infinity for
/// numerators or denominators far beyond double range.
double log_rational(const Rational& x);

/// The tail/branching parameter alpha in (0,1).
///
/// Exact-mode computations need alpha = p/q as a reduced rational. A float-only
/// alpha (e.g. irrational values) is accepted by the float code paths and
/// rejected with std::domain_error by anything that asks for exact().
class AlphaParam {
 public:
  /// Requires 0 < p < q and gcd(p, q) = 1.
  AlphaParam(std::int64_t p, std::int64_t q);

  static AlphaParam from_float(double value);
  static AlphaParam parse(std::string_view text);

  bool is_exact() const { return exact_.has_value(); }
  const Rational& exact() const;
  double value() const { return value_; }

  std::int64_t numerator() const;
  std::int64_t denominator() const;

  /// theta = (1 - alpha) / alpha.
  Rational theta_exact() const;
  double theta() const { return (1.0 - value_) / value_; }

  std::string to_string() const;

  template <class T>
  T as() const {
    if constexpr (is_exact_v<T>) {
      return exact();
    } else {
      return static_cast<T>(value_);
    }
  }

  friend bool operator==(const AlphaParam& a, const AlphaParam& b) {
    return a.exact_ == b.exact_ && a.value_ == b.value_;
  }

 private:
  AlphaParam() = default;

  std::optional<Rational> exact_;
  double value_ = 0.5;
};

/// [a]_n = a (a+1) ... (a+n-1), [a]_0 = 1.
template <class T>
T rising_factorial(const T& a, unsigned n) {
  T out(1);
  for (unsigned j = 0; j < n; ++j) out *= a + T(j);
  return out;
}

/// (a)_n = a (a-1) ... (a-n+1), (a)_0 = 1.
template <class T>
T falling_factorial(const T& a, unsigned n) {
  T out(1);
  for (unsigned j = 0; j < n; ++j) out *= a - T(j);
  return out;
}

/// [x : step]_n = x (x+step) ... (x+(n-1) step).
template <class T>
T generalized_rising(const T& x, const T& step, unsigned n) {
  T out(1);
  for (unsigned j = 0; j < n; ++j) out *= x + T(j) * step;
  return out;
}

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

/// log Gamma(x) for x > 0, Lanczos approximation. Throws std::domain_error
/// for x <= 0 or NaN.
double log_gamma(double x);

/// log Gamma(a) - log Gamma(b) for a, b > 0, accurate when a and b are large
/// and close (where subtracting two log_gamma values would cancel).
double log_gamma_ratio(double a, double b);

}  // namespace sibuya
