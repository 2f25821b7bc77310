#include "sibuya/numerics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sibuya {

std::string to_string(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

Integer parse_integer(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw std::invalid_argument("empty integer");
  std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
  if (start == s.size()) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
    }
  }
  return Integer(std::string(s.front() == '+' ? s.substr(1) : s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    Integer w = parse_integer(whole);
    Integer f = frac.empty() ? Integer(0) : parse_integer(frac);
    if (!frac.empty() && (frac.front() == '-' || frac.front() == '+')) {
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Rational out = Rational(w) + Rational(f, scale);
    return negative ? -out : out;
  }
  return Rational(parse_integer(text));
}

double log_rational(const Rational& x) {
  if (x <= 0) throw std::domain_error("log of non-positive rational");
  long num_exp = 0;
  long den_exp = 0;
  double num_mant = mpz_get_d_2exp(&num_exp, numerator(x).backend().data());
  double den_mant = mpz_get_d_2exp(&den_exp, denominator(x).backend().data());
  return std::log(num_mant) - std::log(den_mant) +
         static_cast<double>(num_exp - den_exp) * std::numbers::ln2;
}

AlphaParam::AlphaParam(std::int64_t p, std::int64_t q) {
  if (p <= 0 || q <= 0 || p >= q) {
    throw std::invalid_argument("alpha = " + std::to_string(p) + "/" + std::to_string(q) +
                                " must satisfy 0 < p < q");
  }
  if (std::gcd(p, q) != 1) {
    throw std::invalid_argument("alpha = " + std::to_string(p) + "/" + std::to_string(q) +
                                " is not reduced");
  }
  exact_ = Rational(p, q);
  value_ = static_cast<double>(p) / static_cast<double>(q);
}

AlphaParam AlphaParam::from_float(double value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0,1)");
  }
  AlphaParam a;
  a.value_ = value;
  return a;
}

AlphaParam AlphaParam::parse(std::string_view text) {
  text = trim(text);
  if (text.find('/') == std::string_view::npos) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::invalid_argument("cannot parse alpha '" + std::string(text) + "'");
    }
    return from_float(v);
  }
  Rational r = parse_rational(text);
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  // parse_rational canonicalises, so reject inputs that were not already reduced.
  auto slash = text.find('/');
  if (parse_integer(text.substr(0, slash)) != num || parse_integer(text.substr(slash + 1)) != den) {
    throw std::invalid_argument("alpha '" + std::string(text) + "' is not a reduced fraction");
  }
  if (num > INT64_MAX || den > INT64_MAX) {
    throw std::invalid_argument("alpha '" + std::string(text) + "' is too large");
  }
  return AlphaParam(num.convert_to<std::int64_t>(), den.convert_to<std::int64_t>());
}

const Rational& AlphaParam::exact() const {
  if (!exact_) throw std::domain_error("exact mode requires a rational alpha");
  return *exact_;
}

std::int64_t AlphaParam::numerator() const {
  return boost::multiprecision::numerator(exact()).convert_to<std::int64_t>();
}

std::int64_t AlphaParam::denominator() const {
  return boost::multiprecision::denominator(exact()).convert_to<std::int64_t>();
}

Rational AlphaParam::theta_exact() const { return (Rational(1) - exact()) / exact(); }

std::string AlphaParam::to_string() const {
  if (exact_) return sibuya::to_string(*exact_);
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, ptr);
}

Integer factorial(unsigned n) {
  Integer out = 1;
  for (unsigned j = 2; j <= n; ++j) out *= j;
  return out;
}

Integer binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.backend().data(), n, k);
  return out;
}

namespace {

// g = 7, 9-term Lanczos coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos_log_gamma(double x) {
  // Valid for x >= 0.5.
  double xm1 = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (xm1 + static_cast<double>(i));
  double t = xm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma requires x > 0");
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_log_gamma(1.0 - x);
  }
  return lanczos_log_gamma(x);
}

double log_gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("log_gamma_ratio requires a, b > 0");
  if (std::min(a, b) < 20.0) return log_gamma(a) - log_gamma(b);
  // Stirling series; the first omitted term is O(z^-7) < 1e-12 for z >= 20.
  auto tail = [](double z) {
    double inv = 1.0 / z;
    double inv2 = inv * inv;
    return inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0));
  };
  double d = a - b;
  return (a - 0.5) * std::log1p(d / b) + d * std::log(b) - d + (tail(a) - tail(b));
}

}  // namespace sibuya
