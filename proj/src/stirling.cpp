#include "sibuya/stirling.hpp"

#include <stdexcept>

#include "sibuya/compositions.hpp"
#include "sibuya/series.hpp"

namespace sibuya {

StirlingTable::StirlingTable(Variant variant, GeneralParams params,
                             std::vector<std::vector<Rational>> rows)
    : variant_(variant), params_(std::move(params)), rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("empty Stirling table");
}

const Rational& StirlingTable::at(unsigned n, unsigned k) const {
  static const Rational zero(0);
  const auto& r = rows_.at(n);
  return k < r.size() ? r[k] : zero;
}

Rational StirlingTable::forest_count(unsigned n, unsigned k) const {
  const Rational& alpha = params_.alpha1;
  Rational scale = Rational(factorial(k));
  for (unsigned j = 0; j < k; ++j) scale *= alpha;
  return scale * at(n, k);
}

namespace {

StirlingTable triangle(const Rational& a1, const Rational& a2, const Rational& w2, unsigned n_max,
                       StirlingTable::Variant variant) {
  std::vector<std::vector<Rational>> rows(n_max + 1);
  rows[0] = {Rational(1)};
  for (unsigned n = 0; n < n_max; ++n) {
    const auto& prev = rows[n];
    auto& next = rows[n + 1];
    next.assign(n + 2, Rational(0));
    // S_{n+1,0} = (n alpha2 + w2) S_{n,0}, which unrolls to [w2 : alpha2]_{n+1}.
    for (unsigned k = 0; k <= n + 1; ++k) {
      Rational value(0);
      if (k >= 1) value += prev[k - 1];
      if (k <= n) value += (Rational(n) * a2 - Rational(k) * a1 + w2) * prev[k];
      next[k] = std::move(value);
    }
  }
  return StirlingTable(variant, {a1, a2, w2}, std::move(rows));
}

}  // namespace

StirlingTable build_triangle(const AlphaParam& alpha, unsigned n_max) {
  return triangle(alpha.exact(), Rational(1), Rational(0), n_max, StirlingTable::Variant::sibuya);
}

StirlingTable build_general_triangle(const Rational& alpha1, const Rational& alpha2,
                                     const Rational& w2, unsigned n_max) {
  if (alpha1 == 0 && alpha2 == 0 && w2 == 0) {
    throw std::invalid_argument("(alpha1, alpha2, w2) must not all vanish");
  }
  return triangle(alpha1, alpha2, w2, n_max, StirlingTable::Variant::general);
}

Rational stirling_alt_sum(const AlphaParam& alpha, unsigned n, unsigned k) {
  if (k > n) throw std::invalid_argument("stirling_alt_sum requires k <= n");
  const Rational& a = alpha.exact();
  Rational sum(0);
  for (unsigned l = 0; l <= k; ++l) {
    Rational term = Rational(binomial(k, l)) * falling_factorial(Rational(l) * a, n);
    if ((n + l) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  Rational scale = Rational(factorial(k));
  for (unsigned j = 0; j < k; ++j) scale *= a;
  return sum / scale;
}

Rational stirling_faa_di_bruno(const AlphaParam& alpha, unsigned n, unsigned k) {
  if (n > kFaaDiBrunoMaxN) {
    throw std::length_error("Faa di Bruno route is limited to n <= 25");
  }
  if (k < 1 || k > n) throw std::invalid_argument("stirling_faa_di_bruno requires 1 <= k <= n");

  // With alpha = p/q, [1-alpha]_{m-1} = A_m / q^{m-1} for the integer
  // A_m = prod_{j<m-1} (q - p + j q). Each term n! prod [1-alpha]_{n_l-1}/n_l!
  // is then multinomial(n; parts) prod A_{n_l} / q^{n-k}, so the star sum runs
  // over integers and the shared denominator is applied once.
  const Integer p = alpha.numerator();
  const Integer q = alpha.denominator();
  std::vector<Integer> a_int(n + 1);
  std::vector<Integer> fact(n + 1);
  a_int[1] = 1;
  fact[0] = 1;
  for (unsigned m = 1; m <= n; ++m) fact[m] = fact[m - 1] * m;
  for (unsigned m = 2; m <= n; ++m) a_int[m] = a_int[m - 1] * (q - p + Integer(m - 2) * q);

  Integer sum = 0;
  for_each_composition(n, k, [&](const std::vector<unsigned>& parts) {
    Integer num = fact[n];
    Integer den = 1;
    for (unsigned part : parts) {
      num *= a_int[part];
      den *= fact[part];
    }
    sum += num / den;  // exact: n!/prod n_l! is a multinomial coefficient
  });

  Integer q_pow = 1;
  for (unsigned j = 0; j < n - k; ++j) q_pow *= q;
  return Rational(sum, fact[k] * q_pow);
}

std::vector<std::vector<Rational>> stirling_bell_table(const AlphaParam& alpha, unsigned n_max) {
  const Rational& a = alpha.exact();
  auto psi = sibuya_pgf_series<Rational>(alpha, n_max);
  psi = (Rational(1) / a) * psi;
  std::vector<std::vector<Rational>> out(n_max + 1);
  for (unsigned n = 0; n <= n_max; ++n) out[n].assign(n + 1, Rational(0));
  out[0][0] = 1;
  auto power = ExactSeries::constant(Rational(1), n_max);
  for (unsigned k = 1; k <= n_max; ++k) {
    power = series_mul(power, psi);
    for (unsigned n = k; n <= n_max; ++n) {
      out[n][k] = Rational(factorial(n), factorial(k)) * power[n];
    }
  }
  return out;
}

Rational stirling_bell(const AlphaParam& alpha, unsigned n, unsigned k) {
  if (k < 1 || k > n) throw std::invalid_argument("stirling_bell requires 1 <= k <= n");
  auto psi = (Rational(1) / alpha.exact()) * sibuya_pgf_series<Rational>(alpha, n);
  return Rational(factorial(n), factorial(k)) * series_pow(psi, k)[n];
}

Rational SibuyaPolynomial::evaluate(const Rational& u) const {
  Rational acc(0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double SibuyaPolynomial::evaluate(double u) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * u + to_double(*it);
  return acc;
}

namespace {

// One step of s_{n+1}(u) = (n + a u) s_n(u) + a u (u - 1) s_n'(u) on coefficients.
std::vector<Rational> next_sibuya_coeffs(const std::vector<Rational>& c, const Rational& a) {
  const unsigned n = static_cast<unsigned>(c.size()) - 1;
  std::vector<Rational> next(n + 2, Rational(0));
  for (unsigned k = 0; k <= n; ++k) {
    next[k] += Rational(n) * c[k];
    next[k + 1] += a * c[k];
  }
  for (unsigned k = 1; k <= n; ++k) {
    Rational t = a * Rational(k) * c[k];
    next[k + 1] += t;
    next[k] -= t;
  }
  return next;
}

}  // namespace

std::vector<SibuyaPolynomial> sibuya_polynomials(const AlphaParam& alpha, unsigned n_max) {
  const Rational& a = alpha.exact();
  std::vector<SibuyaPolynomial> out;
  out.reserve(n_max + 1);
  out.push_back({0, {Rational(1)}});
  for (unsigned n = 0; n < n_max; ++n) {
    out.push_back({n + 1, next_sibuya_coeffs(out.back().coeffs, a)});
  }
  return out;
}

RealZeroCheck s3_real_zero_check(const Rational& alpha) {
  std::vector<Rational> c = {Rational(1)};
  for (int step = 0; step < 3; ++step) c = next_sibuya_coeffs(c, alpha);
  RealZeroCheck out;
  out.degenerate = (c[3] == 0);
  if (out.degenerate) return out;
  out.discriminant = c[2] * c[2] - Rational(4) * c[3] * c[1];
  out.has_nonreal_roots = out.discriminant < 0;
  return out;
}

RealZeroCheck s3_real_zero_check(const AlphaParam& alpha) { return s3_real_zero_check(alpha.exact()); }

}  // namespace sibuya
