#pragma once

// Generalized Stirling numbers S_{n,k} = S_{n,k}(-1, -alpha; 0), the forest
// counts C_{n,k} = k! alpha^k S_{n,k} and the Sibuya polynomials
// s_n(u) = sum_k C_{n,k} u^k.

#include <cstddef>
#include <vector>

#include "sibuya/numerics.hpp"

namespace sibuya {

class StirlingTable {
 public:
  enum class Variant { sibuya, general };

  struct GeneralParams {
    Rational alpha1;
    Rational alpha2;
    Rational w2;
    friend bool operator==(const GeneralParams&, const GeneralParams&) = default;
  };

  StirlingTable(Variant variant, GeneralParams params, std::vector<std::vector<Rational>> rows);

  Variant variant() const { return variant_; }
  const GeneralParams& params() const { return params_; }
  unsigned n_max() const { return static_cast<unsigned>(rows_.size()) - 1; }

  /// S_{n,k}; zero for k > n.
  const Rational& at(unsigned n, unsigned k) const;

  /// C_{n,k} = k! alpha^k S_{n,k} (sibuya variant, alpha = alpha1).
  Rational forest_count(unsigned n, unsigned k) const;

  const std::vector<Rational>& row(unsigned n) const { return rows_.at(n); }

  friend bool operator==(const StirlingTable& a, const StirlingTable& b) {
    return a.variant_ == b.variant_ && a.params_ == b.params_ && a.rows_ == b.rows_;
  }

 private:
  Variant variant_;
  GeneralParams params_;
  std::vector<std::vector<Rational>> rows_;
};

/// S_{n+1,k} = S_{n,k-1} + (n - k alpha) S_{n,k}, S_{n,0} = delta_{n,0}.
StirlingTable build_triangle(const AlphaParam& alpha, unsigned n_max);

/// S_{n+1,k} = S_{n,k-1} + (n alpha2 - k alpha1 + w2) S_{n,k}, S_{n,0} = [w2 : alpha2]_n.
/// Throws std::invalid_argument when (alpha1, alpha2, w2) = (0, 0, 0).
StirlingTable build_general_triangle(const Rational& alpha1, const Rational& alpha2,
                                     const Rational& w2, unsigned n_max);

/// Dobinski-type alternating sum (alpha^-k / k!) sum_l (-1)^(n+l) C(k,l) (l alpha)_n.
Rational stirling_alt_sum(const AlphaParam& alpha, unsigned n, unsigned k);

/// Sum over compositions of n into k positive parts; guarded to n <= 25.
inline constexpr unsigned kFaaDiBrunoMaxN = 25;
Rational stirling_faa_di_bruno(const AlphaParam& alpha, unsigned n, unsigned k);

/// (n!/k!) [z^n] Psi(z)^k with Psi = (1 - (1 - z)^alpha) / alpha. Requires 1 <= k <= n.
Rational stirling_bell(const AlphaParam& alpha, unsigned n, unsigned k);

/// Bell-route values for every 1 <= k <= n <= n_max at once; row n has n+1 entries.
std::vector<std::vector<Rational>> stirling_bell_table(const AlphaParam& alpha, unsigned n_max);

struct SibuyaPolynomial {
  unsigned n = 0;
  /// coeffs[k] = C_{n,k}, k = 0..n.
  std::vector<Rational> coeffs;

  Rational evaluate(const Rational& u) const;
  double evaluate(double u) const;
};

/// s_{n+1}(u) = (n + alpha u) s_n(u) + alpha u (u - 1) s_n'(u), s_0 = 1.
std::vector<SibuyaPolynomial> sibuya_polynomials(const AlphaParam& alpha, unsigned n_max);

struct RealZeroCheck {
  /// s_3(u)/u = C33 u^2 + C32 u + C31.
  Rational discriminant;
  bool has_nonreal_roots = false;
  /// Leading coefficient vanished (only possible at the excluded alpha = 0).
  bool degenerate = false;
};

RealZeroCheck s3_real_zero_check(const AlphaParam& alpha);
/// Same check for a raw rational alpha, admitting the alpha = 0 boundary.
RealZeroCheck s3_real_zero_check(const Rational& alpha);

}  // namespace sibuya
