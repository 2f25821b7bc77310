#pragma once

// Seeded Monte Carlo for Sibuya trees and forests. Multi-trial estimators give
// trial i the stream base.child(i) and reduce in trial order, so results do
// not depend on the number of worker threads.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sibuya/numerics.hpp"
#include "sibuya/rng.hpp"

namespace sibuya {

/// Samplers saturate here instead of overflowing.
inline constexpr std::uint64_t kSaturated = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kDefaultBgwCap = 1'000'000;
inline constexpr std::size_t kOffspringTableSize = 10'000;

/// First j >= start whose trial succeeds, trial j succeeding with probability
/// beta / j (beta <= start). One uniform drives an inverse-CDF walk; past
/// j = 256 the survival product is continued through log-Gamma ratios.
std::uint64_t sample_hazard(double beta, std::uint64_t start, RngStream& rng);

/// Sibuya(alpha) draw: P(N = n) = (alpha/n) prod_{j<n} (1 - alpha/j).
std::uint64_t sample_sibuya(const AlphaParam& alpha, RngStream& rng);

/// Offspring law of the critical BGW tree with pgf z / (1 - (1 - z)^(1/alpha)),
/// alpha in [1/2, 1). The first `table_size` masses are sampled by inverse CDF.
/// The residual tail is sampled exactly by rejection from the representation
/// phi = alpha / (1 - (1 - alpha) D), D(z) the law of J - 1 where J >= 2 has
/// hazard (1/alpha)/j.
class OffspringSampler {
 public:
  explicit OffspringSampler(const AlphaParam& alpha, std::size_t table_size = kOffspringTableSize);

  std::uint64_t sample(RngStream& rng) const;
  /// Draw from the compound representation alone (no table).
  std::uint64_t sample_compound(RngStream& rng) const;

  const std::vector<double>& masses() const { return masses_; }
  /// Mass beyond the table.
  double residual_tail() const { return residual_; }
  double alpha() const { return alpha_; }

 private:
  double alpha_;
  double beta_;
  double log_fail_;  // log(1 - alpha)
  std::vector<double> masses_;
  std::vector<double> cdf_;
  double residual_ = 0.0;
};

struct BgwResult {
  std::uint64_t progeny = 0;
  /// True when the population exceeded the cap; progeny is then a lower bound.
  bool overflow = false;
};

BgwResult sample_bgw_progeny(const OffspringSampler& offspring, RngStream& rng,
                             std::uint64_t cap = kDefaultBgwCap);
BgwResult sample_bgw_progeny(const AlphaParam& alpha, RngStream& rng, std::uint64_t cap = kDefaultBgwCap);

/// How a non-root arrival picks its parent.
enum class Attachment {
  /// Node v with probability proportional to alpha outdeg(v) + 1 - alpha.
  weighted,
  /// Uniform node, i.e. a size-n_l tree with probability n_l / n.
  size_proportional,
};

struct TreeRoles {
  unsigned roots = 0;
  unsigned internals = 0;
  unsigned leaves = 0;
};

struct ForestState {
  unsigned n = 0;
  unsigned k = 0;
  /// Tree sizes in order of creation (size-biased; see random_labelling).
  std::vector<unsigned> sizes;
  /// Per tree, out-degrees of its nodes in arrival order (root first).
  std::vector<std::vector<unsigned>> nodes;
  /// K_1, ..., K_n.
  std::vector<unsigned> k_path;

  /// A root is neither internal nor a leaf; non-root nodes are leaves iff childless.
  std::vector<TreeRoles> roles() const;
  TreeRoles total_roles() const;
  /// Sum of sizes is n, sizes positive, out-degrees sum to size - 1 per tree.
  bool bookkeeping_holds() const;
};

/// Counts of (steps, new roots) keyed by the state (n, k) before the step.
struct TransitionAudit {
  std::map<std::pair<unsigned, unsigned>, std::pair<std::uint64_t, std::uint64_t>> counts;
};

/// Sequential growth to n_target atoms. From (n, k) a new root appears with
/// probability (k + 1) alpha / (alpha + n); otherwise the atom attaches by `rule`.
ForestState grow_forest(const AlphaParam& alpha, unsigned n_target, RngStream& rng,
                        Attachment rule = Attachment::weighted, TransitionAudit* audit = nullptr);

/// Tree sizes under a uniformly random labelling of the trees.
std::vector<unsigned> random_labelling(const ForestState& forest, RngStream& rng);

/// K_n from the birth chain alone.
unsigned simulate_kn(const AlphaParam& alpha, unsigned n, RngStream& rng);

struct MomentEstimate {
  double q = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double oracle = 0.0;
};

struct KnLimitReport {
  unsigned n = 0;
  std::uint64_t trials = 0;
  /// Moments of K_n / n^alpha, q = 0, 1, 2, against E W^q with W Mittag-Leffler(alpha, alpha).
  std::vector<MomentEstimate> moments;
  double variance = 0.0;
  double variance_oracle = 0.0;
};

/// threads = 0 uses the hardware concurrency.
KnLimitReport estimate_kn_limit(const AlphaParam& alpha, unsigned n, std::uint64_t trials, const RngStream& base,
                                unsigned threads = 0);

struct LaplacePoint {
  double lambda = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  /// exp(-lambda^alpha).
  double target = 0.0;
};

struct StableLimitReport {
  std::uint64_t k = 0;
  std::uint64_t trials = 0;
  std::vector<LaplacePoint> points;
};

/// E exp(-lambda k^{-1/alpha} N(k)) with N(k) a sum of k Sibuya draws.
StableLimitReport estimate_stable_limit(const AlphaParam& alpha, std::uint64_t k, std::uint64_t trials,
                                        const std::vector<double>& lambdas, const RngStream& base,
                                        unsigned threads = 0);

struct CrpTrajectory {
  double theta = 0.0;
  /// Final table sizes in order of opening.
  std::vector<unsigned> table_sizes;
  /// S_1, ..., S_n.
  std::vector<unsigned> occupied;
};

/// CRP(alpha, theta): a new table opens with probability (theta + k alpha)/(theta + n),
/// table l is joined with probability (n_l - alpha)/(theta + n). Requires theta > -alpha.
CrpTrajectory crp_chain(const AlphaParam& alpha, double theta, unsigned n, RngStream& rng);

struct LeafSummary {
  unsigned n = 0;
  std::uint64_t trials = 0;
  double mean = 0.0;
  double variance = 0.0;
  /// Leaf count -> number of trials.
  std::map<unsigned, std::uint64_t> histogram;
};

LeafSummary leaf_statistics(const AlphaParam& alpha, unsigned n, std::uint64_t trials, const RngStream& base,
                            unsigned threads = 0);

enum class ProgenySampler { sibuya, bgw };

struct ProgenyHistogram {
  std::uint64_t draws = 0;
  std::uint64_t cap = 0;
  /// counts[j] = draws equal to j for j = 1..max_bin (index 0 unused).
  std::vector<std::uint64_t> counts;
  /// Draws in (max_bin, cap].
  std::uint64_t beyond = 0;
  /// Draws above cap (BGW overflow, or Sibuya draws above cap).
  std::uint64_t overflow = 0;
};

ProgenyHistogram progeny_histogram(const AlphaParam& alpha, ProgenySampler sampler, std::uint64_t draws,
                                   unsigned max_bin, std::uint64_t cap, const RngStream& base,
                                   unsigned threads = 0);

struct ChiSquareResult {
  double statistic = 0.0;
  unsigned dof = 0;
  double p_value = 1.0;
};

/// Pearson goodness of fit; `expected` are probabilities summing to one.
ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected);

/// Pearson test of homogeneity for two count vectors over the same bins.
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

}  // namespace sibuya
