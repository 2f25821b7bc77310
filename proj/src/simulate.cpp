#include "sibuya/simulate.hpp"

#include <algorithm>
#include <optional>
#include <cmath>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "sibuya/dist.hpp"
#include "sibuya/series.hpp"

namespace sibuya {

namespace {

unsigned worker_count(unsigned threads, std::uint64_t work) {
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(work, 1)));
}

// Calls fn(i) for i in [0, count) over `threads` workers; fn must only touch slot i.
template <class F>
void parallel_for(std::uint64_t count, unsigned threads, F&& fn) {
  const unsigned workers = worker_count(threads, count);
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

constexpr std::uint64_t kSequentialLimit = 256;

}  // namespace

std::uint64_t sample_hazard(double beta, std::uint64_t start, RngStream& rng) {
  if (!(beta > 0.0) || beta > static_cast<double>(start)) {
    throw std::domain_error("sample_hazard requires 0 < beta <= start");
  }
  const double u = rng.uniform_pos();
  // N > m iff u <= S(m) = prod_{j=start}^{m} (1 - beta/j).
  double survival = 1.0;
  for (std::uint64_t j = start; j <= std::max(start, kSequentialLimit); ++j) {
    survival *= 1.0 - beta / static_cast<double>(j);
    if (survival < u) return j;
  }
  const std::uint64_t last = std::max(start, kSequentialLimit);
  const double log_target = std::log(u) - std::log(survival);
  const double base = log_gamma_ratio(static_cast<double>(last) + 1.0 - beta, static_cast<double>(last) + 1.0);
  // log S(m)/S(last), decreasing in m.
  auto log_ratio = [&](std::uint64_t m) {
    return log_gamma_ratio(static_cast<double>(m) + 1.0 - beta, static_cast<double>(m) + 1.0) - base;
  };
  std::uint64_t lo = last;
  std::uint64_t hi = 2 * last;
  while (log_ratio(hi) >= log_target) {
    lo = hi;
    if (hi >= kSaturated / 2) return kSaturated;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (log_ratio(mid) < log_target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::uint64_t sample_sibuya(const AlphaParam& alpha, RngStream& rng) { return sample_hazard(alpha.value(), 1, rng); }

OffspringSampler::OffspringSampler(const AlphaParam& alpha, std::size_t table_size)
    : alpha_(alpha.value()), beta_(1.0 / alpha.value()), log_fail_(std::log1p(-alpha.value())) {
  if (alpha_ < 0.5) throw std::domain_error("BGW offspring law needs alpha in [1/2, 1)");
  if (table_size < 1) throw std::invalid_argument("offspring table needs at least one entry");
  const auto series = offspring_series<double>(alpha, table_size - 1);
  masses_.assign(series.coeffs().begin(), series.coeffs().end());
  cdf_.resize(masses_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    acc += masses_[i];
    cdf_[i] = acc;
  }
  residual_ = std::max(0.0, 1.0 - acc);
}

std::uint64_t OffspringSampler::sample_compound(RngStream& rng) const {
  // G ~ Geometric: P(G = g) = alpha (1 - alpha)^g, g >= 0.
  const auto g = static_cast<std::uint64_t>(std::floor(std::log(rng.uniform_pos()) / log_fail_));
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < g; ++i) {
    total += sample_hazard(beta_, 2, rng) - 1;
    if (total >= kSaturated) return kSaturated;
  }
  return total;
}

std::uint64_t OffspringSampler::sample(RngStream& rng) const {
  const double u = rng.uniform();
  if (u < cdf_.back()) {
    return static_cast<std::uint64_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }
  const auto table = static_cast<std::uint64_t>(masses_.size());
  for (;;) {
    const std::uint64_t c = sample_compound(rng);
    if (c >= table) return c;
  }
}

BgwResult sample_bgw_progeny(const OffspringSampler& offspring, RngStream& rng, std::uint64_t cap) {
  if (cap < 1) throw std::invalid_argument("BGW cap must be positive");
  BgwResult out;
  out.progeny = 1;
  std::uint64_t pending = 1;
  while (pending > 0) {
    --pending;
    const std::uint64_t c = offspring.sample(rng);
    if (c > cap - out.progeny) {
      out.progeny = cap + 1;
      out.overflow = true;
      return out;
    }
    out.progeny += c;
    pending += c;
  }
  return out;
}

BgwResult sample_bgw_progeny(const AlphaParam& alpha, RngStream& rng, std::uint64_t cap) {
  return sample_bgw_progeny(OffspringSampler(alpha), rng, cap);
}

std::vector<TreeRoles> ForestState::roles() const {
  std::vector<TreeRoles> out;
  out.reserve(nodes.size());
  for (const auto& tree : nodes) {
    TreeRoles r;
    r.roots = 1;
    for (std::size_t i = 1; i < tree.size(); ++i) {
      if (tree[i] > 0) {
        ++r.internals;
      } else {
        ++r.leaves;
      }
    }
    out.push_back(r);
  }
  return out;
}

TreeRoles ForestState::total_roles() const {
  TreeRoles t;
  for (const auto& r : roles()) {
    t.roots += r.roots;
    t.internals += r.internals;
    t.leaves += r.leaves;
  }
  return t;
}

bool ForestState::bookkeeping_holds() const {
  if (sizes.size() != k || nodes.size() != k) return false;
  unsigned total = 0;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    if (sizes[t] == 0 || nodes[t].size() != sizes[t]) return false;
    unsigned deg = 0;
    for (unsigned d : nodes[t]) deg += d;
    if (deg != sizes[t] - 1) return false;
    total += sizes[t];
  }
  const auto r = total_roles();
  return total == n && r.roots + r.internals + r.leaves == n;
}

ForestState grow_forest(const AlphaParam& alpha, unsigned n_target, RngStream& rng, Attachment rule,
                        TransitionAudit* audit) {
  if (n_target < 1) throw std::invalid_argument("grow_forest requires n_target >= 1");
  const double a = alpha.value();
  std::vector<unsigned> tree_of = {0};
  std::vector<unsigned> parent = {0};
  std::vector<unsigned> outdeg = {0};
  std::vector<unsigned> nonroot;
  ForestState f;
  f.sizes = {1};
  f.k_path.reserve(n_target);
  f.k_path.push_back(1);
  unsigned k = 1;
  for (unsigned m = 1; m < n_target; ++m) {
    const bool new_root = rng.uniform() * (a + m) < (k + 1) * a;
    if (audit != nullptr) {
      auto& c = audit->counts[{m, k}];
      ++c.first;
      if (new_root) ++c.second;
    }
    if (new_root) {
      tree_of.push_back(k);
      parent.push_back(m);
      outdeg.push_back(0);
      f.sizes.push_back(1);
      ++k;
    } else {
      unsigned v;
      // Weighted rule: mixture of a uniform node, mass (1 - a) m, and the parent
      // of a uniform non-root node, mass a (m - k); together m - k a.
      const bool uniform_node = rule == Attachment::size_proportional || m == k ||
                                rng.uniform() * (m - k * a) < (1.0 - a) * m;
      if (uniform_node) {
        v = static_cast<unsigned>(rng.below(m));
      } else {
        v = parent[nonroot[rng.below(nonroot.size())]];
      }
      tree_of.push_back(tree_of[v]);
      parent.push_back(v);
      outdeg.push_back(0);
      ++outdeg[v];
      nonroot.push_back(m);
      ++f.sizes[tree_of[v]];
    }
    f.k_path.push_back(k);
  }
  f.n = n_target;
  f.k = k;
  f.nodes.resize(k);
  for (unsigned v = 0; v < n_target; ++v) f.nodes[tree_of[v]].push_back(outdeg[v]);
  return f;
}

std::vector<unsigned> random_labelling(const ForestState& forest, RngStream& rng) {
  auto sizes = forest.sizes;
  for (std::size_t i = sizes.size(); i > 1; --i) std::swap(sizes[i - 1], sizes[rng.below(i)]);
  return sizes;
}

unsigned simulate_kn(const AlphaParam& alpha, unsigned n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_kn requires n >= 1");
  const double a = alpha.value();
  unsigned k = 1;
  for (unsigned m = 1; m < n; ++m) {
    if (rng.uniform() * (a + m) < (k + 1) * a) ++k;
  }
  return k;
}

namespace {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  double variance = 0.0;
};

MeanSe summarize(const std::vector<double>& xs) {
  MeanSe out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  if (xs.size() > 1) {
    out.variance = ss / static_cast<double>(xs.size() - 1);
    out.se = std::sqrt(out.variance / static_cast<double>(xs.size()));
  }
  return out;
}

}  // namespace

KnLimitReport estimate_kn_limit(const AlphaParam& alpha, unsigned n, std::uint64_t trials, const RngStream& base,
                                unsigned threads) {
  if (n < 1 || trials < 2) throw std::invalid_argument("estimate_kn_limit requires n >= 1 and trials >= 2");
  const double scale = std::pow(static_cast<double>(n), alpha.value());
  std::vector<double> w(trials);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    RngStream rng = base.child(i);
    w[i] = simulate_kn(alpha, n, rng) / scale;
  });
  KnLimitReport r;
  r.n = n;
  r.trials = trials;
  const double a = alpha.value();
  r.moments.push_back({0.0, 1.0, 0.0, ml_moment(alpha, a, 0.0)});
  for (double q : {1.0, 2.0}) {
    std::vector<double> powered(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) powered[i] = std::pow(w[i], q);
    const auto s = summarize(powered);
    r.moments.push_back({q, s.mean, s.se, ml_moment(alpha, a, q)});
  }
  r.variance = summarize(w).variance;
  r.variance_oracle = ml_variance(alpha, a);
  return r;
}

StableLimitReport estimate_stable_limit(const AlphaParam& alpha, std::uint64_t k, std::uint64_t trials,
                                        const std::vector<double>& lambdas, const RngStream& base,
                                        unsigned threads) {
  if (k < 1 || trials < 2) throw std::invalid_argument("estimate_stable_limit requires k >= 1 and trials >= 2");
  const double a = alpha.value();
  const double scale = std::pow(static_cast<double>(k), -1.0 / a);
  std::vector<double> x(trials);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    RngStream rng = base.child(i);
    double sum = 0.0;
    for (std::uint64_t j = 0; j < k; ++j) sum += static_cast<double>(sample_sibuya(alpha, rng));
    x[i] = sum * scale;
  });
  StableLimitReport r;
  r.k = k;
  r.trials = trials;
  for (double lambda : lambdas) {
    if (lambda < 0.0) throw std::domain_error("Laplace argument must be non-negative");
    LaplacePoint p;
    p.lambda = lambda;
    p.target = std::exp(-std::pow(lambda, a));
    if (lambda == 0.0) {
      p.estimate = 1.0;
    } else {
      std::vector<double> e(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) e[i] = std::exp(-lambda * x[i]);
      const auto s = summarize(e);
      p.estimate = s.mean;
      p.std_error = s.se;
    }
    r.points.push_back(p);
  }
  return r;
}

CrpTrajectory crp_chain(const AlphaParam& alpha, double theta, unsigned n, RngStream& rng) {
  const double a = alpha.value();
  if (!(theta > -a)) throw std::domain_error("crp_chain requires theta > -alpha");
  if (n < 1) throw std::invalid_argument("crp_chain requires n >= 1");
  CrpTrajectory t;
  t.theta = theta;
  t.table_sizes = {1};
  t.occupied = {1};
  std::vector<unsigned> table_of = {0};
  for (unsigned m = 1; m < n; ++m) {
    const auto k = static_cast<unsigned>(t.table_sizes.size());
    if (rng.uniform() * (theta + m) < theta + k * a) {
      table_of.push_back(k);
      t.table_sizes.push_back(1);
    } else {
      // Table l with weight n_l - alpha: uniform customer, accepted with probability 1 - alpha/n_l.
      unsigned l;
      do {
        l = table_of[rng.below(m)];
      } while (rng.uniform() * t.table_sizes[l] < a);
      table_of.push_back(l);
      ++t.table_sizes[l];
    }
    t.occupied.push_back(static_cast<unsigned>(t.table_sizes.size()));
  }
  return t;
}

LeafSummary leaf_statistics(const AlphaParam& alpha, unsigned n, std::uint64_t trials, const RngStream& base,
                            unsigned threads) {
  if (n < 1 || trials < 1) throw std::invalid_argument("leaf_statistics requires n >= 1 and trials >= 1");
  std::vector<unsigned> leaves(trials);
  std::vector<char> ok(trials, 1);
  parallel_for(trials, threads, [&](std::uint64_t i) {
    RngStream rng = base.child(i);
    const auto f = grow_forest(alpha, n, rng);
    ok[i] = f.bookkeeping_holds() ? 1 : 0;
    leaves[i] = f.total_roles().leaves;
  });
  if (std::find(ok.begin(), ok.end(), 0) != ok.end()) throw std::logic_error("forest bookkeeping violated");
  LeafSummary s;
  s.n = n;
  s.trials = trials;
  std::vector<double> xs(leaves.begin(), leaves.end());
  const auto m = summarize(xs);
  s.mean = m.mean;
  s.variance = m.variance;
  for (unsigned l : leaves) ++s.histogram[l];
  return s;
}

ProgenyHistogram progeny_histogram(const AlphaParam& alpha, ProgenySampler sampler, std::uint64_t draws,
                                   unsigned max_bin, std::uint64_t cap, const RngStream& base, unsigned threads) {
  if (draws < 1 || max_bin < 1 || cap < max_bin) {
    throw std::invalid_argument("progeny_histogram requires draws >= 1 and cap >= max_bin >= 1");
  }
  std::optional<OffspringSampler> offspring;
  if (sampler == ProgenySampler::bgw) offspring.emplace(alpha);
  // Fixed-size chunks keep the partition independent of the thread count.
  constexpr std::uint64_t kChunk = 4096;
  const std::uint64_t chunks = (draws + kChunk - 1) / kChunk;
  std::vector<ProgenyHistogram> partial(chunks);
  parallel_for(chunks, threads, [&](std::uint64_t c) {
    auto& h = partial[c];
    h.counts.assign(max_bin + 1, 0);
    const std::uint64_t end = std::min(draws, (c + 1) * kChunk);
    for (std::uint64_t i = c * kChunk; i < end; ++i) {
      RngStream rng = base.child(i);
      std::uint64_t v;
      bool over;
      if (offspring) {
        const auto r = sample_bgw_progeny(*offspring, rng, cap);
        v = r.progeny;
        over = r.overflow;
      } else {
        v = sample_sibuya(alpha, rng);
        over = v > cap;
      }
      if (over) {
        ++h.overflow;
      } else if (v <= max_bin) {
        ++h.counts[v];
      } else {
        ++h.beyond;
      }
    }
  });
  ProgenyHistogram out;
  out.draws = draws;
  out.cap = cap;
  out.counts.assign(max_bin + 1, 0);
  for (const auto& h : partial) {
    for (unsigned j = 0; j <= max_bin; ++j) out.counts[j] += h.counts[j];
    out.beyond += h.beyond;
    out.overflow += h.overflow;
  }
  return out;
}

namespace {

double chi_square_p(double statistic, unsigned dof) {
  if (dof == 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace

ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square_test needs matching non-empty bins");
  }
  double total = 0.0;
  for (auto o : observed) total += static_cast<double>(o);
  ChiSquareResult r;
  unsigned bins = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected[i] * total;
    if (e <= 0.0) {
      if (observed[i] > 0) r.statistic = INFINITY;
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    r.statistic += d * d / e;
    ++bins;
  }
  r.dof = bins > 0 ? bins - 1 : 0;
  r.p_value = std::isfinite(r.statistic) ? chi_square_p(r.statistic, r.dof) : 0.0;
  return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("chi_square_two_sample needs matching bins");
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na += static_cast<double>(a[i]);
    nb += static_cast<double>(b[i]);
  }
  ChiSquareResult r;
  unsigned bins = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = static_cast<double>(a[i] + b[i]);
    if (col == 0.0) continue;
    const double ea = col * na / (na + nb);
    const double eb = col * nb / (na + nb);
    r.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
    ++bins;
  }
  r.dof = bins > 0 ? bins - 1 : 0;
  r.p_value = chi_square_p(r.statistic, r.dof);
  return r;
}

}  // namespace sibuya
