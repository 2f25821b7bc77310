#pragma once

// JSON and CSV export of the library's records. Exact values travel as
// "numerator/denominator" strings; every JSON export has a matching parser.

#include <string>
#include <vector>

#include <json.hpp>

#include "sibuya/dist.hpp"
#include "sibuya/simulate.hpp"
#include "sibuya/stirling.hpp"
#include "sibuya/thermo.hpp"

namespace sibuya::io {

using Json = nlohmann::json;

/// Raised when a JSON document does not describe the expected record.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json rational_json(const Rational& r);
Rational rational_from_json(const Json& j);

// StirlingTable: {variant, alpha1, alpha2, w2, n_max, entries: [{n, k, numerator, denominator}]}
Json to_json(const StirlingTable& table);
StirlingTable stirling_table_from_json(const Json& j);
/// Columns n,k,numerator,denominator for 0 <= k <= n.
std::string to_csv(const StirlingTable& table);

// Pmf: {mode, support, mass, tail?}; exact masses are strings.
Json to_json(const Pmf<Rational>& pmf);
Json to_json(const Pmf<double>& pmf);
Pmf<Rational> exact_pmf_from_json(const Json& j);
Pmf<double> float_pmf_from_json(const Json& j);
/// Columns support,mass; a present tail is the final row labelled "tail".
std::string to_csv(const Pmf<Rational>& pmf);
std::string to_csv(const Pmf<double>& pmf);

Json to_json(const ThermoSolution& sol);
ThermoSolution thermo_solution_from_json(const Json& j);
std::string to_csv(const ThermoSolution& sol);

Json to_json(const RescaledFamily& family);
RescaledFamily rescaled_family_from_json(const Json& j);
std::string to_csv(const RescaledFamily& family);

struct RatePoint {
  double rho = 0.0;
  double r = 0.0;
  double f = 0.0;
  friend bool operator==(const RatePoint&, const RatePoint&) = default;
};
/// Columns rho,r,f.
std::string rate_csv(const std::vector<RatePoint>& points);
Json to_json(const std::vector<RatePoint>& points);
std::vector<RatePoint> rate_points_from_json(const Json& j);

/// Simulation run manifests: parameters, seed, counts, estimates, standard errors.
struct RunInfo {
  std::string sampler;
  std::string alpha;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};
Json manifest(const RunInfo& info, const KnLimitReport& report);
Json manifest(const RunInfo& info, const StableLimitReport& report);
Json manifest(const RunInfo& info, const LeafSummary& summary);
Json manifest(const RunInfo& info, const ProgenyHistogram& hist);
Json manifest(const RunInfo& info, const ForestState& forest);
Json manifest(const RunInfo& info, const CrpTrajectory& trajectory);

LeafSummary leaf_summary_from_json(const Json& j);

/// CSV histograms.
std::string histogram_csv(const ProgenyHistogram& hist);
std::string histogram_csv(const LeafSummary& summary);

}  // namespace sibuya::io
