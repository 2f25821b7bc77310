#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sibuya/dist.hpp"
#include "sibuya/io.hpp"
#include "sibuya/rng.hpp"
#include "sibuya/simulate.hpp"
#include "sibuya/stirling.hpp"
#include "sibuya/thermo.hpp"
#include "sibuya/verify.hpp"

namespace sibuya::cli {

namespace {

using io::Json;

// Bad or inconsistent flags, reported with exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string alpha;
  std::string format = "json";
  std::string mode = "auto";
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  unsigned threads = 0;

  unsigned n = 0;
  unsigned k = 0;
  unsigned n_max = 20;
  unsigned verify_n_max = 15;
  std::string route = "triangle";
  std::string kn_route = "recurrence";
  std::string what = "pmf";
  std::string tilt_c1;
  std::string alpha1;
  std::string alpha2;
  std::string w2;
  std::vector<unsigned> parts;
  bool marginal = false;

  double rho = 0.0;
  std::vector<double> r_values;
  unsigned oracle_k = 0;

  double c1 = 0.0;
  double c2 = 0.0;
  double lambda = 0.0;
  bool increasing = false;

  std::string sampler = "sibuya";
  std::uint64_t trials = 10000;
  std::uint64_t cap = kDefaultBgwCap;
  unsigned max_bin = 30;
  double theta = 0.0;
  std::vector<double> lambdas = {0.5, 1.0, 2.0};
  std::string attachment = "weighted";
};

struct Output {
  Json json;
  std::string csv;
  int code = kOk;
};

AlphaParam alpha_of(const Options& o) {
  if (o.alpha.empty()) throw UsageError("--alpha is required");
  try {
    return AlphaParam::parse(o.alpha);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

Rational rational_of(const std::string& text, const char* flag) {
  if (text.empty()) throw UsageError(std::string(flag) + " is required");
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

bool exact_mode(const Options& o, const AlphaParam& alpha) {
  if (o.mode == "auto") return alpha.is_exact();
  if (o.mode == "exact" && !alpha.is_exact()) throw UsageError("--mode exact needs a rational alpha p/q");
  return o.mode == "exact";
}

unsigned require_positive(unsigned v, const char* flag) {
  if (v == 0) throw UsageError(std::string(flag) + " must be a positive integer");
  return v;
}

template <class T>
Output pmf_output(const Pmf<T>& pmf) {
  return {io::to_json(pmf), io::to_csv(pmf)};
}

Output pmf_output(const Pmf<Rational>& pmf, bool exact) {
  if (exact) return pmf_output(pmf);
  return pmf_output(pmf.to_float());
}

std::string csv_value(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

// One-row CSV from a flat JSON object.
std::string flat_csv(const Json& j) {
  std::ostringstream head;
  std::ostringstream row;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    head << (first ? "" : ",") << key;
    row << (first ? "" : ",") << csv_value(value);
    first = false;
  }
  return head.str() + "\n" + row.str() + "\n";
}

Output cmd_progeny(const Options& o) {
  const auto alpha = alpha_of(o);
  const unsigned n_max = require_positive(o.n_max, "--n-max");
  if (exact_mode(o, alpha)) return pmf_output(progeny_pmf(alpha, n_max));
  return pmf_output(progeny_pmf_float(alpha, n_max));
}

StirlingTable table_from_route(const AlphaParam& alpha, unsigned n_max, const std::string& route) {
  std::vector<std::vector<Rational>> rows(n_max + 1);
  rows[0] = {Rational(1)};
  if (route == "bell") {
    auto bell = stirling_bell_table(alpha, n_max);
    for (unsigned n = 1; n <= n_max; ++n) rows[n] = std::move(bell[n]);
  } else {
    for (unsigned n = 1; n <= n_max; ++n) {
      rows[n].assign(n + 1, Rational(0));
      for (unsigned k = 1; k <= n; ++k) {
        rows[n][k] = route == "alt-sum" ? stirling_alt_sum(alpha, n, k) : stirling_faa_di_bruno(alpha, n, k);
      }
    }
  }
  return StirlingTable(StirlingTable::Variant::sibuya, {alpha.exact(), Rational(1), Rational(0)}, std::move(rows));
}

Output cmd_stirling(const Options& o) {
  const unsigned n_max = require_positive(o.n_max, "--n-max");
  if (o.route == "general") {
    const auto t = build_general_triangle(rational_of(o.alpha1, "--alpha1"), rational_of(o.alpha2, "--alpha2"),
                                          rational_of(o.w2, "--w2"), n_max);
    return {io::to_json(t), io::to_csv(t)};
  }
  const auto alpha = alpha_of(o);
  if (!alpha.is_exact()) throw UsageError("stirling needs a rational alpha p/q");
  const auto tri = build_triangle(alpha, n_max);
  if (o.route == "triangle") return {io::to_json(tri), io::to_csv(tri)};
  if (o.route != "all") {
    const auto t = table_from_route(alpha, n_max, o.route);
    return {io::to_json(t), io::to_csv(t)};
  }
  Json agree = Json::object();
  for (const std::string route : {"alt-sum", "bell", "faa-di-bruno"}) {
    if (route == "faa-di-bruno" && n_max > kFaaDiBrunoMaxN) {
      agree[route] = nullptr;
      continue;
    }
    agree[route] = table_from_route(alpha, n_max, route) == tri;
  }
  return {{{"table", io::to_json(tri)}, {"routes_agree", agree}}, io::to_csv(tri)};
}

Output cmd_kn(const Options& o) {
  const auto alpha = alpha_of(o);
  const unsigned n = require_positive(o.n, "--n");
  const bool exact = exact_mode(o, alpha);
  if (o.what == "mean") {
    Json j = {{"n", n}, {"mean_ode", kn_mean_ode(alpha, n)}};
    if (exact) {
      j["mean"] = io::rational_json(kn_mean<Rational>(alpha, n));
    } else {
      j["mean"] = kn_mean<double>(alpha, n);
    }
    return {j, flat_csv(j)};
  }
  if (!alpha.is_exact()) throw UsageError("the K_n law needs a rational alpha p/q");
  if (o.what == "tilted") return pmf_output(tilted_kn_pmf(alpha, rational_of(o.tilt_c1, "--c1"), n), exact);
  if (o.kn_route == "counts") return pmf_output(kn_pmf_from_counts(alpha, n), exact);
  if (o.kn_route == "lagrange") return pmf_output(kn_pmf_from_lagrange(alpha, n), exact);
  return pmf_output(kn_pmf(alpha, n), exact);
}

Output cmd_occupancy(const Options& o) {
  const auto alpha = alpha_of(o);
  if (!alpha.is_exact()) throw UsageError("occupancy needs a rational alpha p/q");
  if (!o.parts.empty()) {
    std::unique_ptr<OccupancyVector> parts;
    try {
      parts = std::make_unique<OccupancyVector>(o.parts);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const Json j = {{"parts", parts->parts()}, {"mass", io::rational_json(occupancy_pmf(alpha, *parts))}};
    std::ostringstream csv;
    csv << "parts,mass\n";
    for (std::size_t i = 0; i < parts->parts().size(); ++i) csv << (i ? ";" : "") << parts->parts()[i];
    csv << ',' << j["mass"].get<std::string>() << '\n';
    return {j, csv.str()};
  }
  const unsigned n = require_positive(o.n, "--n");
  const unsigned k = require_positive(o.k, "--k");
  if (o.marginal) return pmf_output(marginal_pmf(alpha, n, k));
  Json law = Json::array();
  std::ostringstream csv;
  csv << "parts,mass\n";
  for (const auto& [parts, mass] : occupancy_law(alpha, n, k)) {
    law.push_back({{"parts", parts.parts()}, {"mass", io::rational_json(mass)}});
    for (std::size_t i = 0; i < parts.parts().size(); ++i) csv << (i ? ";" : "") << parts.parts()[i];
    csv << ',' << to_string(mass) << '\n';
  }
  return {{{"n", n}, {"k", k}, {"law", law}}, csv.str()};
}

Output cmd_thermo(const Options& o) {
  const auto alpha = alpha_of(o);
  const auto sol = solve_z_rho(alpha, o.rho);
  Json j = io::to_json(sol);
  std::string csv = io::to_csv(sol);
  if (!o.r_values.empty()) {
    std::vector<io::RatePoint> pts;
    for (double r : o.r_values) pts.push_back({o.rho, r, rate_function(alpha, o.rho, r)});
    j["rate"] = io::to_json(pts)["rate"];
    csv = io::rate_csv(pts);
  }
  if (o.oracle_k > 0) {
    const double n = o.rho * o.oracle_k;
    if (n != std::floor(n)) throw UsageError("--oracle-k times --rho must be an integer");
    const double value = free_energy_oracle(alpha, static_cast<unsigned>(n), o.oracle_k);
    j["free_energy_oracle"] = {{"k", o.oracle_k}, {"n", static_cast<unsigned>(n)}, {"value", value},
                               {"gap", std::abs(value - sol.free_energy)}};
  }
  return {j, csv};
}

Output cmd_rescale(const Options& o) {
  const auto alpha = alpha_of(o);
  if (o.lambda != 0.0) {
    const auto f = lambda_scaled_family(alpha, o.lambda);
    const Json j = {{"lambda", f.lambda},
                    {"value_at_zero", f.value_at_zero},
                    {"value_at_one", f.value_at_one},
                    {"can_be_progeny", f.can_be_progeny}};
    return {j, flat_csv(j)};
  }
  if (o.increasing) {
    const auto inc = classify_increasing_rescaled(alpha, o.c1);
    Json j = io::to_json(inc.family);
    j["progeny_mass_ode"] = inc.progeny_mass_ode;
    j["progeny_mass_scaled"] = inc.progeny_mass_scaled;
    j["progeny_mass_alternative"] = inc.progeny_mass_alternative;
    j["alternative_threshold_holds"] = inc.alternative_threshold_holds;
    return {j, io::to_csv(inc.family)};
  }
  const double c2 = o.c2 > 0.0 ? o.c2 : regular_boundary_c2(alpha, o.c1);
  const auto f = classify_rescaled(alpha, o.c1, c2);
  return {io::to_json(f), io::to_csv(f)};
}

Output cmd_simulate(const Options& o) {
  const auto alpha = alpha_of(o);
  const RngStream base(o.seed, o.stream);
  const io::RunInfo info{o.sampler, alpha.to_string(), o.seed, o.stream};
  if (o.sampler == "sibuya" || o.sampler == "bgw") {
    const auto kind = o.sampler == "bgw" ? ProgenySampler::bgw : ProgenySampler::sibuya;
    const auto h = progeny_histogram(alpha, kind, o.trials, o.max_bin, o.cap, base, o.threads);
    return {io::manifest(info, h), io::histogram_csv(h)};
  }
  if (o.sampler == "forest") {
    RngStream rng = base;
    const auto rule = o.attachment == "size" ? Attachment::size_proportional : Attachment::weighted;
    const auto f = grow_forest(alpha, require_positive(o.n, "--n"), rng, rule);
    std::ostringstream csv;
    csv << "tree,size,roots,internals,leaves\n";
    const auto roles = f.roles();
    for (std::size_t t = 0; t < f.sizes.size(); ++t) {
      csv << t << ',' << f.sizes[t] << ',' << roles[t].roots << ',' << roles[t].internals << ',' << roles[t].leaves
          << '\n';
    }
    return {io::manifest(info, f), csv.str()};
  }
  if (o.sampler == "kn-limit") {
    const auto r = estimate_kn_limit(alpha, require_positive(o.n, "--n"), o.trials, base, o.threads);
    std::ostringstream csv;
    csv << "q,estimate,std_error,oracle\n";
    for (const auto& m : r.moments) csv << m.q << ',' << m.estimate << ',' << m.std_error << ',' << m.oracle << '\n';
    return {io::manifest(info, r), csv.str()};
  }
  if (o.sampler == "stable") {
    const auto r = estimate_stable_limit(alpha, require_positive(o.k, "--k"), o.trials, o.lambdas, base, o.threads);
    std::ostringstream csv;
    csv << "lambda,estimate,std_error,target\n";
    for (const auto& p : r.points) csv << p.lambda << ',' << p.estimate << ',' << p.std_error << ',' << p.target << '\n';
    return {io::manifest(info, r), csv.str()};
  }
  if (o.sampler == "crp") {
    RngStream rng = base;
    const auto t = crp_chain(alpha, o.theta, require_positive(o.n, "--n"), rng);
    std::ostringstream csv;
    csv << "step,occupied\n";
    for (std::size_t i = 0; i < t.occupied.size(); ++i) csv << i + 1 << ',' << t.occupied[i] << '\n';
    return {io::manifest(info, t), csv.str()};
  }
  const auto s = leaf_statistics(alpha, require_positive(o.n, "--n"), o.trials, base, o.threads);
  return {io::manifest(info, s), io::histogram_csv(s)};
}

Output cmd_verify(const Options& o) {
  const auto alpha = alpha_of(o);
  if (!alpha.is_exact()) throw UsageError("verify needs a rational alpha p/q");
  const auto report = run_identity_suite(alpha, o.verify_n_max);
  Json checks = Json::array();
  std::ostringstream csv;
  csv << "check,passed,detail\n";
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    csv << c.name << ',' << (c.passed ? "true" : "false") << ',' << c.detail << '\n';
  }
  Output out{{{"alpha", report.alpha}, {"n_max", report.n_max}, {"passed", report.all_passed()}, {"checks", checks}},
             csv.str()};
  out.code = report.all_passed() ? kOk : kVerifyFailure;
  return out;
}

void add_common(CLI::App* sub, Options& o, bool needs_alpha = true) {
  auto* a = sub->add_option("--alpha", o.alpha, "Sibuya parameter, p/q in lowest terms (or a decimal for float runs)");
  if (needs_alpha) a->required();
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--mode", o.mode, "Arithmetic")->check(CLI::IsMember({"auto", "exact", "float"}));
  sub->add_option("--out", o.out, "Write output to this file instead of standard output");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  o.seed = default_seed();

  CLI::App app{"Exact and Monte Carlo computations for Sibuya trees and forests", "sibuya"};
  app.require_subcommand(1);

  auto* progeny = app.add_subcommand("progeny", "Law of the Sibuya progeny N(1)");
  add_common(progeny, o);
  progeny->add_option("--n-max", o.n_max, "Largest support point");

  auto* stirling = app.add_subcommand("stirling", "Generalized Stirling triangle");
  add_common(stirling, o, false);
  stirling->add_option("--n-max", o.n_max, "Largest n");
  stirling->add_option("--route", o.route, "Computation route")
      ->check(CLI::IsMember({"triangle", "alt-sum", "faa-di-bruno", "bell", "general", "all"}));
  stirling->add_option("--alpha1", o.alpha1, "General triangle parameter");
  stirling->add_option("--alpha2", o.alpha2, "General triangle parameter");
  stirling->add_option("--w2", o.w2, "General triangle parameter");

  auto* kn = app.add_subcommand("kn", "Number of trees K_n");
  add_common(kn, o);
  kn->add_option("--n", o.n, "Number of atoms")->required();
  kn->add_option("--what", o.what, "Quantity")->check(CLI::IsMember({"pmf", "mean", "tilted"}));
  kn->add_option("--route", o.kn_route, "Route for the law")
      ->check(CLI::IsMember({"recurrence", "counts", "lagrange"}));
  kn->add_option("--c1", o.tilt_c1, "Tilt c1 in (0, 1] as p/q (with --what tilted)");

  auto* occupancy = app.add_subcommand("occupancy", "Joint and marginal tree sizes");
  add_common(occupancy, o);
  occupancy->add_option("--n", o.n, "Number of atoms");
  occupancy->add_option("--k", o.k, "Number of trees");
  occupancy->add_option("--parts", o.parts, "One composition, e.g. 2,1,1")->delimiter(',');
  occupancy->add_flag("--marginal", o.marginal, "Law of the first tree size");

  auto* thermo = app.add_subcommand("thermo", "Saddle point, free energy and rate function");
  add_common(thermo, o);
  thermo->add_option("--rho", o.rho, "Mean tree size rho > 1")->required();
  thermo->add_option("--r", o.r_values, "Rate-function arguments (repeatable)");
  thermo->add_option("--oracle-k", o.oracle_k, "Compare with the exact coefficient at k trees, n = rho k");

  auto* rescale = app.add_subcommand("rescale", "Rescaled families");
  add_common(rescale, o);
  rescale->add_option("--c1", o.c1, "Scale c1");
  rescale->add_option("--c2", o.c2, "Scale c2 (defaults to the regular boundary)");
  rescale->add_flag("--increasing", o.increasing, "Increasing-tree family");
  rescale->add_option("--lambda", o.lambda, "Scaled family 1 - lambda (1 - z)^alpha");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo samplers and estimators");
  add_common(simulate, o);
  simulate->add_option("--sampler", o.sampler, "What to simulate")
      ->check(CLI::IsMember({"sibuya", "bgw", "forest", "kn-limit", "stable", "crp", "leaves"}));
  simulate->add_option("--trials", o.trials, "Draws or trials");
  simulate->add_option("--n", o.n, "Atoms (forest, kn-limit, crp, leaves)");
  simulate->add_option("--k", o.k, "Summands (stable)");
  simulate->add_option("--cap", o.cap, "Population cap for BGW trees");
  simulate->add_option("--max-bin", o.max_bin, "Largest histogram bin");
  simulate->add_option("--theta", o.theta, "CRP theta > -alpha");
  simulate->add_option("--lambda", o.lambdas, "Laplace arguments (stable)");
  simulate->add_option("--attachment", o.attachment, "Forest attachment rule")
      ->check(CLI::IsMember({"weighted", "size"}));
  simulate->add_option("--seed", o.seed, "Seed (default from SIBUYA_SEED)");
  simulate->add_option("--stream", o.stream, "Stream id");
  simulate->add_option("--threads", o.threads, "Worker threads, 0 for all cores");

  auto* verify = app.add_subcommand("verify", "Run the identity suite");
  add_common(verify, o);
  verify->add_option("--n-max", o.verify_n_max, "Size bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidArguments;
  }

  Output result;
  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "progeny") {
      result = cmd_progeny(o);
    } else if (name == "stirling") {
      result = cmd_stirling(o);
    } else if (name == "kn") {
      result = cmd_kn(o);
    } else if (name == "occupancy") {
      result = cmd_occupancy(o);
    } else if (name == "thermo") {
      result = cmd_thermo(o);
    } else if (name == "rescale") {
      result = cmd_rescale(o);
    } else if (name == "simulate") {
      result = cmd_simulate(o);
    } else {
      result = cmd_verify(o);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidArguments;
  } catch (const std::exception& e) {
    err << "precondition violated: " << e.what() << '\n';
    return kPreconditionViolation;
  }

  const std::string text = o.format == "csv" ? result.csv : result.json.dump(2) + "\n";
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out);
    if (!file) {
      err << "error: cannot open " << o.out << '\n';
      return kInvalidArguments;
    }
    file << text;
  }
  return result.code;
}

}  // namespace sibuya::cli
