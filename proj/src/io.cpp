#include "sibuya/io.hpp"

#include <cmath>
#include <sstream>

namespace sibuya::io {

namespace {

std::string format_double(double x) { return Json(x).dump(); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return j.at(name);
}

template <class T>
T get(const Json& j, const char* name) {
  try {
    return field(j, name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad field '") + name + "': " + e.what());
  }
}

void expect_mode(const Json& j, const char* mode) {
  if (get<std::string>(j, "mode") != mode) throw ParseError(std::string("expected mode '") + mode + "'");
}

TreeKind tree_kind_from(const std::string& s) {
  if (s == to_string(TreeKind::simply_generated)) return TreeKind::simply_generated;
  if (s == to_string(TreeKind::increasing)) return TreeKind::increasing;
  throw ParseError("unknown tree kind '" + s + "'");
}

Criticality criticality_from(const std::string& s) {
  for (auto c : {Criticality::critical, Criticality::subcritical_regular, Criticality::supercritical_defective}) {
    if (s == to_string(c)) return c;
  }
  throw ParseError("unknown classification '" + s + "'");
}

}  // namespace

Json rational_json(const Rational& r) { return to_string(r); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw ParseError("exact value must be a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Json to_json(const StirlingTable& table) {
  Json entries = Json::array();
  for (unsigned n = 0; n <= table.n_max(); ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      const Rational& v = table.at(n, k);
      entries.push_back({{"n", n},
                         {"k", k},
                         {"numerator", boost::multiprecision::numerator(v).str()},
                         {"denominator", boost::multiprecision::denominator(v).str()}});
    }
  }
  const auto& p = table.params();
  return {{"variant", table.variant() == StirlingTable::Variant::sibuya ? "sibuya" : "general"},
          {"alpha1", rational_json(p.alpha1)},
          {"alpha2", rational_json(p.alpha2)},
          {"w2", rational_json(p.w2)},
          {"n_max", table.n_max()},
          {"entries", entries}};
}

StirlingTable stirling_table_from_json(const Json& j) {
  const auto variant_name = get<std::string>(j, "variant");
  StirlingTable::Variant variant;
  if (variant_name == "sibuya") {
    variant = StirlingTable::Variant::sibuya;
  } else if (variant_name == "general") {
    variant = StirlingTable::Variant::general;
  } else {
    throw ParseError("unknown Stirling variant '" + variant_name + "'");
  }
  StirlingTable::GeneralParams params{rational_from_json(field(j, "alpha1")), rational_from_json(field(j, "alpha2")),
                                      rational_from_json(field(j, "w2"))};
  const auto n_max = get<unsigned>(j, "n_max");
  std::vector<std::vector<Rational>> rows(n_max + 1);
  for (unsigned n = 0; n <= n_max; ++n) rows[n].assign(n + 1, Rational(0));
  for (const auto& e : field(j, "entries")) {
    const auto n = get<unsigned>(e, "n");
    const auto k = get<unsigned>(e, "k");
    if (n > n_max || k > n) throw ParseError("Stirling entry outside the triangle");
    const Integer num(get<std::string>(e, "numerator"));
    const Integer den(get<std::string>(e, "denominator"));
    if (den == 0) throw ParseError("zero denominator");
    rows[n][k] = Rational(num, den);
  }
  return StirlingTable(variant, std::move(params), std::move(rows));
}

std::string to_csv(const StirlingTable& table) {
  std::ostringstream out;
  out << "n,k,numerator,denominator\n";
  for (unsigned n = 0; n <= table.n_max(); ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      const Rational& v = table.at(n, k);
      out << n << ',' << k << ',' << boost::multiprecision::numerator(v) << ','
          << boost::multiprecision::denominator(v) << '\n';
    }
  }
  return out.str();
}

Json to_json(const Pmf<Rational>& pmf) {
  Json mass = Json::array();
  for (const auto& m : pmf.mass) mass.push_back(rational_json(m));
  Json j = {{"mode", "exact"}, {"support", pmf.support}, {"mass", mass}};
  if (pmf.tail) j["tail"] = rational_json(*pmf.tail);
  return j;
}

Json to_json(const Pmf<double>& pmf) {
  Json j = {{"mode", "float"}, {"support", pmf.support}, {"mass", pmf.mass}};
  if (pmf.tail) j["tail"] = *pmf.tail;
  return j;
}

Pmf<Rational> exact_pmf_from_json(const Json& j) {
  expect_mode(j, "exact");
  Pmf<Rational> pmf;
  pmf.support = get<std::vector<std::int64_t>>(j, "support");
  for (const auto& m : field(j, "mass")) pmf.mass.push_back(rational_from_json(m));
  if (pmf.mass.size() != pmf.support.size()) throw ParseError("support and mass lengths differ");
  if (j.contains("tail")) pmf.tail = rational_from_json(j.at("tail"));
  return pmf;
}

Pmf<double> float_pmf_from_json(const Json& j) {
  expect_mode(j, "float");
  Pmf<double> pmf;
  pmf.support = get<std::vector<std::int64_t>>(j, "support");
  pmf.mass = get<std::vector<double>>(j, "mass");
  if (pmf.mass.size() != pmf.support.size()) throw ParseError("support and mass lengths differ");
  if (j.contains("tail")) pmf.tail = get<double>(j, "tail");
  return pmf;
}

std::string to_csv(const Pmf<Rational>& pmf) {
  std::ostringstream out;
  out << "support,mass\n";
  for (std::size_t i = 0; i < pmf.support.size(); ++i) out << pmf.support[i] << ',' << to_string(pmf.mass[i]) << '\n';
  if (pmf.tail) out << "tail," << to_string(*pmf.tail) << '\n';
  return out.str();
}

std::string to_csv(const Pmf<double>& pmf) {
  std::ostringstream out;
  out << "support,mass\n";
  for (std::size_t i = 0; i < pmf.support.size(); ++i) out << pmf.support[i] << ',' << format_double(pmf.mass[i]) << '\n';
  if (pmf.tail) out << "tail," << format_double(*pmf.tail) << '\n';
  return out.str();
}

Json to_json(const ThermoSolution& sol) {
  return {{"rho", sol.rho},
          {"z_rho", sol.z_rho},
          {"one_minus_z", sol.one_minus_z},
          {"phi_at_z_rho", sol.phi_at_z_rho},
          {"free_energy", sol.free_energy},
          {"residual", sol.residual}};
}

ThermoSolution thermo_solution_from_json(const Json& j) {
  ThermoSolution s;
  s.rho = get<double>(j, "rho");
  s.z_rho = get<double>(j, "z_rho");
  s.one_minus_z = j.contains("one_minus_z") ? get<double>(j, "one_minus_z") : 1.0 - s.z_rho;
  s.phi_at_z_rho = get<double>(j, "phi_at_z_rho");
  s.free_energy = get<double>(j, "free_energy");
  s.residual = get<double>(j, "residual");
  return s;
}

std::string to_csv(const ThermoSolution& sol) {
  std::ostringstream out;
  out << "rho,z_rho,one_minus_z,phi_at_z_rho,free_energy,residual\n"
      << format_double(sol.rho) << ',' << format_double(sol.z_rho) << ',' << format_double(sol.one_minus_z) << ','
      << format_double(sol.phi_at_z_rho) << ',' << format_double(sol.free_energy) << ',' << format_double(sol.residual) << '\n';
  return out.str();
}

Json to_json(const RescaledFamily& f) {
  return {{"c1", f.c1},
          {"c2", f.c2},
          {"kind", to_string(f.kind)},
          {"classification", to_string(f.classification)},
          {"extinction_prob", f.extinction_prob},
          {"offspring_regular", f.offspring_regular},
          {"offspring_at_one", f.offspring_at_one},
          {"offspring_slope", f.offspring_slope},
          {"progeny_mass", f.progeny_mass},
          {"fixed_point_residual", f.fixed_point_residual}};
}

RescaledFamily rescaled_family_from_json(const Json& j) {
  RescaledFamily f;
  f.c1 = get<double>(j, "c1");
  f.c2 = get<double>(j, "c2");
  f.kind = tree_kind_from(get<std::string>(j, "kind"));
  f.classification = criticality_from(get<std::string>(j, "classification"));
  f.extinction_prob = get<double>(j, "extinction_prob");
  f.offspring_regular = get<bool>(j, "offspring_regular");
  f.offspring_at_one = get<double>(j, "offspring_at_one");
  f.offspring_slope = get<double>(j, "offspring_slope");
  f.progeny_mass = get<double>(j, "progeny_mass");
  f.fixed_point_residual = get<double>(j, "fixed_point_residual");
  return f;
}

std::string to_csv(const RescaledFamily& f) {
  std::ostringstream out;
  out << "c1,c2,kind,classification,extinction_prob,offspring_regular,offspring_at_one,offspring_slope,"
         "progeny_mass,fixed_point_residual\n"
      << format_double(f.c1) << ',' << format_double(f.c2) << ',' << to_string(f.kind) << ','
      << to_string(f.classification) << ',' << format_double(f.extinction_prob) << ','
      << (f.offspring_regular ? "true" : "false") << ',' << format_double(f.offspring_at_one) << ','
      << format_double(f.offspring_slope) << ',' << format_double(f.progeny_mass) << ','
      << format_double(f.fixed_point_residual) << '\n';
  return out.str();
}

std::string rate_csv(const std::vector<RatePoint>& points) {
  std::ostringstream out;
  out << "rho,r,f\n";
  for (const auto& p : points) out << format_double(p.rho) << ',' << format_double(p.r) << ',' << format_double(p.f) << '\n';
  return out.str();
}

Json to_json(const std::vector<RatePoint>& points) {
  Json arr = Json::array();
  for (const auto& p : points) arr.push_back({{"rho", p.rho}, {"r", p.r}, {"f", p.f}});
  return {{"rate", arr}};
}

std::vector<RatePoint> rate_points_from_json(const Json& j) {
  std::vector<RatePoint> out;
  for (const auto& e : field(j, "rate")) out.push_back({get<double>(e, "rho"), get<double>(e, "r"), get<double>(e, "f")});
  return out;
}

namespace {

Json header(const RunInfo& info) {
  return {{"sampler", info.sampler}, {"alpha", info.alpha}, {"seed", info.seed}, {"stream", info.stream}};
}

}  // namespace

namespace {

Json ci95(double estimate, double std_error) { return {estimate - 1.96 * std_error, estimate + 1.96 * std_error}; }

}  // namespace

Json manifest(const RunInfo& info, const KnLimitReport& r) {
  Json j = header(info);
  j["n"] = r.n;
  j["trials"] = r.trials;
  Json moments = Json::array();
  for (const auto& m : r.moments) {
    moments.push_back({{"q", m.q},
                       {"estimate", m.estimate},
                       {"std_error", m.std_error},
                       {"ci95", ci95(m.estimate, m.std_error)},
                       {"oracle", m.oracle}});
  }
  j["moments"] = moments;
  j["variance"] = r.variance;
  j["variance_oracle"] = r.variance_oracle;
  return j;
}

Json manifest(const RunInfo& info, const StableLimitReport& r) {
  Json j = header(info);
  j["k"] = r.k;
  j["trials"] = r.trials;
  Json pts = Json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"lambda", p.lambda},
                   {"estimate", p.estimate},
                   {"std_error", p.std_error},
                   {"ci95", ci95(p.estimate, p.std_error)},
                   {"target", p.target}});
  }
  j["laplace"] = pts;
  return j;
}

Json manifest(const RunInfo& info, const LeafSummary& s) {
  Json j = header(info);
  j["n"] = s.n;
  j["trials"] = s.trials;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["mean_std_error"] = std::sqrt(s.variance / static_cast<double>(s.trials));
  Json hist = Json::array();
  for (const auto& [leaves, count] : s.histogram) hist.push_back({{"leaves", leaves}, {"count", count}});
  j["histogram"] = hist;
  return j;
}

LeafSummary leaf_summary_from_json(const Json& j) {
  LeafSummary s;
  s.n = get<unsigned>(j, "n");
  s.trials = get<std::uint64_t>(j, "trials");
  s.mean = get<double>(j, "mean");
  s.variance = get<double>(j, "variance");
  for (const auto& e : field(j, "histogram")) s.histogram[get<unsigned>(e, "leaves")] = get<std::uint64_t>(e, "count");
  return s;
}

Json manifest(const RunInfo& info, const ProgenyHistogram& h) {
  Json j = header(info);
  j["draws"] = h.draws;
  j["cap"] = h.cap;
  Json counts = Json::array();
  for (std::size_t v = 1; v < h.counts.size(); ++v) counts.push_back({{"value", v}, {"count", h.counts[v]}});
  j["counts"] = counts;
  j["beyond"] = h.beyond;
  j["overflow"] = h.overflow;
  j["overflow_fraction"] = static_cast<double>(h.overflow) / static_cast<double>(h.draws);
  return j;
}

Json manifest(const RunInfo& info, const ForestState& f) {
  Json j = header(info);
  j["n"] = f.n;
  j["k"] = f.k;
  j["sizes"] = f.sizes;
  j["out_degrees"] = f.nodes;
  j["k_path"] = f.k_path;
  const auto r = f.total_roles();
  j["roles"] = {{"roots", r.roots}, {"internals", r.internals}, {"leaves", r.leaves}};
  return j;
}

Json manifest(const RunInfo& info, const CrpTrajectory& t) {
  Json j = header(info);
  j["theta"] = t.theta;
  j["table_sizes"] = t.table_sizes;
  j["occupied"] = t.occupied;
  return j;
}

std::string histogram_csv(const ProgenyHistogram& h) {
  std::ostringstream out;
  out << "value,count\n";
  for (std::size_t v = 1; v < h.counts.size(); ++v) out << v << ',' << h.counts[v] << '\n';
  out << "beyond," << h.beyond << "\noverflow," << h.overflow << '\n';
  return out.str();
}

std::string histogram_csv(const LeafSummary& s) {
  std::ostringstream out;
  out << "leaves,count\n";
  for (const auto& [leaves, count] : s.histogram) out << leaves << ',' << count << '\n';
  return out.str();
}

}  // namespace sibuya::io
