#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "sibuya/dist.hpp"
#include "sibuya/io.hpp"
#include "sibuya/simulate.hpp"
#include "sibuya/stirling.hpp"
#include "sibuya/thermo.hpp"
#include "sibuya/verify.hpp"

namespace py = pybind11;
using namespace sibuya;
using io::Json;

namespace {

// Results cross the boundary as JSON text; the Python layer decodes them.
std::string dump(const Json& j) { return j.dump(); }

AlphaParam alpha_of(const std::string& text) { return AlphaParam::parse(text); }

std::string pmf_json(const Pmf<Rational>& pmf, bool exact) {
  return exact ? dump(io::to_json(pmf)) : dump(io::to_json(pmf.to_float()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact and Monte Carlo computations for Sibuya trees and forests";

  py::register_exception<io::ParseError>(m, "ParseError", PyExc_ValueError);

  m.def("progeny_pmf", [](const std::string& alpha, unsigned n_max, bool exact) {
    const auto a = alpha_of(alpha);
    return exact ? dump(io::to_json(progeny_pmf(a, n_max))) : dump(io::to_json(progeny_pmf_float(a, n_max)));
  }, py::arg("alpha"), py::arg("n_max"), py::arg("exact") = true);

  m.def("stirling_table", [](const std::string& alpha, unsigned n_max) {
    return dump(io::to_json(build_triangle(alpha_of(alpha), n_max)));
  }, py::arg("alpha"), py::arg("n_max"));

  m.def("general_stirling_table",
        [](const std::string& alpha1, const std::string& alpha2, const std::string& w2, unsigned n_max) {
          return dump(io::to_json(
              build_general_triangle(parse_rational(alpha1), parse_rational(alpha2), parse_rational(w2), n_max)));
        },
        py::arg("alpha1"), py::arg("alpha2"), py::arg("w2"), py::arg("n_max"));

  m.def("kn_pmf", [](const std::string& alpha, unsigned n, const std::string& route, bool exact) {
    const auto a = alpha_of(alpha);
    if (route == "counts") return pmf_json(kn_pmf_from_counts(a, n), exact);
    if (route == "lagrange") return pmf_json(kn_pmf_from_lagrange(a, n), exact);
    if (route != "recurrence") throw std::invalid_argument("route must be recurrence, counts or lagrange");
    return pmf_json(kn_pmf(a, n), exact);
  }, py::arg("alpha"), py::arg("n"), py::arg("route") = "recurrence", py::arg("exact") = true);

  m.def("kn_mean", [](const std::string& alpha, unsigned n, bool exact) {
    const auto a = alpha_of(alpha);
    return exact ? dump(io::rational_json(kn_mean<Rational>(a, n))) : dump(Json(kn_mean<double>(a, n)));
  }, py::arg("alpha"), py::arg("n"), py::arg("exact") = true);

  m.def("tilted_kn_pmf", [](const std::string& alpha, const std::string& c1, unsigned n) {
    return dump(io::to_json(tilted_kn_pmf(alpha_of(alpha), parse_rational(c1), n)));
  }, py::arg("alpha"), py::arg("c1"), py::arg("n"));

  m.def("occupancy_pmf", [](const std::string& alpha, std::vector<unsigned> parts) {
    return dump(io::rational_json(occupancy_pmf(alpha_of(alpha), OccupancyVector(std::move(parts)))));
  }, py::arg("alpha"), py::arg("parts"));

  m.def("marginal_pmf", [](const std::string& alpha, unsigned n, unsigned k) {
    return dump(io::to_json(marginal_pmf(alpha_of(alpha), n, k)));
  }, py::arg("alpha"), py::arg("n"), py::arg("k"));

  m.def("crp_sn_pmf", [](const std::string& alpha, const std::string& theta, unsigned n) {
    return dump(io::to_json(crp_sn_pmf(alpha_of(alpha), parse_rational(theta), n)));
  }, py::arg("alpha"), py::arg("theta"), py::arg("n"));

  m.def("solve_z_rho", [](const std::string& alpha, double rho) {
    return dump(io::to_json(solve_z_rho(alpha_of(alpha), rho)));
  }, py::arg("alpha"), py::arg("rho"));

  m.def("rate_function", [](const std::string& alpha, double rho, double r) {
    return rate_function(alpha_of(alpha), rho, r);
  }, py::arg("alpha"), py::arg("rho"), py::arg("r"));

  m.def("free_energy_oracle", [](const std::string& alpha, unsigned n, unsigned k) {
    return free_energy_oracle(alpha_of(alpha), n, k);
  }, py::arg("alpha"), py::arg("n"), py::arg("k"));

  m.def("classify_rescaled", [](const std::string& alpha, double c1, std::optional<double> c2) {
    const auto a = alpha_of(alpha);
    return dump(io::to_json(classify_rescaled(a, c1, c2 ? *c2 : regular_boundary_c2(a, c1))));
  }, py::arg("alpha"), py::arg("c1"), py::arg("c2") = std::nullopt);

  m.def("classify_increasing_rescaled", [](const std::string& alpha, double c1) {
    const auto r = classify_increasing_rescaled(alpha_of(alpha), c1);
    Json j = io::to_json(r.family);
    j["progeny_mass_ode"] = r.progeny_mass_ode;
    j["progeny_mass_scaled"] = r.progeny_mass_scaled;
    j["progeny_mass_alternative"] = r.progeny_mass_alternative;
    j["alternative_threshold_holds"] = r.alternative_threshold_holds;
    return dump(j);
  }, py::arg("alpha"), py::arg("c1"));

  m.def("default_seed", [] { return default_seed(); });

  m.def("sample_sibuya", [](const std::string& alpha, std::uint64_t count, std::uint64_t seed, std::uint64_t stream) {
    const auto a = alpha_of(alpha);
    std::vector<std::uint64_t> out(count);
    py::gil_scoped_release release;
    const RngStream base(seed, stream);
    for (std::uint64_t i = 0; i < count; ++i) {
      RngStream r = base.child(i);
      out[i] = sample_sibuya(a, r);
    }
    return out;
  }, py::arg("alpha"), py::arg("count"), py::arg("seed"), py::arg("stream") = 0);

  m.def("sample_bgw_progeny",
        [](const std::string& alpha, std::uint64_t count, std::uint64_t seed, std::uint64_t stream, std::uint64_t cap) {
          const OffspringSampler offspring(alpha_of(alpha));
          std::vector<std::uint64_t> out(count);
          py::gil_scoped_release release;
          const RngStream base(seed, stream);
          for (std::uint64_t i = 0; i < count; ++i) {
            RngStream r = base.child(i);
            out[i] = sample_bgw_progeny(offspring, r, cap).progeny;
          }
          return out;
        },
        py::arg("alpha"), py::arg("count"), py::arg("seed"), py::arg("stream") = 0,
        py::arg("cap") = kDefaultBgwCap);

  m.def("grow_forest", [](const std::string& alpha, unsigned n, std::uint64_t seed, std::uint64_t stream,
                          const std::string& attachment) {
    const auto a = alpha_of(alpha);
    RngStream rng(seed, stream);
    const auto rule = attachment == "size" ? Attachment::size_proportional : Attachment::weighted;
    return dump(io::manifest({"forest", a.to_string(), seed, stream}, grow_forest(a, n, rng, rule)));
  }, py::arg("alpha"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0, py::arg("attachment") = "weighted");

  m.def("progeny_histogram", [](const std::string& alpha, const std::string& sampler, std::uint64_t draws,
                                unsigned max_bin, std::uint64_t cap, std::uint64_t seed, std::uint64_t stream,
                                unsigned threads) {
    const auto a = alpha_of(alpha);
    const auto kind = sampler == "bgw" ? ProgenySampler::bgw : ProgenySampler::sibuya;
    ProgenyHistogram h;
    {
      py::gil_scoped_release release;
      h = progeny_histogram(a, kind, draws, max_bin, cap, RngStream(seed, stream), threads);
    }
    return dump(io::manifest({sampler, a.to_string(), seed, stream}, h));
  }, py::arg("alpha"), py::arg("sampler"), py::arg("draws"), py::arg("max_bin"), py::arg("cap"), py::arg("seed"),
     py::arg("stream") = 0, py::arg("threads") = 0);

  m.def("estimate_kn_limit", [](const std::string& alpha, unsigned n, std::uint64_t trials, std::uint64_t seed,
                                std::uint64_t stream, unsigned threads) {
    const auto a = alpha_of(alpha);
    KnLimitReport r;
    {
      py::gil_scoped_release release;
      r = estimate_kn_limit(a, n, trials, RngStream(seed, stream), threads);
    }
    return dump(io::manifest({"kn-limit", a.to_string(), seed, stream}, r));
  }, py::arg("alpha"), py::arg("n"), py::arg("trials"), py::arg("seed"), py::arg("stream") = 0,
     py::arg("threads") = 0);

  m.def("estimate_stable_limit", [](const std::string& alpha, std::uint64_t k, std::uint64_t trials,
                                    std::vector<double> lambdas, std::uint64_t seed, std::uint64_t stream,
                                    unsigned threads) {
    const auto a = alpha_of(alpha);
    StableLimitReport r;
    {
      py::gil_scoped_release release;
      r = estimate_stable_limit(a, k, trials, lambdas, RngStream(seed, stream), threads);
    }
    return dump(io::manifest({"stable", a.to_string(), seed, stream}, r));
  }, py::arg("alpha"), py::arg("k"), py::arg("trials"), py::arg("lambdas"), py::arg("seed"), py::arg("stream") = 0,
     py::arg("threads") = 0);

  m.def("crp_chain", [](const std::string& alpha, double theta, unsigned n, std::uint64_t seed, std::uint64_t stream) {
    const auto a = alpha_of(alpha);
    RngStream rng(seed, stream);
    return dump(io::manifest({"crp", a.to_string(), seed, stream}, crp_chain(a, theta, n, rng)));
  }, py::arg("alpha"), py::arg("theta"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0);

  m.def("leaf_statistics", [](const std::string& alpha, unsigned n, std::uint64_t trials, std::uint64_t seed,
                              std::uint64_t stream, unsigned threads) {
    const auto a = alpha_of(alpha);
    LeafSummary s;
    {
      py::gil_scoped_release release;
      s = leaf_statistics(a, n, trials, RngStream(seed, stream), threads);
    }
    return dump(io::manifest({"leaves", a.to_string(), seed, stream}, s));
  }, py::arg("alpha"), py::arg("n"), py::arg("trials"), py::arg("seed"), py::arg("stream") = 0,
     py::arg("threads") = 0);

  m.def("verify", [](const std::string& alpha, unsigned n_max) {
    VerifyReport report;
    {
      const auto a = alpha_of(alpha);
      py::gil_scoped_release release;
      report = run_identity_suite(a, n_max);
    }
    Json checks = Json::array();
    for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return dump({{"alpha", report.alpha}, {"n_max", report.n_max}, {"passed", report.all_passed()}, {"checks", checks}});
  }, py::arg("alpha"), py::arg("n_max") = 15);
}
