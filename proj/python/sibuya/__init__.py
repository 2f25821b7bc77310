"""Exact and Monte Carlo computations for Sibuya trees and forests.

Exact quantities come back as ``fractions.Fraction``. The parameter ``alpha``
may be a ``Fraction``, a ``"p/q"`` string, or a float (float paths only).
"""

import json
from fractions import Fraction

from . import _core

__all__ = [
    "ParseError",
    "progeny_pmf",
    "stirling_table",
    "general_stirling_table",
    "kn_pmf",
    "kn_mean",
    "tilted_kn_pmf",
    "occupancy_pmf",
    "marginal_pmf",
    "crp_sn_pmf",
    "solve_z_rho",
    "rate_function",
    "free_energy_oracle",
    "classify_rescaled",
    "classify_increasing_rescaled",
    "default_seed",
    "sample_sibuya",
    "sample_bgw_progeny",
    "grow_forest",
    "progeny_histogram",
    "estimate_kn_limit",
    "estimate_stable_limit",
    "crp_chain",
    "leaf_statistics",
    "verify",
]

ParseError = _core.ParseError
rate_function = _core.rate_function
free_energy_oracle = _core.free_energy_oracle
default_seed = _core.default_seed


def _alpha(alpha):
    if isinstance(alpha, float):
        return repr(alpha)
    return str(alpha)


def _pmf(text):
    pmf = json.loads(text)
    if pmf["mode"] == "exact":
        pmf["mass"] = [Fraction(m) for m in pmf["mass"]]
        if pmf.get("tail") is not None:
            pmf["tail"] = Fraction(pmf["tail"])
    return pmf


def _table(text):
    table = json.loads(text)
    for e in table["entries"]:
        e["value"] = Fraction(int(e["numerator"]), int(e["denominator"]))
    return table


def progeny_pmf(alpha, n_max, exact=True):
    return _pmf(_core.progeny_pmf(_alpha(alpha), n_max, exact))


def stirling_table(alpha, n_max):
    return _table(_core.stirling_table(_alpha(alpha), n_max))


def general_stirling_table(alpha1, alpha2, w2, n_max):
    return _table(_core.general_stirling_table(str(alpha1), str(alpha2), str(w2), n_max))


def kn_pmf(alpha, n, route="recurrence", exact=True):
    return _pmf(_core.kn_pmf(_alpha(alpha), n, route, exact))


def kn_mean(alpha, n, exact=True):
    value = json.loads(_core.kn_mean(_alpha(alpha), n, exact))
    return Fraction(value) if exact else value


def tilted_kn_pmf(alpha, c1, n):
    return _pmf(_core.tilted_kn_pmf(_alpha(alpha), str(c1), n))


def occupancy_pmf(alpha, parts):
    return Fraction(json.loads(_core.occupancy_pmf(_alpha(alpha), list(parts))))


def marginal_pmf(alpha, n, k):
    return _pmf(_core.marginal_pmf(_alpha(alpha), n, k))


def crp_sn_pmf(alpha, theta, n):
    return _pmf(_core.crp_sn_pmf(_alpha(alpha), str(theta), n))


def solve_z_rho(alpha, rho):
    return json.loads(_core.solve_z_rho(_alpha(alpha), rho))


def classify_rescaled(alpha, c1, c2=None):
    return json.loads(_core.classify_rescaled(_alpha(alpha), c1, c2))


def classify_increasing_rescaled(alpha, c1):
    return json.loads(_core.classify_increasing_rescaled(_alpha(alpha), c1))


def sample_sibuya(alpha, count, seed=None, stream=0):
    seed = default_seed() if seed is None else seed
    return _core.sample_sibuya(_alpha(alpha), count, seed, stream)


def sample_bgw_progeny(alpha, count, seed=None, stream=0, cap=1_000_000):
    """Total progeny per tree; cap + 1 marks a tree that outgrew the cap."""
    seed = default_seed() if seed is None else seed
    return _core.sample_bgw_progeny(_alpha(alpha), count, seed, stream, cap)


def grow_forest(alpha, n, seed=None, stream=0, attachment="weighted"):
    seed = default_seed() if seed is None else seed
    return json.loads(_core.grow_forest(_alpha(alpha), n, seed, stream, attachment))


def progeny_histogram(alpha, sampler, draws, max_bin=30, cap=1_000_000, seed=None, stream=0, threads=0):
    seed = default_seed() if seed is None else seed
    return json.loads(_core.progeny_histogram(_alpha(alpha), sampler, draws, max_bin, cap, seed, stream, threads))


def estimate_kn_limit(alpha, n, trials, seed=None, stream=0, threads=0):
    seed = default_seed() if seed is None else seed
    return json.loads(_core.estimate_kn_limit(_alpha(alpha), n, trials, seed, stream, threads))


def estimate_stable_limit(alpha, k, trials, lambdas=(0.5, 1.0, 2.0), seed=None, stream=0, threads=0):
    seed = default_seed() if seed is None else seed
    return json.loads(_core.estimate_stable_limit(_alpha(alpha), k, trials, list(lambdas), seed, stream, threads))


def crp_chain(alpha, theta, n, seed=None, stream=0):
    seed = default_seed() if seed is None else seed
    return json.loads(_core.crp_chain(_alpha(alpha), theta, n, seed, stream))


def leaf_statistics(alpha, n, trials, seed=None, stream=0, threads=0):
    seed = default_seed() if seed is None else seed
    return json.loads(_core.leaf_statistics(_alpha(alpha), n, trials, seed, stream, threads))


def verify(alpha, n_max=15):
    return json.loads(_core.verify(_alpha(alpha), n_max))
