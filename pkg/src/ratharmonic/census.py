"""Random-coefficient census of zero counts against the 5n - 5 and 2n - 2 bounds."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .errors import BoundViolation, NotCoprime
from .rational import RationalFunction
from .solver import SolveOptions, solve_zeros

log = logging.getLogger(__name__)

MIN_LEAD = 1e-3


def random_rational(degree: int, rng: np.random.Generator) -> RationalFunction:
    """Numerator and denominator of full degree with standard complex normal coefficients."""
    while True:
        num = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        den = rng.standard_normal(degree + 1) + 1j * rng.standard_normal(degree + 1)
        while abs(num[-1]) < MIN_LEAD:
            num[-1] = rng.standard_normal() + 1j * rng.standard_normal()
        while abs(den[-1]) < MIN_LEAD:
            den[-1] = rng.standard_normal() + 1j * rng.standard_normal()
        try:
            return RationalFunction(num, den)
        except NotCoprime:
            continue


def trial_rng(seed: int, degree: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, degree, trial])


def run_trial(args) -> dict:
    seed, degree, trial, opts = args
    r = random_rational(degree, trial_rng(seed, degree, trial))
    rep = solve_zeros(r, opts)
    return {
        "degree": degree,
        "trial": trial,
        "count": rep.count,
        "n_plus": rep.n_plus,
        "n_minus": rep.n_minus,
        "n_singular": rep.n_singular,
        "bounds_ok": bool(rep.bound_5n5_ok and rep.bound_2n2_ok) if rep.n_singular == 0 else True,
        "argument_principle_ok": rep.argument_principle_ok,
        "rational": r.to_json(),
    }


def run_census(degrees, trials: int, seed: int = 0, workers: int = 1, opts: SolveOptions | None = None) -> dict:
    """Solve ``trials`` random functions per degree and aggregate the zero counts.

    Raises BoundViolation (carrying a reproducer in ``args[1]``) if any
    regular trial exceeds 5n - 5 zeros or 2n - 2 sense-preserving zeros.
    Output depends only on (degrees, trials, seed), not on ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    opts = opts or SolveOptions()
    jobs = [(seed, int(d), t, opts) for d in degrees for t in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run_trial, jobs, chunksize=16))
    else:
        results = [run_trial(j) for j in jobs]

    out: dict = {"seed": seed, "trials": trials, "degrees": {}}
    for d in degrees:
        d = int(d)
        rows = sorted((x for x in results if x["degree"] == d), key=lambda x: x["trial"])
        for x in rows:
            log.info("degree %d trial %d: %d zeros (%d+, %d-)", d, x["trial"], x["count"], x["n_plus"], x["n_minus"])
            if not x["bounds_ok"]:
                repro = {"seed": seed, "degree": d, "trial": x["trial"], "rational": x["rational"], "count": x["count"], "n_plus": x["n_plus"]}
                raise BoundViolation(f"degree {d} trial {x['trial']} exceeds a bound", repro)
        hist: dict[str, int] = {}
        for x in rows:
            hist[str(x["count"])] = hist.get(str(x["count"]), 0) + 1
        regular = [x for x in rows if x["n_singular"] == 0]
        out["degrees"][str(d)] = {
            "bound_5n5": 5 * d - 5,
            "bound_2n2": 2 * d - 2,
            "max_count": max(x["count"] for x in rows),
            "max_n_plus": max(x["n_plus"] for x in rows),
            "histogram": dict(sorted(hist.items(), key=lambda kv: int(kv[0]))),
            "singular_trials": len(rows) - len(regular),
            "argument_principle_failures": sum(x["argument_principle_ok"] is False for x in regular),
            "violations": 0,
        }
    return out
