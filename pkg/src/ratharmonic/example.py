"""End-to-end check of the degree-two example with five zeros."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .critical import trace_critical_set
from .errors import RatHarmonicError
from .rational import five_zero_example
from .solver import Orientation, SolveOptions, critical_orbit_census, solve_zeros, verify_argument_principle

SQ2, SQ7, SQ11 = math.sqrt(2), math.sqrt(7), math.sqrt(11)
EXPECTED_REVERSING = [0.5 + 0j, complex(0.5, SQ11 / 2), complex(0.5, -SQ11 / 2)]
EXPECTED_PRESERVING = [complex(1 - SQ2), complex(1 + SQ2)]
EXPECTED_POLES = [complex(0.75, SQ7 / 4), complex(0.75, -SQ7 / 4)]
EXAMPLE_BBOX = (-2.0, 3.0, -2.0, 2.0)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}  {self.detail}".rstrip()


def _matches(found, expected, tol) -> bool:
    found = list(found)
    if len(found) != len(expected):
        return False
    for e in expected:
        d = [abs(e - f) for f in found]
        if not d or min(d) > tol:
            return False
        found.pop(int(np.argmin(d)))
    return True


def verify_example(tol: float = 1e-8, tol_accept: float = 1e-8, skip_census: bool = False,
                   resolutions=(512, 1024)) -> list[Check]:
    checks: list[Check] = []

    def run(name, fn):
        try:
            ok, detail = fn()
        except RatHarmonicError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append(Check(name, bool(ok), detail))

    r = five_zero_example()
    rep = solve_zeros(r, SolveOptions(tol_accept=tol_accept))
    pres = [h.location for h in rep.zeros if h.orientation is Orientation.SENSE_PRESERVING]
    rev = [h.location for h in rep.zeros if h.orientation is Orientation.SENSE_REVERSING]

    run("five zeros", lambda: (rep.count == 5, f"found {rep.count}"))
    run("zero locations", lambda: (_matches(rep.locations, EXPECTED_PRESERVING + EXPECTED_REVERSING, tol), f"tol {tol:g}"))
    run("orientation split 2/3", lambda: (
        _matches(pres, EXPECTED_PRESERVING, tol) and _matches(rev, EXPECTED_REVERSING, tol),
        f"{len(pres)} preserving, {len(rev)} reversing"))
    poles = [p for p, _ in rep.pole_orders]
    run("poles (3 +- i sqrt7)/4", lambda: (_matches(poles, EXPECTED_POLES, tol), str([o for _, o in rep.pole_orders])))
    run("large-circle winding +1", lambda: (rep.winding_large_circle == 1, f"winding {rep.winding_large_circle}"))
    run("argument principle 1 = (n+ - n-) - M", lambda: (
        rep.argument_principle_ok is True and rep.pole_total == -2,
        f"n+={rep.n_plus} n-={rep.n_minus} M={rep.pole_total}"))

    def per_pole():
        res = verify_argument_principle(rep, [(p, 0.05) for p in poles])
        return all(res), str(res)

    run("winding +1 around each pole", per_pole)
    run("bounds 5n-5 and 2n-2", lambda: (rep.bound_5n5_ok and rep.bound_2n2_ok, ""))

    if not skip_census:
        def census():
            c = critical_orbit_census(r, rep)
            counts = [k for _, k in c.counts if _.orientation is Orientation.SENSE_PRESERVING]
            return c.total_critical == 6 and len(counts) == 2 and all(k == 3 for k in counts), (
                f"{c.total_critical} critical points, attracted {counts}")

        run("critical-orbit census 3 per attracting zero", census)

    for res in resolutions:
        def regions(res=res):
            cs = trace_critical_set(r, EXAMPLE_BBOX, res)
            unb = [g for g in cs.regions if not g.bounded]
            bnd = sorted((g for g in cs.regions if g.bounded), key=lambda g: -g.area)
            ok = (
                len(cs.regions) == 3 and len(unb) == 1 and len(bnd) == 2
                and unb[0].orientation is Orientation.SENSE_PRESERVING
                and bnd[0].orientation is Orientation.SENSE_REVERSING
                and bnd[1].orientation is Orientation.SENSE_PRESERVING
            )
            return ok, f"{len(cs.regions)} regions, {len(cs.polylines)} curves"

        run(f"critical-set regions at {res}", regions)
    return checks
