"""Zeros of f(z) = conj(r(z)) - z.

Every zero of f is a fixed point of the analytic map
Q(z) = conj(r(conj(r(z)))), which has degree n**2.  The fixed points of Q
are found as polynomial roots, the genuine zeros of f are kept (period-two
points of z -> conj(r(z)) are discarded by residual), polished with Newton
on the real 2x2 system, and classified by the sign of 1 - |r'(z)|**2.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ContourTooClose, DegreeTooLow, MaxIterationsExceeded, NonConvergentSampling, NotApplicable
from .poly import ComplexPolynomial, horner
from .rational import RationalFunction
from .roots import RootOptions, RootSet, find_roots

log = logging.getLogger(__name__)


class Orientation(str, enum.Enum):
    SENSE_PRESERVING = "sense_preserving"
    SENSE_REVERSING = "sense_reversing"
    SINGULAR = "singular"


@dataclass(frozen=True)
class SolveOptions:
    tol_accept: float = 1e-8
    dedupe_rtol: float = 1e-6
    eps_sing: float = 1e-6
    polish_steps: int = 8
    # a candidate may move at most this far (relative) while being polished
    max_polish_shift: float = 1e-4
    perturb: bool = False
    perturb_retries: int = 5
    perturb_rel: float = 1e-6
    seed: int = 0
    check_winding: bool = True
    roots: RootOptions = field(default_factory=RootOptions)


def classify(r_prime_abs: float, eps_sing: float = 1e-6) -> Orientation:
    if r_prime_abs < 1.0 - eps_sing:
        return Orientation.SENSE_PRESERVING
    if r_prime_abs > 1.0 + eps_sing:
        return Orientation.SENSE_REVERSING
    return Orientation.SINGULAR


_INDEX = {Orientation.SENSE_PRESERVING: 1, Orientation.SENSE_REVERSING: -1, Orientation.SINGULAR: None}


@dataclass(frozen=True)
class HarmonicZero:
    location: complex
    residual: float
    r_prime_abs: float
    jacobian: float
    orientation: Orientation
    index: int | None

    @classmethod
    def at(cls, r: RationalFunction, z: complex, eps_sing: float = 1e-6) -> "HarmonicZero":
        z = complex(z)
        res = abs(f_value(r, z))
        rp = abs(complex(r.derivative_raw(z)))
        o = classify(rp, eps_sing)
        return cls(z, float(res), float(rp), float(1.0 - rp * rp), o, _INDEX[o])

    def to_json(self) -> dict:
        return {
            "z": [self.location.real, self.location.imag],
            "orientation": self.orientation.value,
            "index": self.index,
            "residual": self.residual,
            "r_prime_abs": self.r_prime_abs,
            "jacobian": self.jacobian,
        }

    @classmethod
    def from_json(cls, d: dict) -> "HarmonicZero":
        return cls(
            complex(*d["z"]),
            d["residual"],
            d["r_prime_abs"],
            d["jacobian"],
            Orientation(d["orientation"]),
            d["index"],
        )


@dataclass
class SolveReport:
    zeros: list[HarmonicZero]
    pole_orders: list[tuple[complex, int]]
    n_plus: int
    n_minus: int
    n_singular: int
    degree_n: int
    bound_5n5_ok: bool
    bound_2n2_ok: bool
    winding_large_circle: int | None
    argument_principle_ok: bool | None
    perturbation_c: complex | None = None
    rational: RationalFunction | None = None
    candidates: int = 0

    @property
    def count(self) -> int:
        return len(self.zeros)

    @property
    def locations(self) -> np.ndarray:
        return np.array([z.location for z in self.zeros], dtype=complex)

    @property
    def pole_total(self) -> int:
        """M: the sum of the pole orders (negative)."""
        return sum(o for _, o in self.pole_orders)

    def to_json(self) -> dict:
        c = self.perturbation_c
        return {
            "degree_n": self.degree_n,
            "zeros": [z.to_json() for z in self.zeros],
            "poles": [{"z": [p.real, p.imag], "order": o} for p, o in self.pole_orders],
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "n_singular": self.n_singular,
            "count": self.count,
            "bound_5n5": 5 * self.degree_n - 5,
            "bound_5n5_ok": self.bound_5n5_ok,
            "bound_2n2_ok": self.bound_2n2_ok,
            "winding_large_circle": self.winding_large_circle,
            "argument_principle_ok": self.argument_principle_ok,
            "perturbation_c": None if c is None else [c.real, c.imag],
            "candidates": self.candidates,
            "rational": None if self.rational is None else self.rational.to_json(),
        }

    @classmethod
    def from_json(cls, d: dict) -> "SolveReport":
        c = d.get("perturbation_c")
        rat = d.get("rational")
        return cls(
            zeros=[HarmonicZero.from_json(z) for z in d["zeros"]],
            pole_orders=[(complex(*p["z"]), p["order"]) for p in d["poles"]],
            n_plus=d["n_plus"],
            n_minus=d["n_minus"],
            n_singular=d["n_singular"],
            degree_n=d["degree_n"],
            bound_5n5_ok=d["bound_5n5_ok"],
            bound_2n2_ok=d["bound_2n2_ok"],
            winding_large_circle=d["winding_large_circle"],
            argument_principle_ok=d["argument_principle_ok"],
            perturbation_c=None if c is None else complex(*c),
            rational=None if rat is None else RationalFunction.from_json(rat, check=False),
            candidates=d.get("candidates", 0),
        )


def f_value(r: RationalFunction, z):
    """conj(r(z)) - z."""
    return np.conj(r.raw(z)) - z


def build_Q(r: RationalFunction) -> RationalFunction:
    """Q = reflect(r) o r, an analytic map of degree n**2 (unreduced)."""
    if r.degree < 2:
        raise DegreeTooLow(f"deg r = {r.degree}; need n > 1")
    return r.reflect().compose(r)


def _fixed_point_ratio(r: RationalFunction):
    """Newton ratio F/F' for F = P - zS, evaluated through r instead of Q's coefficients.

    With A, B the conjugated numerator/denominator of r homogenized to degree
    n, P(z) = A(p(z), q(z)) and S(z) = B(p(z), q(z)).  Working from p and q
    keeps the clustered fixed points near the poles of r well conditioned.
    """
    n = r.degree
    A = r.num.conj_coeffs()
    B = r.den.conj_coeffs()
    Ax, Ay = _partials(A, n)
    Bx, By = _partials(B, n)
    p, q = r.num, r.den
    dp, dq = p.derivative(), q.derivative()

    def ratio(z):
        z = np.asarray(z, dtype=complex)
        pv, qv = horner(p.coeffs, z), horner(q.coeffs, z)
        dpv, dqv = horner(dp.coeffs, z), horner(dq.coeffs, z)
        s = np.maximum(np.abs(pv), np.abs(qv))
        s = np.where(s > 0, s, 1.0)
        x, y = pv / s, qv / s
        dx, dy = dpv / s, dqv / s
        Sv = B.homogeneous(x, y, n)
        F = A.homogeneous(x, y, n) - z * Sv
        dF = (Ax.homogeneous(x, y, n - 1) * dx + Ay.homogeneous(x, y, n - 1) * dy
              - Sv - z * (Bx.homogeneous(x, y, n - 1) * dx + By.homogeneous(x, y, n - 1) * dy))
        return F / dF

    return ratio


def _partials(A: ComplexPolynomial, n: int):
    """Coefficients of d/dx and d/dy of sum a_k x^k y^(n-k), as degree n-1 forms in x."""
    a = np.zeros(n + 1, dtype=complex)
    a[: len(A.coeffs)] = A.coeffs
    k = np.arange(n + 1)
    ax = (a * k)[1:]  # x^(k-1) y^(n-k)
    ay = (a * (n - k))[:-1]  # x^k y^(n-1-k)
    return ComplexPolynomial(ax), ComplexPolynomial(ay)


def fixed_point_candidates(Q: RationalFunction, opts: RootOptions | None = None, r: RationalFunction | None = None) -> RootSet:
    """Roots of P(z) - z S(z) for Q = P/S.

    Passing the underlying ``r`` (with Q = build_Q(r)) lets the root finder
    evaluate through r, which is much better conditioned.  Q built from a
    reduced r is itself reduced, so no root is removable; candidates lying
    within the cluster radius of a root of S are only counted in
    ``diagnostics["near_pole_of_Q"]`` (images next to a point mass sit there).
    """
    opts = opts or RootOptions()
    P, S = Q.num, Q.den
    F = P - S * ComplexPolynomial([0.0, 1.0])
    ratio_fn = _fixed_point_ratio(r) if r is not None else None
    rs = find_roots(F, opts, ratio_fn)
    if S.degree >= 1 and r is None:
        srs = find_roots(S, opts).locations()
        near = sum(
            bool(np.any(np.abs(srs - root.location) <= opts.cluster_rtol * (1.0 + abs(root.location))))
            for root in rs.roots
        )
        rs.diagnostics["near_pole_of_Q"] = int(near)
    return rs


def newton_polish(r: RationalFunction, z: complex, steps: int = 8, eps_sing: float = 1e-6) -> complex:
    """Newton on the real system f = 0.

    The linearization is  df = conj(r') conj(dz) - dz, whose real determinant
    is 1 - |r'|^2; the solved step is dz = (f + conj(r') conj(f)) / (1 - |r'|^2).
    """
    for _ in range(steps):
        fv = complex(f_value(r, z))
        a = complex(np.conj(r.derivative_raw(z)))
        det = 1.0 - abs(a) ** 2
        if abs(det) < eps_sing or not np.isfinite(det):
            break
        dz = (fv + a * fv.conjugate()) / det
        if not np.isfinite(dz):
            break
        z = z + dz
        if abs(dz) <= 4e-16 * (1.0 + abs(z)):
            break
    return z


def pole_orders(r: RationalFunction) -> list[tuple[complex, int]]:
    """Each pole of r of multiplicity k is a pole of f of order -k."""
    return [(p, -m) for p, m in r.poles()]


def winding(
    r: RationalFunction,
    center: complex,
    radius: float,
    samples: int = 256,
    avoid=(),
    guard: float = 1e-6,
    max_samples: int = 1 << 20,
) -> int:
    """Winding number of f around the circle |z - center| = radius.

    The sampling doubles until every consecutive argument increment is below
    pi/2 in magnitude.  ``avoid`` lists known zeros that must stay ``guard``
    (relative) away from the contour; poles of r are always checked.
    """
    center = complex(center)
    scale = guard * (1.0 + radius)
    pts = list(r.pole_locations) + [complex(a) for a in avoid]
    for p in pts:
        if abs(abs(p - center) - radius) < scale:
            raise ContourTooClose(f"contour passes within {scale:g} of {p}")
    n = samples
    while n <= max_samples:
        t = np.exp(2j * np.pi * np.arange(n) / n)
        z = center + radius * t
        fv = f_value(r, z)
        if not np.all(np.isfinite(fv)):
            raise ContourTooClose("f is not finite on the contour")
        inc = np.angle(np.roll(fv, -1) / fv)
        if np.max(np.abs(inc)) < np.pi / 2:
            return int(round(inc.sum() / (2 * np.pi)))
        n *= 2
    raise NonConvergentSampling(f"argument increments still >= pi/2 at {max_samples} samples")


def large_circle_radius(zeros, poles) -> float:
    mods = [abs(complex(z)) for z in zeros] + [abs(complex(p)) for p in poles]
    return 2.0 * (1.0 + max(mods, default=0.0))


def _solve_once(r: RationalFunction, opts: SolveOptions) -> SolveReport:
    n = r.degree
    Q = build_Q(r)
    cands = fixed_point_candidates(Q, opts.roots, r)

    found: list[complex] = []
    for root in cands.roots:
        z0 = complex(root.location)
        if not np.isfinite(z0):
            continue
        z = newton_polish(r, z0, opts.polish_steps, opts.eps_sing)
        if abs(z - z0) > opts.max_polish_shift * (1.0 + abs(z0)):
            continue
        res = abs(complex(f_value(r, z)))
        if not res <= opts.tol_accept * (1.0 + abs(z)):
            continue
        # period-two points near a zero can polish onto it; keep one copy
        if all(abs(w - z) > opts.dedupe_rtol * (1.0 + abs(z)) for w in found):
            found.append(z)

    zeros = [HarmonicZero.at(r, z, opts.eps_sing) for z in found]
    zeros.sort(key=lambda h: (round(h.location.real, 9), round(h.location.imag, 9)))

    poles = pole_orders(r)
    n_plus = sum(h.orientation is Orientation.SENSE_PRESERVING for h in zeros)
    n_minus = sum(h.orientation is Orientation.SENSE_REVERSING for h in zeros)
    n_sing = len(zeros) - n_plus - n_minus

    wind = None
    ap_ok = None
    if opts.check_winding:
        R = large_circle_radius([h.location for h in zeros], [p for p, _ in poles])
        try:
            wind = winding(r, 0.0, R, avoid=[h.location for h in zeros])
        except (ContourTooClose, NonConvergentSampling) as exc:
            log.warning("large-circle winding failed: %s", exc)
        if wind is not None and n_sing == 0:
            M = sum(o for _, o in poles)
            ap_ok = wind == (n_plus - n_minus) - M
    if not cands.converged and ap_ok is not True:
        # polish can rescue a stalled sweep, but only the winding check can vouch for it
        raise MaxIterationsExceeded(
            f"fixed-point root search stopped after {cands.iterations} sweeps; "
            f"{len(zeros)} zeros accepted, winding {wind}, argument principle {ap_ok}"
        )

    return SolveReport(
        zeros=zeros,
        pole_orders=poles,
        n_plus=n_plus,
        n_minus=n_minus,
        n_singular=n_sing,
        degree_n=n,
        bound_5n5_ok=len(zeros) <= 5 * n - 5,
        bound_2n2_ok=n_plus <= 2 * n - 2,
        winding_large_circle=wind,
        argument_principle_ok=ap_ok,
        rational=r,
        candidates=len(cands.roots),
    )


def solve_zeros(r: RationalFunction, opts: SolveOptions | None = None) -> SolveReport:
    """All zeros of conj(r(z)) - z, classified, with bound and winding verdicts.

    With ``opts.perturb`` set, a report containing singular zeros triggers
    retries on r - c for small random c (regular functions are dense); the
    chosen c is recorded in the report.
    """
    opts = opts or SolveOptions()
    if r.degree < 2:
        raise DegreeTooLow(f"deg r = {r.degree}; need n > 1")
    report = _solve_once(r, opts)
    if report.n_singular == 0 or not opts.perturb:
        return report
    rng = np.random.default_rng(opts.seed)
    radius = opts.perturb_rel * max(r.scale(), 1e-300)
    for attempt in range(opts.perturb_retries):
        c = radius * np.exp(2j * np.pi * rng.random())
        rc = r - c
        trial = _solve_once(rc, opts)
        log.info("perturbation attempt %d, c=%s: %d singular", attempt + 1, c, trial.n_singular)
        if trial.n_singular == 0:
            trial.perturbation_c = complex(c)
            return trial
    return report


def verify_argument_principle(report: SolveReport, contours, r: RationalFunction | None = None) -> list[bool]:
    """Check winding == (sum of enclosed zero indices) - (sum of enclosed pole orders).

    ``contours`` is a sequence of (center, radius) circles.
    """
    r = r or report.rational
    if r is None:
        raise ValueError("report carries no rational function")
    out = []
    for center, radius in contours:
        center = complex(center)
        inside = [h for h in report.zeros if abs(h.location - center) < radius]
        if any(h.index is None for h in inside):
            raise NotApplicable("contour encloses a singular zero")
        N = sum(h.index for h in inside)
        M = sum(o for p, o in report.pole_orders if abs(p - center) < radius)
        w = winding(r, center, radius, avoid=[h.location for h in report.zeros])
        out.append(w == N - M)
    return out


# ---------------------------------------------------------------------------
# critical-orbit census


@dataclass
class OrbitCensus:
    """Attribution of the critical points of Q to attracting zeros of f.

    ``counts[i]`` pairs an attracting (or singular) zero with the number of
    critical points of Q, with multiplicity, whose orbits settle on it.
    """

    counts: list[tuple[HarmonicZero, int]]
    total_critical: int
    at_infinity: int
    unresolved: int
    unattributed: int
    critical_points: list[tuple[complex, int]] = field(default_factory=list)

    def __iter__(self):
        return iter(self.counts)


def _sphere(z: np.ndarray):
    z = np.asarray(z, dtype=complex)
    big = np.abs(z) > 1.0
    x = np.where(big, 1.0 + 0j, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(big, 1.0 / z, 1.0 + 0j)
    return x, y


def critical_points_of(Q: RationalFunction, opts: RootOptions | None = None):
    """Critical points of Q on the Riemann sphere as (location, multiplicity).

    Finite ones are roots of the Wronskian P'S - PS'; the shortfall of its
    degree from 2d - 2 sits at infinity (returned with location ``inf``).
    """
    P, S = Q.num, Q.den
    d = Q.degree
    W = P.derivative() * S - P * S.derivative()
    pts: list[tuple[complex, int]] = []
    degW = 0
    if not W.is_zero() and W.degree >= 1:
        rs = find_roots(W, opts)
        pts = [(complex(r.location), int(r.multiplicity)) for r in rs.roots]
        degW = int(W.degree)
    deficit = 2 * d - 2 - degW
    if deficit > 0:
        pts.append((complex(math.inf, 0.0), deficit))
    return pts


def critical_orbit_census(
    r: RationalFunction,
    report: SolveReport,
    max_iter: int = 5000,
    tol_attract: float = 1e-6,
    stay: int = 20,
) -> OrbitCensus:
    """Iterate every critical point of Q and count captures by attracting zeros.

    An orbit is attributed to a sense-preserving (or singular) zero when its
    last ``stay`` iterates all lie within ``tol_attract * (1 + |z0|)`` of it.
    Orbits that neither settle on such a zero nor become stationary/periodic
    within ``max_iter`` steps are reported as unresolved.
    """
    if r.degree < 2:
        raise DegreeTooLow(f"deg r = {r.degree}; need n > 1")
    Q = build_Q(r)
    d = Q.degree
    crit = critical_points_of(Q)
    targets = [h for h in report.zeros if h.orientation is not Orientation.SENSE_REVERSING]
    tz = np.array([h.location for h in targets], dtype=complex)

    locs = np.array([c for c, _ in crit], dtype=complex)
    mult = np.array([m for _, m in crit], dtype=int)
    x, y = _sphere(locs)
    inf_mask = ~np.isfinite(locs)
    x[inf_mask] = 1.0
    y[inf_mask] = 0.0

    P, S = Q.num, Q.den
    window = 8
    hist: list[np.ndarray] = []
    inside_run = np.zeros(len(locs), dtype=int)
    nearest = np.full(len(locs), -1)

    def current():
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(np.abs(y) > 0, x / y, complex(math.inf, 0.0))

    for step in range(max_iter + 1):
        z = current()
        if len(tz):
            dist = np.abs(z[:, None] - tz[None, :])
            dist[~np.isfinite(dist)] = np.inf
            j = np.argmin(dist, axis=1)
            dmin = dist[np.arange(len(z)), j]
            ok = dmin <= tol_attract * (1.0 + np.abs(tz[j]))
            same = j == nearest
            inside_run = np.where(ok, np.where(same, inside_run + 1, 1), 0)
            nearest = np.where(ok, j, -1)
        hist.append(z)
        if len(hist) > window + 1:
            hist.pop(0)
        if step == max_iter:
            break
        if len(tz) and np.all(inside_run >= stay):
            break
        X = P.homogeneous(x, y, d)
        Y = S.homogeneous(x, y, d)
        norm = np.maximum(np.abs(X), np.abs(Y))
        norm[norm == 0] = 1.0
        x, y = X / norm, Y / norm

    attributed = inside_run >= stay
    counts = [0] * len(targets)
    for k in np.nonzero(attributed)[0]:
        counts[int(nearest[k])] += int(mult[k])

    # orbits that settled on something else (cycle of period <= window)
    zf = hist[-1]
    settled = np.zeros(len(zf), dtype=bool)
    for past in hist[:-1]:
        with np.errstate(invalid="ignore"):
            both_inf = ~np.isfinite(zf) & ~np.isfinite(past)
            close = np.abs(zf - past) <= 1e-8 * (1.0 + np.abs(zf))
        settled |= both_inf | np.nan_to_num(close, nan=False).astype(bool)
    unresolved = int(mult[~attributed & ~settled].sum())
    unattributed = int(mult[~attributed].sum())
    return OrbitCensus(
        counts=list(zip(targets, counts)),
        total_critical=int(mult.sum()),
        at_infinity=int(mult[inf_mask].sum()),
        unresolved=unresolved,
        unattributed=unattributed,
        critical_points=crit,
    )
