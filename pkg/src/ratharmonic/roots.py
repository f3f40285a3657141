"""Simultaneous (Aberth-Ehrlich) polynomial root finding.

All roots are iterated together; initial guesses sit on concentric circles
whose radii come from the Newton polygon of the coefficient magnitudes.
Converged roots are Newton-polished and nearby roots are clustered into
multiple roots.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeZero
from .poly import ComplexPolynomial

log = logging.getLogger(__name__)

# irrational angular offset keeps starting points off symmetry axes
_ANGLE_OFFSET = 0.4 + math.sqrt(2) / 10


@dataclass(frozen=True)
class RootOptions:
    tol: float = 1e-13
    max_iters: int = 500
    polish_steps: int = 3
    cluster_rtol: float = 1e-6
    cert_tol: float = 1e-9


@dataclass(frozen=True)
class Root:
    location: complex
    multiplicity: int
    residual: float
    certified: bool = True


@dataclass
class RootSet:
    roots: list[Root]
    degree_accounted: int
    converged: bool = True
    iterations: int = 0
    diagnostics: dict = field(default_factory=dict)

    def locations(self) -> np.ndarray:
        return np.array([r.location for r in self.roots], dtype=complex)

    def multiplicities(self) -> np.ndarray:
        return np.array([r.multiplicity for r in self.roots], dtype=int)

    def expanded(self) -> np.ndarray:
        """Locations repeated by multiplicity."""
        return np.repeat(self.locations(), self.multiplicities())

    @property
    def certified(self) -> bool:
        return self.converged and all(r.certified for r in self.roots)

    def __len__(self):
        return len(self.roots)


def _ratio(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Newton correction p(z)/p'(z), evaluated on the reversed polynomial for |z| > 1."""
    d = len(c) - 1
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) <= 1.0
    if small.any():
        zs = z[small]
        p = np.full(zs.shape, c[-1], dtype=complex)
        dp = np.zeros(zs.shape, dtype=complex)
        for a in c[-2::-1]:
            dp = dp * zs + p
            p = p * zs + a
        out[small] = p / dp
    big = ~small
    if big.any():
        zb = z[big]
        y = 1.0 / zb
        # rev(y) = sum c[k] y^(d-k);  p(z) = z^d rev(y)
        rc = c[::-1]
        p = np.full(y.shape, rc[-1], dtype=complex)
        dp = np.zeros(y.shape, dtype=complex)
        for a in rc[-2::-1]:
            dp = dp * y + p
            p = p * y + a
        out[big] = zb * p / (d * p - y * dp)
    return out


def _scaled_residual(c: np.ndarray, z: complex) -> float:
    """|p(z)| / (max|c| (1+|z|)^d), overflow-safe."""
    d = len(c) - 1
    az = abs(z)
    if az <= 1.0:
        val = abs(np.polyval(c[::-1], z))
        return float(val / (np.abs(c).max() * (1.0 + az) ** d))
    y = 1.0 / z
    val = abs(np.polyval(c, y))  # = |p(z)| / |z|^d
    return float(val * (az / (1.0 + az)) ** d / np.abs(c).max())


def _initial_guesses(c: np.ndarray) -> np.ndarray:
    """Points on circles given by the upper convex hull of (k, log|c_k|)."""
    d = len(c) - 1
    mags = np.abs(c)
    with np.errstate(divide="ignore"):
        logs = np.where(mags > 0, np.log(mags), -np.inf)
    pts = [k for k in range(d + 1) if np.isfinite(logs[k])]
    hull: list[int] = []
    for k in pts:
        while len(hull) >= 2:
            i, j = hull[-2], hull[-1]
            # drop j if it lies on or below the segment i -> k
            if (logs[j] - logs[i]) * (k - i) <= (logs[k] - logs[i]) * (j - i):
                hull.pop()
            else:
                break
        hull.append(k)
    guesses = []
    cauchy = 1.0 + mags[:-1].max() / mags[-1]
    for i, j in zip(hull[:-1], hull[1:]):
        m = j - i
        radius = math.exp((logs[i] - logs[j]) / m)
        radius = min(radius, cauchy)
        ang = 2 * math.pi * np.arange(m) / m + _ANGLE_OFFSET + 2 * math.pi * i / max(d, 1)
        guesses.append(radius * np.exp(1j * ang))
    return np.concatenate(guesses)


def _cluster(z: np.ndarray, radii: np.ndarray, rtol: float) -> list[list[int]]:
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(z[i] - z[j])
            scale = 1.0 + 0.5 * (abs(z[i]) + abs(z[j]))
            if gap <= rtol * scale or gap <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def find_roots(poly: ComplexPolynomial, opts: RootOptions | None = None, ratio_fn=None) -> RootSet:
    """All roots of ``poly`` with multiplicities and scaled residuals.

    ``ratio_fn(z)``, if given, must return the Newton correction p(z)/p'(z)
    for an array of points; it replaces Horner evaluation of the expanded
    coefficients when the polynomial has a better-conditioned structured
    form.  Raises DegreeZero for constant input.  If the sweep budget runs
    out the best-effort roots are returned with ``converged=False``.
    """
    opts = opts or RootOptions()
    c = np.asarray(poly.coeffs, dtype=complex)
    deg = len(c) - 1
    if poly.is_zero() or deg < 1:
        raise DegreeZero("polynomial has degree < 1")

    # exact roots at the origin
    nz = 0
    while c[nz] == 0:
        nz += 1
    cr = c[nz:]
    cr = cr / cr[-1]
    d = len(cr) - 1
    if ratio_fn is None:
        ratio = lambda z: _ratio(cr, z)  # noqa: E731
    elif nz:
        # deflate the exact zeros: p = z^nz p1 gives p1/p1' = z R / (z - nz R)
        ratio = lambda z: (lambda R: z * R / (z - nz * R))(ratio_fn(z))  # noqa: E731
    else:
        ratio = ratio_fn

    z = np.zeros(0, dtype=complex)
    sweeps = 0
    converged = True
    if d >= 1:
        z = _initial_guesses(cr)
        active = np.ones(d, dtype=bool)
        while active.any():
            if sweeps >= opts.max_iters:
                converged = False
                break
            sweeps += 1
            idx = np.nonzero(active)[0]
            za = z[idx]
            with np.errstate(all="ignore"):
                rat = ratio(za)
            diff = za[:, None] - z[None, :]
            diff[np.arange(len(idx)), idx] = 1.0
            s = (1.0 / diff).sum(axis=1) - 1.0
            with np.errstate(all="ignore"):
                step = rat / (1.0 - rat * s)
            bad = ~np.isfinite(step)
            step[bad] = rat[bad]
            step[~np.isfinite(step)] = 0.0
            z[idx] = za - step
            done = np.abs(step) < opts.tol * (1.0 + np.abs(z[idx]))
            active[idx[done]] = False
        if not converged:
            log.debug("aberth: %d roots unconverged after %d sweeps", int(active.sum()), sweeps)

        # d |p/p'| bounds the distance to the nearest root
        with np.errstate(all="ignore"):
            radii = d * np.abs(ratio(z))
        radii[~np.isfinite(radii)] = np.inf
        # only trust inclusion disks when they are small relative to the root
        radii = np.minimum(radii, 1e-3 * (1.0 + np.abs(z)))
        groups = _cluster(z, radii, opts.cluster_rtol)
    else:
        groups = []

    roots: list[Root] = []
    stalled = set(np.nonzero(active)[0].tolist()) if d >= 1 else set()
    for g in groups:
        m = len(g)
        centre = complex(np.mean(z[g]))
        if m == 1:
            for _ in range(opts.polish_steps):
                with np.errstate(all="ignore"):
                    r = ratio(np.array([centre]))[0]
                if not np.isfinite(r):
                    break
                cand = centre - r
                if ratio_fn is not None or _scaled_residual(cr, cand) <= _scaled_residual(cr, centre):
                    centre = cand
                else:
                    break
        else:
            # the (m-1)-th derivative has a simple root at an m-fold root
            dc = cr.copy()
            for _ in range(m - 1):
                dc = dc[1:] * np.arange(1, len(dc))
            spread = max(abs(z[i] - centre) for i in g)
            start = centre
            for _ in range(opts.polish_steps + 3):
                r = _ratio(dc, np.array([centre]))[0]
                if not np.isfinite(r) or abs(centre - r - start) > 2 * spread + 1e-15:
                    break
                centre = centre - r
            stalled.difference_update(g)
        res = _scaled_residual(cr, centre)
        roots.append(Root(centre, m, res, bool(res <= opts.cert_tol)))
    if stalled:
        converged = False
    elif d >= 1:
        converged = True
    if nz:
        roots.append(Root(0j, nz, 0.0, True))
    roots.sort(key=lambda r: (round(r.location.real, 12), round(r.location.imag, 12)))
    return RootSet(roots, deg, converged, sweeps)
