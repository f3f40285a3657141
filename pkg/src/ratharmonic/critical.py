"""Critical set {|r'(z)| = 1} of f = conj(r) - z, its image under f, and orientation regions.

The critical set is the zero level of phi = 1 - |r'|^2, traced by marching
squares; phi > 0 where f preserves orientation, phi < 0 where it reverses it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import PoleAt, ResolutionTooCoarse
from .rational import RationalFunction
from .solver import Orientation, classify, f_value

_PHI_FLOOR = -1e6


@dataclass
class Region:
    sample: complex
    orientation: Orientation
    area: float
    bounded: bool

    def to_json(self) -> dict:
        return {
            "sample": [self.sample.real, self.sample.imag],
            "orientation": self.orientation.value,
            "area": self.area,
            "bounded": self.bounded,
        }


@dataclass
class CurveSet:
    polylines: list[np.ndarray]
    caustics: list[np.ndarray]
    closed: list[bool]
    regions: list[Region]
    bbox: tuple[float, float, float, float]
    resolution: int
    max_vertex_error: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def cell_size(self) -> float:
        x0, x1, y0, y1 = self.bbox
        return max(x1 - x0, y1 - y0) / self.resolution

    def to_json(self) -> dict:
        pts = lambda a: [[float(z.real), float(z.imag)] for z in a]  # noqa: E731
        return {
            "bbox": list(self.bbox),
            "resolution": self.resolution,
            "polylines": [pts(p) for p in self.polylines],
            "closed": self.closed,
            "caustics": [pts(c) for c in self.caustics],
            "regions": [g.to_json() for g in self.regions],
            "max_vertex_error": self.max_vertex_error,
        }


class _Field:
    """phi = 1 - |r'|^2 and its gradient, from r' and r''."""

    def __init__(self, r: RationalFunction):
        self.r = r
        self.d1 = r.derivative()
        self.d2 = self.d1.derivative()

    def phi(self, z):
        with np.errstate(all="ignore"):
            g = self.d1.raw(z)
            out = 1.0 - np.abs(g) ** 2
        return np.where(np.isfinite(out), np.maximum(out, _PHI_FLOOR), _PHI_FLOOR)

    def grad(self, z):
        """(d phi/dx, d phi/dy)."""
        with np.errstate(all="ignore"):
            g = self.d1.raw(z)
            gp = self.d2.raw(z)
            w = np.conj(g) * gp
        return -2.0 * w.real, 2.0 * w.imag


def orientation_at(r: RationalFunction, z: complex, eps_sing: float = 1e-6) -> Orientation:
    z = complex(z)
    pl = r.pole_locations
    if len(pl) and np.min(np.abs(pl - z)) <= 1e-12 * (1.0 + abs(z)):
        raise PoleAt(f"{z} is a pole of r")
    rp = abs(complex(r.derivative_raw(z)))
    if not np.isfinite(rp):
        raise PoleAt(f"{z} is a pole of r")
    return classify(rp, eps_sing)


def default_bbox(points, margin: float = 0.5) -> tuple[float, float, float, float]:
    """Square box on the centroid of ``points`` with a relative margin."""
    pts = np.asarray(list(points), dtype=complex)
    if pts.size == 0:
        return (-2.0, 2.0, -2.0, 2.0)
    c = pts.mean()
    half = max(np.abs(pts.real - c.real).max(), np.abs(pts.imag - c.imag).max(), 0.5)
    half *= 1.0 + margin
    return (c.real - half, c.real + half, c.imag - half, c.imag + half)


def _refine(fld: _Field, z0, z1, lo_val, hi_val, horizontal: bool, steps: int = 8):
    """Newton along each edge, kept inside the bracketing edge."""
    t = lo_val / (lo_val - hi_val)
    t = np.clip(np.nan_to_num(t, nan=0.5), 0.0, 1.0)
    span = (z1 - z0).real if horizontal else (z1 - z0).imag
    z = z0 + t * (z1 - z0)
    for _ in range(steps):
        ph = fld.phi(z)
        gx, gy = fld.grad(z)
        d = gx if horizontal else gy
        with np.errstate(all="ignore"):
            dt = -ph / (d * span)
        ok = np.isfinite(dt)
        tn = np.where(ok, t + np.where(ok, dt, 0.0), t)
        tn = np.clip(tn, 0.0, 1.0)
        t = tn
        z = z0 + t * (z1 - z0)
    return z


def _link(segments: list[tuple[tuple, tuple]]):
    """Join edge-id segments into ordered chains; returns (chains, closed flags)."""
    adj: dict[tuple, list[int]] = {}
    for k, (a, b) in enumerate(segments):
        adj.setdefault(a, []).append(k)
        adj.setdefault(b, []).append(k)
    used = [False] * len(segments)
    chains, closed = [], []

    def walk(start_edge, seg):
        chain = [start_edge]
        cur = start_edge
        while seg is not None:
            used[seg] = True
            a, b = segments[seg]
            nxt = b if a == cur else a
            chain.append(nxt)
            cur = nxt
            seg = next((s for s in adj[cur] if not used[s]), None)
        return chain

    # open chains start at edges touched by one segment (the box boundary)
    for e, segs in adj.items():
        if len(segs) == 1 and not used[segs[0]]:
            chains.append(walk(e, segs[0]))
            closed.append(False)
    for k in range(len(segments)):
        if not used[k]:
            ch = walk(segments[k][0], k)
            chains.append(ch)
            closed.append(ch[0] == ch[-1])
    return chains, closed


def _regions(pos: np.ndarray, Z: np.ndarray, fld: _Field, cell_area: float, eps_sing: float) -> list[Region]:
    out = []
    four = ndimage.generate_binary_structure(2, 1)
    for mask in (pos, ~pos):
        lab, k = ndimage.label(mask, structure=four)
        for i in range(1, k + 1):
            idx = np.argwhere(lab == i)
            c = idx.mean(axis=0)
            # a node of the component nearest its centroid
            j = np.argmin(((idx - c) ** 2).sum(axis=1))
            sample = complex(Z[tuple(idx[j])])
            bounded = not (
                idx[:, 0].min() == 0 or idx[:, 1].min() == 0
                or idx[:, 0].max() == mask.shape[0] - 1 or idx[:, 1].max() == mask.shape[1] - 1
            )
            ph = float(fld.phi(sample))
            o = Orientation.SENSE_PRESERVING if ph > 0 else Orientation.SENSE_REVERSING
            out.append(Region(sample, o, float(len(idx) * cell_area), bounded))
    out.sort(key=lambda g: (g.bounded, -g.area))
    return out


def trace_critical_set(
    r: RationalFunction,
    bbox=None,
    resolution: int = 512,
    check_stability: bool = False,
    eps_sing: float = 1e-6,
) -> CurveSet:
    """Marching-squares trace of 1 - |r'|^2 = 0 over ``bbox`` = (x0, x1, y0, y1).

    Saddle cells are split by the sign of phi at the cell centre.  Vertices
    are refined along their edges; caustics are the vertex-wise images under
    f.  Regions are the connected sign components of phi on the grid nodes.
    With ``check_stability`` the region count is recomputed at twice the
    resolution and ResolutionTooCoarse is raised if it changes.
    """
    if bbox is None:
        pts = list(r.pole_locations)
        bbox = default_bbox(pts if pts else [0j])
    x0, x1, y0, y1 = map(float, bbox)
    fld = _Field(r)
    xs = np.linspace(x0, x1, resolution + 1)
    ys = np.linspace(y0, y1, resolution + 1)
    Z = xs[None, :] + 1j * ys[:, None]
    P = fld.phi(Z)
    pos = P > 0

    # crossings on horizontal edges (i, j)-(i, j+1) and vertical edges (i, j)-(i+1, j)
    hmask = pos[:, :-1] != pos[:, 1:]
    vmask = pos[:-1, :] != pos[1:, :]
    verts: dict[tuple, complex] = {}
    hi, hj = np.nonzero(hmask)
    if len(hi):
        zz = _refine(fld, Z[hi, hj], Z[hi, hj + 1], P[hi, hj], P[hi, hj + 1], True)
        verts.update({("h", int(i), int(j)): complex(z) for i, j, z in zip(hi, hj, zz)})
    vi, vj = np.nonzero(vmask)
    if len(vi):
        zz = _refine(fld, Z[vi, vj], Z[vi + 1, vj], P[vi, vj], P[vi + 1, vj], False)
        verts.update({("v", int(i), int(j)): complex(z) for i, j, z in zip(vi, vj, zz)})

    cell = (
        hmask[:-1, :].astype(int) + hmask[1:, :].astype(int) + vmask[:, :-1].astype(int) + vmask[:, 1:].astype(int)
    )
    segments = []
    for i, j in np.argwhere(cell > 0):
        bottom, top = ("h", i, j), ("h", i + 1, j)
        left, right = ("v", i, j), ("v", i, j + 1)
        es = [e for e, m in ((bottom, hmask[i, j]), (right, vmask[i, j + 1]), (top, hmask[i + 1, j]), (left, vmask[i, j])) if m]
        es = [(e[0], int(e[1]), int(e[2])) for e in es]
        if len(es) == 2:
            segments.append((es[0], es[1]))
        elif len(es) == 4:
            b, rt, t, lf = es
            centre = 0.5 * (Z[i, j] + Z[i + 1, j + 1])
            if (fld.phi(centre) > 0) == pos[i, j]:
                # bottom-left and top-right corners join through the centre
                segments += [(b, rt), (t, lf)]
            else:
                segments += [(b, lf), (t, rt)]

    chains, closed = _link(segments)
    polylines = [np.array([verts[e] for e in ch], dtype=complex) for ch in chains]
    caustics = [np.asarray(f_value(r, p), dtype=complex) for p in polylines]
    err = 0.0
    if polylines:
        allv = np.concatenate(polylines)
        with np.errstate(all="ignore"):
            err = float(np.max(np.abs(np.abs(r.derivative_raw(allv)) - 1.0)))

    cell_area = (x1 - x0) * (y1 - y0) / resolution**2
    regions = _regions(pos, Z, fld, cell_area, eps_sing)
    cs = CurveSet(polylines, caustics, closed, regions, (x0, x1, y0, y1), resolution, err)
    if check_stability:
        finer = trace_critical_set(r, bbox, 2 * resolution, False, eps_sing)
        if len(finer.regions) != len(regions):
            raise ResolutionTooCoarse(
                f"{len(regions)} regions at {resolution}, {len(finer.regions)} at {2 * resolution}"
            )
    return cs


def region_of(cs: CurveSet, r: RationalFunction, z: complex) -> Region | None:
    """The labeled region containing ``z`` (nearest grid node)."""
    x0, x1, y0, y1 = cs.bbox
    n = cs.resolution
    j = int(round((z.real - x0) / (x1 - x0) * n))
    i = int(round((z.imag - y0) / (y1 - y0) * n))
    if not (0 <= i <= n and 0 <= j <= n):
        return None
    xs = np.linspace(x0, x1, n + 1)
    ys = np.linspace(y0, y1, n + 1)
    Z = xs[None, :] + 1j * ys[:, None]
    pos = _Field(r).phi(Z) > 0
    four = ndimage.generate_binary_structure(2, 1)
    lab, _ = ndimage.label(pos if pos[i, j] else ~pos, structure=four)
    target = lab[i, j]
    for g in cs.regions:
        gi = int(round((g.sample.imag - y0) / (y1 - y0) * n))
        gj = int(round((g.sample.real - x0) / (x1 - x0) * n))
        if pos[gi, gj] == pos[i, j] and lab[gi, gj] == target:
            return g
    return None
