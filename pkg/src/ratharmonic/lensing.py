"""n-point gravitational lenses.

The lens equation

    w = z + gamma conj(z) - sign(sigma) sum_j m_j / (conj(z) - conj(z_j))

holds iff conj(r(z)) = z for r(z) = conj(w) - gamma z + sign(sigma) sum_j m_j/(z - z_j),
so images are zeros of the rational harmonic function conj(r(z)) - z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentMasses, DegreeTooLow, HypothesisViolation, NotApplicable
from .poly import ComplexPolynomial
from .rational import RationalFunction
from .solver import HarmonicZero, Orientation, SolveOptions, SolveReport, solve_zeros


@dataclass(frozen=True)
class LensConfig:
    gamma: float
    sigma_sign: int
    masses: tuple[tuple[float, complex], ...]

    def __post_init__(self):
        object.__setattr__(self, "masses", tuple((float(m), complex(z)) for m, z in self.masses))
        if self.sigma_sign not in (1, -1):
            raise HypothesisViolation("sigma_sign must be +1 or -1")
        if not self.masses:
            raise HypothesisViolation("at least one mass is required")
        if any(m <= 0 for m, _ in self.masses):
            raise HypothesisViolation("masses must be positive")
        zs = [z for _, z in self.masses]
        for i in range(len(zs)):
            for j in range(i + 1, len(zs)):
                if abs(zs[i] - zs[j]) <= 1e-12 * (1.0 + abs(zs[i])):
                    raise CoincidentMasses(f"masses {i} and {j} coincide at {zs[i]}")

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def image_bound(self) -> int:
        return 5 * self.n - 5 if self.gamma == 0 else 5 * self.n

    def rotated(self, theta: float) -> "LensConfig":
        e = complex(math.cos(theta), math.sin(theta))
        return LensConfig(self.gamma, self.sigma_sign, tuple((m, z * e) for m, z in self.masses))

    def to_json(self, source: complex | None = None) -> dict:
        d = {
            "gamma": self.gamma,
            "sigma_sign": self.sigma_sign,
            "masses": [{"m": m, "z": [z.real, z.imag]} for m, z in self.masses],
        }
        if source is not None:
            d["source"] = [complex(source).real, complex(source).imag]
        return d


@dataclass(frozen=True)
class RadialBlob:
    """A radially symmetric mass of total ``total_mass`` supported on |z - center| <= support_radius."""

    center: complex
    total_mass: float
    support_radius: float

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) <= self.support_radius


@dataclass
class ImageSet:
    images: list[HarmonicZero]
    source: complex
    n: int
    gamma: float
    bound: int
    parity_ok: bool | None
    on_caustic: bool
    report: SolveReport | None = None
    excluded: list[HarmonicZero] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.images)

    @property
    def n_plus(self) -> int:
        return sum(h.orientation is Orientation.SENSE_PRESERVING for h in self.images)

    @property
    def n_minus(self) -> int:
        return sum(h.orientation is Orientation.SENSE_REVERSING for h in self.images)

    @property
    def singular(self) -> list[HarmonicZero]:
        return [h for h in self.images if h.orientation is Orientation.SINGULAR]

    @property
    def locations(self) -> np.ndarray:
        return np.array([h.location for h in self.images], dtype=complex)

    def to_json(self) -> dict:
        return {
            "source": [self.source.real, self.source.imag],
            "n": self.n,
            "gamma": self.gamma,
            "count": self.count,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "bound": self.bound,
            "bound_ok": self.count <= self.bound,
            "parity_ok": self.parity_ok,
            "source_on_caustic": self.on_caustic,
            "images": [h.to_json() for h in self.images],
            "singular_images": [h.to_json() for h in self.singular],
            "excluded_inside_support": [h.to_json() for h in self.excluded],
        }


def lens_to_rational(config: LensConfig, w: complex) -> RationalFunction:
    """r(z) = conj(w) - gamma z + sign(sigma) sum m_j/(z - z_j) as one fraction over prod(z - z_j)."""
    w = complex(w)
    zs = [z for _, z in config.masses]
    den = ComplexPolynomial.from_roots(zs)
    num = den * ComplexPolynomial([w.conjugate(), -config.gamma])
    for j, (m, zj) in enumerate(config.masses):
        others = ComplexPolynomial.from_roots([z for k, z in enumerate(zs) if k != j])
        num = num + others.scale(config.sigma_sign * m)
    # distinct positive point masses guarantee coprimality: num(z_j) = s m_j prod(z_j - z_k) != 0
    return RationalFunction(num, den, check=False)


def lens_residual(config: LensConfig, w: complex, z):
    """Left minus right side of the lens equation."""
    z = np.asarray(z, dtype=complex)
    s = np.zeros_like(z)
    for m, zj in config.masses:
        s = s + m / (np.conj(z) - np.conj(zj))
    return z + config.gamma * np.conj(z) - config.sigma_sign * s - w


def find_images(config: LensConfig, w: complex, opts: SolveOptions | None = None) -> ImageSet:
    """Solve the lens equation for all images of a point source at ``w``."""
    w = complex(w)
    r = lens_to_rational(config, w)
    if r.degree < 2:
        raise DegreeTooLow("a single point mass without shear has deg r = 1")
    report = solve_zeros(r, opts)
    on_caustic = report.n_singular > 0
    imgs = ImageSet(
        images=list(report.zeros),
        source=w,
        n=config.n,
        gamma=config.gamma,
        bound=config.image_bound,
        parity_ok=None,
        on_caustic=on_caustic,
        report=report,
    )
    if config.gamma == 0 and not on_caustic:
        imgs.parity_ok = parity_check(imgs)
    return imgs


def parity_check(image_set: ImageSet) -> bool:
    """Image count must be odd for even n and even for odd n, with N = 1 + 2 n_minus - n."""
    if image_set.gamma != 0:
        raise NotApplicable("parity rule needs zero shear")
    if image_set.on_caustic or image_set.singular:
        raise NotApplicable("source lies on a caustic")
    N, n = image_set.count, image_set.n
    return N % 2 == (n + 1) % 2 and N == 1 + 2 * image_set.n_minus - n


def polygon_lens(n: int, radius: float = 1.0, gamma: float = 0.0, sigma_sign: int = 1) -> LensConfig:
    """n equal masses 1/n at the vertices of a regular polygon of the given radius."""
    return LensConfig(
        gamma,
        sigma_sign,
        tuple((1.0 / n, radius * complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n))) for k in range(n)),
    )


def reduce_extended(blobs, gamma: float, sigma_sign: int):
    """Replace each radial blob by a point mass at its centre.

    Outside the supports the deflection of a radially symmetric mass equals
    that of a point mass, so the point-mass images outside every support disk
    are the extended lens's images there.  Returns the point-mass config and
    the support disks as (center, radius) pairs.
    """
    blobs = list(blobs)
    if gamma == 0 and len(blobs) < 2:
        raise DegreeTooLow("need at least two masses without shear")
    config = LensConfig(gamma, sigma_sign, tuple((b.total_mass, b.center) for b in blobs))
    return config, [(complex(b.center), float(b.support_radius)) for b in blobs]


def outside(regions, z) -> bool:
    return all(abs(complex(z) - c) > R for c, R in regions)


def find_images_extended(blobs, gamma: float, sigma_sign: int, w: complex, opts: SolveOptions | None = None) -> ImageSet:
    """Images of an extended lens lying outside the mass supports."""
    config, regions = reduce_extended(blobs, gamma, sigma_sign)
    imgs = find_images(config, w, opts)
    keep = [h for h in imgs.images if outside(regions, h.location)]
    drop = [h for h in imgs.images if not outside(regions, h.location)]
    # parity is a statement about the full point-mass image set, not the filtered one
    return ImageSet(keep, imgs.source, imgs.n, gamma, imgs.bound, imgs.parity_ok, imgs.on_caustic, imgs.report, drop)


def blob_deflection(blob: RadialBlob, z, profile=None, n_radial: int = 16, n_angle: int = 128, chunk: int = 2048):
    """Deflection sum of dm(zeta) / (conj(z) - conj(zeta)) over the blob, by direct quadrature.

    ``profile(s)`` is the unnormalized surface density at radius ``s``; the
    default is the compact, continuous (1 - s^2/R^2)^2.  The density is scaled
    so the total mass equals ``blob.total_mass``.  Gauss-Legendre in radius,
    trapezoid in angle; accurate for z well outside the support.
    """
    R = blob.support_radius
    if profile is None:
        profile = lambda s: (1.0 - (s / R) ** 2) ** 2  # noqa: E731
    xs, ws = np.polynomial.legendre.leggauss(n_radial)
    s = 0.5 * R * (xs + 1.0)
    ws = 0.5 * R * ws
    theta = 2 * np.pi * np.arange(n_angle) / n_angle
    radial = profile(s) * s * ws  # area element s ds
    weights = np.repeat(radial, n_angle) * (2 * np.pi / n_angle)
    weights *= blob.total_mass / weights.sum()
    zeta = (blob.center + s[:, None] * np.exp(1j * theta)[None, :]).reshape(-1)
    z = np.asarray(z, dtype=complex)
    flat = z.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    for k in range(0, len(flat), chunk):
        zz = flat[k : k + chunk]
        with np.errstate(all="ignore"):
            out[k : k + chunk] = (weights[None, :] / (np.conj(zz)[:, None] - np.conj(zeta)[None, :])).sum(axis=1)
    out = out.reshape(z.shape)
    return out if out.ndim else complex(out)
