"""Rational functions r = p/q over the complex numbers."""
from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .errors import NotCoprime
from .poly import ComplexPolynomial, coprime, horner
from .roots import RootOptions, find_roots

POLE_CLUSTER_RTOL = 1e-7
POLE_GUARD = 1e-12


class RationalFunction:
    """``num / den`` with the degree convention max(deg num, deg den).

    ``reduced=False`` marks results of composition or differentiation, which
    may carry removable common factors; they skip the coprimality check.
    """

    def __init__(self, num, den=None, *, reduced: bool = True, check: bool | None = None, coprime_tol: float = 1e-8):
        num = num if isinstance(num, ComplexPolynomial) else ComplexPolynomial(num)
        if den is None:
            den = ComplexPolynomial([1.0])
        den = den if isinstance(den, ComplexPolynomial) else ComplexPolynomial(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is the zero polynomial")
        self.num = num
        self.den = den
        self.reduced = reduced
        if check is None:
            check = reduced
        if check and not num.is_zero() and not coprime(num, den, coprime_tol):
            raise NotCoprime("numerator and denominator share a root")

    @classmethod
    def polynomial(cls, coeffs) -> "RationalFunction":
        return cls(ComplexPolynomial(coeffs), ComplexPolynomial([1.0]), reduced=True)

    @property
    def degree(self) -> int:
        dn = self.num.degree
        dd = self.den.degree
        return int(max(0 if dn == -math.inf else dn, dd))

    # evaluation

    def raw(self, z):
        """num(z)/den(z) with no pole guard (IEEE inf/nan at exact poles)."""
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(horner(self.num.coeffs, z), dtype=complex) / np.asarray(horner(self.den.coeffs, z), dtype=complex)
        return out if out.ndim else complex(out)

    def __call__(self, z):
        """Evaluate; points within POLE_GUARD of a pole give ``inf``."""
        val = np.asarray(self.raw(z), dtype=complex)
        zz = np.asarray(z, dtype=complex)
        if self.den.degree >= 1:
            pl = self.pole_locations
            d = np.abs(zz[..., None] - pl).min(axis=-1)
            near = d <= POLE_GUARD * (1.0 + np.abs(zz))
            val = np.where(near, complex(math.inf, 0.0), val)
        return val if val.ndim else complex(val)

    eval = __call__

    # structure

    def derivative(self) -> "RationalFunction":
        p, q = self.num, self.den
        return RationalFunction(p.derivative() * q - p * q.derivative(), q * q, reduced=False)

    def derivative_raw(self, z):
        """r'(z) from the quotient rule without squaring the denominator."""
        p, q = self.num, self.den
        pv = horner(p.coeffs, z)
        qv = horner(q.coeffs, z)
        dpv = horner(p.derivative().coeffs, z)
        dqv = horner(q.derivative().coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.asarray(dpv * qv - pv * dqv, dtype=complex) / np.asarray(qv * qv, dtype=complex)
        return out if out.ndim else complex(out)

    def reflect(self) -> "RationalFunction":
        """The rational function w -> conj(r(conj(w)))."""
        return RationalFunction(self.num.conj_coeffs(), self.den.conj_coeffs(), reduced=self.reduced, check=False)

    def compose(self, inner: "RationalFunction") -> "RationalFunction":
        """``self(inner(z))`` via the homogenized numerator/denominator."""
        N = self.degree
        p, q = inner.num, inner.den
        pw = [ComplexPolynomial([1.0])]
        qw = [ComplexPolynomial([1.0])]
        for _ in range(N):
            pw.append(pw[-1] * p)
            qw.append(qw[-1] * q)
        a = np.zeros(N + 1, dtype=complex)
        b = np.zeros(N + 1, dtype=complex)
        a[: len(self.num.coeffs)] = self.num.coeffs
        b[: len(self.den.coeffs)] = self.den.coeffs
        num = ComplexPolynomial.zero()
        den = ComplexPolynomial.zero()
        for k in range(N + 1):
            term = pw[k] * qw[N - k]
            if a[k] != 0:
                num = num + term.scale(a[k])
            if b[k] != 0:
                den = den + term.scale(b[k])
        return RationalFunction(num, den, reduced=False)

    def __sub__(self, c) -> "RationalFunction":
        """Subtract a constant: r - c."""
        return RationalFunction(self.num - self.den.scale(complex(c)), self.den, reduced=self.reduced, check=False)

    def scale(self) -> float:
        return float(np.abs(self.num.coeffs).max() / np.abs(self.den.coeffs).max())

    # poles

    @cached_property
    def _poles(self) -> list[tuple[complex, int]]:
        if self.den.degree < 1:
            return []
        rs = find_roots(self.den, RootOptions(cluster_rtol=POLE_CLUSTER_RTOL))
        return [(complex(r.location), int(r.multiplicity)) for r in rs.roots]

    def poles(self) -> list[tuple[complex, int]]:
        return list(self._poles)

    @property
    def pole_locations(self) -> np.ndarray:
        return np.array([p for p, _ in self._poles], dtype=complex)

    # io

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data, **kw) -> "RationalFunction":
        return cls(ComplexPolynomial.from_json(data["num"]), ComplexPolynomial.from_json(data["den"]), **kw)

    def __repr__(self):
        return f"RationalFunction(num={self.num!r}, den={self.den!r})"


def five_zero_example() -> RationalFunction:
    """(z^2 + z - 1/2) / (z^2 - 3z/2 + 1): five zeros of conj(r(z)) - z at degree two."""
    return RationalFunction(ComplexPolynomial([-0.5, 1.0, 1.0]), ComplexPolynomial([1.0, -1.5, 1.0]))
