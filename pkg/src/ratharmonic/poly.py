"""Complex polynomials in ascending-coefficient form.

``coeffs[k]`` multiplies ``z**k``.  Instances are immutable; every
operation returns a new, normalized polynomial.
"""
from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

# trailing coefficients below this fraction of the largest magnitude are dropped
NORMALIZE_RTOL = 1e-13

NEG_INF_DEGREE = -math.inf


def _normalized(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    mags = np.abs(c)
    big = mags.max()
    if big == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(mags > NORMALIZE_RTOL * big)[0]
    return c[: keep[-1] + 1].copy()


class ComplexPolynomial:
    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex] | np.ndarray):
        c = _normalized(np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs, dtype=complex))
        c.setflags(write=False)
        self._c = c

    # construction helpers

    @classmethod
    def zero(cls) -> "ComplexPolynomial":
        return cls([0.0])

    @classmethod
    def constant(cls, c: complex) -> "ComplexPolynomial":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "ComplexPolynomial":
        return cls([0.0] * k + [c])

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "ComplexPolynomial":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, np.array([-r, 1.0], dtype=complex))
        return cls(c)

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> float | int:
        """Index of the leading coefficient; ``-inf`` for the zero polynomial."""
        if self.is_zero():
            return NEG_INF_DEGREE
        return len(self._c) - 1

    @property
    def lead(self) -> complex:
        return complex(self._c[-1])

    def is_zero(self) -> bool:
        return len(self._c) == 1 and self._c[0] == 0

    def normalized(self) -> "ComplexPolynomial":
        return ComplexPolynomial(self._c)

    # evaluation

    def __call__(self, z):
        return horner(self._c, z)

    def eval(self, z):
        return horner(self._c, z)

    # arithmetic

    def __add__(self, other):
        other = _coerce(other)
        a, b = self._c, other._c
        out = np.zeros(max(len(a), len(b)), dtype=complex)
        out[: len(a)] += a
        out[: len(b)] += b
        return ComplexPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self._c)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        other = _coerce(other)
        return ComplexPolynomial(np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def scale(self, s: complex) -> "ComplexPolynomial":
        return ComplexPolynomial(self._c * complex(s))

    def __pow__(self, k: int) -> "ComplexPolynomial":
        if k < 0:
            raise ValueError("negative power")
        out = np.array([1.0], dtype=complex)
        for _ in range(k):
            out = np.convolve(out, self._c)
        return ComplexPolynomial(out)

    def compose(self, inner: "ComplexPolynomial") -> "ComplexPolynomial":
        """Return ``self(inner(z))`` by Horner's scheme on polynomials."""
        out = np.array([self._c[-1]], dtype=complex)
        for a in self._c[-2::-1]:
            out = np.convolve(out, inner._c)
            out[0] += a
        return ComplexPolynomial(out)

    def derivative(self) -> "ComplexPolynomial":
        if len(self._c) == 1:
            return ComplexPolynomial.zero()
        k = np.arange(1, len(self._c))
        return ComplexPolynomial(self._c[1:] * k)

    def conj_coeffs(self) -> "ComplexPolynomial":
        """Polynomial whose value at z is conj(p(conj(z)))."""
        return ComplexPolynomial(np.conj(self._c))

    def homogeneous(self, x, y, d: int):
        """Evaluate ``sum a_k x**k y**(d-k)``, the degree-``d`` homogenization."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        out = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        c = np.zeros(d + 1, dtype=complex)
        c[: len(self._c)] = self._c[: d + 1]
        for k in range(d, -1, -1):
            out = out * x + c[k] * y ** (d - k)
        return out

    # comparison and display

    def allclose(self, other: "ComplexPolynomial", rtol: float = 1e-12, atol: float = 0.0) -> bool:
        other = _coerce(other)
        if len(self._c) != len(other._c):
            return False
        return bool(np.allclose(self._c, other._c, rtol=rtol, atol=atol))

    def __eq__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return NotImplemented
        return len(self._c) == len(other._c) and bool(np.all(self._c == other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def __len__(self):
        return len(self._c)

    def __repr__(self):
        return f"ComplexPolynomial({[complex(c) for c in self._c]!r})"

    # JSON literal: [[re, im], ...]

    def to_json(self) -> list[list[float]]:
        return [[float(c.real), float(c.imag)] for c in self._c]

    @classmethod
    def from_json(cls, data) -> "ComplexPolynomial":
        return cls([_parse_complex(item) for item in data])


def _parse_complex(item) -> complex:
    if isinstance(item, (int, float)):
        return complex(item)
    if isinstance(item, (list, tuple)) and len(item) == 2:
        return complex(float(item[0]), float(item[1]))
    raise ValueError(f"expected [re, im] pair, got {item!r}")


def _coerce(x) -> ComplexPolynomial:
    if isinstance(x, ComplexPolynomial):
        return x
    return ComplexPolynomial.constant(complex(x))


def horner(c: np.ndarray, z):
    """Evaluate ascending coefficients ``c`` at scalar or array ``z``."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, c[-1], dtype=complex)
    for a in c[-2::-1]:
        out = out * z + a
    return out if out.ndim else complex(out)


def horner_with_derivative(c: np.ndarray, z):
    """Return ``(p(z), p'(z))`` in one pass."""
    z = np.asarray(z, dtype=complex)
    p = np.full(z.shape, c[-1], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def coprime(p: ComplexPolynomial, q: ComplexPolynomial, tol: float = 1e-8) -> bool:
    """True iff no numerically found root of ``q`` lies within ``tol`` of a root of ``p``."""
    from .roots import find_roots

    if p.is_zero() and q.is_zero():
        raise ValueError("p and q are both zero")
    if p.is_zero():
        return q.degree == 0
    if q.is_zero():
        return p.degree == 0
    if p.degree == 0 or q.degree == 0:
        return True
    rp = find_roots(p).locations()
    rq = find_roots(q).locations()
    d = np.abs(rp[:, None] - rq[None, :])
    scale = 1.0 + np.maximum(np.abs(rp)[:, None], np.abs(rq)[None, :])
    return bool(np.all(d > tol * scale))
