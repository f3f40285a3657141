"""Brute-force oracles that share no code path with the Q-fixed-point solver."""
import numpy as np


def grid_newton_zeros(func, bbox, res=600, newton_steps=60, h=1e-7, tol=1e-11, merge=1e-6):
    """Zeros of a complex-valued map of the plane, found by grid sign changes + Newton.

    ``func`` maps a complex array to a complex array.  A cell is a candidate
    when both the real and imaginary parts change sign among its corners;
    each candidate is refined by Newton with a finite-difference Jacobian.
    """
    x0, x1, y0, y1 = bbox
    xs = np.linspace(x0, x1, res + 1)
    ys = np.linspace(y0, y1, res + 1)
    Z = xs[None, :] + 1j * ys[:, None]
    with np.errstate(all="ignore"):
        F = func(Z)
    u, v = F.real, F.imag

    def changes(a):
        c = np.stack([a[:-1, :-1], a[:-1, 1:], a[1:, :-1], a[1:, 1:]])
        fin = np.all(np.isfinite(c), axis=0)
        return fin & (c.min(axis=0) <= 0) & (c.max(axis=0) >= 0)

    cells = np.argwhere(changes(u) & changes(v))
    found = []
    for i, j in cells:
        z = 0.5 * (Z[i, j] + Z[i + 1, j + 1])
        z = _newton2d(func, z, newton_steps, h, tol)
        if z is None:
            continue
        if not (x0 - 1e-9 <= z.real <= x1 + 1e-9 and y0 - 1e-9 <= z.imag <= y1 + 1e-9):
            continue
        if all(abs(z - w) > merge * (1 + abs(z)) for w in found):
            found.append(z)
    return np.array(found, dtype=complex)


def _newton2d(func, z, steps, h, tol):
    for _ in range(steps):
        with np.errstate(all="ignore"):
            f0 = complex(func(np.array([z]))[0])
            fx = (complex(func(np.array([z + h]))[0]) - complex(func(np.array([z - h]))[0])) / (2 * h)
            fy = (complex(func(np.array([z + 1j * h]))[0]) - complex(func(np.array([z - 1j * h]))[0])) / (2 * h)
        J = np.array([[fx.real, fy.real], [fx.imag, fy.imag]])
        if not np.all(np.isfinite(J)) or not np.isfinite(f0):
            return None
        try:
            d = np.linalg.solve(J, [-f0.real, -f0.imag])
        except np.linalg.LinAlgError:
            return None
        z = z + complex(d[0], d[1])
        if abs(complex(d[0], d[1])) < 1e-15 * (1 + abs(z)):
            break
    with np.errstate(all="ignore"):
        if abs(complex(func(np.array([z]))[0])) <= tol * (1 + abs(z)):
            return z
    return None


def harmonic_f(num, den):
    """conj(p(z)/q(z)) - z evaluated with numpy.polyval (descending order)."""
    pd = np.asarray(num, dtype=complex)[::-1]
    qd = np.asarray(den, dtype=complex)[::-1]

    def f(z):
        return np.conj(np.polyval(pd, z) / np.polyval(qd, z)) - z

    return f


def lens_residual(gamma, sigma_sign, masses, w):
    """z + gamma conj(z) - sign(sigma) sum m_j / (conj(z) - conj(z_j)) - w."""
    def f(z):
        z = np.asarray(z, dtype=complex)
        s = np.zeros_like(z)
        for m, zj in masses:
            s = s + m / (np.conj(z) - np.conj(zj))
        return z + gamma * np.conj(z) - sigma_sign * s - w

    return f


def match(a, b, tol):
    """True iff a and b are in bijection with |a_i - b_pi(i)| <= tol."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        return False
    for x in a:
        d = [abs(x - y) for y in b]
        k = int(np.argmin(d))
        if d[k] > tol:
            return False
        b.pop(k)
    return True
