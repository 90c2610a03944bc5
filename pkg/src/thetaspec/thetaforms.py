"""Theta-side objects: theta(z), |theta|^2 in two provably-equal forms,
the stripped Gaussian lattice sum E(z), and the radial profile f(y).

Conventions:
    theta(z)  = y^(1/4) sum_n exp(2 pi i n^2 z)
    |theta|^2 = y^(1/2) sum_{m,n} e((m^2-n^2)x) exp(-2pi (m^2+n^2) y)
    f(y)      = sum_{k != 0} exp(-pi k^2 / y)
    E(z)      = sum_{mu,nu} exp(-pi ((mu x + nu)^2/y + mu^2 y))
              = 1 + sum_{gcd(c,d)=1, mod +-} f(y / |cz+d|^2)

All sums are truncated by first-omitted-term bounds with a safety
factor (TruncationPolicy). Everything is pure and vectorized over
numpy arrays of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import DomainError

__all__ = [
    "TruncationPolicy",
    "E_incomplete",
    "f_profile",
    "jacobi_theta",
    "squared_theta_direct",
    "squared_theta_poisson",
    "squared_theta_reduced",
]


@dataclass(frozen=True)
class TruncationPolicy:
    """Target absolute error and derived cutoffs for Gaussian-decay sums.

    For a sum with terms exp(-a n^2), the cutoff N is the smallest index
    whose first omitted term is below eps/safety; Gaussian decay makes
    the whole tail at most a small multiple of that term.
    """

    eps: float = 1e-10
    safety: float = 3.0

    def __post_init__(self):
        if not self.eps > 0:
            raise DomainError("truncation policy requires eps > 0")

    def gaussian_cutoff(self, rate: float) -> int:
        """Smallest N with exp(-rate * N^2) < eps / safety."""
        if rate <= 0:
            raise DomainError("gaussian cutoff requires a positive decay rate")
        return int(math.ceil(math.sqrt(math.log(self.safety / self.eps) / rate))) + 1


DEFAULT_POLICY = TruncationPolicy()


def _points(z) -> tuple[np.ndarray, bool]:
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(arr.imag <= 0):
        raise DomainError("points must lie in the upper half-plane")
    scalar = np.asarray(z).ndim == 0
    return arr, scalar


def jacobi_theta(z, pol: TruncationPolicy = DEFAULT_POLICY):
    """theta(z) = y^(1/4) sum_n exp(2 pi i n^2 z), tail below pol.eps."""
    zz, scalar = _points(z)
    N = pol.gaussian_cutoff(2.0 * math.pi * float(zz.imag.min()))
    n2 = np.arange(1, N + 1, dtype=float) ** 2
    q_powers = np.exp(2j * math.pi * np.multiply.outer(zz, n2))
    total = 1.0 + 2.0 * q_powers.sum(axis=-1)
    out = zz.imag ** 0.25 * total
    return complex(out[0]) if scalar else out


def squared_theta_direct(z, pol: TruncationPolicy = DEFAULT_POLICY):
    """|theta(z)|^2 by the genuine (m, n) double sum.

    Kept independent of jacobi_theta (no squaring) so that the Poisson
    identity check below compares two distinct computations.
    """
    zz, scalar = _points(z)
    out = np.empty(zz.shape, dtype=float)
    for i, zi in enumerate(zz.ravel()):
        x, y = zi.real, zi.imag
        N = pol.gaussian_cutoff(2.0 * math.pi * y)
        n = np.arange(-N, N + 1, dtype=float)
        m2 = n * n
        # cos form: the (m,n) <-> (n,m) pairing cancels imaginary parts.
        phase = np.cos(2.0 * math.pi * x * np.subtract.outer(m2, m2))
        decay = np.exp(-2.0 * math.pi * y * np.add.outer(m2, m2))
        out.ravel()[i] = math.sqrt(y) * float(np.sum(phase * decay))
    return float(out[0]) if scalar else out


def squared_theta_poisson(z, pol: TruncationPolicy = DEFAULT_POLICY):
    """|theta(z)|^2 after Poisson summation in one lattice variable.

    Evaluates (1/2) sum_{xi in {0,1}} sum_{mu, nu in Z} (-1)^(xi mu)
    exp(-pi ((mu x + xi/2 + nu)^2 / y + mu^2 y)); the parity-detecting
    xi-sum form is used verbatim (the condensed half-integer form is
    the same sum reindexed by nu' = nu + xi/2).
    """
    zz, scalar = _points(z)
    out = np.empty(zz.shape, dtype=float)
    for i, zi in enumerate(zz.ravel()):
        x, y = zi.real, zi.imag
        Nmu = pol.gaussian_cutoff(math.pi * y)
        Nnu = pol.gaussian_cutoff(math.pi / y)
        total = 0.0
        for xi_half in (0.0, 0.5):
            for mu in range(-Nmu, Nmu + 1):
                row = math.exp(-math.pi * mu * mu * y)
                if row == 0.0:
                    continue
                center = -(mu * x + xi_half)
                base = math.floor(center + 0.5)
                nu = base + np.arange(-Nnu, Nnu + 1, dtype=float)
                gauss = np.exp(-math.pi * (mu * x + xi_half + nu) ** 2 / y)
                sign = 1.0 if (xi_half == 0.0 or mu % 2 == 0) else -1.0
                total += 0.5 * sign * row * float(gauss.sum())
        out.ravel()[i] = total
    return float(out[0]) if scalar else out


def f_profile(y, pol: TruncationPolicy = DEFAULT_POLICY):
    """f(y) = sum_{k != 0} exp(-pi k^2 / y), truncated below pol.eps.

    Decays like 2 exp(-pi/y) as y -> 0 and grows like sqrt(y) - 1 as
    y -> infinity (by Poisson summation 1 + f(y) = sqrt(y)(1 + f(1/y))).
    """
    yy = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(yy <= 0):
        raise DomainError("f_profile requires y > 0")
    N = pol.gaussian_cutoff(math.pi / float(yy.max()))
    k2 = np.arange(1, N + 1, dtype=float) ** 2
    out = 2.0 * np.exp(-math.pi * np.multiply.outer(1.0 / yy, k2)).sum(axis=-1)
    return float(out[0]) if np.asarray(y).ndim == 0 else out


_Y_ASYMPTOTIC = 40.0  # beyond this, exp(-pi y) < 4e-55: mu != 0 rows vanish


def E_incomplete(z, pol: TruncationPolicy = DEFAULT_POLICY, form: str = "gaussian-sum",
                 radius: float | None = None):
    """The stripped Gaussian lattice sum E(z), by either of two routes.

    form="gaussian-sum" (default): the two-dimensional Gaussian sum over
    (mu, nu). form="coprime-f-sum": 1 + sum over primitive pairs (c, d)
    mod +-1 of f(y/|cz+d|^2), with the enumeration radius derived from
    the smallest eigenvalue of the |cz+d|^2 Gram form (or passed
    explicitly as `radius`). The two forms agree to 2*pol.eps.
    """
    if form == "gaussian-sum":
        return _E_gaussian(z, pol)
    if form == "coprime-f-sum":
        return _E_coprime(z, pol, radius)
    raise DomainError(f"unknown form {form!r}")


def _E_gaussian(z, pol: TruncationPolicy):
    zz, scalar = _points(z)
    out = np.empty(zz.shape, dtype=float)
    flat = zz.ravel()
    big = flat.imag > _Y_ASYMPTOTIC
    if np.any(big):
        # mu = 0 row via the one-variable Poisson identity (exact to
        # machine precision here); mu != 0 rows are below 1e-50.
        yb = flat.imag[big]
        out.ravel()[big] = np.sqrt(yb) * (1.0 + f_profile(1.0 / yb, pol))
    for i in np.nonzero(~big)[0]:
        x, y = flat[i].real, flat[i].imag
        Nmu = pol.gaussian_cutoff(math.pi * y)
        Nnu = pol.gaussian_cutoff(math.pi / y)
        total = 0.0
        for mu in range(-Nmu, Nmu + 1):
            row = math.exp(-math.pi * mu * mu * y)
            if row == 0.0:
                continue
            base = math.floor(-mu * x + 0.5)
            nu = base + np.arange(-Nnu, Nnu + 1, dtype=float)
            total += row * float(np.exp(-math.pi * (mu * x + nu) ** 2 / y).sum())
        out.ravel()[i] = total
    return float(out[0]) if scalar else out


def _gram_min_eigenvalue(x: float, y: float) -> float:
    # Gram matrix of (c, d) -> |cz+d|^2 is [[x^2+y^2, x], [x, 1]].
    tr = x * x + y * y + 1.0
    disc = math.sqrt(tr * tr - 4.0 * y * y)
    return 0.5 * (tr - disc)


def _E_coprime(z, pol: TruncationPolicy, radius: float | None):
    zz, scalar = _points(z)
    out = np.empty(zz.shape, dtype=float)
    for i, zi in enumerate(zz.ravel()):
        x, y = zi.real, zi.imag
        lam = _gram_min_eigenvalue(x, y)
        if radius is None:
            # tail <= 2.1 * (y/lam) * exp(-pi lam R^2 / y)
            R = math.sqrt(y * math.log(3.0 * (1.0 + y / lam) / pol.eps) / (math.pi * lam)) + 1.0
            R = int(math.ceil(R))
        else:
            R = int(math.ceil(radius))
        c, d = np.mgrid[0 : R + 1, -R : R + 1]
        keep = (np.gcd(c, np.abs(d)) == 1) & ((c > 0) | (d == 1))
        q = (c[keep] * x + d[keep]) ** 2 + (c[keep] * y) ** 2
        out.ravel()[i] = 1.0 + float(f_profile(y / q, pol).sum())
    return float(out[0]) if scalar else out


# ----------------------------------------------------------------------
# Flagged fast evaluator for |theta|^2: reduce the point through the
# invariances |theta(z+1)| = |theta(z)| and |theta(-1/(4z))| = |theta(z)|
# (both one-variable Poisson summation identities, tested against the
# direct double sum), then sum a handful of terms. This is the
# reduction optimization used by the integration suites; the direct
# evaluators above never reduce.
# ----------------------------------------------------------------------


def _reduce_theta_points(z: np.ndarray, max_iter: int = 400) -> np.ndarray:
    """Reduce under z -> z+1, z -> -1/(4z) and the corner stabilizers.

    The corners +-1/2 are parabolic fixed points (cusps not equivalent
    to infinity here), so plain translate-and-invert can crawl; the
    stabilizer of the corner r acts on v = -1/(4(z-r)) as v -> v + k,
    and normalizing Re v jumps the whole spiral at once. Points end in
    {|x| <= 1/2} with either y >= 0.2 or |z - r|^2 <= y/4 for a corner
    r, which is exactly where the two evaluation branches below are
    O(1)-term sums.
    """
    w = np.array(z, dtype=complex, copy=True)
    done = np.zeros(w.shape, dtype=bool)
    for _ in range(max_iter):
        act = ~done
        if not act.any():
            return w
        wa = w[act] - np.floor(w[act].real + 0.5)
        r = np.where(wa.real >= 0, 0.5, -0.5)
        u = wa - r
        y = wa.imag
        # Terminal states: either y >= 0.2 on/outside the |z| = 1/2
        # circle (bulk sum), or inside the corner horoball |u|^2 <= y/4
        # (shifted Poisson sum, <= 3 terms each side). Any |x| <= 1/2
        # point on/outside the circle is one of these.
        thin = (u.real * u.real + u.imag * u.imag) <= 0.25 * y
        bulk = (y >= 0.2) & (wa.real * wa.real + wa.imag * wa.imag >= 0.25 * (1.0 - 1e-14))
        fin = thin | bulk
        todo = ~fin
        if todo.any():
            wt = wa[todo]
            ut = u[todo]
            v = -0.25 / ut
            k = np.floor(v.real + 0.5)
            jump = (np.abs(ut) < 0.35) & (k != 0)
            wt[jump] = r[todo][jump] - 0.25 / (v[jump] - k[jump])
            wt[~jump] = -0.25 / wt[~jump]
            wa[todo] = wt
        w[act] = wa
        idx = np.flatnonzero(act)
        done[idx[fin]] = True
    raise RuntimeError("theta reduction failed to terminate")  # pragma: no cover


def squared_theta_reduced(z, pol: TruncationPolicy = DEFAULT_POLICY):
    """|theta(z)|^2 via invariance reduction; equals squared_theta_direct.

    Robust and O(1)-cost for arbitrarily small y (points reduced under
    z -> z+1 and z -> -1/(4z) land in {|x| <= 1/2, |z| >= 1/2}, whose
    only thin region is near the corner points +-1/2 where a shifted
    Poisson form with a couple of terms applies).
    """
    zz, scalar = _points(z)
    flat = zz.ravel()
    w = _reduce_theta_points(flat)
    y = w.imag
    out = np.empty(w.shape, dtype=float)

    bulk = y >= 0.2
    if bulk.any():
        wb = w[bulk]
        N = pol.gaussian_cutoff(2.0 * math.pi * 0.2)
        n2 = np.arange(1, N + 1, dtype=float) ** 2
        theta_cl = 1.0 + 2.0 * np.exp(2j * math.pi * np.multiply.outer(wb, n2)).sum(axis=-1)
        out[bulk] = np.sqrt(wb.imag) * np.abs(theta_cl) ** 2

    thin = ~bulk
    if thin.any():
        wt = w[thin]
        u = wt - np.where(wt.real >= 0, 0.5, -0.5)
        au2 = np.abs(u) ** 2
        # terms exp(-i pi (k-1/2)^2 / (2u)) have magnitude
        # exp(-pi (k-1/2)^2 y / (2|u|^2))
        Kmax = 1 + int(
            math.ceil(
                math.sqrt(
                    2.0
                    * math.log(pol.safety / pol.eps)
                    * float((au2 / wt.imag).max())
                    / math.pi
                )
                + 0.5
            )
        )
        k = np.arange(-Kmax + 1, Kmax + 1, dtype=float) - 0.5
        S = np.exp(-1j * math.pi * np.multiply.outer(1.0 / (2.0 * u), k * k)).sum(axis=-1)
        out[thin] = np.sqrt(wt.imag) * np.abs(S) ** 2 / (2.0 * np.abs(u))
    out = out.reshape(zz.shape)
    return float(out[0]) if scalar else out
