"""Geometry of the modular curve and quadrature for Petersson inner products.

Gauss reduction to the standard fundamental domain of SL2(Z), the height
function ht(z) = max Im over the SL2(Z)-orbit, a right-coset system for
Gamma0(4) in SL2(Z), and weighted quadrature grids over the truncated
fundamental cell (transported through the six coset representatives for
integrals over Gamma0(4)\\H).

Grid construction is single-threaded; integrand evaluation during
inner_product is pure and may be partitioned across worker threads with
a fixed chunk size, so the reduction order (and hence the result) does
not depend on the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .specfun import DomainError

__all__ = [
    "HalfPlanePoint",
    "IntegerMatrix",
    "QuadratureGrid",
    "VOL_GAMMA0_4",
    "VOL_SL2Z",
    "build_grid",
    "coset_reps_gamma0_4",
    "height",
    "height_array",
    "inner_product",
    "inner_product_with_error",
    "reduce_points",
    "reduce_to_fundamental",
    "tail_estimate",
]

VOL_SL2Z = math.pi / 3.0
VOL_GAMMA0_4 = 2.0 * math.pi  # index 6 times pi/3; cross-checked by the grids

_GROUPS = {"SL2Z": (1, VOL_SL2Z), "Gamma0_4": (6, VOL_GAMMA0_4)}


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point z = x + iy of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and self.y > 0):
            raise DomainError(f"not an upper half-plane point: {self.x} + {self.y}i")

    @property
    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z) -> "HalfPlanePoint":
        z = complex(z)
        return cls(z.real, z.imag)


def _as_z(z) -> complex:
    if isinstance(z, HalfPlanePoint):
        return z.as_complex
    z = complex(z)
    if not z.imag > 0:
        raise DomainError(f"not an upper half-plane point: {z}")
    return z


@dataclass(frozen=True)
class IntegerMatrix:
    """A 2x2 integer matrix [[a, b], [c, d]].

    Determinant 1 by default (group elements); Hecke coset matrices use
    det=n explicitly.
    """

    a: int
    b: int
    c: int
    d: int
    det: int = 1

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != self.det:
            raise ValueError(
                f"determinant mismatch: expected {self.det}, "
                f"got {self.a * self.d - self.b * self.c}"
            )

    @classmethod
    def identity(cls) -> "IntegerMatrix":
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        return IntegerMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            det=self.det * other.det,
        )

    def inverse(self) -> "IntegerMatrix":
        if self.det != 1:
            raise ValueError("integer inverse requires det 1")
        return IntegerMatrix(self.d, -self.b, -self.c, self.a)

    def apply(self, z):
        """Moebius action (az + b)/(cz + d); works on scalars and arrays."""
        if isinstance(z, HalfPlanePoint):
            z = z.as_complex
        return (self.a * z + self.b) / (self.c * z + self.d)


_S = IntegerMatrix(0, -1, 1, 0)


def reduce_to_fundamental(z):
    """Gauss-reduce z into the standard fundamental domain of SL2(Z).

    Returns (z0, gamma) with z0 = gamma z, Re z0 in (-1/2, 1/2] and
    |z0| >= 1, with Re z0 >= 0 on the circle |z0| = 1. Terminates in
    O(log(1/y) + |x|) steps.
    """
    zc = _as_z(z)
    m = IntegerMatrix.identity()
    for _ in range(10_000):
        n = math.floor(zc.real + 0.5)
        if zc.real - n <= -0.5 + 1e-15:
            n -= 1
        if n != 0:
            zc = zc - n
            m = IntegerMatrix(1, -n, 0, 1) @ m
        if abs(zc) * abs(zc) < 1.0 - 1e-14:
            zc = -1.0 / zc
            m = _S @ m
        else:
            break
    else:  # pragma: no cover
        raise RuntimeError("reduction failed to terminate")
    # Boundary conventions: exclude Re = -1/2; prefer Re >= 0 on |z| = 1.
    if zc.real <= -0.5 + 1e-15:
        zc = zc + 1.0
        m = IntegerMatrix(1, 1, 0, 1) @ m
    if abs(abs(zc) - 1.0) <= 1e-14 and zc.real < -1e-14:
        zc = -1.0 / zc
        m = _S @ m
    return HalfPlanePoint(zc.real, zc.imag), m


def reduce_points(z, max_iter: int = 256) -> np.ndarray:
    """Vectorized Gauss reduction (points only, no matrices)."""
    w = np.array(z, dtype=complex, copy=True).ravel()
    for _ in range(max_iter):
        x = w.real
        n = np.floor(x + 0.5)
        w = w - n
        mask = (w.real * w.real + w.imag * w.imag) < 1.0 - 1e-14
        if not mask.any():
            break
        w[mask] = -1.0 / w[mask]
    else:  # pragma: no cover
        raise RuntimeError("vectorized reduction failed to terminate")
    low = w.real <= -0.5 + 1e-15
    w[low] += 1.0
    circ = (np.abs(np.abs(w) - 1.0) <= 1e-14) & (w.real < 0)
    w[circ] = -1.0 / w[circ]
    return w.reshape(np.shape(z))


def height(z) -> float:
    """ht(z) = max over SL2(Z) of Im(gamma z); always >= sqrt(3)/2."""
    z0, _ = reduce_to_fundamental(z)
    return z0.y


def height_array(z) -> np.ndarray:
    """Vectorized height function."""
    return reduce_points(z).imag


def coset_reps_gamma0_4(alternate: bool = False) -> list[IntegerMatrix]:
    """Right-coset representatives: SL2(Z) = union of Gamma0(4) gamma_j.

    The six representatives are indexed by the projective bottom rows
    (c : d) mod 4. With alternate=True each representative is
    left-multiplied by a nontrivial element of Gamma0(4), which yields a
    second valid system for consistency checks.
    """
    reps = [
        IntegerMatrix.identity(),
        IntegerMatrix(0, -1, 1, 0),
        IntegerMatrix(0, -1, 1, 1),
        IntegerMatrix(0, -1, 1, 2),
        IntegerMatrix(0, -1, 1, 3),
        IntegerMatrix(1, 0, 2, 1),
    ]
    if alternate:
        twists = [
            IntegerMatrix(1, 1, 0, 1),
            IntegerMatrix(1, 0, 4, 1),
            IntegerMatrix(1, -1, 0, 1),
            IntegerMatrix(5, 1, 4, 1),
            IntegerMatrix(1, 0, -4, 1),
            IntegerMatrix(1, 2, 0, 1),
        ]
        reps = [t @ g for t, g in zip(twists, reps)]
    return reps


def validate_coset_reps(reps: list[IntegerMatrix]) -> bool:
    """Pairwise inequivalence: gamma_i gamma_j^-1 must have c != 0 mod 4."""
    if len(reps) != 6:
        return False
    for i in range(6):
        for j in range(6):
            if i == j:
                continue
            prod = reps[i] @ reps[j].inverse()
            if prod.c % 4 == 0:
                return False
    return True


@dataclass(frozen=True)
class QuadratureGrid:
    """Weighted nodes over a truncated fundamental domain.

    Weights carry the hyperbolic measure dx dy / y^2. For Gamma0_4 the
    SL2(Z) cell is transported through the six coset representatives;
    base_y records the cell height of each node before transport (which
    equals ht at the node, since the cell realizes the orbit maximum).
    tail_budget bounds the discarded cusp contribution for integrands
    bounded by ht^(1/2) (times the configurable constant).
    """

    group: str
    Y: float
    resolution: int
    z: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    base_y: np.ndarray = field(repr=False)
    panel_count: int
    tail_budget: float
    tail_constant: float = 1.0

    @property
    def index(self) -> int:
        return _GROUPS[self.group][0]

    @property
    def volume(self) -> float:
        return _GROUPS[self.group][1]

    @property
    def npoints(self) -> int:
        return self.z.size


def _panel_edges(Y: float, split: float = 1.2) -> list[tuple[float, float]]:
    """Geometric ladder of y-panels [split, Y] with ratio 2."""
    edges = []
    lo = split
    while lo < Y:
        hi = min(2.0 * lo, Y)
        edges.append((lo, hi))
        lo = hi
    return edges


def build_grid(group: str, Y: float, resolution: int, tail_constant: float = 1.0) -> QuadratureGrid:
    """Tensor Gauss-Legendre grid over the truncated fundamental cell.

    The cell {|x| <= 1/2, |z| >= 1, y <= Y} is split at y = 1.2: below
    the split the lower y-limit follows the unit circle (clipped per
    x-node), above it the panels double geometrically up to Y. Node
    count is (panel count) x resolution^2, times 6 transported copies
    for Gamma0_4.
    """
    if group not in _GROUPS:
        raise DomainError(f"unknown group tag {group!r}; expected one of {sorted(_GROUPS)}")
    if Y < 2.0:
        raise DomainError("cusp cutoff Y must be >= 2")
    if resolution < 8:
        raise DomainError("resolution must be >= 8")

    nodes, weights = np.polynomial.legendre.leggauss(resolution)
    xs = 0.5 * nodes  # [-1/2, 1/2]
    wx = 0.5 * weights

    zs = []
    ws = []
    # Circle-clipped panel: y from sqrt(1 - x^2) to 1.2, per x-column.
    ylo = np.sqrt(1.0 - xs * xs)
    for xi, wxi, a in zip(xs, wx, ylo):
        half = 0.5 * (1.2 - a)
        mid = 0.5 * (1.2 + a)
        yy = mid + half * nodes
        zs.append(xi + 1j * yy)
        ws.append(wxi * weights * half / (yy * yy))
    # Geometric panels above the split.
    panels = _panel_edges(Y)
    for a, b in panels:
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        yy = mid + half * nodes
        zz = xs[:, None] + 1j * yy[None, :]
        ww = wx[:, None] * (weights * half / (yy * yy))[None, :]
        zs.append(zz.ravel())
        ws.append(ww.ravel())
    cell_z = np.concatenate(zs)
    cell_w = np.concatenate(ws)
    panel_count = 1 + len(panels)

    index, _ = _GROUPS[group]
    if group == "SL2Z":
        z = cell_z
        w = cell_w
        base_y = cell_z.imag.copy()
    else:
        reps = coset_reps_gamma0_4()
        z = np.concatenate([g.apply(cell_z) for g in reps])
        w = np.concatenate([cell_w] * 6)
        base_y = np.concatenate([cell_z.imag] * 6)

    tail_budget = 2.0 * index * tail_constant / math.sqrt(Y)
    return QuadratureGrid(
        group=group,
        Y=float(Y),
        resolution=int(resolution),
        z=z,
        w=w,
        base_y=base_y,
        panel_count=panel_count,
        tail_budget=tail_budget,
        tail_constant=tail_constant,
    )


def tail_estimate(grid: QuadratureGrid, growth_exponent: float = 0.5, constant: float = 1.0) -> float:
    """Normalized bound on the discarded cusp contribution.

    For an integrand bounded by constant * ht^beta (beta < 1) the region
    above the cutoff contributes at most
    index * constant * Y^(beta-1) / (1 - beta), divided by the covolume.
    """
    beta = growth_exponent
    if beta >= 1.0:
        raise DomainError("tail bound requires growth exponent < 1")
    raw = grid.index * constant * grid.Y ** (beta - 1.0) / (1.0 - beta)
    return raw / grid.volume


_CHUNK = 1 << 14


def _eval_on(values_or_fn, z: np.ndarray) -> np.ndarray:
    if callable(values_or_fn):
        return np.asarray(values_or_fn(z))
    arr = np.asarray(values_or_fn)
    if arr.shape != z.shape:
        raise ValueError("precomputed integrand values do not match the grid")
    return arr


def inner_product(F, G, grid: QuadratureGrid, threads: int = 1):
    """Petersson inner product <F, G> = (1/vol) * sum w * conj(F) * G.

    F and G are either vectorized callables on complex arrays or
    precomputed node-value arrays. Evaluation is chunked with a fixed
    chunk size and summed in chunk order, so results are independent of
    the thread count.
    """
    z = grid.z
    nchunks = (z.size + _CHUNK - 1) // _CHUNK
    slices = [slice(k * _CHUNK, min((k + 1) * _CHUNK, z.size)) for k in range(nchunks)]

    def one(sl):
        fv = _eval_on(F, z[sl]) if callable(F) else np.asarray(F)[sl]
        gv = _eval_on(G, z[sl]) if callable(G) else np.asarray(G)[sl]
        return np.sum(grid.w[sl] * np.conj(fv) * gv)

    if threads > 1 and nchunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(one, slices))
    else:
        partials = [one(sl) for sl in slices]
    total = complex(sum(partials))
    out = total / grid.volume
    if abs(out.imag) == 0.0:
        return out.real
    return out


def inner_product_with_error(F, G, grid: QuadratureGrid, growth_exponent: float = 0.5,
                             constant: float = 1.0, threads: int = 1):
    """inner_product together with the attached cusp-tail error estimate."""
    value = inner_product(F, G, grid, threads=threads)
    return value, tail_estimate(grid, growth_exponent, constant)
