"""Interpolatory Hermite subdivision predictors.

Two families ship: the stationary two-point cubic-Hermite midpoint scheme, and
a level-dependent family whose odd stencil interpolates in
span{1, x, e^{lx}, e^{-lx}} on one coarse interval.  Both have support [-1, 1]
and copy even data (interpolatory).  All masks are expressed in normalized
coordinates c^[n] = D^n (f, f')(j / 2^n), so iterating a scheme is plain
operator application without explicit D^n bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .sequences import (
    HermiteSequence,
    Mask,
    apply_subdivision,
    delta_sequence,
    diag_d,
    interior_sequence,
    seq_sub,
    sup_norm,
)

__all__ = [
    "MaskProvider",
    "ReproductionSpace",
    "BasicLimitTable",
    "cubic_hermite_mask",
    "exponential_hermite_mask",
    "cubic_provider",
    "exponential_provider",
    "interpolatory_check",
    "spectral_condition_residual",
    "run_scheme",
    "basic_limit_table",
    "sample_hermite_interior",
    "poly_space",
    "exponential_space",
]

# Below this value of |lambda| * 2^-n the 4x4 interpolation system is treated
# as the polynomial limit and the cubic mask is returned instead.
_LAMBDA_SWITCH = 1e-6
_LAMBDA_OVERFLOW = 50.0


def cubic_hermite_mask() -> Mask:
    """Stationary mask of the two-point cubic Hermite midpoint scheme."""
    blocks = np.array(
        [
            [[0.5, -0.125], [0.75, -0.125]],  # index -1
            [[1.0, 0.0], [0.0, 0.5]],  # index 0 (= D)
            [[0.5, 0.125], [-0.75, -0.125]],  # index 1
        ]
    )
    return Mask(-1, blocks)


def _cosh1(y: float) -> float:
    """(cosh(y) - 1) / y^2, stable near 0."""
    h = math.sinh(y / 2.0)
    return 2.0 * h * h / (y * y)


def _sinh1(y: float) -> float:
    """(sinh(y) - y) / y^3, stable near 0."""
    if abs(y) < 0.1:
        y2 = y * y
        return (1.0 + y2 / 20.0 * (1.0 + y2 / 42.0 * (1.0 + y2 / 72.0))) / 6.0
    return (math.sinh(y) - y) / (y * y * y)


def _exp_basis(lam: float, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Values and derivatives at x of the basis {1, x, c, s} spanning
    {1, x, e^{lam x}, e^{-lam x}}, scaled to stay well-conditioned as lam->0:
    c(x) = (cosh(lam x) - 1)/lam^2 and s(x) = (sinh(lam x) - lam x)/lam^3."""
    y = lam * x
    c = x * x * _cosh1(y) if x != 0.0 else 0.0
    s = x * x * x * _sinh1(y) if x != 0.0 else 0.0
    dc = math.sinh(y) / lam
    ds = c
    vals = np.array([1.0, x, c, s])
    ders = np.array([0.0, 1.0, dc, ds])
    return vals, ders


def exponential_hermite_mask(lam: float, level: int) -> Mask:
    """Level-dependent mask reproducing span{1, x, e^{lam x}, e^{-lam x}}.

    The odd stencil solves the two-point Hermite interpolation problem on one
    coarse interval of length 2^-level and evaluates value and derivative at
    the midpoint; the even rule is D * delta.
    """
    if lam == 0.0:
        raise ValueError("lambda must be nonzero; use the cubic mask instead")
    h = 2.0 ** (-level)
    if abs(lam) * h > _LAMBDA_OVERFLOW:
        raise ValueError(
            f"|lambda| * 2^-level = {abs(lam) * h:g} exceeds overflow guard"
        )
    if abs(lam) * h < _LAMBDA_SWITCH:
        return cubic_hermite_mask()

    rows = []
    for x in (0.0, h):
        vals, ders = _exp_basis(lam, x)
        rows.append(vals)
        rows.append(ders)
    # collocation matrix: data functionals (f(0), f'(0), f(h), f'(h)) x basis
    M = np.array(rows)
    mid_vals, mid_ders = _exp_basis(lam, h / 2.0)
    w = np.linalg.solve(M.T, mid_vals)  # g(h/2)  = w  . data
    wd = np.linalg.solve(M.T, mid_ders)  # g'(h/2) = wd . data

    # normalized coordinates: v = h f' on input, output derivative is (h/2) g'
    def blk(wp, wv, wdp, wdv):
        return [[wp, wv / h], [h / 2.0 * wdp, h / 2.0 * wdv / h]]

    blocks = np.array(
        [
            blk(w[2], w[3], wd[2], wd[3]),  # index -1: right data point
            [[1.0, 0.0], [0.0, 0.5]],  # index 0
            blk(w[0], w[1], wd[0], wd[1]),  # index 1: left data point
        ]
    )
    return Mask(-1, blocks)


@dataclass(frozen=True)
class MaskProvider:
    """Level-indexed source of predictor masks."""

    kind: str  # "cubic" or "exp"
    lam: float = 0.0

    def __post_init__(self):
        if self.kind not in ("cubic", "exp"):
            raise ValueError(f"unknown predictor kind {self.kind!r}")
        if self.kind == "exp" and self.lam == 0.0:
            raise ValueError("exponential predictor requires nonzero lambda")

    def mask_at(self, level: int) -> Mask:
        if self.kind == "cubic":
            return cubic_hermite_mask()
        return exponential_hermite_mask(self.lam, level)

    def reproduction_space(self) -> "ReproductionSpace":
        if self.kind == "cubic":
            return poly_space(3)
        return exponential_space(self.lam)


def cubic_provider() -> MaskProvider:
    return MaskProvider("cubic")


def exponential_provider(lam: float) -> MaskProvider:
    return MaskProvider("exp", lam)


@dataclass(frozen=True)
class ReproductionSpace:
    """Function space with exact derivative evaluators for each basis element."""

    name: str
    elements: tuple  # of (label, f, fprime)


def poly_space(degree: int) -> ReproductionSpace:
    elems = []
    for d in range(degree + 1):
        f = (lambda d: lambda x: x**d)(d)
        df = (lambda d: lambda x: d * x ** (d - 1) if d > 0 else 0.0)(d)
        elems.append((f"x^{d}", f, df))
    return ReproductionSpace(f"poly<= {degree}", tuple(elems))


def exponential_space(lam: float) -> ReproductionSpace:
    elems = (
        ("1", lambda x: 1.0, lambda x: 0.0),
        ("x", lambda x: x, lambda x: 1.0),
        ("e^{lx}", lambda x: math.exp(lam * x), lambda x: lam * math.exp(lam * x)),
        (
            "e^{-lx}",
            lambda x: math.exp(-lam * x),
            lambda x: -lam * math.exp(-lam * x),
        ),
    )
    return ReproductionSpace(f"exp(lambda={lam:g})", elems)


def interpolatory_check(mask: Mask) -> bool:
    """True iff every even-index block equals D*delta (exact comparison)."""
    D = diag_d()
    for k in range(mask.lo, mask.hi + 1):
        if k % 2 != 0:
            continue
        want = D if k == 0 else np.zeros((2, 2))
        if not np.array_equal(mask.block(k), want):
            return False
    return True


def sample_hermite_interior(
    f: Callable[[float], float],
    df: Callable[[float], float],
    level: int,
    window: tuple[int, int],
) -> HermiteSequence:
    """Normalized samples (f(j/2^n), 2^-n f'(j/2^n)) for j in [window]."""
    a, b = window
    h = 2.0 ** (-level)
    idx = np.arange(a, b + 1)
    p = np.array([[f(j * h)] for j in idx], dtype=float)
    v = np.array([[h * df(j * h)] for j in idx], dtype=float)
    return interior_sequence(p, v, a, level=level)


def spectral_condition_residual(
    provider: MaskProvider,
    f: Callable[[float], float],
    df: Callable[[float], float],
    level: int,
    window: tuple[int, int],
) -> float:
    """Sup norm of S_{A^[n]} c^[n] - c^[n+1] for samples of f, over the
    interior-valid output indices."""
    a, b = window
    if b - a < 2:
        raise ValueError("window too small for one subdivision step")
    cn = sample_hermite_interior(f, df, level, window)
    out = apply_subdivision(provider.mask_at(level), cn)
    exact = sample_hermite_interior(
        f, df, level + 1, (out.start, out.start + len(out) - 1)
    )
    diff = seq_sub(out, exact)
    return sup_norm(diff)


def run_scheme(
    provider: MaskProvider, c0: HermiteSequence, steps: int
) -> HermiteSequence:
    """Iterate the subdivision scheme: c^[n+1] = S_{A^[n]} c^[n], starting
    from the level tag of c0."""
    c = c0
    for _ in range(steps):
        c = apply_subdivision(provider.mask_at(c.level), c)
    return c


@dataclass(frozen=True)
class BasicLimitTable:
    """Dyadic-grid approximation of the 2x2 basic-limit-function matrix of the
    scheme started at a given level, from iterated delta data."""

    start_level: int
    iterations: int
    values: np.ndarray  # (2, 2, L): [row][column][grid point]
    sup: float

    @property
    def grid_step(self) -> float:
        return 2.0 ** (-self.iterations)


def basic_limit_table(
    provider: MaskProvider, start_level: int, iterations: int, length: int = 8
) -> BasicLimitTable:
    """Run the scheme (starting at ``start_level``) on delta data and record
    un-normalized values approximating the basic limit function matrix."""
    if iterations > 20:
        raise ValueError("iterations capped at 20 (grid 2^-20)")
    cols = []
    for pair in ((1.0, 0.0), (0.0, 1.0)):
        c = delta_sequence(1, length, pair=pair)
        for k in range(iterations):
            c = apply_subdivision(provider.mask_at(start_level + k), c)
        # un-normalize: p^[k] = D^-k c^[k]
        cols.append((c.points[:, 0], c.vectors[:, 0] * 2.0**iterations))
        if not np.isfinite(cols[-1][1]).all():
            raise OverflowError("diverging derivative column in limit table")
    # values[r][c]: r=0 function row, r=1 derivative row; c = initial column
    values = np.array([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    return BasicLimitTable(
        start_level, iterations, values, float(np.abs(values).max())
    )
