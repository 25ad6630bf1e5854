"""Biorthogonal prediction-correction filter banks for linear Hermite data.

Per level the bank holds four filters {A, B, At, Bt}: the predictor A, the
detail-placement filter B with symbol z*I, the dual filter At with constant
symbol D^-1, and the dual wavelet filter Bt with blocks
Bt_k = (-1)^(1-k) D^-1 A_{1-k}^T.  Decomposition keeps the even subsamples
(un-normalized by D^-1) and stores the odd prediction residuals; reconstruction
adds the residuals back onto the prediction.  Biorthogonality is certified
numerically both on probe sequences (operator form) and as Laurent-polynomial
coefficient identities (symbol form).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .predictors import MaskProvider, interpolatory_check, sample_hermite_interior
from .sequences import (
    HermiteSequence,
    Mask,
    apply_decomposition,
    apply_subdivision,
    diag_d,
    periodic_sequence,
    seq_sub,
    single_block_mask,
    sup_norm,
)

__all__ = [
    "MatLaurent",
    "LevelFilters",
    "PredictionCorrectionBank",
    "MultiscalePyramid",
    "build_bank",
    "decompose_linear",
    "reconstruct_linear",
    "biorthogonality_residuals",
    "laurent_symbol",
    "symbol_biorthogonality_residuals",
    "vanishing_moment_residual",
]

# Even-index prediction residuals vanish identically for interpolatory masks;
# anything above this signals a broken predictor, not roundoff.
_EVEN_RESIDUAL_TOL = 1e-10


class MatLaurent:
    """Laurent polynomial with 2x2 matrix coefficients over a bounded
    exponent range."""

    def __init__(self, lo: int, coeffs: np.ndarray):
        self.lo = int(lo)
        self.coeffs = np.asarray(coeffs, dtype=float)
        if self.coeffs.ndim != 3 or self.coeffs.shape[1:] != (2, 2):
            raise ValueError("coefficients must have shape (K, 2, 2)")

    @property
    def hi(self) -> int:
        return self.lo + self.coeffs.shape[0] - 1

    @classmethod
    def from_mask(cls, mask: Mask) -> "MatLaurent":
        return cls(mask.lo, mask.blocks.copy())

    @classmethod
    def constant(cls, matrix: np.ndarray) -> "MatLaurent":
        return cls(0, np.asarray(matrix, dtype=float)[None, :, :])

    def coeff(self, k: int) -> np.ndarray:
        if self.lo <= k <= self.hi:
            return self.coeffs[k - self.lo]
        return np.zeros((2, 2))

    def __add__(self, other: "MatLaurent") -> "MatLaurent":
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = np.zeros((hi - lo + 1, 2, 2))
        out[self.lo - lo : self.hi - lo + 1] += self.coeffs
        out[other.lo - lo : other.hi - lo + 1] += other.coeffs
        return MatLaurent(lo, out)

    def __sub__(self, other: "MatLaurent") -> "MatLaurent":
        return self + (other * -1.0)

    def __mul__(self, scalar: float) -> "MatLaurent":
        return MatLaurent(self.lo, self.coeffs * scalar)

    def __matmul__(self, other: "MatLaurent") -> "MatLaurent":
        lo = self.lo + other.lo
        out = np.zeros((self.coeffs.shape[0] + other.coeffs.shape[0] - 1, 2, 2))
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a @ b
        return MatLaurent(lo, out)

    def sharp(self) -> "MatLaurent":
        """P^#(z) = P^T(z^-1): transpose coefficients, negate exponents."""
        return MatLaurent(-self.hi, self.coeffs[::-1].transpose(0, 2, 1).copy())

    def neg_arg(self) -> "MatLaurent":
        """P(-z): coefficient at exponent k picks up (-1)^k."""
        signs = np.array([(-1.0) ** k for k in range(self.lo, self.hi + 1)])
        return MatLaurent(self.lo, self.coeffs * signs[:, None, None])

    def max_abs_coeff(self) -> float:
        return float(np.abs(self.coeffs).max())


@dataclass(frozen=True)
class LevelFilters:
    """The four filters of one level of a prediction-correction bank."""

    A: Mask
    B: Mask
    At: Mask  # dual filter (symbol D^-1)
    Bt: Mask  # dual wavelet filter

    def with_mask(self, name: str, mask: Mask) -> "LevelFilters":
        return replace(self, **{name: mask})


def _derived_filters(A: Mask) -> LevelFilters:
    B = single_block_mask(1, np.eye(2))
    At = single_block_mask(0, diag_d(-1))
    Dinv = diag_d(-1)
    lo = 1 - A.hi
    blocks = []
    for k in range(lo, 1 - A.lo + 1):
        blocks.append((-1.0) ** (1 - k) * Dinv @ A.block(1 - k).T)
    Bt = Mask(lo, np.array(blocks))
    return LevelFilters(A, B, At, Bt)


class PredictionCorrectionBank:
    """Per-level biorthogonal filters derived from an interpolatory predictor."""

    def __init__(self, provider: MaskProvider):
        self.provider = provider
        self._cache: dict[int, LevelFilters] = {}

    def filters_at(self, level: int) -> LevelFilters:
        if level not in self._cache:
            A = self.provider.mask_at(level)
            if not interpolatory_check(A):
                raise ValueError(
                    f"predictor mask at level {level} is not interpolatory"
                )
            self._cache[level] = _derived_filters(A)
        return self._cache[level]


def build_bank(provider: MaskProvider) -> PredictionCorrectionBank:
    bank = PredictionCorrectionBank(provider)
    bank.filters_at(0)  # fail fast on a non-interpolatory predictor
    return bank


@dataclass(frozen=True)
class MultiscalePyramid:
    """Coarse sequence c^[0] plus detail sequences d^[0..N-1] (critical
    sampling: one detail per odd fine index, stored at the coarse index)."""

    coarse: HermiteSequence
    details: tuple  # of HermiteSequence, d^[0] first
    provider: MaskProvider

    @property
    def levels(self) -> int:
        return len(self.details)


def _halve(c: HermiteSequence) -> HermiteSequence:
    """c^[n]_i = D^-1 c^[n+1]_{2i} (periodic)."""
    return periodic_sequence(
        c.points[::2].copy(), 2.0 * c.vectors[::2], level=c.level - 1
    )


def decompose_linear(
    cN: HermiteSequence, bank: PredictionCorrectionBank, levels: int
) -> MultiscalePyramid:
    """Prediction-correction decomposition of periodic Hermite data."""
    if not cN.periodic:
        raise ValueError("decompose_linear expects periodic data")
    if len(cN) % (1 << levels) != 0:
        raise ValueError(
            f"length {len(cN)} not divisible by 2^{levels}"
        )
    c = cN
    details: list[HermiteSequence] = []
    for _ in range(levels):
        n = c.level - 1  # mask level: the grid the coarse data lives on
        coarse = _halve(c)
        pred = apply_subdivision(bank.filters_at(n).A, coarse)
        resid = seq_sub(c, pred)
        even_resid = max(
            np.abs(resid.points[::2]).max(), np.abs(resid.vectors[::2]).max()
        )
        if even_resid > _EVEN_RESIDUAL_TOL:
            raise ValueError(
                f"even-index residual {even_resid:g} at level {n}; "
                "predictor is not interpolatory"
            )
        details.append(
            periodic_sequence(
                resid.points[1::2].copy(), resid.vectors[1::2].copy(), level=n
            )
        )
        c = coarse
    return MultiscalePyramid(c, tuple(reversed(details)), bank.provider)


def reconstruct_linear(
    pyr: MultiscalePyramid, bank: PredictionCorrectionBank
) -> HermiteSequence:
    """Invert decompose_linear: evens from D c^[n], odds prediction + detail."""
    c = pyr.coarse
    for d in pyr.details:
        n = c.level
        if len(d) != len(c):
            raise ValueError(
                f"detail length {len(d)} != coarse length {len(c)} at level {n}"
            )
        pred = apply_subdivision(bank.filters_at(n).A, c)
        P = pred.points.copy()
        V = pred.vectors.copy()
        P[::2] = c.points
        V[::2] = 0.5 * c.vectors
        P[1::2] += d.points
        V[1::2] += d.vectors
        c = periodic_sequence(P, V, level=c.level + 1)
    return c


def _dual_decomp(mask: Mask, s: HermiteSequence) -> HermiteSequence:
    """Apply the decomposition operator with the blockwise transpose of a
    filter, i.e. D_{M^T}."""
    return apply_decomposition(mask.transposed(), s)


def biorthogonality_residuals(
    filters: LevelFilters, probes: Sequence[HermiteSequence]
) -> tuple[float, float, float, float]:
    """Max sup-norm residuals of the four operator identities of a
    biorthogonal system, over the given periodic probes."""
    r = [0.0, 0.0, 0.0, 0.0]
    for c in probes:
        if len(c) < 4 * max(filters.A.width, filters.Bt.width):
            raise ValueError("probe too short for the filter support")
        sa = apply_subdivision(filters.A, c)
        sb = apply_subdivision(filters.B, c)
        r[0] = max(r[0], sup_norm(seq_sub(_dual_decomp(filters.At, sa), c)))
        r[1] = max(r[1], sup_norm(seq_sub(_dual_decomp(filters.Bt, sb), c)))
        r[2] = max(r[2], sup_norm(_dual_decomp(filters.At, sb)))
        r[3] = max(r[3], sup_norm(_dual_decomp(filters.Bt, sa)))
    return tuple(r)


def laurent_symbol(mask: Mask) -> MatLaurent:
    """Symbol A(z) = sum_k A_k z^k of a mask."""
    return MatLaurent.from_mask(mask)


def symbol_biorthogonality_residuals(
    filters: LevelFilters,
) -> tuple[float, float, float, float]:
    """Max-abs coefficients of the four symbol-form biorthogonality
    residuals: X^#(z) Y(z) + X^#(-z) Y(-z) minus 2I or 0."""
    A = laurent_symbol(filters.A)
    B = laurent_symbol(filters.B)
    At = laurent_symbol(filters.At)
    Bt = laurent_symbol(filters.Bt)
    two_id = MatLaurent.constant(2.0 * np.eye(2))

    def pair(x: MatLaurent, y: MatLaurent) -> MatLaurent:
        return (x.sharp() @ y) + (x.sharp().neg_arg() @ y.neg_arg())

    return (
        (pair(At, A) - two_id).max_abs_coeff(),
        (pair(Bt, B) - two_id).max_abs_coeff(),
        pair(At, B).max_abs_coeff(),
        pair(Bt, A).max_abs_coeff(),
    )


def vanishing_moment_residual(
    filters: LevelFilters,
    f: Callable[[float], float],
    df: Callable[[float], float],
    level: int,
    window: tuple[int, int],
) -> float:
    """Sup norm of D_{Bt^T} applied to normalized level-(n+1) samples of f
    over interior-valid indices."""
    c = sample_hermite_interior(f, df, level + 1, window)
    out = _dual_decomp(filters.Bt, c)
    return sup_norm(out)
