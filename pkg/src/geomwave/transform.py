"""Manifold-valued Hermite subdivision and the prediction-correction pyramid.

The manifold analogue of a linear subdivision operator pulls the stencil into
one tangent space (via log and parallel transport at a base point), applies
the 2x2 blocks there, and pushes the result back with exp.  Differences of
point-vector pairs live in a fiber of TM + TM: the ``ominus`` of two pairs is
a pair of tangent vectors at the reference point, and ``oplus`` adds such a
correction back.  Wavelet details are exactly these fiber elements, based at
the predicted odd points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaseMismatchError, CutLocusError, DensityError
from .manifolds import Manifold
from .predictors import MaskProvider, interpolatory_check
from .sequences import HermiteSequence, Mask, apply_subdivision, periodic_sequence

__all__ = [
    "ManifoldHermiteSeq",
    "TangentPairSeq",
    "ManifoldPyramid",
    "RULES",
    "manifold_subdivide_once",
    "oplus",
    "ominus",
    "decompose_manifold",
    "reconstruct_manifold",
    "proximity_ratio",
    "proximity_numerator",
    "ominus_lipschitz_ratio",
    "detail_sup_norm",
    "to_linear",
    "from_linear",
]

RULES = ("midpoint", "leftpoint")

# Stored detail bases are recomputed during reconstruction; disagreement
# beyond this geodesic distance means the pyramid is corrupted.
_BASE_AUDIT_TOL = 1e-9


@dataclass(frozen=True)
class ManifoldHermiteSeq:
    """Periodic sequence of pairs (p_i, v_i) with v_i tangent at p_i."""

    manifold: Manifold
    points: np.ndarray  # (L, ambient_dim)
    vectors: np.ndarray  # (L, ambient_dim)
    level: int = 0

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        v = np.asarray(self.vectors, dtype=float)
        if p.shape != v.shape or p.ndim != 2:
            raise ValueError("points and vectors must share shape (L, d)")
        if p.shape[1] != self.manifold.ambient_dim:
            raise ValueError(
                f"ambient dimension {p.shape[1]} != "
                f"{self.manifold.ambient_dim} of {self.manifold.tag}"
            )
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "vectors", v)

    def __len__(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class TangentPairSeq:
    """Sequence of detail coefficients: two tangent vectors per base point."""

    manifold: Manifold
    bases: np.ndarray  # (L, ambient_dim)
    u0: np.ndarray
    u1: np.ndarray
    level: int = 0

    def __len__(self):
        return self.bases.shape[0]


@dataclass(frozen=True)
class ManifoldPyramid:
    coarse: ManifoldHermiteSeq
    details: tuple  # of TangentPairSeq, d^[0] first
    provider: MaskProvider
    rule: str

    @property
    def levels(self) -> int:
        return len(self.details)


def _base_points(
    M: Manifold, points: np.ndarray, rule: str
) -> tuple[np.ndarray, np.ndarray]:
    """Base points for even outputs (always p_i) and odd outputs."""
    L = len(points)
    if rule == "leftpoint":
        odd = points.copy()
    elif rule == "midpoint":
        odd = np.array(
            [M.midpoint(points[i], points[(i + 1) % L]) for i in range(L)]
        )
    else:
        raise ValueError(f"unknown base point rule {rule!r}")
    return points, odd


def manifold_subdivide_once(
    mask: Mask, c: ManifoldHermiteSeq, rule: str = "midpoint"
) -> ManifoldHermiteSeq:
    """One step of the manifold Hermite subdivision operator built from a
    linear mask: stencil combined in the tangent space at a base point."""
    if not interpolatory_check(mask):
        raise ValueError("manifold subdivision requires an interpolatory mask")
    M = c.manifold
    L = len(c)
    even_bases, odd_bases = _base_points(M, c.points, rule)
    P = np.empty((2 * L, M.ambient_dim))
    V = np.empty((2 * L, M.ambient_dim))
    for j in range(2 * L):
        m = even_bases[j // 2] if j % 2 == 0 else odd_bases[j // 2]
        w0 = np.zeros(M.ambient_dim)
        w1 = np.zeros(M.ambient_dim)
        for t in range(mask.lo, mask.hi + 1):
            if (j - t) % 2 != 0:
                continue
            blk = mask.block(t)
            if not blk.any():
                continue
            k = (j - t) // 2 % L
            y = M.log(m, c.points[k])
            z = M.transport(c.points[k], c.vectors[k], m)
            w0 += blk[0, 0] * y + blk[0, 1] * z
            w1 += blk[1, 0] * y + blk[1, 1] * z
        P[j] = M.exp(m, w0)
        V[j] = M.transport(m, w1, P[j])
    return ManifoldHermiteSeq(M, P, V, level=c.level + 1)


def oplus(
    M: Manifold,
    a: tuple[np.ndarray, np.ndarray],
    b_base: np.ndarray,
    u0: np.ndarray,
    u1: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Add a tangent-pair correction to a point-vector pair.  The correction
    is first moved into the fiber at a's point, then everything is carried
    along the single geodesic to the new point (transporting u1 straight from
    its own base would pick up holonomy and break the exact inversion
    property)."""
    p, v = a
    u0p = M.transport(b_base, u0, p)
    u1p = M.transport(b_base, u1, p)
    q = M.exp(p, u0p)
    return q, M.transport(p, v, q) + M.transport(p, u1p, q)


def ominus(
    M: Manifold,
    a: tuple[np.ndarray, np.ndarray],
    b: tuple[np.ndarray, np.ndarray],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Difference of two point-vector pairs: a tangent pair based at b's
    point: (log_p(q), [u]_p - v) for a = (q, u), b = (p, v)."""
    q, u = a
    p, v = b
    return p, M.log(p, q), M.transport(q, u, p) - v


def _halve(c: ManifoldHermiteSeq) -> ManifoldHermiteSeq:
    """c^[n]_i = D^-1 c^[n+1]_{2i}: point kept, tangent vector doubled."""
    return ManifoldHermiteSeq(
        c.manifold, c.points[::2].copy(), 2.0 * c.vectors[::2], level=c.level - 1
    )


def decompose_manifold(
    cN: ManifoldHermiteSeq, provider: MaskProvider, rule: str, levels: int
) -> ManifoldPyramid:
    """Manifold prediction-correction decomposition of a closed curve."""
    if len(cN) % (1 << levels) != 0:
        raise ValueError(f"length {len(cN)} not divisible by 2^{levels}")
    M = cN.manifold
    c = cN
    details: list[TangentPairSeq] = []
    for _ in range(levels):
        n = c.level - 1  # mask level: the grid the coarse data lives on
        coarse = _halve(c)
        try:
            pred = manifold_subdivide_once(provider.mask_at(n), coarse, rule)
        except CutLocusError as err:
            raise DensityError(str(err), level=n) from err
        L = len(coarse)
        bases = np.empty((L, M.ambient_dim))
        u0 = np.empty((L, M.ambient_dim))
        u1 = np.empty((L, M.ambient_dim))
        for i in range(L):
            j = 2 * i + 1
            try:
                bases[i], u0[i], u1[i] = ominus(
                    M,
                    (c.points[j], c.vectors[j]),
                    (pred.points[j], pred.vectors[j]),
                )
            except CutLocusError as err:
                raise DensityError(str(err), level=n, index=i) from err
        details.append(TangentPairSeq(M, bases, u0, u1, level=n))
        c = coarse
    return ManifoldPyramid(c, tuple(reversed(details)), provider, rule)


def reconstruct_manifold(
    pyr: ManifoldPyramid, provider: MaskProvider | None = None, rule: str | None = None
) -> ManifoldHermiteSeq:
    """Invert decompose_manifold.  Detail base points are recomputed from the
    coarse data and audited against the stored ones."""
    provider = provider or pyr.provider
    rule = rule or pyr.rule
    M = pyr.coarse.manifold
    c = pyr.coarse
    for d in pyr.details:
        n = c.level
        if len(d) != len(c):
            raise ValueError(
                f"detail length {len(d)} != coarse length {len(c)} at level {n}"
            )
        try:
            pred = manifold_subdivide_once(provider.mask_at(n), c, rule)
        except CutLocusError as err:
            raise DensityError(str(err), level=n) from err
        L = len(c)
        P = np.empty((2 * L, M.ambient_dim))
        V = np.empty((2 * L, M.ambient_dim))
        P[::2] = c.points
        V[::2] = 0.5 * c.vectors
        for i in range(L):
            j = 2 * i + 1
            drift = M.dist(d.bases[i], pred.points[j])
            if drift > _BASE_AUDIT_TOL:
                raise BaseMismatchError(
                    f"detail base at level {n}, index {i} is {drift:g} away "
                    "from the recomputed prediction (corrupted pyramid or "
                    "wrong predictor/rule)"
                )
            try:
                P[j], V[j] = oplus(
                    M,
                    (pred.points[j], pred.vectors[j]),
                    d.bases[i],
                    d.u0[i],
                    d.u1[i],
                )
            except CutLocusError as err:
                raise DensityError(str(err), level=n, index=i) from err
        c = ManifoldHermiteSeq(M, P, V, level=c.level + 1)
    return c


def detail_sup_norm(d: TangentPairSeq) -> float:
    """Max-abs ambient component over both tangent slots."""
    return float(max(np.abs(d.u0).max(), np.abs(d.u1).max()))


def to_linear(c: ManifoldHermiteSeq) -> HermiteSequence:
    """Reinterpret ambient coordinates as a flat Hermite sequence."""
    return periodic_sequence(c.points.copy(), c.vectors.copy(), level=c.level)


def from_linear(M: Manifold, s: HermiteSequence) -> ManifoldHermiteSeq:
    if not s.periodic:
        raise ValueError("manifold sequences are periodic")
    return ManifoldHermiteSeq(M, s.points.copy(), s.vectors.copy(), level=s.level)


def proximity_ratio(
    mask: Mask, c: ManifoldHermiteSeq, rule: str = "midpoint"
) -> float:
    """||(S_A - T_A) c||_inf / ||(delta p, v)||_inf^2 in ambient coordinates."""
    num = proximity_numerator(mask, c, rule)
    dp = np.roll(c.points, -1, axis=0) - c.points
    denom = max(np.abs(dp).max(), np.abs(c.vectors).max())
    if denom == 0.0:
        raise ValueError("proximity ratio undefined for constant zero data")
    return num / denom**2


def proximity_numerator(
    mask: Mask, c: ManifoldHermiteSeq, rule: str = "midpoint"
) -> float:
    linear = apply_subdivision(mask, to_linear(c))
    nonlinear = manifold_subdivide_once(mask, c, rule)
    return float(
        max(
            np.abs(linear.points - nonlinear.points).max(),
            np.abs(linear.vectors - nonlinear.vectors).max(),
        )
    )


def ominus_lipschitz_ratio(
    M: Manifold,
    a: tuple[np.ndarray, np.ndarray],
    b: tuple[np.ndarray, np.ndarray],
) -> float:
    """||a (-) b||_inf over the flat ambient difference ||a - b||_inf."""
    _, u0, u1 = ominus(M, a, b)
    num = max(np.abs(u0).max(), np.abs(u1).max())
    denom = max(np.abs(a[0] - b[0]).max(), np.abs(a[1] - b[1]).max())
    if denom == 0.0:
        raise ValueError("Lipschitz ratio undefined for coincident pairs")
    return float(num / denom)
