"""Closed-form manifold geometry: Euclidean space, the unit 2-sphere, and the
rotation group SO(3) realized as unit quaternions with the round geometry of
S^3.

Points and tangent vectors are plain numpy arrays in the ambient
representation; every manifold enforces its own invariants (unit norm,
tangency) via ``project_point`` / ``project_tangent``.  Operations requiring
inversion of the exponential map raise :class:`CutLocusError` near the cut
locus, which downstream code reports as "data not dense enough".
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import CutLocusError

__all__ = [
    "Manifold",
    "Euclidean",
    "Sphere2",
    "SO3Quat",
    "manifold_from_tag",
    "quaternion_sign_align",
]

_CUT_LOCUS_MARGIN = 1e-6


class Manifold:
    """Abstract interface: exp, log, parallel transport along geodesics,
    midpoints, and distance."""

    tag: str
    ambient_dim: int
    dim: int

    def exp(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def log(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def transport(self, p: np.ndarray, v: np.ndarray, q: np.ndarray) -> np.ndarray:
        """Parallel transport of v from T_p to T_q along the geodesic."""
        raise NotImplementedError

    def dist(self, p: np.ndarray, q: np.ndarray) -> float:
        raise NotImplementedError

    def injectivity_bound(self) -> float:
        """Upper bound on |v| for which exp_p is invertible."""
        raise NotImplementedError

    def midpoint(self, p: np.ndarray, q: np.ndarray) -> np.ndarray:
        return self.exp(p, 0.5 * self.log(p, q))

    def project_point(self, p: np.ndarray) -> np.ndarray:
        return np.asarray(p, dtype=float)

    def project_tangent(self, p: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.asarray(v, dtype=float)

    def check_point(self, p: np.ndarray, tol: float = 1e-9) -> bool:
        return True

    def random_point(self, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def random_tangent(
        self, rng: np.random.Generator, p: np.ndarray, scale: float = 1.0
    ) -> np.ndarray:
        v = self.project_tangent(p, rng.normal(size=self.ambient_dim))
        n = np.linalg.norm(v)
        return v * (scale / n) if n > 0 else v


class Euclidean(Manifold):
    """Flat space: exp is +, log is -, transport is the identity."""

    def __init__(self, m: int):
        self.ambient_dim = m
        self.dim = m
        self.tag = f"euclidean:{m}"

    def exp(self, p, v):
        return p + v

    def log(self, p, q):
        return q - p

    def transport(self, p, v, q):
        return np.array(v, dtype=float)

    def dist(self, p, q):
        return float(np.linalg.norm(q - p))

    def injectivity_bound(self):
        return math.inf

    def midpoint(self, p, q):
        return 0.5 * (p + q)

    def random_point(self, rng):
        return rng.normal(size=self.ambient_dim)


class _RoundSphere(Manifold):
    """Unit sphere in R^(d+1) with the round metric; closed-form geodesics."""

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.dim = ambient_dim - 1

    def injectivity_bound(self):
        return math.pi - _CUT_LOCUS_MARGIN

    def project_point(self, p):
        p = np.asarray(p, dtype=float)
        n = np.linalg.norm(p)
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector to the sphere")
        return p / n

    def project_tangent(self, p, v):
        v = np.asarray(v, dtype=float)
        return v - np.dot(p, v) * p

    def check_point(self, p, tol=1e-9):
        return abs(np.linalg.norm(p) - 1.0) <= tol

    def exp(self, p, v):
        theta = np.linalg.norm(v)
        if theta == 0.0:
            return np.array(p, dtype=float)
        if theta >= self.injectivity_bound():
            raise CutLocusError(
                f"tangent norm {theta:g} reaches the cut locus; "
                "data not dense enough"
            )
        return math.cos(theta) * p + math.sin(theta) / theta * v

    def log(self, p, q):
        if np.array_equal(p, q):
            return np.zeros(self.ambient_dim)
        inner = float(np.clip(np.dot(p, q), -1.0, 1.0))
        u = q - inner * p
        s = np.linalg.norm(u)
        theta = math.atan2(s, inner)
        if theta >= self.injectivity_bound():
            raise CutLocusError(
                f"points at angle {theta:g} are antipodal within tolerance; "
                "data not dense enough"
            )
        if s == 0.0:
            return np.zeros(self.ambient_dim)
        return (theta / s) * u

    def transport(self, p, v, q):
        if np.array_equal(p, q):
            return np.array(v, dtype=float)
        u = self.log(p, q)
        theta = np.linalg.norm(u)
        if theta == 0.0:
            return np.array(v, dtype=float)
        e = u / theta
        coeff = float(np.dot(e, v))
        out = v + coeff * ((math.cos(theta) - 1.0) * e - math.sin(theta) * p)
        return self.project_tangent(q, out)

    def dist(self, p, q):
        inner = float(np.clip(np.dot(p, q), -1.0, 1.0))
        u = q - inner * p
        return math.atan2(np.linalg.norm(u), inner)

    def random_point(self, rng):
        return self.project_point(rng.normal(size=self.ambient_dim))


class Sphere2(_RoundSphere):
    tag = "sphere2"

    def __init__(self):
        super().__init__(3)


class SO3Quat(_RoundSphere):
    """SO(3) as unit quaternions; the bi-invariant geometry is that of the
    round S^3 (a Cartan-Schouten connection up to scale)."""

    tag = "so3-quat"

    def __init__(self):
        super().__init__(4)


def manifold_from_tag(tag: str) -> Manifold:
    """Parse a manifold tag: "euclidean:<m>", "sphere2", or "so3-quat"."""
    if tag == "sphere2":
        return Sphere2()
    if tag == "so3-quat":
        return SO3Quat()
    m = re.fullmatch(r"euclidean:(\d+)", tag)
    if m:
        return Euclidean(int(m.group(1)))
    raise ValueError(f"unknown manifold tag {tag!r}")


def quaternion_sign_align(quats: np.ndarray) -> np.ndarray:
    """Resolve the SO(3) double cover: flip quaternion signs so consecutive
    inner products are nonnegative.  Raises CutLocusError when consecutive
    rotations are more than pi/2 apart (the lift is then ambiguous)."""
    q = np.array(quats, dtype=float)
    if q.ndim != 2 or q.shape[1] != 4:
        raise ValueError("expected an array of shape (L, 4)")
    min_inner = math.cos(math.pi / 4.0)  # rotation angle pi/2
    for i in range(1, len(q)):
        inner = float(np.dot(q[i - 1], q[i]))
        if inner < 0:
            q[i] = -q[i]
            inner = -inner
        if inner <= min_inner:
            raise CutLocusError(
                f"consecutive rotations at index {i} are at least pi/2 apart; "
                "data not dense enough"
            )
    return q
