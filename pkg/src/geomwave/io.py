"""File formats (schema "geomwave/1"): samples, pyramids, decay CSV, reports.

All numeric payloads are serialized as JSON numbers with full double
precision (Python's repr round-trips doubles exactly), so write-then-read is
bitwise lossless.  Readers validate the schema with path-addressed error
messages and reject manifold-invariant violations (e.g. non-unit sphere
points) naming the offending index; read values are never renormalized.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import SchemaError
from .experiments import DecayReport, VerifyReport
from .manifolds import Manifold, manifold_from_tag
from .predictors import MaskProvider, cubic_provider, exponential_provider
from .sequences import HermiteSequence
from .transform import ManifoldHermiteSeq, ManifoldPyramid, RULES, TangentPairSeq

__all__ = [
    "SCHEMA",
    "read_samples",
    "write_samples",
    "read_pyramid",
    "write_pyramid",
    "write_report",
    "write_decay_csv",
]

SCHEMA = "geomwave/1"

_POINT_CHECK_TOL = 1e-9


def _fail(path: str, msg: str):
    raise SchemaError(f"{path}: {msg}")


def _require(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        _fail(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        _fail(path, f"missing required field {key!r}")
    return obj[key]


def _check_schema(obj: dict, path: str):
    schema = _require(obj, "schema", path)
    if schema != SCHEMA:
        _fail(f"{path}.schema", f"expected {SCHEMA!r}, got {schema!r}")


def _vector(raw, dim: int, path: str) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != dim:
        _fail(path, f"expected a list of {dim} numbers")
    out = np.empty(dim)
    for i, x in enumerate(raw):
        if not isinstance(x, (int, float)) or isinstance(x, bool):
            _fail(f"{path}[{i}]", "expected a number")
        if not math.isfinite(x):
            _fail(f"{path}[{i}]", "non-finite value")
        out[i] = float(x)
    return out


def _check_on_manifold(M: Manifold, p: np.ndarray, path: str):
    if not M.check_point(p, tol=_POINT_CHECK_TOL):
        _fail(path, f"point is not on {M.tag} (|p| = {np.linalg.norm(p):.6g})")


def _load(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"{path}: file not found") from None
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: not valid JSON ({err})") from None


def _dump(obj: dict, path: str):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


# --------------------------------------------------------------------------
# samples


def write_samples(seq, path: str):
    """Write a ManifoldHermiteSeq or periodic HermiteSequence."""
    if isinstance(seq, HermiteSequence):
        tag = f"euclidean:{seq.dim}"
        points, vectors, level = seq.points, seq.vectors, seq.level
        boundary = "periodic" if seq.periodic else "interior"
    else:
        tag = seq.manifold.tag
        points, vectors, level = seq.points, seq.vectors, seq.level
        boundary = "periodic"
    _dump(
        {
            "schema": SCHEMA,
            "manifold": tag,
            "level": int(level),
            "boundary": boundary,
            "data": [
                {"p": list(p), "v": list(v)} for p, v in zip(points, vectors)
            ],
        },
        path,
    )


def read_samples(path: str) -> ManifoldHermiteSeq:
    obj = _load(path)
    _check_schema(obj, path)
    tag = _require(obj, "manifold", path)
    try:
        M = manifold_from_tag(tag)
    except ValueError as err:
        _fail(f"{path}.manifold", str(err))
    level = _require(obj, "level", path)
    if not isinstance(level, int):
        _fail(f"{path}.level", "expected an integer")
    boundary = _require(obj, "boundary", path)
    if boundary != "periodic":
        _fail(f"{path}.boundary", f"only 'periodic' is supported, got {boundary!r}")
    data = _require(obj, "data", path)
    if not isinstance(data, list) or not data:
        _fail(f"{path}.data", "expected a non-empty list")
    P = np.empty((len(data), M.ambient_dim))
    V = np.empty((len(data), M.ambient_dim))
    for i, entry in enumerate(data):
        here = f"{path}.data[{i}]"
        P[i] = _vector(_require(entry, "p", here), M.ambient_dim, f"{here}.p")
        V[i] = _vector(_require(entry, "v", here), M.ambient_dim, f"{here}.v")
        _check_on_manifold(M, P[i], f"{here}.p")
    return ManifoldHermiteSeq(M, P, V, level=level)


# --------------------------------------------------------------------------
# pyramids


def predictor_meta(provider: MaskProvider) -> dict:
    return {"kind": provider.kind, "lambda": provider.lam}


def provider_from_meta(meta: dict, path: str) -> MaskProvider:
    kind = _require(meta, "kind", path)
    if kind == "cubic":
        return cubic_provider()
    if kind == "exp":
        lam = _require(meta, "lambda", path)
        if not isinstance(lam, (int, float)) or isinstance(lam, bool):
            _fail(f"{path}.lambda", "expected a number")
        return exponential_provider(float(lam))
    _fail(f"{path}.kind", f"unknown predictor kind {kind!r}")


def write_pyramid(pyr: ManifoldPyramid, path: str):
    _dump(
        {
            "schema": SCHEMA,
            "manifold": pyr.coarse.manifold.tag,
            "predictor": predictor_meta(pyr.provider),
            "rule": pyr.rule,
            "coarse_level": int(pyr.coarse.level),
            "coarse": [
                {"p": list(p), "v": list(v)}
                for p, v in zip(pyr.coarse.points, pyr.coarse.vectors)
            ],
            "details": [
                [
                    {"base": list(b), "u0": list(a), "u1": list(c)}
                    for b, a, c in zip(d.bases, d.u0, d.u1)
                ]
                for d in pyr.details
            ],
        },
        path,
    )


def read_pyramid(path: str) -> ManifoldPyramid:
    obj = _load(path)
    _check_schema(obj, path)
    tag = _require(obj, "manifold", path)
    try:
        M = manifold_from_tag(tag)
    except ValueError as err:
        _fail(f"{path}.manifold", str(err))
    provider = provider_from_meta(
        _require(obj, "predictor", path), f"{path}.predictor"
    )
    rule = _require(obj, "rule", path)
    if rule not in RULES:
        _fail(f"{path}.rule", f"expected one of {RULES}, got {rule!r}")
    level = _require(obj, "coarse_level", path)
    if not isinstance(level, int):
        _fail(f"{path}.coarse_level", "expected an integer")
    raw_coarse = _require(obj, "coarse", path)
    if not isinstance(raw_coarse, list) or not raw_coarse:
        _fail(f"{path}.coarse", "expected a non-empty list")
    P = np.empty((len(raw_coarse), M.ambient_dim))
    V = np.empty((len(raw_coarse), M.ambient_dim))
    for i, entry in enumerate(raw_coarse):
        here = f"{path}.coarse[{i}]"
        P[i] = _vector(_require(entry, "p", here), M.ambient_dim, f"{here}.p")
        V[i] = _vector(_require(entry, "v", here), M.ambient_dim, f"{here}.v")
        _check_on_manifold(M, P[i], f"{here}.p")
    coarse = ManifoldHermiteSeq(M, P, V, level=level)
    raw_details = _require(obj, "details", path)
    if not isinstance(raw_details, list):
        _fail(f"{path}.details", "expected a list")
    details = []
    length = len(raw_coarse)
    for n, raw_level in enumerate(raw_details):
        here = f"{path}.details[{n}]"
        if not isinstance(raw_level, list) or len(raw_level) != length:
            _fail(here, f"expected a list of {length} detail entries")
        B = np.empty((length, M.ambient_dim))
        U0 = np.empty((length, M.ambient_dim))
        U1 = np.empty((length, M.ambient_dim))
        for i, entry in enumerate(raw_level):
            at = f"{here}[{i}]"
            B[i] = _vector(_require(entry, "base", at), M.ambient_dim, f"{at}.base")
            U0[i] = _vector(_require(entry, "u0", at), M.ambient_dim, f"{at}.u0")
            U1[i] = _vector(_require(entry, "u1", at), M.ambient_dim, f"{at}.u1")
            _check_on_manifold(M, B[i], f"{at}.base")
        details.append(TangentPairSeq(M, B, U0, U1, level=level + n))
        length *= 2
    return ManifoldPyramid(coarse, tuple(details), provider, rule)


# --------------------------------------------------------------------------
# reports


def write_report(report: VerifyReport, path: str):
    _dump(report.to_dict(), path)


def write_decay_csv(report: DecayReport, path: str):
    """Columns level, sup_norm, log2_ratio; footer rows fitted_slope and
    fit_range (blank when the signal is exactly annihilated)."""
    lines = ["level,sup_norm,log2_ratio"]
    for i, (n, s) in enumerate(zip(report.levels, report.sup_norms)):
        have_ratio = 0 < i <= len(report.log2_ratios)
        ratio = repr(report.log2_ratios[i - 1]) if have_ratio else ""
        lines.append(f"{n},{s!r},{ratio}")
    if report.exact_annihilation:
        lines.append("fitted_slope,exact annihilation,")
        lines.append("fit_range,,")
    else:
        lines.append(f"fitted_slope,{report.fitted_slope!r},")
        lines.append(f"fit_range,{report.fit_range[0]}:{report.fit_range[1]},")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
