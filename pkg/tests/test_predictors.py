"""Predictor masks: reproduction oracles, interpolatory structure, limits."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomwave.predictors import (
    basic_limit_table,
    cubic_hermite_mask,
    cubic_provider,
    exponential_hermite_mask,
    exponential_provider,
    interpolatory_check,
    MaskProvider,
    poly_space,
    exponential_space,
    run_scheme,
    sample_hermite_interior,
    spectral_condition_residual,
)


def hermite_midpoint_oracle(p0, d0, p1, d1, h):
    """Two-point cubic Hermite interpolation on [0, h] evaluated at h/2,
    via an independent polynomial solve."""
    # coefficients of a + b x + c x^2 + d x^3 matching values/derivatives
    A = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, h, h**2, h**3],
            [0.0, 1.0, 2 * h, 3 * h**2],
        ]
    )
    a, b, c, d = np.linalg.solve(A, [p0, d0, p1, d1])
    x = h / 2.0
    return (
        a + b * x + c * x**2 + d * x**3,
        b + 2 * c * x + 3 * d * x**2,
    )


def test_cubic_mask_matches_midpoint_oracle(rng):
    """The odd-index stencil must reproduce cubic Hermite interpolation at
    the interval midpoint, in normalized coordinates."""
    mask = cubic_hermite_mask()
    for level in (0, 2, 5):
        h = 2.0 ** (-level)
        p0, d0, p1, d1 = rng.normal(size=4)
        val, der = hermite_midpoint_oracle(p0, d0, p1, d1, h)
        # normalized input pairs at consecutive indices
        left = np.array([p0, h * d0])
        right = np.array([p1, h * d1])
        out = mask.block(1) @ left + mask.block(-1) @ right
        assert out[0] == pytest.approx(val, abs=1e-12)
        assert out[1] == pytest.approx(h / 2.0 * der, abs=1e-12)


def test_cubic_mask_is_interpolatory():
    mask = cubic_hermite_mask()
    assert interpolatory_check(mask)
    assert np.array_equal(mask.block(0), [[1.0, 0.0], [0.0, 0.5]])
    broken = mask.perturbed(0, np.array([[1e-15, 0.0], [0.0, 0.0]]))
    assert not interpolatory_check(broken)


@settings(max_examples=30, deadline=None)
@given(
    lam=st.floats(0.05, 5.0),
    level=st.integers(0, 8),
    seed=st.integers(0, 10**6),
)
def test_exponential_mask_reproduces_its_span(lam, level, seed):
    """The exponential mask must interpolate span{1, x, e^(lx), e^(-lx)}
    exactly at the midpoint (collocation oracle)."""
    mask = exponential_hermite_mask(lam, level)
    h = 2.0 ** (-level)
    rng = np.random.default_rng(seed)
    coeff = rng.normal(size=4)

    def f(x):
        return coeff @ [1.0, x, math.exp(lam * x), math.exp(-lam * x)]

    def df(x):
        return coeff @ [0.0, 1.0, lam * math.exp(lam * x), -lam * math.exp(-lam * x)]

    left = np.array([f(0.0), h * df(0.0)])
    right = np.array([f(h), h * df(h)])
    out = mask.block(1) @ left + mask.block(-1) @ right
    scale = max(1.0, abs(f(h / 2)))
    assert abs(out[0] - f(h / 2)) <= 1e-10 * scale
    assert abs(out[1] - h / 2 * df(h / 2)) <= 1e-10 * scale


def test_exponential_mask_interpolatory_and_limits():
    for lam in (0.5, 1.0, 2.0):
        for level in range(7):
            assert interpolatory_check(exponential_hermite_mask(lam, level))
    # lambda -> 0 and level -> infinity both converge to the cubic mask
    cub = cubic_hermite_mask()
    near = exponential_hermite_mask(1e-4, 0)
    assert np.abs(near.blocks - cub.blocks).max() <= 1e-7
    deep = exponential_hermite_mask(1.0, 25)
    assert np.abs(deep.blocks - cub.blocks).max() <= 1e-8


def test_exponential_mask_guards():
    with pytest.raises(ValueError):
        exponential_hermite_mask(0.0, 0)
    with pytest.raises(ValueError):
        exponential_hermite_mask(100.0, -3)  # |lambda| * 2^-level > 50
    # deep levels switch to the cubic mask exactly
    assert np.array_equal(
        exponential_hermite_mask(1.0, 30).blocks, cubic_hermite_mask().blocks
    )


def test_provider_validation():
    with pytest.raises(ValueError):
        MaskProvider("quintic")
    with pytest.raises(ValueError):
        MaskProvider("exp", 0.0)
    assert cubic_provider().mask_at(3).lo == -1
    assert exponential_provider(2.0).reproduction_space().name.startswith("exp")
    assert len(poly_space(3).elements) == 4
    assert len(exponential_space(1.0).elements) == 4


def test_spectral_condition_cubic():
    """Exact reproduction of polynomials up to degree 3 on sampled data."""
    prov = cubic_provider()
    for label, f, df in prov.reproduction_space().elements:
        for level in (0, 3):
            r = spectral_condition_residual(prov, f, df, level, (-8, 8))
            assert r <= 1e-12, (label, level, r)


def test_spectral_condition_exponential():
    for lam in (0.5, 2.0):
        prov = exponential_provider(lam)
        for label, f, df in prov.reproduction_space().elements:
            for level in (0, 3):
                r = spectral_condition_residual(prov, f, df, level, (-8, 8))
                scale = max(1.0, abs(f(-8.0)), abs(f(8.0)))
                assert r <= 1e-10 * scale, (lam, label, level, r)


def test_degree4_not_reproduced():
    r = spectral_condition_residual(
        cubic_provider(), lambda x: x**4, lambda x: 4 * x**3, 0, (-8, 8)
    )
    assert r > 1e-6


def test_run_scheme_interpolates_samples():
    """Iterated subdivision of exact samples stays on the function's samples."""
    prov = cubic_provider()
    f = lambda x: x**3 - x
    df = lambda x: 3 * x**2 - 1
    c0 = sample_hermite_interior(f, df, 0, (-6, 6))
    c2 = run_scheme(prov, c0, 2)
    exact = sample_hermite_interior(f, df, 2, (c2.start, c2.start + len(c2) - 1))
    err = np.abs(c2.points[c2.valid] - exact.points[c2.valid]).max()
    assert err <= 1e-12
    assert c2.level == 2


def test_basic_limit_table_structure():
    table = basic_limit_table(cubic_provider(), 0, 6, length=8)
    assert table.values.shape == (2, 2, 8 * 2**6)
    assert np.isfinite(table.values).all()
    assert table.sup == np.abs(table.values).max()
    assert table.grid_step == 2.0**-6
    # first-column function values at integer grid points reproduce the delta
    stride = 2**6
    f_col0 = table.values[0, 0, ::stride]
    assert f_col0[0] == pytest.approx(1.0, abs=1e-12)
    assert np.abs(f_col0[1:]).max() <= 1e-12


def test_basic_limit_table_level_dependent_runs():
    table = basic_limit_table(exponential_provider(1.0), 2, 5, length=8)
    assert np.isfinite(table.values).all()
