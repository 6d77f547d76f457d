import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nncalc.core import dep, hid, inn, lay, out, param, realize, wid
from nncalc.interpolation import (
    Box, SampleSet, fill_distance, max_conv, max_conv_closed_form, max_conv_error_bound, mxm, nrm,
)
from nncalc.quadrature import MeshSpec
import oracles


@pytest.mark.parametrize("d", range(1, 10))
def test_nrm(d):
    net = nrm(d)
    assert lay(net) == (d, 2 * d, 1)
    assert param(net) == 2 * d * d + 4 * d + 1 <= 7 * d * d
    X = np.random.default_rng(d).normal(scale=5, size=(1000, d))
    np.testing.assert_allclose(realize(net).batch(X)[:, 0], oracles.brute_one_norm(X), atol=1e-12)


@pytest.mark.parametrize("d", range(1, 17))
def test_mxm(d):
    net = mxm(d)
    c = math.ceil(math.log2(d)) if d > 1 else 0
    assert hid(net) == c and dep(net) == c + 1
    for i in range(1, c + 1):
        assert wid(net, i) <= 3 * math.ceil(d / 2**i)
    X = np.random.default_rng(d).normal(scale=5, size=(1000, d))
    np.testing.assert_allclose(realize(net).batch(X)[:, 0], oracles.brute_max(X), atol=1e-12)


def test_small_examples():
    assert realize(mxm(3)).eval([1.0, 2.0, 0.0])[0] == 2.0
    assert realize(nrm(2)).eval([-1.0, 1.0])[0] == 2.0
    assert param(mxm(2)) == 13


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 12))
@settings(max_examples=60, deadline=None)
def test_max_conv_matches_closed_form(seed, d, N):
    rng = np.random.default_rng(seed)
    s = SampleSet(rng.uniform(-2, 2, size=(N, d)), rng.normal(size=N), float(rng.uniform(0, 3)))
    Q = rng.uniform(-3, 3, size=(20, d))
    got = realize(max_conv(s)).batch(Q)[:, 0]
    want = [oracles.max_conv_value(s.points, s.values, s.L, q) for q in Q]
    np.testing.assert_allclose(got, want, atol=1e-10)
    np.testing.assert_allclose(max_conv_closed_form(s, Q), want, atol=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("N", range(2, 10))
def test_max_conv_structure(d, N):
    s = SampleSet(np.random.default_rng(N).uniform(size=(N, d)), np.zeros(N), 1.0)
    net = max_conv(s)
    assert wid(net, 1) == 2 * d * N
    assert hid(net) == math.ceil(math.log2(N)) + 1
    assert (inn(net), out(net)) == (d, 1)


def test_max_conv_interpolates_consistent_data():
    pts = np.array([[0.0], [0.4], [1.0]])
    s = SampleSet.from_function(lambda p: math.sin(p[0]), pts, 1.0)
    np.testing.assert_allclose(realize(max_conv(s)).batch(pts)[:, 0], s.values, atol=1e-12)


@pytest.mark.parametrize("N", [3, 5, 9])
def test_max_conv_abs_kink(N):
    xs = np.linspace(0, 1, N)
    s = SampleSet(xs[:, None], np.abs(xs - 0.5), 1.0)
    grid = np.linspace(0, 1, 2001)[:, None]
    v = realize(max_conv(s)).batch(grid)[:, 0]
    err = np.abs(v - np.abs(grid[:, 0] - 0.5)).max()
    assert err <= 1 / (N - 1)
    assert err <= max_conv_error_bound(s, MeshSpec(0.0, 1.0, 2000)) + 1e-12


def test_max_conv_smooth_target_converges():
    grid = np.linspace(0, 1, 2001)[:, None]
    f = lambda x: np.sin(3 * x) / 3
    errs = []
    for N in (3, 5, 9, 17, 33):
        xs = np.linspace(0, 1, N)
        s = SampleSet(xs[:, None], f(xs), 1.0)
        v = realize(max_conv(s)).batch(grid)[:, 0]
        errs.append(np.abs(v - f(grid[:, 0])).max())
        assert errs[-1] <= max_conv_error_bound(s, grid) + 1e-12
        assert np.all(v <= f(grid[:, 0]) + 1e-10)
    assert all(a > b for a, b in zip(errs, errs[1:]))


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_max_conv_is_lipschitz(seed):
    rng = np.random.default_rng(seed)
    d, N = int(rng.integers(1, 4)), int(rng.integers(1, 10))
    s = SampleSet(rng.uniform(-1, 1, size=(N, d)), rng.normal(size=N), float(rng.uniform(0.1, 3)))
    f = realize(max_conv(s))
    A, B = rng.uniform(-2, 2, size=(2, 50, d))
    gap = np.abs(f.batch(A)[:, 0] - f.batch(B)[:, 0]) - s.L * np.abs(A - B).sum(axis=1)
    assert gap.max() <= 1e-10


def test_fill_distance_and_box():
    s = SampleSet([[0.0, 0.0], [1.0, 1.0]], [0.0, 0.0], 2.0)
    box = Box((0.0, 0.0), (1.0, 1.0), 3)
    assert box.grid().shape == (9, 2)
    assert fill_distance(s, box) == 1.0
    assert max_conv_error_bound(s, box) == 4.0
    with pytest.raises(ValueError):
        fill_distance(s, np.zeros((3, 1)))


def test_sample_set_json_round_trip():
    s = SampleSet([[0.1, 0.2], [0.3, 0.4]], [1.0, -1.0], 0.5)
    data = json.loads(s.to_json())
    assert data == {"d": 2, "points": [[0.1, 0.2], [0.3, 0.4]], "values": [1.0, -1.0], "L": 0.5}
    back = SampleSet.from_json(s.to_json())
    assert np.array_equal(back.points, s.points) and back.L == s.L


@pytest.mark.parametrize("kwargs", [
    dict(points=[[0.0]], values=[1.0, 2.0], L=1.0),
    dict(points=[[0.0]], values=[1.0], L=-1.0),
    dict(points=[[np.nan]], values=[1.0], L=1.0),
])
def test_sample_set_rejects(kwargs):
    with pytest.raises(ValueError):
        SampleSet(**kwargs)


def test_declared_dimension_must_match():
    with pytest.raises(ValueError):
        SampleSet.from_dict({"d": 3, "points": [[0.0, 1.0]], "values": [0.0], "L": 1.0})
