import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nncalc import approximants as apx
from nncalc.algebra import tunnel
from nncalc.core import dep, hid, inn, lay, out, param, realize, wid
import oracles

QE = [(q, e) for q in (2.5, 3.0, 5.0) for e in (1e-1, 1e-2, 1e-3)]


def test_act_net_is_relu():
    x = np.array([-2.0, 0.0, 3.0])
    np.testing.assert_array_equal(realize(apx.act_net(3)).eval(x), [0, 0, 3])


@pytest.mark.parametrize("k", range(1, 9))
def test_phi_k_matches_interpolant(k):
    net = apx.phi_k(k)
    assert param(net) == 20 * k - 7
    assert lay(net) == (1,) + (4,) * k + (1,)
    x = np.linspace(-0.5, 1.5, 4097)
    np.testing.assert_allclose(realize(net).scalar(x), oracles.square_interpolant(x, k), atol=1e-12)


@pytest.mark.parametrize("k", range(1, 9))
def test_phi_k_error_is_attained(k):
    f = realize(apx.phi_k(k))
    x = np.linspace(0, 1, 4097)
    err = np.abs(x**2 - f.scalar(x))
    assert err.max() <= 2.0 ** (-2 * k - 2) + 1e-15
    mids = (2 * np.arange(2**k) + 1) / 2 ** (k + 1)
    np.testing.assert_allclose(f.scalar(mids) - mids**2, 2.0 ** (-2 * k - 2), atol=1e-12)


@pytest.mark.parametrize("eps,M", [(2.0**-4, 1), (2.0**-6, 2), (1e-3, 4), (1e-6, 9), (0.5, 1)])
def test_phi_depth(eps, M):
    assert apx.phi_depth(eps) == M
    if eps <= 2.0**-4:
        assert apx.phi_error_bound(M) <= eps


def test_qeps_validation():
    with pytest.raises(ValueError, match="q must exceed 2"):
        apx.QEps(2.0, 0.1)
    with pytest.raises(ValueError):
        apx.QEps(3.0, 0.0)


@pytest.mark.parametrize("q,eps", QE)
def test_sqr_against_oracle_and_bounds(q, eps):
    qe = apx.QEps(q, eps)
    net = apx.sqr(qe)
    R = 2 * (eps / 2) ** (-1 / (q - 2))
    x = np.linspace(-R, R, 4001)
    v = realize(net).scalar(x)
    np.testing.assert_allclose(v, oracles.sqr_value(x, q, eps), rtol=1e-12, atol=1e-12)
    slack = 1e-12 * (1 + x**2)
    assert np.all(np.abs(x**2 - v) <= eps * np.maximum(1, np.abs(x) ** q) + slack)
    assert np.all(v >= -slack) and np.all(v <= eps + x**2 + slack)
    assert realize(net).scalar([0.0])[0] == 0.0
    assert param(net) <= apx.sqr_param_bound(qe) and dep(net) <= apx.sqr_dep_bound(qe)


@given(st.floats(2.05, 8), st.floats(1e-6, 0.5), st.floats(-1e3, 1e3))
@settings(max_examples=100, deadline=None)
def test_sqr_bound_property(q, eps, x):
    v = realize(apx.sqr(apx.QEps(q, eps))).scalar([x])[0]
    assert abs(x * x - v) <= eps * max(1.0, abs(x) ** q) * (1 + 1e-12) + 1e-12


@pytest.mark.parametrize("q,eps", QE)
def test_prd_against_oracle_and_bounds(q, eps):
    qe = apx.QEps(q, eps)
    net = apx.prd(qe)
    g = np.linspace(-3, 3, 31)
    X, Y = (a.ravel() for a in np.meshgrid(g, g))
    v = realize(net).batch(np.column_stack([X, Y]))[:, 0]
    np.testing.assert_allclose(v, oracles.prd_value(X, Y, q, eps), rtol=1e-12, atol=1e-12)
    assert np.all(np.abs(X * Y - v) <= eps * np.maximum.reduce([np.ones_like(X), np.abs(X) ** q, np.abs(Y) ** q]))
    assert np.all(np.abs(v) <= eps + 2 * X**2 + 2 * Y**2)
    assert (inn(net), out(net), wid(net, 1), wid(net, hid(net))) == (2, 1, 24, 24)
    assert param(net) <= apx.prd_param_bound(qe) and dep(net) <= apx.prd_dep_bound(qe)


@given(st.floats(-50, 50))
@settings(max_examples=50, deadline=None)
def test_prd_vanishes_on_axes(t):
    f = realize(apx.prd(apx.QEps(2.5, 0.01)))
    assert abs(f.eval([t, 0.0])[0]) <= 1e-12
    assert abs(f.eval([0.0, t])[0]) <= 1e-12


@pytest.mark.parametrize("q,eps", QE)
@pytest.mark.parametrize("n", range(1, 6))
def test_pwr(q, eps, n):
    qe = apx.QEps(q, eps)
    net = apx.pwr(n, qe)
    x = np.linspace(-3, 3, 61)
    v = realize(net).scalar(x)
    np.testing.assert_allclose(v, oracles.pwr_value(n, x, q, eps), rtol=1e-10, atol=1e-10)
    assert wid(net, 1) == 24 + 2 * (n - 1) and wid(net, hid(net)) == 24
    assert dep(net) <= apx.pwr_dep_bound(n, qe) and param(net) <= apx.pwr_param_bound(n, qe)
    assert param(tunnel(dep(net))) <= param(net)
    if n <= 4:
        assert np.all(np.abs(v) <= apx.p_bound(n, x, eps))
        err = np.abs(x**n - v)
        assert np.all(err <= apx.pwr_step_bound(n, qe, x, tight=True))
        assert np.all(err <= apx.pwr_step_bound(n, qe, x))


def test_pwr_zero_is_constant_one():
    net = apx.pwr(0, apx.QEps())
    np.testing.assert_array_equal(realize(net).scalar([-4.0, 0.0, 9.0]), [1, 1, 1])


def test_p_bound_recursion():
    assert apx.p_bound(0, 2.0, 0.1) == 1.0
    assert apx.p_bound(1, 2.0, 0.1) == pytest.approx(0.1 + 2 + 8)
    assert apx.p_bound(2, 0.0, 0.1) == pytest.approx(0.1 + 2 * 2.1**2)


@pytest.mark.parametrize("coeffs", [(2.0,), (1.0, -1.0), (0.5, -1.0, 2.0), (0.25, 0.0, -1.5, 0.75)])
@pytest.mark.parametrize("q,eps", [(2.5, 1e-2), (3.0, 1e-3), (5.0, 1e-1)])
def test_pnm(coeffs, q, eps):
    qe = apx.QEps(q, eps)
    net = apx.pnm(coeffs, qe)
    n = len(coeffs) - 1
    x = np.linspace(-2, 2, 101)
    v = realize(net).scalar(x)
    oracle = oracles.series_value(coeffs, range(n + 1), x, q, eps)
    np.testing.assert_allclose(v, oracle, rtol=1e-10, atol=1e-10)
    ref = np.polynomial.polynomial.polyval(x, coeffs)
    assert np.all(np.abs(ref - v) <= apx.pnm_error_bound(coeffs, qe, x) + 1e-12)
    if n >= 1:
        assert wid(net, 1) == 2 + 23 * n + n * n
        assert param(net) <= apx.pnm_param_bound(n, qe) and dep(net) <= apx.pwr_dep_bound(n, qe)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_xpn(n):
    qe = apx.QEps(2.5, 1e-3)
    x = np.linspace(-2, 2, 101)
    f = realize(apx.xpn(n, qe))
    np.testing.assert_allclose(f.scalar(x), oracles.exp_series_value(n, x, 2.5, 1e-3), rtol=1e-10, atol=1e-10)
    poly = sum(x**i / math.factorial(i) for i in range(n + 1))
    assert np.all(np.abs(poly - f.scalar(x)) <= apx.xpn_error_bound(n, qe, x) + 1e-12)
    xb = np.linspace(0, 1, 101)
    assert np.all(np.abs(np.exp(xb) - f.scalar(xb))
                  <= apx.xpn_error_bound(n, qe, xb) + apx.exp_remainder(n, 1.0))
    assert abs(f.scalar([0.0])[0] - 1) <= 1e-12


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("q,eps", [(2.5, 1e-2), (3.0, 1e-3)])
def test_csn_and_sne(n, q, eps):
    qe = apx.QEps(q, eps)
    x = np.linspace(-2, 2, 101)
    c, s = realize(apx.csn(n, qe)), realize(apx.sne(n, qe))
    np.testing.assert_allclose(c.scalar(x), oracles.cos_series_value(n, x, q, eps), rtol=1e-10, atol=1e-10)
    cpoly = sum((-1) ** i * x ** (2 * i) / math.factorial(2 * i) for i in range(n + 1))
    assert np.all(np.abs(cpoly - c.scalar(x)) <= apx.csn_error_bound(n, qe, x) + 1e-12)
    t = x - math.pi / 2
    np.testing.assert_allclose(s.scalar(x), c.scalar(t), atol=1e-12)
    spoly = sum((-1) ** i * t ** (2 * i) / math.factorial(2 * i) for i in range(n + 1))
    assert np.all(np.abs(spoly - s.scalar(x)) <= apx.sne_error_bound(n, qe, x) + 1e-12)
    xb = np.linspace(0, 1, 51)
    assert np.all(np.abs(np.cos(xb) - c.scalar(xb)) <= apx.csn_error_bound(n, qe, xb) + apx.trig_remainder(n, 1))
    assert np.all(np.abs(np.sin(xb) - s.scalar(xb)) <= apx.sne_error_bound(n, qe, xb) + apx.trig_remainder(n, 1))
    assert dep(apx.csn(n, qe)) <= apx.csn_dep_bound(n, qe)
    assert param(apx.sne(n, qe)) <= apx.csn_param_bound(n, qe)


def test_remainders():
    assert apx.exp_remainder(2, 1.0) == pytest.approx(math.e / 6)
    assert apx.trig_remainder(3, 2.0) == pytest.approx(16 / 24)
    assert apx.cos_taylor_remainder(1, 1.0) == pytest.approx(1 / 24)


@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(2.01, 9), st.floats(1e-9, 10))
@settings(max_examples=200, deadline=None)
def test_product_helper_inequality(x, y, q, eps):
    lhs, rhs = apx.product_bound_helper(x, y, q, eps)
    assert lhs <= rhs * (1 + 1e-15)


@pytest.mark.parametrize("q,eps", QE)
def test_series_size_bounds_up_to_five(q, eps):
    qe = apx.QEps(q, eps)
    for n in range(1, 6):
        X = apx.xpn(n, qe)
        assert dep(X) <= apx.pwr_dep_bound(n, qe) and param(X) <= apx.pnm_param_bound(n, qe)
        assert wid(X, 1) == 2 + 23 * n + n * n
    for n in (1, 2):
        C = apx.csn(n, qe)
        assert dep(C) <= apx.csn_dep_bound(n, qe) and param(C) <= apx.csn_param_bound(n, qe)
