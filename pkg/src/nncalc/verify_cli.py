"""Command-line front end: build, eval, sweep, verify, export and mc subcommands.

Verification suites live here too; each returns a list of ErrorReport records that
the ``verify`` subcommand prints as JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import algebra as alg
from . import approximants as apx
from . import interpolation as itp
from . import quadrature as quad
from .core import Activation, Network, dep, hid, inn, instantiate, lay, out, param, realize, wid

DEFAULT_Q = 2.5
DEFAULT_EPS = 0.01
DEFAULT_SEED = 20240601
QE_GRID = [(q, e) for q in (2.5, 3.0, 5.0) for e in (1e-1, 1e-2, 1e-3)]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# reports

@dataclass
class ErrorReport:
    name: str
    spec: dict
    grid: str = ""
    measured_sup_error: float | None = None
    bound_value: float | None = None
    passed: bool | None = None
    structural: dict = field(default_factory=dict)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "spec": self.spec,
            "grid": self.grid,
            "measured_sup_error": self.measured_sup_error,
            "bound_value": self.bound_value,
            "pass": self.passed,
            "structural": self.structural,
            "note": self.note,
        }


def _f(v) -> float | None:
    return None if v is None else float(v)


def pointwise(name, spec, grid, err, bound, slack=0.0, note="") -> ErrorReport:
    """Check err <= bound + slack pointwise; report the worst point (largest err - bound)."""
    err = np.atleast_1d(np.asarray(err, dtype=np.float64))
    bound = np.broadcast_to(np.asarray(bound, dtype=np.float64), err.shape)
    slack = np.broadcast_to(np.asarray(slack, dtype=np.float64), err.shape)
    gap = err - bound - slack
    i = int(np.argmax(gap))
    ok = bool(np.all(gap <= 0))
    return ErrorReport(
        name, spec, grid, _f(err[i]), _f(bound[i] + slack[i]), ok,
        {"sup_error": _f(err.max()), "points": int(err.size)}, note,
    )


def structural(name, spec, observed: dict, expected: dict, relation="==", note="") -> ErrorReport:
    """Exact integer comparisons; relation '<=' checks observed <= expected."""
    if relation == "==":
        ok = all(observed[k] == expected[k] for k in expected)
    else:
        ok = all(observed[k] <= expected[k] for k in expected)
    return ErrorReport(
        name, spec, passed=ok,
        structural={"observed": observed, "expected": expected, "relation": relation},
        note=note,
    )


def reported(name, spec, values: dict, note) -> ErrorReport:
    return ErrorReport(name, spec, passed=None, structural=values, note=note)


def shape_stats(net: Network) -> dict:
    return {
        "param": param(net), "dep": dep(net), "lay": list(lay(net)), "hid": hid(net),
        "inn": inn(net), "out": out(net), "wid_1": wid(net, 1), "wid_hid": wid(net, hid(net)),
    }


def random_network(rng: np.random.Generator, max_depth=4, max_width=6, n_in=None, n_out=None,
                   depth=None) -> Network:
    L = depth if depth is not None else int(rng.integers(1, max_depth + 1))
    widths = [int(w) for w in rng.integers(1, max_width + 1, size=L + 1)]
    if n_in is not None:
        widths[0] = n_in
    if n_out is not None:
        widths[-1] = n_out
    return Network([
        (rng.normal(size=(widths[k + 1], widths[k])), rng.normal(size=widths[k + 1]))
        for k in range(L)
    ])


def _rel(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    return np.abs(a - b) / np.maximum(1.0, np.abs(b))


# ---------------------------------------------------------------------------
# suites

def suite_core(seed: int) -> list[ErrorReport]:
    rng = np.random.default_rng(seed)
    reps = []
    examples = {
        "aff_1x1": param(alg.affine([[2.0]], [1.0])),
        "id_1": param(alg.identity_net(1)),
        "tun_3": param(alg.tunnel(3)),
    }
    reps.append(structural("core.param_examples", {}, examples, {"aff_1x1": 2, "id_1": 7, "tun_3": 13}))

    ok_stats, ok_contract, ok_json = True, True, True
    rel_err = []
    for _ in range(200):
        net = random_network(rng, max_depth=5, max_width=8)
        shapes = [l.weight.shape for l in net]
        widths = [shapes[0][1]] + [s[0] for s in shapes]
        ok_stats &= (
            param(net) == sum(r * (c + 1) for r, c in shapes)
            and dep(net) == len(shapes) and hid(net) == len(shapes) - 1
            and inn(net) == widths[0] and out(net) == widths[-1]
            and lay(net) == tuple(widths)
            and all(wid(net, i) == widths[i] for i in range(len(widths)))
            and wid(net, len(widths) + 4) == 0
        )
        f = instantiate(net, Activation.IDENTITY)
        ok_contract &= f.input_width == inn(net) and f.output_width == out(net)
        W = np.eye(inn(net))
        b = np.zeros(inn(net))
        for layer in net:
            W, b = layer.weight @ W, layer.weight @ b + layer.bias
        x = rng.normal(size=(5, inn(net)))
        rel_err.append(_rel(f.batch(x), x @ W.T + b).max())
        back = Network.from_json(net.to_json())
        ok_json &= back == net
    reps.append(ErrorReport("core.shape_statistics", {"nets": 200}, passed=bool(ok_stats)))
    reps.append(ErrorReport("core.realization_width_contract", {"nets": 200}, passed=bool(ok_contract)))
    reps.append(pointwise("core.identity_activation_oracle", {"nets": 200, "depth<=": 5, "width<=": 8},
                          "5 normal points per net", rel_err, 1e-9))
    reps.append(ErrorReport("core.json_round_trip_bit_exact", {"nets": 200}, passed=bool(ok_json)))
    return reps


def suite_algebra(seed: int) -> list[ErrorReport]:
    rng = np.random.default_rng(seed + 1)
    reps = []
    spec = {"nets": 200, "depth<=": 4, "width<=": 6}
    comp, stk, sums, left, right = [], [], [], [], []
    ok_dep, ok_lay, ok_param = True, True, True
    for _ in range(200):
        b = random_network(rng)
        a = random_network(rng, n_in=out(b))
        ab = alg.compose(a, b)
        ok_dep &= dep(ab) == dep(a) + dep(b) - 1 and hid(ab) == hid(a) + hid(b)
        ok_lay &= lay(ab) == lay(b)[:-1] + lay(a)[1:]
        ok_param &= param(ab) <= param(a) + param(b) + wid(a, 1) * wid(b, hid(b))
        x = rng.normal(size=(4, inn(b)))
        for act in Activation:
            fa, fb, fab = (instantiate(n, act) for n in (a, b, ab))
            comp.append(_rel(fab.batch(x), fa.batch(fb.batch(x))).max())

        L = int(rng.integers(1, 5))
        parts = [random_network(rng, depth=L) for _ in range(int(rng.integers(1, 4)))]
        st = alg.stack(parts)
        xs = [rng.normal(size=(3, inn(p))) for p in parts]
        want = np.concatenate([realize(p).batch(v) for p, v in zip(parts, xs)], axis=1)
        stk.append(_rel(realize(st).batch(np.concatenate(xs, axis=1)), want).max())

        k_in, k_out = int(rng.integers(1, 7)), int(rng.integers(1, 7))
        parts = [random_network(rng, depth=L, n_in=k_in, n_out=k_out) for _ in range(int(rng.integers(1, 4)))]
        x = rng.normal(size=(3, k_in))
        want = sum(realize(p).batch(x) for p in parts)
        sums.append(_rel(realize(alg.net_sum(parts)).batch(x), want).max())

        lam = float(rng.uniform(-4, 4))
        x = rng.normal(size=(3, inn(a)))
        left.append(_rel(realize(alg.scalar_left(lam, a)).batch(x), lam * realize(a).batch(x)).max())
        right.append(_rel(realize(alg.scalar_right(a, lam)).batch(x), realize(a).batch(lam * x)).max())

    grid = "random normal inputs, relative error |d|/max(1,|ref|)"
    reps.append(pointwise("algebra.compose_realization", spec, grid, comp, 1e-9))
    reps.append(pointwise("algebra.stack_blockwise", spec, grid, stk, 1e-9))
    reps.append(pointwise("algebra.sum_pointwise", spec, grid, sums, 1e-9))
    reps.append(pointwise("algebra.scalar_left", spec, grid, left, 1e-9))
    reps.append(pointwise("algebra.scalar_right", spec, grid, right, 1e-9))
    reps.append(ErrorReport("algebra.compose_depth_and_hid", spec, passed=bool(ok_dep)))
    reps.append(ErrorReport("algebra.compose_layer_architecture", spec, passed=bool(ok_lay)))
    reps.append(ErrorReport("algebra.compose_param_bound", spec, passed=bool(ok_param)))

    ns = range(2, 21)
    reps.append(structural(
        "algebra.tunnel_param", {"n": "2..20"},
        {n: param(alg.tunnel(n)) for n in ns}, {n: 7 + 6 * (n - 2) for n in ns},
    ))
    reps.append(structural(
        "algebra.tunnel_lay", {"n": "1..20"},
        {n: list(lay(alg.tunnel(n))) for n in range(1, 21)},
        {n: [1] + [2] * (n - 1) + [1] for n in range(1, 21)},
    ))
    xs = np.array([-2.0, 0.0, 3.5, -1e6, 1e-300, 7.25])
    errs = [np.abs(realize(alg.tunnel(n)).scalar(xs) - xs).max() for n in range(1, 21)]
    reps.append(pointwise("algebra.tunnel_is_identity", {"n": "1..20"}, str(xs.tolist()), errs, 0.0))
    reps.append(ErrorReport(
        "algebra.id2_is_stack_of_id1", {}, passed=alg.identity_net(2) == alg.stack([alg.identity_net(1)] * 2)))
    nets = [apx.pwr(i, apx.QEps(2.5, 0.1)) for i in range(3)]
    padded = alg.stack_padded(nets)
    top = max(dep(n) for n in nets)
    reps.append(structural("algebra.stack_padded_depth", {"nets": "Pwr_0..Pwr_2"},
                           {"dep": dep(padded)}, {"dep": top}))
    return reps


def suite_phi(seed: int) -> list[ErrorReport]:
    reps = []
    x = np.linspace(0.0, 1.0, 4097)
    for k in range(1, 9):
        net = apx.phi_k(k)
        f = realize(net)
        err = np.abs(x**2 - f.scalar(x))
        bound = apx.phi_error_bound(k)
        reps.append(pointwise(f"phi.phi_{k}.error", {"k": k}, "4097 uniform points on [0,1]", err, bound, 1e-15))
        mids = (2 * np.arange(2**k) + 1) / 2 ** (k + 1)
        mid_err = np.abs(mids**2 - f.scalar(mids))
        reps.append(pointwise(f"phi.phi_{k}.attained_at_midpoints", {"k": k}, "dyadic midpoints",
                              np.abs(mid_err - bound), 1e-12))
        nodes = np.linspace(0, 1, 2**k + 1)
        interp = np.interp(x, nodes, nodes**2)
        reps.append(pointwise(f"phi.phi_{k}.interpolant_oracle", {"k": k}, "4097 points",
                              np.abs(f.scalar(x) - interp), 1e-12))
        off = np.array([-10.0, -1.0, 1.0, 2.0, 10.0])
        reps.append(pointwise(f"phi.phi_{k}.relu_off_unit_interval", {"k": k}, str(off.tolist()),
                              np.abs(f.scalar(off) - np.maximum(off, 0)), 1e-12))
        reps.append(structural(f"phi.phi_{k}.shape", {"k": k},
                               {"param": param(net), "lay": list(lay(net)), "dep": dep(net)},
                               {"param": 20 * k - 7, "lay": [1] + [4] * k + [1], "dep": k + 1}))
    for eps in (2.0**-4, 2.0**-10, 1e-3, 1e-6, 0.5):
        M = apx.phi_depth(eps)
        net = apx.phi(eps)
        xs = np.linspace(0, 1, 10001)
        err = np.abs(xs**2 - realize(net).scalar(xs))
        target = eps if eps <= 2.0**-4 else 2.0**-4
        reps.append(pointwise(f"phi.phi_eps={eps!r}", {"eps": eps, "M": M}, "10001 points on [0,1]",
                              err, target, 1e-15,
                              note="" if eps <= 2.0**-4 else "eps >= 1/16: M clamps to 1, guarantee is 1/16"))
        reps.append(structural(f"phi.phi_eps={eps!r}.size", {"eps": eps},
                               {"param": param(net), "dep": dep(net)},
                               {"param": math.floor(apx.phi_param_bound(eps)) if eps <= 2.0**-4 else 13,
                                "dep": math.floor(apx.phi_dep_bound(eps)) if eps <= 2.0**-4 else 2},
                               relation="<="))
    return reps


def _sqr_radius(qe: apx.QEps) -> float:
    return 2.0 * (qe.eps / 2.0) ** (-1.0 / (qe.q - 2))


def suite_sqr(seed: int) -> list[ErrorReport]:
    reps = []
    for q, eps in QE_GRID:
        qe = apx.QEps(q, eps)
        net = apx.sqr(qe)
        f = realize(net)
        R = _sqr_radius(qe)
        x = np.linspace(-R, R, 8001)
        v = f.scalar(x)
        spec = {"q": q, "eps": eps}
        grid = f"8001 points on [-{R:.6g}, {R:.6g}]"
        fp = 1e-12 * (1.0 + x**2)  # float rounding at large |x|
        reps.append(pointwise(f"sqr[{q},{eps}].error", spec, grid,
                              np.abs(x**2 - v), eps * np.maximum(1.0, np.abs(x) ** q), fp))
        reps.append(pointwise(f"sqr[{q},{eps}].upper", spec, grid, v, eps + x**2, fp))
        reps.append(pointwise(f"sqr[{q},{eps}].nonnegative", spec, grid, -v, 0.0, fp))
        reps.append(pointwise(f"sqr[{q},{eps}].zero_at_zero", spec, "x=0", abs(f.scalar([0.0])[0]), 0.0))
        reps.append(pointwise(f"sqr[{q},{eps}].even", spec, grid, np.abs(v - f.scalar(-x)), fp))
        reps.append(structural(f"sqr[{q},{eps}].size", spec,
                               {"param": param(net), "dep": dep(net)},
                               {"param": apx.sqr_param_bound(qe), "dep": apx.sqr_dep_bound(qe)},
                               relation="<="))
    return reps


def suite_prd(seed: int) -> list[ErrorReport]:
    rng = np.random.default_rng(seed + 2)
    reps = []
    g = np.linspace(-3, 3, 61)
    X, Y = np.meshgrid(g, g)
    pts = np.column_stack([X.ravel(), Y.ravel()])
    for q, eps in QE_GRID:
        qe = apx.QEps(q, eps)
        net = apx.prd(qe)
        f = realize(net)
        v = f.batch(pts)[:, 0]
        x, y = pts[:, 0], pts[:, 1]
        spec = {"q": q, "eps": eps}
        grid = "61x61 grid on [-3,3]^2"
        bound = eps * np.maximum.reduce([np.ones_like(x), np.abs(x) ** q, np.abs(y) ** q])
        reps.append(pointwise(f"prd[{q},{eps}].error", spec, grid, np.abs(x * y - v), bound))
        reps.append(pointwise(f"prd[{q},{eps}].magnitude", spec, grid, np.abs(v), eps + 2 * x**2 + 2 * y**2))
        axis = np.concatenate([np.column_stack([g, 0 * g]), np.column_stack([0 * g, g]),
                               [[-1.0, 0.0], [0.3, 0.0], [7.0, 0.0]]])
        reps.append(pointwise(f"prd[{q},{eps}].axes_annihilate", spec, "axes of the grid plus x in {-1,0.3,7}",
                              np.abs(f.batch(axis)[:, 0]), 1e-12))
        reps.append(structural(f"prd[{q},{eps}].widths", spec,
                               {"inn": inn(net), "out": out(net), "wid_1": wid(net, 1),
                                "wid_hid": wid(net, hid(net))},
                               {"inn": 2, "out": 1, "wid_1": 24, "wid_hid": 24}))
        reps.append(structural(f"prd[{q},{eps}].size", spec,
                               {"param": param(net), "dep": dep(net)},
                               {"param": apx.prd_param_bound(qe), "dep": apx.prd_dep_bound(qe)},
                               relation="<="))
    # eps max{1,|x|^q,|y|^q} <= eps + eps|x|^q + eps|y|^q
    lhs, rhs = [], []
    for _ in range(1000):
        a, b = rng.normal(scale=5, size=2)
        q = float(rng.uniform(2.01, 8))
        e = float(10 ** rng.uniform(-8, 1))
        l, r = apx.product_bound_helper(a, b, q, e)
        lhs.append(l)
        rhs.append(r)
    reps.append(pointwise("prd.helper_inequality", {"samples": 1000}, "random (x,y,q,eps)", lhs, rhs))
    return reps


def suite_pwr(seed: int) -> list[ErrorReport]:
    reps = []
    x = np.linspace(-3, 3, 121)
    for q, eps in QE_GRID:
        qe = apx.QEps(q, eps)
        spec = {"q": q, "eps": eps}
        p0 = apx.pwr(0, qe)
        reps.append(pointwise(f"pwr[{q},{eps}].n0_constant", spec, "121 points on [-3,3]",
                              np.abs(realize(p0).scalar(x) - 1.0), 0.0))
        for n in range(1, 5):
            net = apx.pwr(n, qe)
            v = realize(net).scalar(x)
            err = np.abs(x**n - v)
            s = dict(spec, n=n)
            grid = "121 points on [-3,3]"
            reps.append(pointwise(f"pwr[{q},{eps}].n{n}.majorant", s, grid, np.abs(v), apx.p_bound(n, x, eps)))
            reps.append(pointwise(f"pwr[{q},{eps}].n{n}.recursion", s, grid, err,
                                  apx.pwr_step_bound(n, qe, x)))
            reps.append(pointwise(f"pwr[{q},{eps}].n{n}.recursion_tight", s, grid, err,
                                  apx.pwr_step_bound(n, qe, x, tight=True)))
            reps.append(structural(f"pwr[{q},{eps}].n{n}.widths", s,
                                   {"wid_1": wid(net, 1), "wid_hid": wid(net, hid(net))},
                                   {"wid_1": 24 + 2 * (n - 1), "wid_hid": 24}))
            reps.append(structural(f"pwr[{q},{eps}].n{n}.size", s,
                                   {"param": param(net), "dep": dep(net),
                                    "param_tunnel": param(alg.tunnel(dep(net)))},
                                   {"param": apx.pwr_param_bound(n, qe), "dep": apx.pwr_dep_bound(n, qe),
                                    "param_tunnel": param(net)},
                                   relation="<="))
    return reps


def suite_poly(seed: int) -> list[ErrorReport]:
    rng = np.random.default_rng(seed + 3)
    reps = []
    x = np.linspace(-2, 2, 101)
    coeff_sets = [(1.0,), (1.0, 1.0), (0.5, -1.0, 2.0), tuple(rng.uniform(-2, 2, size=4).round(6))]
    for q, eps in QE_GRID:
        qe = apx.QEps(q, eps)
        for cs in coeff_sets:
            n = len(cs) - 1
            net = apx.pnm(cs, qe)
            v = realize(net).scalar(x)
            ref = np.polynomial.polynomial.polyval(x, cs)
            s = {"q": q, "eps": eps, "coeffs": list(cs)}
            reps.append(pointwise(f"poly[{q},{eps}].pnm{list(cs)}.error", s, "101 points on [-2,2]",
                                  np.abs(ref - v), apx.pnm_error_bound(cs, qe, x), 1e-12))
            expect = {"wid_1": 2 + 23 * n + n * n} if n >= 1 else {"wid_1": 1}
            reps.append(structural(f"poly[{q},{eps}].pnm{list(cs)}.wid_1", s, {"wid_1": wid(net, 1)}, expect))
            reps.append(structural(f"poly[{q},{eps}].pnm{list(cs)}.size", s,
                                   {"param": param(net), "dep": dep(net)},
                                   {"param": apx.pnm_param_bound(n, qe), "dep": apx.pwr_dep_bound(n, qe)},
                                   relation="<="))
        zero = apx.pnm((0.0, 0.0, 0.0), qe)
        reps.append(pointwise(f"poly[{q},{eps}].zero_polynomial", {"q": q, "eps": eps}, "101 points",
                              np.abs(realize(zero).scalar(x)), 0.0))
    return reps


def suite_transcendental(seed: int) -> list[ErrorReport]:
    reps = []
    x = np.linspace(-2, 2, 101)
    xb = np.linspace(0, 1, 101)
    for q, eps in QE_GRID:
        qe = apx.QEps(q, eps)
        base = {"q": q, "eps": eps}
        for n in (1, 2, 3):
            s = dict(base, n=n)
            net = apx.xpn(n, qe)
            f = realize(net)
            poly = sum(x**i / math.factorial(i) for i in range(n + 1))
            reps.append(pointwise(f"xpn[{q},{eps}].n{n}.series", s, "101 points on [-2,2]",
                                  np.abs(poly - f.scalar(x)), apx.xpn_error_bound(n, qe, x), 1e-12))
            reps.append(pointwise(f"xpn[{q},{eps}].n{n}.exp_on_[0,1]", dict(s, b=1.0), "101 points on [0,1]",
                                  np.abs(np.exp(xb) - f.scalar(xb)),
                                  apx.xpn_error_bound(n, qe, xb) + apx.exp_remainder(n, 1.0)))
            reps.append(pointwise(f"xpn[{q},{eps}].n{n}.one_at_zero", s, "x=0",
                                  abs(f.scalar([0.0])[0] - 1.0), 1e-12))
            reps.append(structural(f"xpn[{q},{eps}].n{n}.shape", s,
                                   {"param": param(net), "dep": dep(net), "wid_hid": wid(net, hid(net))},
                                   {"param": apx.pnm_param_bound(n, qe), "dep": apx.pwr_dep_bound(n, qe),
                                    "wid_hid": 24 + 2 * n},
                                   relation="<="))
            reps.append(structural(f"xpn[{q},{eps}].n{n}.wid_1", s, {"wid_1": wid(net, 1)},
                                   {"wid_1": 2 + 23 * n + n * n}))
        for n in (1, 2):
            s = dict(base, n=n)
            cnet, snet = apx.csn(n, qe), apx.sne(n, qe)
            fc, fs = realize(cnet), realize(snet)
            cpoly = sum((-1) ** i * x ** (2 * i) / math.factorial(2 * i) for i in range(n + 1))
            reps.append(pointwise(f"csn[{q},{eps}].n{n}.series", s, "101 points on [-2,2]",
                                  np.abs(cpoly - fc.scalar(x)), apx.csn_error_bound(n, qe, x), 1e-12))
            t = x - math.pi / 2
            spoly = sum((-1) ** i * t ** (2 * i) / math.factorial(2 * i) for i in range(n + 1))
            reps.append(pointwise(f"sne[{q},{eps}].n{n}.series", s, "101 points on [-2,2]",
                                  np.abs(spoly - fs.scalar(x)), apx.sne_error_bound(n, qe, x), 1e-12))
            reps.append(pointwise(f"sne[{q},{eps}].n{n}.shifted_cosine", s, "101 points on [-2,2]",
                                  np.abs(fs.scalar(x) - fc.scalar(t)), 1e-12))
            reps.append(pointwise(f"csn[{q},{eps}].n{n}.cos_on_[0,1]", dict(s, b=1.0), "101 points on [0,1]",
                                  np.abs(np.cos(xb) - fc.scalar(xb)),
                                  apx.csn_error_bound(n, qe, xb) + apx.trig_remainder(n, 1.0)))
            reps.append(pointwise(f"sne[{q},{eps}].n{n}.sin_on_[0,1]", dict(s, b=1.0), "101 points on [0,1]",
                                  np.abs(np.sin(xb) - fs.scalar(xb)),
                                  apx.sne_error_bound(n, qe, xb) + apx.trig_remainder(n, 1.0)))
            reps.append(structural(f"csn[{q},{eps}].n{n}.size", s,
                                   {"param": param(cnet), "dep": dep(cnet),
                                    "param_sne": param(snet), "dep_sne": dep(snet)},
                                   {"param": apx.csn_param_bound(n, qe), "dep": apx.csn_dep_bound(n, qe),
                                    "param_sne": apx.csn_param_bound(n, qe), "dep_sne": apx.csn_dep_bound(n, qe)},
                                   relation="<="))
    return reps


@dataclass(frozen=True)
class Integrand:
    f: Callable[[np.ndarray], np.ndarray]
    f2_sup: Callable[[float, float], float]
    integral: Callable[[float, float], float]


INTEGRAND_TABLE = {
    "zero": Integrand(lambda x: 0.0 * x, lambda a, b: 0.0, lambda a, b: 0.0),
    "one": Integrand(lambda x: 0.0 * x + 1.0, lambda a, b: 0.0, lambda a, b: b - a),
    "x": Integrand(lambda x: x, lambda a, b: 0.0, lambda a, b: (b * b - a * a) / 2),
    "square": Integrand(lambda x: x * x, lambda a, b: 2.0, lambda a, b: (b**3 - a**3) / 3),
    "cos": Integrand(np.cos, lambda a, b: 1.0, lambda a, b: math.sin(b) - math.sin(a)),
}


def e_net_measure(name: str, n: int, mesh: quad.MeshSpec, qe: apx.QEps):
    """Return (measured error, combined bound, bound pieces) for E-net on a named integrand."""
    g = INTEGRAND_TABLE[name]
    vals = g.f(mesh.nodes)
    net = quad.e_net(n, mesh, qe)
    value = float(realize(net).eval(vals)[0])
    exact = g.integral(mesh.a, mesh.b)
    b = quad.e_net_error_bound(n, mesh, qe, vals, g.f2_sup(mesh.a, mesh.b), integral_sup=abs(exact))
    return abs(math.exp(exact) - value), b


def suite_quadrature(seed: int) -> list[ErrorReport]:
    rng = np.random.default_rng(seed + 4)
    reps = []
    t = quad.trp(0.5)
    reps.append(structural("quadrature.trp.shape", {"h": 0.5},
                           {"param": param(t), "dep": dep(t), "lay": list(lay(t))},
                           {"param": 3, "dep": 1, "lay": [2, 1]}))
    ex = [abs(realize(quad.trp(0.5)).eval([1, 1])[0] - 0.5), abs(realize(quad.trp(2.0)).eval([0, 3])[0] - 3.0)]
    reps.append(pointwise("quadrature.trp.examples", {}, "(1,1) at h=0.5; (0,3) at h=2", ex, 1e-12))
    errs = []
    for _ in range(200):
        N = int(rng.integers(1, 65))
        h = float(rng.uniform(0.01, 2))
        v = rng.normal(size=N + 1)
        direct = h / 2 * v[0] + sum(h * v[i] for i in range(1, N)) + h / 2 * v[N]
        errs.append(abs(realize(quad.etr(N, h)).eval(v)[0] - direct))
        if N == 1:
            errs.append(abs(realize(quad.etr(1, h)).eval(v)[0] - realize(quad.trp(h)).eval(v)[0]))
    reps.append(pointwise("quadrature.etr.direct_summation", {"cases": 200, "N<=": 64},
                          "random node values", errs, 1e-12))

    Ns = [2, 4, 8, 16, 32]
    terr = []
    for N in Ns:
        m = quad.MeshSpec(0.0, 1.0, N)
        terr.append(abs(realize(quad.etr(N, m.h)).eval(m.nodes**2)[0] - 1.0 / 3.0))
    reps.append(pointwise("quadrature.trapezoid_x2.error", {"N": Ns}, "[0,1]", terr,
                          [1.0 / (6 * N * N) for N in Ns], 1e-15))
    ratios = [terr[i] / terr[i + 1] for i in range(len(Ns) - 1)]
    reps.append(pointwise("quadrature.trapezoid_x2.ratio_per_doubling", {"N": Ns}, "[0,1]",
                          np.abs(np.array(ratios) - 4.0), 0.2,
                          note=f"observed ratios {ratios}"))

    qe = apx.QEps(2.5, 1e-4)
    table = {}
    for n in (2, 4, 6):
        for N in (2, 4, 8):
            m = quad.MeshSpec(0.0, 1.0, N)
            err, b = e_net_measure("one", n, m, qe)
            table[(n, N)] = err
            reps.append(pointwise(f"quadrature.e_net.one.n{n}.N{N}", {"n": n, "N": N, "q": 2.5, "eps": 1e-4},
                                  "f = 1 on [0,1]", err, b.total,
                                  note=f"trapezoid {b.trapezoid_term!r}, series {b.series_term!r}, "
                                       f"remainder {b.remainder_term!r}"))
    mono_N = [table[(n, N2)] - table[(n, N1)] for n in (2, 4, 6) for N1, N2 in ((2, 4), (4, 8))]
    mono_n = [table[(n2, N)] - table[(n1, N)] for N in (2, 4, 8) for n1, n2 in ((2, 4), (4, 6))]
    reps.append(pointwise("quadrature.e_net.one.nonincreasing_in_N", {"n": [2, 4, 6], "N": [2, 4, 8]},
                          "f = 1 on [0,1]", mono_N, 1e-12,
                          note="trapezoid is exact for f = 1, so errors are equal across N"))
    reps.append(pointwise("quadrature.e_net.one.decreasing_in_n", {"n": [2, 4, 6], "N": [2, 4, 8]},
                          "f = 1 on [0,1]", mono_n, 0.0))
    sq = [e_net_measure("square", 4, quad.MeshSpec(0.0, 1.0, N), qe)[0] for N in (2, 4, 8)]
    reps.append(pointwise("quadrature.e_net.square.decreasing_in_N", {"n": 4, "N": [2, 4, 8]},
                          "f = x^2 on [0,1]", np.diff(sq), 0.0, note=f"errors {sq}"))
    lin = [e_net_measure("x", 4, quad.MeshSpec(0.0, 1.0, N), qe)[0] for N in (2, 4, 8)]
    reps.append(pointwise("quadrature.e_net.x.nonincreasing_in_N", {"n": 4, "N": [2, 4, 8]},
                          "f = x on [0,1]", np.diff(lin), 1e-12,
                          note="trapezoid is exact for f = x, so errors are equal across N"))
    for n in (1, 3):
        m = quad.MeshSpec(0.0, 1.0, 8)
        err, b = e_net_measure("square", n, m, apx.QEps(3.0, 1e-2))
        reps.append(pointwise(f"quadrature.e_net.square.n{n}", {"n": n, "N": 8, "q": 3.0, "eps": 1e-2},
                              "f = x^2 on [0,1]", err, b.total))
    zero_err = []
    for n in (1, 3):
        m = quad.MeshSpec(-1.0, 2.0, 5)
        zero_err.append(abs(realize(quad.e_net(n, m, apx.QEps())).eval(np.zeros(6))[0] - 1.0))
    reps.append(pointwise("quadrature.e_net.zero_integrand", {}, "f = 0", zero_err, 1e-12))

    for n in (1, 2, 4):
        m = quad.MeshSpec(0.0, 1.0, 8)
        E = quad.e_net(n, m, qe)
        X = apx.xpn(n, qe)
        reps.append(structural(f"quadrature.e_net.n{n}.depth", {"n": n, "N": 8},
                               {"dep": dep(E), "inn": inn(E)}, {"dep": dep(X), "inn": 9}))
        reps.append(structural(f"quadrature.e_net.n{n}.size", {"n": n, "N": 8},
                               {"param": param(E), "dep": dep(E)},
                               {"param": (m.N / 2 + 1) * apx.pnm_param_bound(n, qe),
                                "dep": apx.pwr_dep_bound(n, qe)}, relation="<="))
        reps.append(reported(f"quadrature.e_net.n{n}.last_hidden_width", {"n": n},
                             {"dense": wid(E, hid(E)), "stated_1_plus_4n": 1 + 4 * n,
                              "xpn_bound_24_plus_2n": 24 + 2 * n},
                             "stated 1+4n disagrees with the built network; 24+2n matches"))
    for N in (1, 4, 16):
        e = quad.etr(N, 1.0 / N)
        reps.append(reported(f"quadrature.etr.N{N}.param", {"N": N},
                             {"dense_param": param(e), "stated_n_plus_2": N + 2,
                              "stated_lay": [N, 1], "dense_lay": list(lay(e)),
                              "param_if_lay_were_(N,1)": N + 1},
                             "N+1 inputs plus one bias give N+2 dense parameters; the stated "
                             "layer architecture (N,1) would give N+1"))
    return reps


def suite_interpolation(seed: int) -> list[ErrorReport]:
    rng = np.random.default_rng(seed + 5)
    reps = []
    for d in range(1, 10):
        net = itp.nrm(d)
        X = rng.normal(scale=10, size=(1000, d))
        reps.append(pointwise(f"interpolation.nrm{d}.one_norm", {"d": d}, "1000 random vectors",
                              np.abs(realize(net).batch(X)[:, 0] - np.abs(X).sum(axis=1)), 1e-12))
        reps.append(structural(f"interpolation.nrm{d}.shape", {"d": d},
                               {"lay": list(lay(net)), "hid": hid(net), "dep": dep(net)},
                               {"lay": [d, 2 * d, 1], "hid": 1, "dep": 2}))
        reps.append(structural(f"interpolation.nrm{d}.param_le_7d2", {"d": d}, {"param": param(net)},
                               {"param": 7 * d * d}, relation="<="))
        reps.append(reported(f"interpolation.nrm{d}.param_formulas", {"d": d},
                             {"dense": param(net), "dense_formula_2d2_4d_1": 2 * d * d + 4 * d + 1,
                              "stated_4d2_6d_1": 4 * d * d + 6 * d + 1, "stated_bound_7d2": 7 * d * d},
                             "main-text formula 4d^2+6d+1 does not match the dense count 2d^2+4d+1"))
    for d in range(1, 17):
        net = itp.mxm(d)
        X = rng.normal(scale=10, size=(1000, d))
        reps.append(pointwise(f"interpolation.mxm{d}.maximum", {"d": d}, "1000 random vectors",
                              np.abs(realize(net).batch(X)[:, 0] - X.max(axis=1)), 1e-12))
        c = math.ceil(math.log2(d)) if d > 1 else 0
        reps.append(structural(f"interpolation.mxm{d}.depth", {"d": d},
                               {"hid": hid(net), "dep": dep(net)}, {"hid": c, "dep": c + 1}))
        reps.append(structural(f"interpolation.mxm{d}.widths", {"d": d},
                               {i: wid(net, i) for i in range(1, hid(net) + 1)},
                               {i: 3 * math.ceil(d / 2**i) for i in range(1, hid(net) + 1)}, relation="<="))
        bound = math.ceil((2 / 3 * d * d + 3 * d) * (1 + 0.5 ** (2 * (c + 1))) + 1)
        reps.append(reported(f"interpolation.mxm{d}.param_bound", {"d": d},
                             {"dense": param(net), "stated_bound": bound, "holds": param(net) <= bound},
                             "stated parameter bound is reported only; it fails at d=2 (13 > 11)"))
    errs = []
    for _ in range(100):
        d = int(rng.integers(1, 4))
        N = int(rng.integers(1, 17))
        s = itp.SampleSet(rng.uniform(-2, 2, size=(N, d)), rng.normal(size=N), float(rng.uniform(0, 3)))
        Q = rng.uniform(-3, 3, size=(50, d))
        errs.append(np.abs(realize(itp.max_conv(s)).batch(Q)[:, 0] - itp.max_conv_closed_form(s, Q)).max())
    reps.append(pointwise("interpolation.mc.closed_form", {"sample_sets": 100, "d<=": 3, "N<=": 16},
                          "50 random query points per set", errs, 1e-10))
    obs, exp = {}, {}
    for d in (1, 2, 3):
        for N in range(2, 10):
            s = itp.SampleSet(rng.uniform(size=(N, d)), rng.normal(size=N), 1.0)
            net = itp.max_conv(s)
            obs[f"{d},{N}"] = [wid(net, 1), hid(net), inn(net), out(net)]
            exp[f"{d},{N}"] = [2 * d * N, math.ceil(math.log2(N)) + 1, d, 1]
    reps.append(structural("interpolation.mc.structure", {"d": [1, 2, 3], "N": "2..9"}, obs, exp,
                           note="[wid_1, hid, inn, out]"))

    grid = np.linspace(0, 1, 2001)[:, None]
    for label, fn in (("abs", lambda x: np.abs(x - 0.5)), ("sin", lambda x: np.sin(3 * x) / 3)):
        prev = None
        for N in (3, 5, 9, 17):
            s = itp.SampleSet(np.linspace(0, 1, N)[:, None], fn(np.linspace(0, 1, N)), 1.0)
            v = realize(itp.max_conv(s)).batch(grid)[:, 0]
            fv = fn(grid[:, 0])
            err = float(np.abs(v - fv).max())
            bound = itp.max_conv_error_bound(s, grid)
            spec = {"f": label, "N": N, "L": 1.0}
            reps.append(pointwise(f"interpolation.mc.{label}.N{N}.error", spec, "2001 points on [0,1]",
                                  err, bound, 1e-12))
            reps.append(pointwise(f"interpolation.mc.{label}.N{N}.majorant", spec, "2001 points on [0,1]",
                                  v - fv, 0.0, 1e-10))
            if prev is not None and label == "abs":
                reps.append(pointwise(f"interpolation.mc.{label}.N{N}.refinement_ratio", spec,
                                      "2001 points on [0,1]", err, 0.6 * prev, 1e-12,
                                      note=f"previous error {prev!r}"))
            elif prev is not None:
                reps.append(reported(f"interpolation.mc.{label}.N{N}.refinement_ratio", spec,
                                     {"error": err, "previous_error": prev, "ratio": err / prev},
                                     "halving h roughly halves the error; no fixed ratio is claimed"))
            prev = err
    lips = []
    for _ in range(20):
        d = int(rng.integers(1, 4))
        N = int(rng.integers(1, 12))
        L = float(rng.uniform(0.1, 3))
        s = itp.SampleSet(rng.uniform(-1, 1, size=(N, d)), rng.normal(size=N), L)
        f = realize(itp.max_conv(s))
        A, B = rng.uniform(-2, 2, size=(2, 200, d))
        lips.append((np.abs(f.batch(A)[:, 0] - f.batch(B)[:, 0]) - L * np.abs(A - B).sum(axis=1)).max())
    reps.append(pointwise("interpolation.mc.lipschitz", {"sample_sets": 20}, "200 random pairs per set",
                          lips, 0.0, 1e-10))
    const = itp.SampleSet(rng.uniform(size=(6, 2)), np.full(6, 1.5), 0.0)
    Q = rng.uniform(size=(200, 2))
    reps.append(pointwise("interpolation.mc.constant_function", {"L": 0.0}, "200 random points",
                          np.abs(realize(itp.max_conv(const)).batch(Q)[:, 0] - 1.5), 0.0, 1e-12))
    return reps


SUITES: dict[str, Callable[[int], list[ErrorReport]]] = {
    "core": suite_core,
    "algebra": suite_algebra,
    "phi": suite_phi,
    "sqr": suite_sqr,
    "prd": suite_prd,
    "pwr": suite_pwr,
    "poly": suite_poly,
    "transcendental": suite_transcendental,
    "quadrature": suite_quadrature,
    "interpolation": suite_interpolation,
}


def run_suite(name: str, seed: int = DEFAULT_SEED) -> list[ErrorReport]:
    if name == "all":
        return [r for s in SUITES.values() for r in s(seed)]
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return SUITES[name](seed)


# ---------------------------------------------------------------------------
# command line

KINDS = ("aff", "cpy", "sm", "id", "tun", "act", "phi_k", "phi", "sqr", "prd", "pwr", "pnm",
         "xpn", "csn", "sne", "trp", "etr", "e_net", "nrm", "mxm", "mc")


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.replace(" ", "").split(",") if t]


def _matrix(text: str) -> np.ndarray:
    rows = [_floats(r) for r in text.split(";")]
    if len({len(r) for r in rows}) != 1:
        raise UsageError("matrix rows must have equal length")
    return np.array(rows)


def _need(args, name: str, what: str):
    v = getattr(args, name, None)
    if v is None:
        raise UsageError(f"{what} requires --{name}")
    return v


def _positive_int(args, name, what) -> int:
    v = _need(args, name, what)
    if v < 1:
        raise UsageError(f"{what}: --{name} must be >= 1")
    return v


def _qeps(args) -> apx.QEps:
    if args.q <= 2:
        raise UsageError(f"q must exceed 2 (got {args.q})")
    if args.eps <= 0:
        raise UsageError(f"eps must be positive (got {args.eps})")
    return apx.QEps(args.q, args.eps)


def _mesh(args, what) -> quad.MeshSpec:
    a = _need(args, "a", what)
    b = _need(args, "b", what)
    N = _positive_int(args, "N", what)
    if not b > a:
        raise UsageError(f"{what}: need b > a")
    return quad.MeshSpec(a, b, N)


def load_samples(path: str) -> itp.SampleSet:
    try:
        return itp.SampleSet.from_json(Path(path).read_text())
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read sample set {path}: {exc}") from exc


def build_network(kind: str, args) -> Network:
    if kind == "aff":
        W = _matrix(_need(args, "weights", "aff"))
        b = _floats(args.bias) if args.bias else None
        if b is not None and len(b) != W.shape[0]:
            raise UsageError("aff: bias length must equal the number of weight rows")
        return alg.affine(W, b)
    if kind in ("cpy", "sm"):
        n, k = _positive_int(args, "n", kind), _positive_int(args, "k", kind)
        return alg.cpy(n, k) if kind == "cpy" else alg.sm(n, k)
    if kind == "id":
        return alg.identity_net(_positive_int(args, "d", kind))
    if kind == "tun":
        return alg.tunnel(_positive_int(args, "n", kind))
    if kind == "act":
        return apx.act_net(_positive_int(args, "d", kind))
    if kind == "phi_k":
        return apx.phi_k(_positive_int(args, "k", kind))
    if kind == "phi":
        if args.eps <= 0:
            raise UsageError("eps must be positive")
        return apx.phi(args.eps)
    if kind == "sqr":
        return apx.sqr(_qeps(args))
    if kind == "prd":
        return apx.prd(_qeps(args))
    if kind in ("pwr", "xpn", "csn", "sne"):
        qe = _qeps(args)
        n = _need(args, "n", kind)
        if n < 0:
            raise UsageError(f"{kind}: --n must be >= 0")
        return {"pwr": apx.pwr, "xpn": apx.xpn, "csn": apx.csn, "sne": apx.sne}[kind](n, qe)
    if kind == "pnm":
        qe = _qeps(args)
        return apx.pnm(_floats(_need(args, "coeffs", kind)), qe)
    if kind == "trp":
        h = _need(args, "h", kind)
        if h <= 0:
            raise UsageError("trp: --h must be positive")
        return quad.trp(h)
    if kind == "etr":
        if args.h is not None:
            if args.h <= 0:
                raise UsageError("etr: --h must be positive")
            return quad.etr(_positive_int(args, "N", kind), args.h)
        m = _mesh(args, kind)
        return quad.etr(m.N, m.h)
    if kind == "e_net":
        qe = _qeps(args)
        n = _need(args, "n", kind)
        if n < 0:
            raise UsageError("e_net: --n must be >= 0")
        return quad.e_net(n, _mesh(args, kind), qe)
    if kind == "nrm":
        return itp.nrm(_positive_int(args, "d", kind))
    if kind == "mxm":
        return itp.mxm(_positive_int(args, "d", kind))
    if kind == "mc":
        return itp.max_conv(load_samples(_need(args, "samples", kind)))
    raise UsageError(f"unknown network kind {kind!r}")


def stats_text(net: Network) -> str:
    lines = [
        f"param={param(net)}",
        f"dep={dep(net)}",
        "lay=(" + ",".join(str(w) for w in lay(net)) + ")",
        f"hid={hid(net)}",
        f"inn={inn(net)}",
        f"out={out(net)}",
    ]
    return "\n".join(lines) + "\n"


def _emit(text: str, out_path: str | None, stdout) -> None:
    if out_path:
        with open(out_path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def load_network(path: str) -> Network:
    try:
        return Network.from_json(Path(path).read_text())
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read network {path}: {exc}") from exc


def _parse_point(values: list[str], width: int) -> np.ndarray:
    flat = []
    for v in values:
        flat.extend(_floats(v))
    if len(flat) != width:
        raise UsageError(f"network expects {width} inputs, got {len(flat)}")
    return np.array(flat)


def format_eval(y: np.ndarray) -> str:
    return "".join(f"{v:.17g}\n" for v in y)


def cmd_build(args, stdout) -> int:
    net = build_network(args.kind, args)
    path = args.out or f"{args.kind}.json"
    Path(path).write_text(net.to_json() + "\n")
    stdout.write(stats_text(net))
    return 0


def cmd_export(args, stdout) -> int:
    net = build_network(args.kind, args)
    _emit(net.to_json() + "\n", args.out, stdout)
    return 0


def cmd_eval(args, stdout) -> int:
    net = load_network(args.network)
    x = _parse_point(args.x, inn(net))
    _emit(format_eval(realize(net).eval(x)), args.out, stdout)
    return 0


REFERENCES = ("identity", "square", "product", "power", "poly", "exp", "cos", "sin",
              "exp-integral", "max-conv")


def _reference_fn(args, kind):
    ref = args.reference
    if ref == "identity":
        return lambda X: X[:, 0]
    if ref == "square":
        return lambda X: X[:, 0] ** 2
    if ref == "product":
        return lambda X: X[:, 0] * X[:, 1]
    if ref == "power":
        n = _need(args, "n", "power reference")
        return lambda X: X[:, 0] ** n
    if ref == "poly":
        cs = _floats(_need(args, "coeffs", "poly reference"))
        return lambda X: np.polynomial.polynomial.polyval(X[:, 0], cs)
    if ref in ("exp", "cos", "sin"):
        fn = getattr(np, ref)
        return lambda X: fn(X[:, 0])
    if ref == "max-conv":
        s = load_samples(_need(args, "samples", "max-conv reference"))
        return lambda X: itp.max_conv_closed_form(s, X)
    raise UsageError(f"unknown reference {ref!r}; choose from {', '.join(REFERENCES)}")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def cmd_sweep(args, stdout) -> int:
    if args.reference not in REFERENCES:
        raise UsageError(f"unknown reference {args.reference!r}; choose from {', '.join(REFERENCES)}")
    if args.reference == "exp-integral":
        return _sweep_quadrature(args, stdout)
    net = build_network(args.kind, args)
    ref = _reference_fn(args, args.kind)
    d = inn(net)
    if d > 2:
        raise UsageError("sweep supports networks with 1 or 2 inputs")
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    axis = np.linspace(args.lo, args.hi, args.points)
    if d == 1:
        X = axis[:, None]
    else:
        A, B = np.meshgrid(axis, axis, indexing="ij")
        X = np.column_stack([A.ravel(), B.ravel()])
    got = realize(net).batch(X)[:, 0]
    want = ref(X)
    err = np.abs(got - want)
    names = ["x"] if d == 1 else ["x1", "x2"]
    rows = [list(map(float, X[i])) + [float(got[i]), float(want[i]), float(err[i])] for i in range(len(X))]
    rows.append(["sup"] + [""] * (d + 1) + [float(err.max())])
    _emit(_csv_text(names + ["net_value", "reference_value", "abs_error"], rows), args.out, stdout)
    return 0


def _sweep_quadrature(args, stdout) -> int:
    qe = _qeps(args)
    name = args.integrand
    if name not in INTEGRAND_TABLE:
        raise UsageError(f"unknown integrand {name!r}; choose from {sorted(INTEGRAND_TABLE)}")
    a = args.a if args.a is not None else 0.0
    b = args.b if args.b is not None else 1.0
    if not b > a:
        raise UsageError("need b > a")
    Ns = [int(v) for v in _floats(args.Ns)] if args.Ns else [_positive_int(args, "N", "exp-integral")]
    ns = [int(v) for v in _floats(args.ns)] if args.ns else [_need(args, "n", "exp-integral")]
    rows = []
    for n in ns:
        for N in Ns:
            if N < 1 or n < 0:
                raise UsageError("need N >= 1 and n >= 0")
            err, bound = e_net_measure(name, n, quad.MeshSpec(a, b, N), qe)
            rows.append([N, n, float(qe.q), float(qe.eps), float(err), float(bound.total)])
    _emit(_csv_text(["N", "n", "q", "eps", "measured_error", "bound"], rows), args.out, stdout)
    return 0


def reports_json(reps: list[ErrorReport]) -> str:
    return json.dumps([r.to_dict() for r in reps], indent=1, allow_nan=False) + "\n"


def cmd_verify(args, stdout) -> int:
    reps = run_suite(args.suite, args.seed)
    _emit(reports_json(reps), args.out, stdout)
    return 1 if any(r.passed is False for r in reps) else 0


def mc_reports(s: itp.SampleSet, seed: int, lo=None, hi=None, points=None) -> list[ErrorReport]:
    rng = np.random.default_rng(seed)
    net = itp.max_conv(s)
    f = realize(net)
    lower = s.points.min(axis=0) if lo is None else np.full(s.d, lo)
    upper = s.points.max(axis=0) if hi is None else np.full(s.d, hi)
    per_axis = points or (2001 if s.d == 1 else 41)
    grid = itp.Box(tuple(lower), tuple(upper), per_axis).grid()
    spec = {"d": s.d, "N": s.N, "L": s.L}
    desc = f"{per_axis} points per axis on [{lower.tolist()}, {upper.tolist()}]"
    reps = [
        pointwise("mc.closed_form", spec, desc,
                  np.abs(f.batch(grid)[:, 0] - itp.max_conv_closed_form(s, grid)), 1e-10),
        structural("mc.structure", spec,
                   {"inn": inn(net), "out": out(net), "wid_1": wid(net, 1), "hid": hid(net)},
                   {"inn": s.d, "out": 1, "wid_1": 2 * s.d * s.N, "hid": math.ceil(math.log2(s.N)) + 1}),
    ]
    A = rng.uniform(lower, upper, size=(200, s.d))
    B = rng.uniform(lower, upper, size=(200, s.d))
    gap = np.abs(f.batch(A)[:, 0] - f.batch(B)[:, 0]) - s.L * np.abs(A - B).sum(axis=1)
    reps.append(pointwise("mc.lipschitz", spec, "200 random pairs in the box", gap, 0.0, 1e-10))
    reps.append(reported("mc.error_bound", spec,
                         {"fill_distance": itp.fill_distance(s, grid),
                          "bound_2L_fill": itp.max_conv_error_bound(s, grid)},
                         "holds for any L-Lipschitz f consistent with the samples"))
    return reps


def cmd_mc(args, stdout) -> int:
    s = load_samples(args.samples)
    if args.action == "build":
        net = itp.max_conv(s)
        if args.out:
            Path(args.out).write_text(net.to_json() + "\n")
        stdout.write(stats_text(net))
        return 0
    if args.action == "eval":
        x = _parse_point(args.x, s.d)
        _emit(format_eval(realize(itp.max_conv(s)).eval(x)), args.out, stdout)
        return 0
    reps = mc_reports(s, args.seed, args.lo, args.hi, args.points)
    _emit(reports_json(reps), args.out, stdout)
    return 1 if any(r.passed is False for r in reps) else 0


def _add_globals(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--q", type=float, default=d(DEFAULT_Q), help="q > 2 (default 2.5)")
    p.add_argument("--eps", type=float, default=d(DEFAULT_EPS), help="accuracy eps > 0 (default 0.01)")
    p.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="seed for random suites")
    p.add_argument("--out", default=d(None), help="output file (default: stdout)")


def _add_kind_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--h", type=float)
    p.add_argument("--N", type=int)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--coeffs", help="comma-separated c_0,...,c_n")
    p.add_argument("--weights", help="matrix rows separated by ';', entries by ','")
    p.add_argument("--bias", help="comma-separated bias")
    p.add_argument("--samples", help="SampleSet JSON file")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nncalc", description="ReLU network calculus toolkit")
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a network, write JSON, print its statistics")
    _add_kind_options(p)
    _add_globals(p, suppress=True)

    p = sub.add_parser("export", help="print a network as JSON")
    _add_kind_options(p)
    _add_globals(p, suppress=True)

    p = sub.add_parser("eval", help="evaluate a network JSON at one input vector")
    p.add_argument("network")
    p.add_argument("x", nargs="+", help="input values (space or comma separated)")
    _add_globals(p, suppress=True)

    p = sub.add_parser("sweep", help="compare a network against a reference function on a grid")
    _add_kind_options(p)
    p.add_argument("--reference", required=True)
    p.add_argument("--lo", type=float, default=-1.0)
    p.add_argument("--hi", type=float, default=1.0)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--integrand", default="one", help="exp-integral: " + ", ".join(INTEGRAND_TABLE))
    p.add_argument("--Ns", help="exp-integral: comma-separated mesh sizes")
    p.add_argument("--ns", help="exp-integral: comma-separated Taylor degrees")
    _add_globals(p, suppress=True)

    p = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    _add_globals(p, suppress=True)

    p = sub.add_parser("mc", help="max-convolution networks from a SampleSet JSON")
    p.add_argument("action", choices=("build", "eval", "verify"))
    p.add_argument("samples")
    p.add_argument("x", nargs="*")
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)
    p.add_argument("--points", type=int)
    _add_globals(p, suppress=True)
    return parser


COMMANDS = {
    "build": cmd_build, "export": cmd_export, "eval": cmd_eval, "sweep": cmd_sweep,
    "verify": cmd_verify, "mc": cmd_mc,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, stdout)
    except UsageError as exc:
        stderr.write(f"nncalc: error: {exc}\n")
        return 2
    except ValueError as exc:
        stderr.write(f"nncalc: error: {exc}\n")
        return 2


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
