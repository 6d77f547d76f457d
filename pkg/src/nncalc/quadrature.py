"""Trapezoid-rule networks and the exponential-of-integral network E = Xpn • Etr."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import affine, compose
from .approximants import QEps, exp_remainder, xpn, xpn_error_bound
from .core import Network, realize


@dataclass(frozen=True)
class MeshSpec:
    """Uniform mesh a = x_0 < x_1 < ... < x_N = b with step h = (b - a) / N."""

    a: float
    b: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("mesh endpoints must be finite")
        if self.b < self.a:
            raise ValueError("mesh needs b >= a")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("mesh needs an integer N >= 1")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.N

    @property
    def nodes(self) -> np.ndarray:
        x = self.a + np.arange(self.N + 1) * self.h
        x[-1] = self.b
        return x


def trp(h: float) -> Network:
    """Single panel: (x_1, x_2) -> h/2 (x_1 + x_2)."""
    if not h > 0:
        raise ValueError("trp needs h > 0")
    return affine([[h / 2, h / 2]])


def trapezoid_weights(N: int, h: float) -> np.ndarray:
    w = np.full(N + 1, float(h))
    w[0] = w[-1] = h / 2
    return w


def etr(N: int, h: float) -> Network:
    """Composite trapezoid functional on N + 1 node values."""
    if N < 1:
        raise ValueError("etr needs N >= 1")
    if not h > 0:
        raise ValueError("etr needs h > 0")
    return affine(trapezoid_weights(N, h)[None, :])


def e_net(n: int, mesh: MeshSpec, qe: QEps) -> Network:
    """Xpn_n • Etr^{N,h}: node values of f -> approximately exp(integral of f)."""
    if mesh.h <= 0:
        raise ValueError("e_net needs a mesh with b > a")
    return compose(xpn(n, qe), etr(mesh.N, mesh.h))


def trapezoid_error_bound(mesh: MeshSpec, f2_sup: float) -> float:
    """(b - a)^3 / (12 N^2) * sup |f''|."""
    return (mesh.b - mesh.a) ** 3 / (12.0 * mesh.N**2) * f2_sup


@dataclass(frozen=True)
class ENetBound:
    trapezoid_term: float
    series_term: float
    remainder_term: float

    @property
    def stated(self) -> float:
        """The two terms written in the statement (trapezoid propagation + series)."""
        return self.trapezoid_term + self.series_term

    @property
    def total(self) -> float:
        """Stated terms plus the Taylor remainder of exp, as assembled in the proof."""
        return self.stated + self.remainder_term


def e_net_error_bound(
    n: int,
    mesh: MeshSpec,
    qe: QEps,
    node_values,
    f2_sup: float,
    integral_sup: float | None = None,
) -> ENetBound:
    """Bound on |exp(integral of f) - R(E)(f(nodes))|.

    ``f2_sup`` bounds |f''| on [a, b]; ``integral_sup`` bounds the exact integral
    (default: trapezoid value plus its error bound) and feeds the exp remainder.
    """
    xi = float(realize(etr(mesh.N, mesh.h)).eval(node_values)[0])
    t = trapezoid_error_bound(mesh, f2_sup)
    trap = t * n**2 * (xi + t) ** (n - 1) if n >= 1 else 0.0
    series = float(xpn_error_bound(n, qe, xi)[0]) if n >= 1 else 0.0
    top = abs(xi) + t if integral_sup is None else integral_sup
    return ENetBound(trap, series, exp_remainder(n, top))
