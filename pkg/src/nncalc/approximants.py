"""Squaring, product, power, polynomial and Taylor-series networks, with the
functions that evaluate their size and error bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algebra import affine, compose, compose_all, cpy, net_sum, scalar_left, stack, tunnel
from .core import Network, dep, realize


@dataclass(frozen=True)
class QEps:
    """Accuracy parameters (q, eps) with q > 2 and eps > 0."""

    q: float = 2.5
    eps: float = 0.01

    def __post_init__(self):
        if not (math.isfinite(self.q) and self.q > 2):
            raise ValueError(f"q must exceed 2, got {self.q}")
        if not (math.isfinite(self.eps) and self.eps > 0):
            raise ValueError(f"eps must be positive, got {self.eps}")

    @property
    def prd_delta(self) -> float:
        """Accuracy handed to the squaring network inside Prd: eps / (2^{q-1} + 1)."""
        return self.eps / (2.0 ** (self.q - 1) + 1.0)

    @property
    def phi_delta(self) -> float:
        """Accuracy of the [0,1] squaring network inside Sqr: 2^{-2/(q-2)} eps^{q/(q-2)}."""
        q = self.q
        return 2.0 ** (-2.0 / (q - 2)) * self.eps ** (q / (q - 2))

    @property
    def alpha(self) -> float:
        return (self.eps / 2.0) ** (1.0 / (self.q - 2))

    def with_eps(self, eps: float) -> QEps:
        return QEps(self.q, eps)


def act_net(d: int) -> Network:
    """The activation network ((I_d, 0), (I_d, 0)); realizes componentwise ReLU."""
    if d < 1:
        raise ValueError("act_net needs d >= 1")
    eye = np.eye(d)
    return Network([(eye, np.zeros(d)), (eye, np.zeros(d))])


_B = np.array([0.0, -0.5, -1.0, 0.0])
_E4 = np.ones((4, 1))


def _c(k: int) -> float:
    return 2.0 ** (1 - 2 * k)


def _a_matrix(k: int) -> np.ndarray:
    c = _c(k)
    A = np.tile([2.0, -4.0, 2.0, 0.0], (4, 1))
    A[3] = [-c, 2 * c, -c, 1.0]
    return A


def _c_row(k: int) -> np.ndarray:
    c = _c(k)
    return np.array([[-c, 2 * c, -c, 1.0]])


@lru_cache(maxsize=None)
def phi_k(k: int) -> Network:
    """Depth k+1 network whose ReLU realization on [0,1] is the piecewise-linear
    interpolant of x^2 on the grid j/2^k (and ReLU(x) off [0,1])."""
    if k < 1:
        raise ValueError("phi_k needs k >= 1")
    i4 = act_net(4)
    parts = [compose(affine(_c_row(k)), i4)]
    parts += [compose(affine(_a_matrix(j), _B), i4) for j in range(k - 1, 0, -1)]
    parts.append(affine(_E4, _B))
    return compose_all(*parts)


def phi_depth(eps: float) -> int:
    """M = max{1, ceil(log2(1/eps)/2 - 1)}, so that 2^{-2M-2} <= eps whenever eps < 1/16."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    return max(1, math.ceil(0.5 * math.log2(1.0 / eps) - 1.0))


def phi(eps: float) -> Network:
    return phi_k(phi_depth(eps))


def phi_error_bound(k: int) -> float:
    return 2.0 ** (-2 * k - 2)


def phi_guarantee(eps: float) -> float:
    """Sup error on [0,1] actually guaranteed by phi(eps): min(eps, ...) only when eps < 1/16."""
    return phi_error_bound(phi_depth(eps))


@lru_cache(maxsize=None)
def _sqr(q: float, eps: float) -> Network:
    qe = QEps(q, eps)
    a = qe.alpha
    core = phi(qe.phi_delta)
    up = affine([[a ** -2.0]])
    return net_sum([
        compose_all(up, core, affine([[a]])),
        compose_all(up, core, affine([[-a]])),
    ])


def sqr(qe: QEps) -> Network:
    """Sqr^{q,eps}: |x^2 - R(x)| <= eps max{1, |x|^q} on all of R."""
    return _sqr(qe.q, qe.eps)


@lru_cache(maxsize=None)
def _prd(q: float, eps: float) -> Network:
    psi = _sqr(q, QEps(q, eps).prd_delta)
    return net_sum([
        scalar_left(0.5, compose(psi, affine([[1.0, 1.0]]))),
        scalar_left(-0.5, compose(psi, affine([[1.0, 0.0]]))),
        scalar_left(-0.5, compose(psi, affine([[0.0, 1.0]]))),
    ])


def prd(qe: QEps) -> Network:
    """Prd^{q,eps}: R^2 -> R with |xy - R(x,y)| <= eps max{1, |x|^q, |y|^q}."""
    return _prd(qe.q, qe.eps)


@lru_cache(maxsize=None)
def _pwr(n: int, q: float, eps: float) -> Network:
    if n == 0:
        return affine([[0.0]], [1.0])
    prev = _pwr(n - 1, q, eps)
    return compose_all(_prd(q, eps), stack([tunnel(dep(prev)), prev]), cpy(2, 1))


def pwr(n: int, qe: QEps) -> Network:
    """Pwr_n^{q,eps} approximating x -> x^n; the tunnel carries x into each product."""
    if n < 0:
        raise ValueError("pwr needs n >= 0")
    return _pwr(n, qe.q, qe.eps)


def _padded_series(coeffs: Sequence[float], powers: Sequence[int], qe: QEps) -> Network:
    nets = [pwr(p, qe) for p in powers]
    top = max(dep(nu) for nu in nets)
    return net_sum([
        scalar_left(c, compose(tunnel(top + 1 - dep(nu)), nu)) for c, nu in zip(coeffs, nets)
    ])


def pnm(coeffs: Sequence[float], qe: QEps) -> Network:
    """Network polynomial sum_i c_i x^i built from tunnel-padded power networks."""
    coeffs = [float(c) for c in coeffs]
    if not coeffs:
        raise ValueError("pnm needs at least one coefficient")
    if not all(math.isfinite(c) for c in coeffs):
        raise ValueError("coefficients must be finite")
    return _padded_series(coeffs, range(len(coeffs)), qe)


def xpn_coeffs(n: int) -> list[float]:
    return [1.0 / math.factorial(i) for i in range(n + 1)]


def csn_coeffs(n: int) -> list[float]:
    return [(-1.0) ** i / math.factorial(2 * i) for i in range(n + 1)]


@lru_cache(maxsize=None)
def _xpn(n: int, q: float, eps: float) -> Network:
    return pnm(xpn_coeffs(n), QEps(q, eps))


@lru_cache(maxsize=None)
def _csn(n: int, q: float, eps: float) -> Network:
    return _padded_series(csn_coeffs(n), [2 * i for i in range(n + 1)], QEps(q, eps))


def xpn(n: int, qe: QEps) -> Network:
    """Taylor polynomial of exp of degree n."""
    if n < 0:
        raise ValueError("xpn needs n >= 0")
    return _xpn(n, qe.q, qe.eps)


def csn(n: int, qe: QEps) -> Network:
    """Taylor polynomial of cos with terms (-1)^i x^{2i} / (2i)!, i = 0..n."""
    if n < 0:
        raise ValueError("csn needs n >= 0")
    return _csn(n, qe.q, qe.eps)


def sne(n: int, qe: QEps) -> Network:
    """sin(x) = cos(x - pi/2): the cosine network after a shift."""
    return compose(csn(n, qe), affine([[1.0]], [-math.pi / 2]))


# ---------------------------------------------------------------------------
# bound evaluators

def p_bound(i: int, x, eps: float):
    """The majorant p_i(x) of |R(Pwr_i)(x)|; p_0 = 1 since Pwr_0 is the constant 1."""
    if i < 0:
        raise ValueError("p_bound needs i >= 0")
    x2 = np.square(np.asarray(x, dtype=np.float64))
    p = np.ones_like(x2)
    for _ in range(i):
        p = eps + 2.0 * p * p + 2.0 * x2
    return p if p.ndim else float(p)


def log2_inv(eps: float) -> float:
    return math.log2(1.0 / eps)


def phi_param_bound(eps: float) -> float:
    return max(10.0 * log2_inv(eps) - 7.0, 13.0)


def phi_dep_bound(eps: float) -> float:
    return max(0.5 * log2_inv(eps) + 1.0, 2.0)


def sqr_param_bound(qe: QEps) -> float:
    q = qe.q
    return max(40.0 * q / (q - 2) * log2_inv(qe.eps) + 80.0 / (q - 2) - 28.0, 52.0)


def sqr_dep_bound(qe: QEps) -> float:
    q = qe.q
    return max(1.0 + 1.0 / (q - 2) + q / (2.0 * (q - 2)) * log2_inv(qe.eps), 2.0)


def prd_param_bound(qe: QEps) -> float:
    q = qe.q
    return 360.0 * q / (q - 2) * (log2_inv(qe.eps) + q + 1.0) - 252.0


def prd_dep_bound(qe: QEps) -> float:
    q = qe.q
    return q / (q - 2) * (log2_inv(qe.eps) + q)


def pwr_dep_bound(n: int, qe: QEps) -> float:
    if n == 0:
        return 1.0
    q = qe.q
    return n * (q / (q - 2) * (log2_inv(qe.eps) + q) - 1.0) + 1.0


def pwr_param_bound(n: int, qe: QEps) -> float:
    if n == 0:
        return 2.0
    q = qe.q
    inner = 360.0 * q / (q - 2) * (log2_inv(qe.eps) + q + 1.0) + 372.0
    return 4.0 ** (n + 1.5) + (4.0 ** (n + 1) - 1.0) / 3.0 * inner


def pnm_param_bound(n: int, qe: QEps) -> float:
    return 2.0 if n == 0 else (n + 1) * pwr_param_bound(n, qe)


def csn_dep_bound(n: int, qe: QEps) -> float:
    return 1.0 if n == 0 else pwr_dep_bound(2 * n, qe)


def csn_param_bound(n: int, qe: QEps) -> float:
    return 2.0 if n == 0 else (2 * n + 1) * pwr_param_bound(2 * n, qe)


def pwr_values(n: int, qe: QEps, x) -> np.ndarray:
    return realize(pwr(n, qe)).scalar(np.atleast_1d(x))


def pwr_step_bound(n: int, qe: QEps, x, *, tight: bool = False) -> np.ndarray:
    """Right-hand side of the one-step power recursion for |x^n - R(Pwr_n)(x)|, n >= 1.

    The stated form is |x (x^{n-1} - R(Pwr_{n-1})(x))| + eps + |x|^q + p_{n-1}^q.
    With ``tight`` the last three terms become eps (1 + |x|^q + p_{n-1}^q), which is
    what the product error eps max{1, |x|^q, |y|^q} actually yields.
    """
    if n < 1:
        raise ValueError("the recursion starts at n = 1")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    prev = pwr_values(n - 1, qe, x)
    carried = np.abs(x * (x ** (n - 1) - prev))
    ax_q = np.abs(x) ** qe.q
    p_q = p_bound(n - 1, x, qe.eps) ** qe.q
    if tight:
        return carried + qe.eps * (1.0 + ax_q + p_q)
    return carried + qe.eps + ax_q + p_q


def pnm_error_bound(coeffs: Sequence[float], qe: QEps, x, *, tight: bool = False) -> np.ndarray:
    """sum_{i>=1} |c_i| * (one-step power bound for Pwr_i at x)."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    total = np.zeros_like(x)
    for i, c in enumerate(coeffs):
        if i == 0 or c == 0:
            continue
        total += abs(c) * pwr_step_bound(i, qe, x, tight=tight)
    return total


def xpn_error_bound(n: int, qe: QEps, x, *, tight: bool = False) -> np.ndarray:
    return pnm_error_bound(xpn_coeffs(n), qe, x, tight=tight)


def csn_error_bound(n: int, qe: QEps, x, *, tight: bool = False) -> np.ndarray:
    """sum_{i=1}^n |c_i| * (one-step bound for Pwr_{2i}), with c_i = (-1)^i/(2i)!."""
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    total = np.zeros_like(x)
    for i, c in enumerate(csn_coeffs(n)):
        if i:
            total += abs(c) * pwr_step_bound(2 * i, qe, x, tight=tight)
    return total


def sne_error_bound(n: int, qe: QEps, x, *, tight: bool = False) -> np.ndarray:
    """The cosine bound evaluated at the shifted argument x - pi/2."""
    return csn_error_bound(n, qe, np.asarray(x, dtype=np.float64) - math.pi / 2, tight=tight)


def exp_remainder(n: int, b: float) -> float:
    """Lagrange remainder e^b b^{n+1}/(n+1)! of the degree-n Taylor polynomial on [0, b]."""
    return math.exp(b) * b ** (n + 1) / math.factorial(n + 1)


def trig_remainder(n: int, b: float) -> float:
    """Remainder term b^{n+1}/(n+1)! used for the cosine and sine networks on [0, b]."""
    return b ** (n + 1) / math.factorial(n + 1)


def cos_taylor_remainder(n: int, b: float) -> float:
    """Sharp remainder b^{2n+2}/(2n+2)! of the degree-2n cosine polynomial on [-b, b]."""
    return b ** (2 * n + 2) / math.factorial(2 * n + 2)


def product_bound_helper(x, y, q: float, eps: float):
    """The pair (eps max{1,|x|^q,|y|^q}, eps + eps|x|^q + eps|y|^q); the first never exceeds the second."""
    ax, ay = abs(x) ** q, abs(y) ** q
    return eps * max(1.0, ax, ay), eps + eps * ax + eps * ay
