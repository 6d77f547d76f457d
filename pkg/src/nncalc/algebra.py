"""Operator calculus on networks: composition, stacking, sums, scalar multiplication,
and the affine building blocks Aff, Cpy, Sm, Id, Tun."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

from .core import Layer, Network, dep, inn, out


def affine(W, b=None) -> Network:
    """Aff_{W,b}: the one-layer network x -> W x + b."""
    W = np.array(W, dtype=np.float64, ndmin=2)
    if b is None:
        b = np.zeros(W.shape[0])
    return Network([Layer(W, b)])


def cpy(n: int, k: int) -> Network:
    """Cpy_{n,k}: R^k -> R^{nk}, n stacked copies of the input."""
    if n < 1 or k < 1:
        raise ValueError("cpy needs n, k >= 1")
    return affine(np.tile(np.eye(k), (n, 1)))


def sm(n: int, k: int) -> Network:
    """Sm_{n,k}: R^{nk} -> R^k, the sum of n blocks of width k."""
    if n < 1 or k < 1:
        raise ValueError("sm needs n, k >= 1")
    return affine(np.tile(np.eye(k), (1, n)))


def compose(nu1: Network, nu2: Network) -> Network:
    """nu1 • nu2, where nu2 is applied first.

    The last layer of nu2 and the first layer of nu1 fuse into
    (W_1 W'_M, W_1 b'_M + b_1); the remaining layers are kept as they are.
    This single rule covers the four cases L, M = 1 or > 1.
    """
    if inn(nu1) != out(nu2):
        raise ValueError(f"cannot compose: inn(nu1)={inn(nu1)} but out(nu2)={out(nu2)}")
    first, last = nu1.layers[0], nu2.layers[-1]
    fused = Layer(first.weight @ last.weight, first.weight @ last.bias + first.bias)
    return Network(nu2.layers[:-1] + (fused,) + nu1.layers[1:])


def compose_all(*nets: Network) -> Network:
    """nets[0] • nets[1] • ... • nets[-1] (the last one is applied first)."""
    result = nets[-1]
    for nu in reversed(nets[:-1]):
        result = compose(nu, result)
    return result


def stack(nets: Sequence[Network]) -> Network:
    """Parallel placement of equal-depth networks with block-diagonal layers."""
    nets = list(nets)
    if not nets:
        raise ValueError("stack needs at least one network")
    depths = {dep(nu) for nu in nets}
    if len(depths) != 1:
        raise ValueError(f"stack needs equal depths, got {sorted(depths)}")
    if len(nets) == 1:
        return nets[0]
    layers = []
    for parts in zip(*(nu.layers for nu in nets)):
        layers.append(
            Layer(block_diag(*(p.weight for p in parts)), np.concatenate([p.bias for p in parts]))
        )
    return Network(layers)


@lru_cache(maxsize=None)
def _id1() -> Network:
    return Network([Layer([[1.0], [-1.0]], [0.0, 0.0]), Layer([[1.0, -1.0]], [0.0])])


def identity_net(d: int) -> Network:
    """Id_d: depth-2 network realizing the identity of R^d under ReLU."""
    if d < 1:
        raise ValueError("identity_net needs d >= 1")
    return stack([_id1()] * d)


@lru_cache(maxsize=None)
def tunnel(n: int) -> Network:
    """Tun_n: depth-n network realizing the identity of R under ReLU."""
    if n < 1:
        raise ValueError("tunnel needs n >= 1")
    if n == 1:
        return affine([[1.0]])
    result = _id1()
    for _ in range(n - 2):
        result = compose(_id1(), result)
    return result


def stack_padded(nets: Sequence[Network]) -> Network:
    """Stack networks of unequal depth by appending tunnels to the shallower ones.

    Each nu_i becomes Tun_{D+1-dep(nu_i)} • nu_i with D the largest depth, so every
    padded component has depth exactly D.
    """
    nets = list(nets)
    if not nets:
        raise ValueError("stack_padded needs at least one network")
    for nu in nets:
        if out(nu) != 1:
            raise ValueError("tunnel padding needs scalar-output networks")
    top = max(dep(nu) for nu in nets)
    return stack([compose(tunnel(top + 1 - dep(nu)), nu) for nu in nets])


def _check_same_ends(nets: Sequence[Network]) -> tuple[int, int]:
    if not nets:
        raise ValueError("a sum needs at least one network")
    ins = {inn(nu) for nu in nets}
    outs = {out(nu) for nu in nets}
    if len(ins) != 1 or len(outs) != 1:
        raise ValueError("summands must share input and output widths")
    return ins.pop(), outs.pop()


def net_sum(nets: Sequence[Network]) -> Network:
    """Sm_{n,out} • (stack of the nets) • Cpy_{n,inn}; realizes the pointwise sum."""
    nets = list(nets)
    k_in, k_out = _check_same_ends(nets)
    n = len(nets)
    return compose(sm(n, k_out), compose(stack(nets), cpy(n, k_in)))


def net_sum_padded(nets: Sequence[Network]) -> Network:
    """Sum of unequal-depth networks through tunnel-padded stacking."""
    nets = list(nets)
    k_in, k_out = _check_same_ends(nets)
    n = len(nets)
    return compose(sm(n, k_out), compose(stack_padded(nets), cpy(n, k_in)))


def scalar_left(lam: float, nu: Network) -> Network:
    """lam ▷ nu = Aff_{lam I_out, 0} • nu."""
    return compose(affine(lam * np.eye(out(nu))), nu)


def scalar_right(nu: Network, lam: float) -> Network:
    """nu ◁ lam = nu • Aff_{lam I_inn, 0}."""
    return compose(nu, affine(lam * np.eye(inn(nu))))
