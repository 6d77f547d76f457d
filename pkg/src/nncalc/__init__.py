"""Exact ReLU network calculus: composition, stacking, approximants of powers and
polynomials, quadrature networks and maximum-convolution interpolation."""

from .algebra import (
    affine, compose, compose_all, cpy, identity_net, net_sum, net_sum_padded,
    scalar_left, scalar_right, sm, stack, stack_padded, tunnel,
)
from .approximants import QEps, act_net, csn, phi, phi_k, pnm, prd, pwr, sne, sqr, xpn
from .core import (
    Activation, Layer, Network, RealizedFunction, dep, hid, inn, instantiate, lay, out,
    param, realize, wid,
)
from .interpolation import Box, SampleSet, max_conv, mxm, nrm
from .quadrature import MeshSpec, e_net, etr, trp

__all__ = [
    "Activation", "Box", "Layer", "MeshSpec", "Network", "QEps", "RealizedFunction", "SampleSet",
    "act_net", "affine", "compose", "compose_all", "cpy", "csn", "dep", "e_net", "etr", "hid",
    "identity_net", "inn", "instantiate", "lay", "max_conv", "mxm", "net_sum", "net_sum_padded",
    "nrm", "out", "param", "phi", "phi_k", "pnm", "prd", "pwr", "realize", "scalar_left",
    "scalar_right", "sm", "sne", "sqr", "stack", "stack_padded", "trp", "tunnel", "wid", "xpn",
]
