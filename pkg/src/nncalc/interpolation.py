"""1-norm and maximum networks, and the maximum-convolution interpolant of Lipschitz data."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import affine, compose, compose_all, cpy, identity_net, sm, stack
from .core import Network
from .quadrature import MeshSpec


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Points x_1..x_N in R^d with values y_i and a Lipschitz constant L >= 0."""

    points: np.ndarray
    values: np.ndarray
    L: float

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64, ndmin=2)
        vals = np.array(self.values, dtype=np.float64, ndmin=1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("points must be a nonempty (N, d) array")
        if vals.shape != (pts.shape[0],):
            raise ValueError(f"expected {pts.shape[0]} values, got shape {vals.shape}")
        if not (np.all(np.isfinite(pts)) and np.all(np.isfinite(vals))):
            raise ValueError("points and values must be finite")
        if not (math.isfinite(self.L) and self.L >= 0):
            raise ValueError("L must be a finite nonnegative number")
        pts.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "L", float(self.L))

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def N(self) -> int:
        return self.points.shape[0]

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "points": self.points.tolist(),
            "values": self.values.tolist(),
            "L": self.L,
        }

    @classmethod
    def from_dict(cls, data: dict) -> SampleSet:
        s = cls(data["points"], data["values"], data["L"])
        if "d" in data and int(data["d"]) != s.d:
            raise ValueError(f"declared d={data['d']} but points have dimension {s.d}")
        return s

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> SampleSet:
        return cls.from_dict(json.loads(text))

    @classmethod
    def from_function(cls, f, points, L: float) -> SampleSet:
        pts = np.array(points, dtype=np.float64, ndmin=2)
        if pts.shape[0] == 1 and pts.shape[1] > 1 and np.ndim(points) == 1:
            pts = pts.T
        return cls(pts, [float(f(p)) for p in pts], L)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lower, upper] in R^d sampled with ``per_axis`` points per axis."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    per_axis: int = 101

    def grid(self) -> np.ndarray:
        if len(self.lower) != len(self.upper) or not self.lower:
            raise ValueError("box bounds must have equal nonzero length")
        if self.per_axis < 1 or any(u < l for l, u in zip(self.lower, self.upper)):
            raise ValueError("empty box")
        axes = [np.linspace(l, u, self.per_axis) for l, u in zip(self.lower, self.upper)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


_NRM1 = Network([([[1.0], [-1.0]], [0.0, 0.0]), ([[1.0, 1.0]], [0.0])])

_MXM2 = Network([
    ([[1.0, -1.0], [0.0, 1.0], [0.0, -1.0]], [0.0, 0.0, 0.0]),
    ([[1.0, 1.0, -1.0]], [0.0]),
])


@lru_cache(maxsize=None)
def nrm(d: int) -> Network:
    """Depth-2 network realizing the 1-norm on R^d."""
    if d < 1:
        raise ValueError("nrm needs d >= 1")
    if d == 1:
        return _NRM1
    return compose(sm(d, 1), stack([_NRM1] * d))


@lru_cache(maxsize=None)
def mxm(d: int) -> Network:
    """Network realizing max{x_1, ..., x_d}; pairs are reduced by Mxm^2 level by level,
    an odd leftover input rides along through Id_1."""
    if d < 1:
        raise ValueError("mxm needs d >= 1")
    if d == 1:
        return affine([[1.0]])
    if d == 2:
        return _MXM2
    half = (d + 1) // 2
    if d % 2 == 0:
        layer = stack([_MXM2] * half)
    else:
        layer = stack([_MXM2] * (half - 1) + [identity_net(1)])
    return compose(mxm(half), layer)


def max_conv(s: SampleSet) -> Network:
    """Network realizing x -> max_i (y_i - L ||x - x_i||_1)."""
    d, N = s.d, s.N
    shifted = [compose(nrm(d), affine(np.eye(d), -s.points[i])) for i in range(N)]
    return compose_all(
        mxm(N),
        affine(-s.L * np.eye(N), s.values),
        stack(shifted),
        cpy(N, d),
    )


def max_conv_closed_form(s: SampleSet, xs) -> np.ndarray:
    """Direct evaluation of max_i (y_i - L ||x - x_i||_1) at the rows of xs."""
    x = np.array(xs, dtype=np.float64, ndmin=2)
    dist = np.abs(x[:, None, :] - s.points[None, :, :]).sum(axis=2)
    return np.max(s.values[None, :] - s.L * dist, axis=1)


def _domain_grid(domain) -> np.ndarray:
    if isinstance(domain, MeshSpec):
        return domain.nodes[:, None]
    if isinstance(domain, Box):
        return domain.grid()
    grid = np.array(domain, dtype=np.float64, ndmin=2)
    if grid.size == 0:
        raise ValueError("empty domain")
    return grid


def fill_distance(s: SampleSet, domain) -> float:
    """sup over the grid of the 1-norm distance to the nearest sample point."""
    grid = _domain_grid(domain)
    if grid.shape[0] == 0:
        raise ValueError("empty domain")
    if grid.shape[1] != s.d:
        raise ValueError(f"domain has dimension {grid.shape[1]}, samples have {s.d}")
    dist = np.abs(grid[:, None, :] - s.points[None, :, :]).sum(axis=2)
    return float(dist.min(axis=1).max())


def max_conv_error_bound(s: SampleSet, domain) -> float:
    """2 L times the fill distance of the samples in the domain."""
    return 2.0 * s.L * fill_distance(s, domain)
