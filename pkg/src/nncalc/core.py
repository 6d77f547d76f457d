"""Networks as finite lists of dense (W, b) layers, their size statistics, and realization."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


def _frozen(a, ndim: int, what: str) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, ndmin=ndim)
    if arr.ndim != ndim:
        raise ValueError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{what} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} contains NaN or Inf")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Layer:
    """One affine layer x -> W x + b with W of shape (rows, cols)."""

    weight: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        w = _frozen(self.weight, 2, "weight")
        b = _frozen(self.bias, 1, "bias")
        if b.shape[0] != w.shape[0]:
            raise ValueError(f"bias length {b.shape[0]} != weight rows {w.shape[0]}")
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)

    @property
    def rows(self) -> int:
        return self.weight.shape[0]

    @property
    def cols(self) -> int:
        return self.weight.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Layer):
            return NotImplemented
        return np.array_equal(self.weight, other.weight) and np.array_equal(self.bias, other.bias)

    __hash__ = None


class Network:
    """An immutable tuple of layers with chained shapes l_0, l_1, ..., l_L."""

    __slots__ = ("_layers",)

    def __init__(self, layers: Iterable[Layer | tuple]):
        built = tuple(l if isinstance(l, Layer) else Layer(*l) for l in layers)
        if not built:
            raise ValueError("a network needs at least one layer")
        for k in range(1, len(built)):
            if built[k].cols != built[k - 1].rows:
                raise ValueError(
                    f"layer {k + 1} expects {built[k].cols} inputs but layer {k} "
                    f"produces {built[k - 1].rows}"
                )
        self._layers = built

    @property
    def layers(self) -> tuple[Layer, ...]:
        return self._layers

    def __len__(self) -> int:
        return len(self._layers)

    def __iter__(self):
        return iter(self._layers)

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return len(self) == len(other) and all(a == b for a, b in zip(self, other))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Network(lay={lay(self)}, param={param(self)})"

    def to_dict(self) -> dict:
        return {
            "layers": [
                {
                    "rows": l.rows,
                    "cols": l.cols,
                    "weights": [float(v) for v in l.weight.ravel()],
                    "bias": [float(v) for v in l.bias],
                }
                for l in self._layers
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> Network:
        layers = []
        for i, entry in enumerate(data["layers"]):
            rows, cols = int(entry["rows"]), int(entry["cols"])
            w = entry["weights"]
            if len(w) != rows * cols:
                raise ValueError(f"layer {i + 1}: {len(w)} weights for a {rows}x{cols} matrix")
            layers.append(Layer(np.asarray(w, dtype=np.float64).reshape(rows, cols), entry["bias"]))
        return cls(layers)

    def to_json(self, indent: int | None = None) -> str:
        # json writes floats with repr(), the shortest string that round-trips exactly
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> Network:
        return cls.from_dict(json.loads(text))


def param(net: Network) -> int:
    """Number of weights and biases, sum of l_k (l_{k-1} + 1)."""
    return sum(l.rows * (l.cols + 1) for l in net)


def dep(net: Network) -> int:
    return len(net)


def inn(net: Network) -> int:
    return net.layers[0].cols


def out(net: Network) -> int:
    return net.layers[-1].rows


def hid(net: Network) -> int:
    return len(net) - 1


def lay(net: Network) -> tuple[int, ...]:
    return (inn(net),) + tuple(l.rows for l in net)


def wid(net: Network, i: int) -> int:
    if i < 0:
        raise ValueError("width index must be nonnegative")
    widths = lay(net)
    return widths[i] if i < len(widths) else 0


class Activation(enum.Enum):
    RELU = "relu"
    IDENTITY = "identity"

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self is Activation.RELU:
            return np.maximum(x, 0.0)
        return x


@dataclass(frozen=True)
class RealizedFunction:
    """The continuous map obtained by instantiating a network with an activation."""

    net: Network
    act: Activation

    @property
    def input_width(self) -> int:
        return inn(self.net)

    @property
    def output_width(self) -> int:
        return out(self.net)

    def batch(self, xs) -> np.ndarray:
        """Evaluate on the rows of an (m, inn) array; returns an (m, out) array."""
        x = np.asarray(xs, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.input_width:
            raise ValueError(
                f"expected inputs of shape (m, {self.input_width}), got {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise ValueError("inputs must be finite")
        layers = self.net.layers
        for layer in layers[:-1]:
            x = self.act(x @ layer.weight.T + layer.bias)
        last = layers[-1]
        return x @ last.weight.T + last.bias

    def eval(self, x) -> np.ndarray:
        v = np.atleast_1d(np.asarray(x, dtype=np.float64))
        if v.ndim != 1 or v.shape[0] != self.input_width:
            raise ValueError(f"expected an input vector of length {self.input_width}")
        return self.batch(v[None, :])[0]

    def __call__(self, x) -> np.ndarray:
        return self.eval(x)

    def scalar(self, xs: Sequence[float] | np.ndarray) -> np.ndarray:
        """Shortcut for 1-in/1-out networks: evaluate at many scalars at once."""
        return self.batch(np.asarray(xs, dtype=np.float64).reshape(-1, 1))[:, 0]


def instantiate(net: Network, act: Activation = Activation.RELU) -> RealizedFunction:
    return RealizedFunction(net, act)


def realize(net: Network) -> RealizedFunction:
    return RealizedFunction(net, Activation.RELU)
