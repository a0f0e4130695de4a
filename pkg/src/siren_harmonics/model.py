"""Single-hidden-layer sinusoidal networks: storage, evaluation,
analytic gradients, JSON serialization.

A network of width n maps a real x to

    f(x) = sum_i c_i sin( sum_j a_ij sin(omega_j x + phi_j) + b_i ) + d

with first-layer frequencies ``omega``, phase shifts ``phi``, hidden
matrix ``hidden_matrix`` (row i feeds hidden neuron i), hidden bias
``hidden_bias``, linear weights ``linear_weights`` and output bias
``linear_bias``.  Networks are immutable after construction; training
produces updated copies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields

import numpy as np

from .backend import kernels
from .errors import ParseError, ValidationError

_FIELD_NAMES = (
    "omega",
    "phi",
    "hidden_matrix",
    "hidden_bias",
    "linear_weights",
    "linear_bias",
)


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SinusoidalNetwork:
    """Full parameter set of a width-n sinusoidal network."""

    omega: np.ndarray
    phi: np.ndarray
    hidden_matrix: np.ndarray
    hidden_bias: np.ndarray
    linear_weights: np.ndarray
    linear_bias: float

    def __post_init__(self):
        object.__setattr__(self, "omega", _freeze(self.omega))
        object.__setattr__(self, "phi", _freeze(self.phi))
        object.__setattr__(self, "hidden_matrix", _freeze(self.hidden_matrix))
        object.__setattr__(self, "hidden_bias", _freeze(self.hidden_bias))
        object.__setattr__(self, "linear_weights", _freeze(self.linear_weights))
        object.__setattr__(self, "linear_bias", float(self.linear_bias))
        n = self.omega.shape[0] if self.omega.ndim == 1 else -1
        if n < 1:
            raise ValidationError("omega must be a non-empty 1-d sequence")
        for name in ("phi", "hidden_bias", "linear_weights"):
            if getattr(self, name).shape != (n,):
                raise ValidationError(
                    f"{name} has shape {getattr(self, name).shape}, expected ({n},)"
                )
        if self.hidden_matrix.shape != (n, n):
            raise ValidationError(
                f"hidden_matrix has shape {self.hidden_matrix.shape}, expected ({n}, {n})"
            )
        for name in _FIELD_NAMES[:-1]:
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValidationError(f"{name} contains non-finite entries")
        if not math.isfinite(self.linear_bias):
            raise ValidationError("linear_bias is not finite")

    @property
    def width(self) -> int:
        return self.omega.shape[0]

    def with_updates(self, **updates) -> "SinusoidalNetwork":
        """Copy with the named parameter arrays replaced."""
        current = {f.name: getattr(self, f.name) for f in fields(self)}
        current.update(updates)
        return SinusoidalNetwork(**current)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SinusoidalNetwork):
            return NotImplemented
        return self.linear_bias == other.linear_bias and all(
            np.array_equal(getattr(self, n), getattr(other, n)) for n in _FIELD_NAMES[:-1]
        )


@dataclass(frozen=True)
class ParameterGradient:
    """d(output)/d(parameter), shape-congruent to the network."""

    omega: np.ndarray
    phi: np.ndarray
    hidden_matrix: np.ndarray
    hidden_bias: np.ndarray
    linear_weights: np.ndarray
    linear_bias: float


@dataclass(frozen=True)
class FreezeMask:
    """True marks a parameter entry as frozen (excluded from training)."""

    omega: np.ndarray
    phi: np.ndarray
    hidden_matrix: np.ndarray
    hidden_bias: np.ndarray
    linear_weights: np.ndarray
    linear_bias: bool

    @classmethod
    def none(cls, width: int) -> "FreezeMask":
        return cls.groups(width)

    @classmethod
    def groups(
        cls,
        width: int,
        *,
        omega: bool = False,
        phi: bool = False,
        hidden_matrix: bool = False,
        hidden_bias: bool = False,
        linear_weights: bool = False,
        linear_bias: bool = False,
    ) -> "FreezeMask":
        """Freeze whole parameter groups by name."""
        full = lambda flag, shape: np.full(shape, flag, dtype=bool)
        return cls(
            omega=full(omega, width),
            phi=full(phi, width),
            hidden_matrix=full(hidden_matrix, (width, width)),
            hidden_bias=full(hidden_bias, width),
            linear_weights=full(linear_weights, width),
            linear_bias=linear_bias,
        )

    def validate_for(self, net: SinusoidalNetwork) -> None:
        n = net.width
        shapes = {
            "omega": (n,),
            "phi": (n,),
            "hidden_matrix": (n, n),
            "hidden_bias": (n,),
            "linear_weights": (n,),
        }
        for name, shape in shapes.items():
            if np.asarray(getattr(self, name)).shape != shape:
                raise ValidationError(f"freeze mask {name} not shape-congruent to network")


def evaluate(net: SinusoidalNetwork, x) -> float | np.ndarray:
    """Network output at x (scalar or 1-d array of points)."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = kernels().forward_batch(
        net.omega, net.phi, net.hidden_matrix, net.hidden_bias,
        net.linear_weights, net.linear_bias, xs,
    )
    return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def evaluate_x_derivative(net: SinusoidalNetwork, x) -> float | np.ndarray:
    """d f / d x — the smoothness companion to :func:`evaluate`."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    arg = np.outer(xs, net.omega) + net.phi
    z = kernels().hidden_preactivations(
        net.omega, net.phi, net.hidden_matrix, net.hidden_bias, xs
    )
    inner = np.cos(arg) * net.omega  # d z_i / d x pieces before the hidden mix
    dz = inner @ net.hidden_matrix.T
    out = (np.cos(z) * dz) @ net.linear_weights
    return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out


def gradient(net: SinusoidalNetwork, x: float) -> ParameterGradient:
    """Analytic d f(x) / d(parameter) for every parameter entry."""
    x = float(x)
    arg = net.omega * x + net.phi
    s = np.sin(arg)
    c1 = np.cos(arg)
    z = net.hidden_matrix @ s + net.hidden_bias
    sz = np.sin(z)
    cz = np.cos(z)
    g_c = sz
    g_b = net.linear_weights * cz
    g_a = np.outer(g_b, s)
    u = g_b @ net.hidden_matrix
    g_phi = u * c1
    g_omega = g_phi * x
    return ParameterGradient(
        omega=g_omega,
        phi=g_phi,
        hidden_matrix=g_a,
        hidden_bias=g_b,
        linear_weights=g_c,
        linear_bias=1.0,
    )


def serialize(net: SinusoidalNetwork) -> str:
    """UTF-8 JSON text; round-trips bit-exactly for finite doubles."""
    payload = {
        "width": net.width,
        "omega": net.omega.tolist(),
        "phi": net.phi.tolist(),
        "hidden_matrix": net.hidden_matrix.tolist(),
        "hidden_bias": net.hidden_bias.tolist(),
        "linear_weights": net.linear_weights.tolist(),
        "linear_bias": net.linear_bias,
    }
    return json.dumps(payload, indent=2, allow_nan=False) + "\n"


def deserialize(text: str) -> SinusoidalNetwork:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"network JSON is malformed: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError("network JSON must be an object")
    required = ("width",) + _FIELD_NAMES
    for key in required:
        if key not in payload:
            raise ParseError(f"network JSON is missing field {key!r}")
    try:
        net = SinusoidalNetwork(
            omega=np.asarray(payload["omega"], dtype=np.float64),
            phi=np.asarray(payload["phi"], dtype=np.float64),
            hidden_matrix=np.asarray(payload["hidden_matrix"], dtype=np.float64),
            hidden_bias=np.asarray(payload["hidden_bias"], dtype=np.float64),
            linear_weights=np.asarray(payload["linear_weights"], dtype=np.float64),
            linear_bias=payload["linear_bias"],
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ParseError(f"network JSON field has the wrong type: {exc}") from exc
    if net.width != int(payload["width"]):
        raise ValidationError(
            f"width field says {payload['width']} but parameters have width {net.width}"
        )
    return net


def save(net: SinusoidalNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(net))


def load(path) -> SinusoidalNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return deserialize(fh.read())
