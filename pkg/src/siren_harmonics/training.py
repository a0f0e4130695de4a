"""Desk-scale fitting of sinusoidal networks: full-batch Adam with
per-entry freezing, plus the two benchmark signal families (the
twelve-sine sums and the square wave)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import TrainingDivergedError, ValidationError
from .initialization import TargetSpectrum
from .model import FreezeMask, SinusoidalNetwork

#: Loss above this aborts a fit with :class:`TrainingDivergedError`.
DIVERGENCE_LIMIT = 1e12


@dataclass(frozen=True)
class SampleSet:
    """Training points (x, y) with the interval they were drawn from."""

    xs: np.ndarray
    ys: np.ndarray
    domain: tuple[float, float]

    def __post_init__(self):
        xs = np.atleast_1d(np.asarray(self.xs, dtype=np.float64))
        ys = np.atleast_1d(np.asarray(self.ys, dtype=np.float64))
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "domain", (float(self.domain[0]), float(self.domain[1])))
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValidationError("xs and ys must be equal-length 1-d arrays")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValidationError("sample values must be finite")
        lo, hi = self.domain
        if not (lo < hi):
            raise ValidationError("domain must be a nonempty interval")
        if xs.size and (xs.min() < lo or xs.max() > hi):
            raise ValidationError("sample x values must lie inside the domain")

    def __len__(self) -> int:
        return self.xs.size

    @property
    def domain_length(self) -> float:
        return self.domain[1] - self.domain[0]


@dataclass(frozen=True)
class TrainOptions:
    steps: int = 20_000
    learning_rate: float = 1e-3
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    freeze: FreezeMask | None = None
    seed: int = 0

    def __post_init__(self):
        if self.steps < 0:
            raise ValidationError("steps must be >= 0")
        if not self.learning_rate > 0:
            raise ValidationError("learning_rate must be positive")
        for name in ("adam_beta1", "adam_beta2"):
            b = getattr(self, name)
            if not (0.0 <= b < 1.0):
                raise ValidationError(f"{name} must lie in [0, 1)")


def mse(net: SinusoidalNetwork, data: SampleSet) -> float:
    """Mean squared residual over the sample set."""
    if len(data) == 0:
        raise ValidationError("sample set is empty")
    residual = (
        kernels().forward_batch(
            net.omega, net.phi, net.hidden_matrix, net.hidden_bias,
            net.linear_weights, net.linear_bias, data.xs,
        )
        - data.ys
    )
    return float(residual @ residual) / len(data)


def l2_error(net: SinusoidalNetwork, data: SampleSet) -> float:
    """sqrt(mse * domain length): the L2-norm scale losses are usually
    reported in for signals on a finite interval."""
    return math.sqrt(mse(net, data) * data.domain_length)


def loss_history_l2(history_mse: np.ndarray, data: SampleSet) -> np.ndarray:
    return np.sqrt(history_mse * data.domain_length)


def fit(
    net: SinusoidalNetwork, data: SampleSet, opts: TrainOptions
) -> tuple[SinusoidalNetwork, np.ndarray]:
    """Full-batch Adam on the mse.  Frozen entries stay bit-identical.

    Returns the trained network and the loss history: an array of shape
    (steps+1, 2) holding mse and the derived L2 error, entry 0 being the
    starting loss.  Raises :class:`TrainingDivergedError` past the
    divergence guard.
    """
    if len(data) == 0:
        raise ValidationError("sample set is empty")
    freeze = opts.freeze if opts.freeze is not None else FreezeMask.none(net.width)
    freeze.validate_for(net)
    out = kernels().adam_fit(
        net.omega,
        net.phi,
        net.hidden_matrix,
        net.hidden_bias,
        net.linear_weights,
        net.linear_bias,
        data.xs,
        data.ys,
        opts.steps,
        opts.learning_rate,
        opts.adam_beta1,
        opts.adam_beta2,
        opts.adam_eps,
        ~np.asarray(freeze.omega, dtype=bool),
        ~np.asarray(freeze.phi, dtype=bool),
        ~np.asarray(freeze.hidden_matrix, dtype=bool),
        ~np.asarray(freeze.hidden_bias, dtype=bool),
        ~np.asarray(freeze.linear_weights, dtype=bool),
        not freeze.linear_bias,
        DIVERGENCE_LIMIT,
    )
    omega, phi, hidden, hbias, lweights, lbias, hist, status = out
    if status >= 0:
        raise TrainingDivergedError(step=int(status), loss=float(hist[status]))
    trained = SinusoidalNetwork(
        omega=omega,
        phi=phi,
        hidden_matrix=hidden,
        hidden_bias=hbias,
        linear_weights=lweights,
        linear_bias=lbias,
    )
    history = np.column_stack([hist, loss_history_l2(hist, data)])
    return trained, history


def _twelve_sines_amplitudes(variant: int) -> np.ndarray:
    from .bessel import bessel_j

    if variant == 1:
        # geometric decay from 1 down to 0.005 over the twelve components
        ratio = 0.005 ** (1.0 / 11.0)
        return ratio ** np.arange(12)
    # Variants 2/3 concentrate their mass at the top of the band.  The
    # profile follows the Bessel-ladder shape a small frozen-frequency
    # expansion can realize, so the benchmark has a known attainable
    # floor: a decaying low band plus a peak centered on the highest
    # frequency, whose shoulders (freqs 21, 25 in base units) must match
    # because expansion line magnitudes are even in the ladder order.
    low = 0.25 * np.array([bessel_j(t, 2.2) for t in (3, 5, 7, 9, 11)]) / bessel_j(3, 2.2)
    peak_order = np.abs(23 - np.array([13, 15, 17, 19, 21, 23, 25]))
    high = np.array([bessel_j(int(o), 1.2) for o in peak_order]) / bessel_j(0, 1.2)
    amps = np.concatenate([low, high])
    if variant == 3:
        amps[4] = 0.3  # base frequency 11: only a third input line can supply it
        amps[5] = 0.02
    return amps


def make_twelve_sines(variant: int, grid_points: int = 1024) -> tuple[TargetSpectrum, SampleSet]:
    """The three twelve-sine benchmark signals on [-1, 1].

    Variant 1: frequencies 2k+1 (k = 1..12) with geometric amplitude
    decay from 1 to 0.005.  Variant 2: frequencies (2k+1)*2*pi with the
    amplitude mass moved to the highest frequencies.  Variant 3:
    variant 2 with the 5th and 6th components boosted, which a width-2
    network cannot absorb but a width-3 one can.
    """
    if variant not in (1, 2, 3):
        raise ValidationError(f"variant must be 1, 2 or 3, got {variant}")
    k = np.arange(1, 13)
    base = (2 * k + 1).astype(np.float64)
    freqs = base if variant == 1 else base * 2.0 * math.pi
    amps = _twelve_sines_amplitudes(variant)
    target = TargetSpectrum(frequencies=freqs, amplitudes=amps)
    xs = np.linspace(-1.0, 1.0, grid_points)
    ys = np.sin(np.outer(xs, freqs)) @ amps
    return target, SampleSet(xs=xs, ys=ys, domain=(-1.0, 1.0))


def make_square_wave(delta: float, grid_points: int = 1024) -> SampleSet:
    """Square wave samples on [-1, 1]: 0.5 for x < 0, -0.5 for x > 0,
    with points within delta of the discontinuities at -1, 0, 1 removed."""
    if not (0.0 <= delta < 0.5):
        raise ValidationError(f"delta must lie in [0, 0.5), got {delta}")
    xs = np.linspace(-1.0, 1.0, grid_points)
    keep = (np.abs(xs) >= delta) & (np.abs(xs - 1.0) >= delta) & (np.abs(xs + 1.0) >= delta)
    xs = xs[keep]
    ys = np.where(xs < 0.0, 0.5, -0.5)
    return SampleSet(xs=xs, ys=ys, domain=(-1.0, 1.0))


def sample_set_to_csv(data: SampleSet) -> str:
    out = ["x;y"]
    for x, y in zip(data.xs, data.ys):
        out.append(f"{float(x)!r};{float(y)!r}")
    return "\n".join(out) + "\n"


def sample_set_from_csv(text: str, domain: tuple[float, float] | None = None) -> SampleSet:
    lines = [ln for ln in text.strip().splitlines() if ln]
    if not lines or lines[0] != "x;y":
        raise ValidationError("dataset CSV must start with the header 'x;y'")
    xs, ys = [], []
    for ln in lines[1:]:
        sx, sy = ln.split(";")
        xs.append(float(sx))
        ys.append(float(sy))
    xs = np.array(xs)
    ys = np.array(ys)
    if domain is None:
        domain = (float(xs.min()), float(xs.max()))
    return SampleSet(xs=xs, ys=ys, domain=domain)


def loss_history_to_csv(history: np.ndarray) -> str:
    out = ["step;mse;l2"]
    for step, (m, l2) in enumerate(history):
        out.append(f"{step};{float(m)!r};{float(l2)!r}")
    return "\n".join(out) + "\n"
