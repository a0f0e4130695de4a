"""Initialization schemes: uniform SIREN draws, the width lower bound,
periodic first layers, and least-squares frequency fitting against a
target spectrum."""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ValidationError
from .expansion import TruncationSpec, canonical_classes
from .model import SinusoidalNetwork


@dataclass(frozen=True)
class TargetSpectrum:
    """Harmonic target: distinct frequencies with amplitudes (and
    optionally phases), kept sorted by descending amplitude."""

    frequencies: np.ndarray
    amplitudes: np.ndarray
    phases: np.ndarray | None = None

    def __post_init__(self):
        freqs = np.atleast_1d(np.asarray(self.frequencies, dtype=np.float64))
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=np.float64))
        phases = self.phases
        if phases is not None:
            phases = np.atleast_1d(np.asarray(phases, dtype=np.float64))
            if phases.shape != freqs.shape:
                raise ValidationError("phases must match frequencies in length")
        if freqs.shape != amps.shape or freqs.size < 1:
            raise ValidationError("need equally many frequencies and amplitudes, at least one")
        if np.unique(freqs).size != freqs.size:
            raise ValidationError("target frequencies must be distinct")
        # descending amplitude; amplitude ties broken by ascending frequency
        order = np.lexsort((freqs, -amps))
        object.__setattr__(self, "frequencies", freqs[order])
        object.__setattr__(self, "amplitudes", amps[order])
        object.__setattr__(self, "phases", None if phases is None else phases[order])

    def __len__(self) -> int:
        return self.frequencies.size

    def sample(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.float64)
        ph = self.phases if self.phases is not None else np.zeros(len(self))
        return np.sin(np.outer(xs, self.frequencies) + ph) @ self.amplitudes


@dataclass(frozen=True)
class PeriodicInitSpec:
    """First-layer recipe making the whole network periodic: each
    frequency is an integer multiple of the base 2*pi/period."""

    period: float
    integer_multipliers: tuple[int, ...]

    def __post_init__(self):
        if not self.period > 0:
            raise ValidationError(f"period must be positive, got {self.period}")
        object.__setattr__(
            self, "integer_multipliers", tuple(int(l) for l in self.integer_multipliers)
        )


@dataclass(frozen=True)
class FrequencyFit:
    """Least-squares frequency (and optional phase) fit to a target."""

    omega: np.ndarray
    residual: float
    phi: np.ndarray | None = None
    phi_residual: float | None = None
    rank_deficient: bool = False


def siren_init(
    n: int,
    seed: int,
    omega_range: tuple[float, float] = (-30.0, 30.0),
) -> SinusoidalNetwork:
    """Hidden and output weights uniform on the open interval
    (-sqrt(6/n), sqrt(6/n)); first-layer frequencies uniform on
    omega_range; phases and biases zero.  Deterministic per seed."""
    if n < 1:
        raise ValidationError(f"width must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    bound = math.sqrt(6.0 / n)

    def open_uniform(lo, hi, size):
        vals = rng.uniform(lo, hi, size=size)
        edge = (vals <= lo) | (vals >= hi)
        while np.any(edge):  # pragma: no cover - measure-zero resample
            vals[edge] = rng.uniform(lo, hi, size=int(edge.sum()))
            edge = (vals <= lo) | (vals >= hi)
        return vals

    return SinusoidalNetwork(
        omega=open_uniform(omega_range[0], omega_range[1], n),
        phi=np.zeros(n),
        hidden_matrix=open_uniform(-bound, bound, (n, n)),
        hidden_bias=np.zeros(n),
        linear_weights=open_uniform(-bound, bound, n),
        linear_bias=0.0,
    )


def width_lower_bound(target_count: int, box_bound: int) -> int:
    """Smallest width n with ((2B+1)^n - 1)/2 >= target_count, i.e.
    ceil(ln(2K+1)/ln(2B+1)) computed in exact integer arithmetic."""
    if target_count < 1:
        raise ValidationError(f"target_count must be >= 1, got {target_count}")
    if box_bound < 1:
        raise ValidationError(f"box_bound must be >= 1, got {box_bound}")
    base = 2 * box_bound + 1
    goal = 2 * target_count + 1
    n = 1
    power = base
    while power < goal:
        power *= base
        n += 1
    return n


def periodic_first_layer(spec: PeriodicInitSpec) -> np.ndarray:
    """omega_i = l_i * 2*pi / period."""
    l = np.asarray(spec.integer_multipliers, dtype=np.float64)
    return l * (2.0 * math.pi / spec.period)


def periodic_init(
    spec: PeriodicInitSpec,
    seed: int,
) -> SinusoidalNetwork:
    """SIREN-initialized network whose first layer follows spec; the
    result is periodic with spec.period."""
    n = len(spec.integer_multipliers)
    net = siren_init(n, seed)
    return net.with_updates(omega=periodic_first_layer(spec))


def solve_frequency_system(rows, targets) -> tuple[np.ndarray, float, bool]:
    """Minimum-norm least squares for rows @ omega ~ targets.

    Returns (solution, residual 2-norm, rank_deficient flag).
    """
    rows = np.asarray(rows, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[0] != targets.shape[0]:
        raise ValidationError("system rows and targets must agree in count")
    solution, _, rank, _ = np.linalg.lstsq(rows, targets, rcond=None)
    residual = float(np.linalg.norm(rows @ solution - targets))
    return solution, residual, bool(rank < rows.shape[1])


def least_squares_frequencies(
    target: TargetSpectrum, n: int, box_bound: int
) -> FrequencyFit:
    """First-layer frequencies solving the integer-combination system.

    Row i is the i-th nonzero index class in predicted-importance order
    (1-norm, then lexicographic), paired with the i-th largest-amplitude
    target frequency; phases are solved from the same rows when the
    target carries them.  The hidden bias stays out of the phase system
    and remains a free trained parameter.
    """
    count = len(target)
    if count < n:
        raise ValidationError(f"need at least as many targets ({count}) as width ({n})")
    classes = canonical_classes(n, TruncationSpec(box_bound))[1:]
    if len(classes) < count:
        raise ValidationError(
            f"box bound {box_bound} yields only {len(classes)} index classes "
            f"for width {n}; need {count}"
        )
    rows = np.array(classes[:count], dtype=np.float64)
    omega, residual, deficient = solve_frequency_system(rows, target.frequencies)
    phi = None
    phi_residual = None
    if target.phases is not None:
        phi, phi_residual, phi_deficient = solve_frequency_system(rows, target.phases)
        deficient = deficient or phi_deficient
    if deficient:
        warnings.warn(
            "frequency system is rank-deficient; returning the minimum-norm solution",
            RuntimeWarning,
            stacklevel=2,
        )
    return FrequencyFit(
        omega=omega,
        residual=residual,
        phi=phi,
        phi_residual=phi_residual,
        rank_deficient=deficient,
    )


def target_spectrum_to_json(target: TargetSpectrum) -> str:
    """JSON array of {frequency, amplitude, phase?} objects."""
    items = []
    for i in range(len(target)):
        item = {
            "frequency": float(target.frequencies[i]),
            "amplitude": float(target.amplitudes[i]),
        }
        if target.phases is not None:
            item["phase"] = float(target.phases[i])
        items.append(item)
    return json.dumps(items, indent=2) + "\n"


def target_spectrum_from_json(text: str) -> TargetSpectrum:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"target spectrum JSON is malformed: {exc}") from exc
    if not isinstance(raw, list) or not raw:
        raise ParseError("target spectrum JSON must be a non-empty array")
    freqs, amps, phases = [], [], []
    saw_phase = False
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "frequency" not in item or "amplitude" not in item:
            raise ParseError(f"target entry {i} must carry 'frequency' and 'amplitude'")
        freqs.append(float(item["frequency"]))
        amps.append(float(item["amplitude"]))
        if "phase" in item:
            saw_phase = True
            phases.append(float(item["phase"]))
        else:
            phases.append(0.0)
    return TargetSpectrum(
        frequencies=np.array(freqs),
        amplitudes=np.array(amps),
        phases=np.array(phases) if saw_phase else None,
    )
