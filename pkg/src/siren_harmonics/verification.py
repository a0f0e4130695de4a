"""Independent checks on the analytic machinery: FFT measurement of
sampled spectra, periodicity residuals, square-wave Fourier partial
sums and Gibbs overshoot measurement."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import kernels
from .errors import ValidationError
from .expansion import Spectrum
from .model import SinusoidalNetwork, evaluate

DEFAULT_SAMPLE_COUNT = 4096


@dataclass(frozen=True)
class EmpiricalSpectrum:
    """One-sided measured spectrum: bin m sits at frequency 2*pi*m/period
    and carries the recombined complex amplitude A - iB of that harmonic."""

    frequencies: np.ndarray
    amplitudes: np.ndarray  # complex
    sample_count: int
    period: float

    def magnitude(self) -> np.ndarray:
        return np.abs(self.amplitudes)


def dft_spectrum(values, period: float, xs=None) -> EmpiricalSpectrum:
    """Measured spectrum of uniform samples covering one period.

    The sample count must be a power of two >= 64.  Normalization makes
    a unit-amplitude sinusoid at a bin frequency read magnitude 1 (the
    conjugate +/- bins are recombined); bin 0 carries the mean.  When
    ``xs`` is given it is checked for uniform coverage of one period.
    """
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    if n < 64 or n & (n - 1):
        raise ValidationError(f"sample count must be a power of two >= 64, got {n}")
    if xs is not None:
        xs = np.asarray(xs, dtype=np.float64)
        if xs.shape != values.shape:
            raise ValidationError("xs and values must have equal length")
        step = period / n
        gaps = np.diff(xs)
        if not np.allclose(gaps, step, rtol=0, atol=1e-9 * max(1.0, abs(period))):
            raise ValidationError("samples are not uniform over one period")
    coeffs = kernels().fft_radix2(values.astype(np.complex128))
    half = n // 2
    amps = np.empty(half + 1, dtype=np.complex128)
    amps[0] = coeffs[0] / n
    amps[1:half] = 2.0 * coeffs[1:half] / n
    amps[half] = coeffs[half] / n
    freqs = 2.0 * math.pi * np.arange(half + 1) / period
    return EmpiricalSpectrum(
        frequencies=freqs, amplitudes=amps, sample_count=n, period=float(period)
    )


def dft_of_network(
    net: SinusoidalNetwork, period: float, sample_count: int = DEFAULT_SAMPLE_COUNT
) -> EmpiricalSpectrum:
    xs = period * np.arange(sample_count) / sample_count
    return dft_spectrum(evaluate(net, xs), period)


def max_bin_gap(empirical: EmpiricalSpectrum, spectrum: Spectrum) -> float:
    """Largest |measured - analytic| line magnitude over all bins.

    The analytic spectrum must be canonical (one-sided); its lines are
    matched to the nearest bin, which must resolve them (all analytic
    frequencies below Nyquist)."""
    if not spectrum.folded:
        raise ValidationError("analytic spectrum must be canonical; fold it first")
    base = 2.0 * math.pi / empirical.period
    nyquist = empirical.frequencies[-1]
    measured = empirical.magnitude().copy()
    measured[0] = abs(empirical.amplitudes[0].real)  # mean, sign-insensitive
    analytic = np.zeros_like(measured)
    analytic[0] = abs(spectrum.constant)
    for line in spectrum.lines:
        if line.frequency > nyquist + 0.5 * base:
            raise ValidationError(
                f"analytic line at {line.frequency:.6g} exceeds the Nyquist "
                f"frequency {nyquist:.6g}; increase the sample count"
            )
        m = int(round(line.frequency / base))
        analytic[m] += line.magnitude
    return float(np.max(np.abs(measured - analytic)))


def periodicity_residual(
    net: SinusoidalNetwork,
    period: float,
    trials: int = 64,
    seed: int = 0,
    x_range: tuple[float, float] = (-10.0, 10.0),
) -> float:
    """max over random x of |f(x + period) - f(x)|."""
    if not period > 0:
        raise ValidationError("period must be positive")
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(x_range[0], x_range[1], size=trials)
    return float(np.max(np.abs(evaluate(net, xs + period) - evaluate(net, xs))))


def parseval_residual(spectrum: Spectrum, values: np.ndarray) -> float:
    """|mean power of samples - (constant^2 + sum (A^2+B^2)/2)| for a
    canonical non-colliding spectrum sampled over one period."""
    if not spectrum.folded:
        raise ValidationError("parseval check needs a canonical spectrum")
    values = np.asarray(values, dtype=np.float64)
    power = float(values @ values) / values.size
    analytic = spectrum.constant**2 + 0.5 * sum(
        line.cos_amp**2 + line.sin_amp**2 for line in spectrum.lines
    )
    return abs(power - analytic)


def square_wave_fourier_partial(num_terms: int, x) -> float | np.ndarray:
    """Partial Fourier sum of the amplitude-0.5 square wave:
    -sum of 2/(i*pi) sin(i*pi*x) over the first num_terms odd i."""
    if num_terms < 1:
        raise ValidationError("num_terms must be >= 1")
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    orders = 2 * np.arange(num_terms) + 1
    out = -np.sin(math.pi * np.outer(xs, orders)) @ (2.0 / (math.pi * orders))
    return float(out[0]) if np.ndim(x) == 0 else out


def gibbs_overshoot(
    signal,
    jump_location: float,
    plateau: float,
    window: float = 0.2,
    grid_points: int = 10_000,
) -> float:
    """Worst excess of |signal| above |plateau| on the open interval just
    after the jump; 0 for an approximation with no ringing."""
    if not window > 0:
        raise ValidationError("window must be positive")
    xs = jump_location + window * np.arange(1, grid_points + 1) / (grid_points + 1)
    vals = np.abs(np.asarray(signal(xs), dtype=np.float64))
    return float(np.max(vals - abs(plateau)))


def empirical_spectrum_to_csv(spec: EmpiricalSpectrum) -> str:
    out = ["frequency;magnitude;phase"]
    for f, a in zip(spec.frequencies, spec.amplitudes):
        out.append(f"{float(f)!r};{float(abs(a))!r};{math.atan2(a.imag, a.real)!r}")
    return "\n".join(out) + "\n"
