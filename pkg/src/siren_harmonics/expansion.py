"""Exact harmonic expansion of sinusoidal neurons and networks.

A hidden neuron sin(sum_j a_j sin(w_j x + p_j) + b) is exactly equal to
the infinite sum over integer vectors k of

    alpha_k(a) * sin( <k,w> x + <k,p> + b ),   alpha_k(a) = prod_j J_{k_j}(a_j),

so a whole network expands into lines at frequencies <k,w> whose
coefficients are linear in the output weights.  This module enumerates
truncated index boxes, builds the amplitude/phase, sine-cosine and
complex-exponential coefficient forms, certifies the truncation with an
analytic tail bound, and folds colliding frequencies into a canonical
one-sided spectrum.
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product

import numpy as np

from .backend import kernels, thread_count
from .bessel import bessel_j
from .errors import EnumerationCapError, ValidationError
from .model import SinusoidalNetwork

#: Hard ceiling on enumerated indices; (2B+1)^n beyond this aborts.
DEFAULT_ENUMERATION_CAP = 10_000_000

#: Absolute tolerance under which two line frequencies are one line.
DEFAULT_FREQ_TOL = 1e-9

#: Componentwise amplitude sorting is proved for |a_j| <= 1 ...
SORTING_PROVED_LIMIT = 1.0
#: ... and observed to keep holding up to roughly the J0/J1 crossing.
SORTING_EMPIRICAL_LIMIT = 1.4

MultiIndex = tuple[int, ...]


@dataclass(frozen=True)
class TruncationSpec:
    """Sup-norm index cap B, optionally with an amplitude floor applied
    after box enumeration (dropped mass is charged to the tail bound)."""

    box_bound: int
    amplitude_floor: float | None = None

    def __post_init__(self):
        if self.box_bound < 0:
            raise ValidationError(f"box_bound must be >= 0, got {self.box_bound}")
        if self.amplitude_floor is not None and self.amplitude_floor < 0:
            raise ValidationError("amplitude_floor must be >= 0 when given")


@dataclass(frozen=True)
class HarmonicTerm:
    """One amplitude-phase line of a neuron expansion."""

    index: MultiIndex
    amplitude: float
    frequency: float
    phase: float


@dataclass(frozen=True)
class SpectrumLine:
    """One line of a spectrum in all three coefficient forms."""

    index: MultiIndex
    frequency: float
    cos_amp: float
    sin_amp: float
    complex_coeff: complex

    @property
    def magnitude(self) -> float:
        return math.hypot(self.cos_amp, self.sin_amp)


@dataclass(frozen=True)
class Spectrum:
    """Truncated harmonic expansion with a certified sup-norm tail bound.

    Evaluating the spectrum anywhere differs from the expanded function
    by at most ``tail_bound``.  ``constant`` holds the network output
    bias plus, after canonicalization, any folded zero-frequency mass.
    """

    lines: tuple[SpectrumLine, ...]
    constant: float
    truncation: TruncationSpec
    tail_bound: float
    folded: bool = False
    _arrays: dict = field(default_factory=dict, repr=False, compare=False)

    def frequencies(self) -> np.ndarray:
        return self._cache()[0]

    def _cache(self):
        if "freq" not in self._arrays:
            self._arrays["freq"] = np.array([l.frequency for l in self.lines])
            self._arrays["cos"] = np.array([l.cos_amp for l in self.lines])
            self._arrays["sin"] = np.array([l.sin_amp for l in self.lines])
        return self._arrays["freq"], self._arrays["cos"], self._arrays["sin"]

    def evaluate(self, x) -> float | np.ndarray:
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        freq, cos_a, sin_a = self._cache()
        out = kernels().accumulate_sinusoids(freq, cos_a, sin_a, xs, self.constant)
        return float(out[0]) if np.ndim(x) == 0 else out

    __call__ = evaluate


class AmplitudeOrder(Enum):
    """Guaranteed relation between |alpha_k| and |alpha_l| on 0 < |a_j| <= 1."""

    GREATER = "greater"
    LESSER = "lesser"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def enumerate_indices(
    n: int, spec: TruncationSpec, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[MultiIndex]:
    """Every k with sup-norm <= box_bound, sorted by 1-norm then
    lexicographically — a fixed order so spectra diff stably."""
    if n < 1:
        raise ValidationError(f"width must be >= 1, got {n}")
    b = spec.box_bound
    total = (2 * b + 1) ** n
    if total > cap:
        raise EnumerationCapError(
            f"(2B+1)^n = {total} exceeds the enumeration cap {cap}; "
            "lower the box bound or the width"
        )
    indices = list(product(range(-b, b + 1), repeat=n))
    indices.sort(key=lambda k: (sum(abs(e) for e in k), k))
    return indices


def canonical_classes(
    n: int, spec: TruncationSpec, cap: int = DEFAULT_ENUMERATION_CAP
) -> list[MultiIndex]:
    """One representative per {k, -k} class (first nonzero entry positive),
    zero first, in the deterministic enumeration order.  This doubles as
    the predicted-importance order: 1-norm ties broken lexicographically."""
    reps = []
    for k in enumerate_indices(n, spec, cap):
        nz = next((e for e in k if e != 0), 0)
        if nz >= 0:
            reps.append(k)
    return reps


def harmonic_term(a_row, omega, phi, b: float, k: MultiIndex) -> HarmonicTerm:
    """Amplitude, frequency and phase of the k-th line of one neuron."""
    a_row = np.asarray(a_row, dtype=np.float64)
    omega = np.asarray(omega, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    k = tuple(int(e) for e in k)
    if not (len(k) == a_row.shape[0] == omega.shape[0] == phi.shape[0]):
        raise ValidationError("index, weights, frequencies and phases must share length")
    amp = 1.0
    for ki, ai in zip(k, a_row):
        amp *= bessel_j(ki, ai)
    freq = float(np.dot(k, omega))
    phase = float(np.dot(k, phi)) + float(b)
    return HarmonicTerm(index=k, amplitude=amp, frequency=freq, phase=phase)


def sine_cosine_coeffs(term: HarmonicTerm) -> tuple[float, float]:
    """(cos_amp, sin_amp) with amp*sin(f x + phase) = cos_amp*cos(f x) + sin_amp*sin(f x)."""
    return term.amplitude * math.sin(term.phase), term.amplitude * math.cos(term.phase)


def exponential_coeff(term: HarmonicTerm, k: MultiIndex, b: float) -> complex:
    """Coefficient of e^{i <k,w> x} once the +k and -k sine lines are merged.

    c_k = alpha_k e^{i<k,p>} (e^{ib} - (-1)^{sum k_j} e^{-ib}) / (2i); summing
    c_k e^{i f_k x} over a sign-symmetric index box reproduces the real
    amplitude-phase sum exactly.
    """
    parity = -1.0 if sum(abs(int(e)) for e in k) % 2 else 1.0
    kphi = term.phase - b
    bracket = cmath.exp(1j * b) - parity * cmath.exp(-1j * b)
    return term.amplitude * cmath.exp(1j * kphi) * bracket / 2j


def amplitude_upper_bound(a_row, k: MultiIndex) -> float:
    """prod_j (|a_j|/2)^{|k_j|} / |k_j|! — strict bound on |alpha_k| for
    nonzero weights."""
    a_row = np.asarray(a_row, dtype=np.float64)
    if len(k) != a_row.shape[0]:
        raise ValidationError("index and weight row must share length")
    out = 1.0
    for ki, ai in zip(k, a_row):
        ki = abs(int(ki))
        out *= (abs(ai) / 2.0) ** ki / math.factorial(ki)
    return out


def siren_amplitude_bound(n: int, k: MultiIndex) -> float:
    """Bound on |<c, A_k>| and |<c, B_k>| when all hidden and output
    weights lie in (-sqrt(6/n), sqrt(6/n)):

        sqrt(6n) * (3/(2n))^{(sum |k_j|)/2} / prod |k_j|!
    """
    if n < 1:
        raise ValidationError(f"width must be >= 1, got {n}")
    order = sum(abs(int(e)) for e in k)
    fact = 1.0
    for e in k:
        fact *= math.factorial(abs(int(e)))
    return math.sqrt(6.0 * n) * (3.0 / (2.0 * n)) ** (order / 2.0) / fact


def _exp_half_tail(half: float, b: int) -> float:
    # 2 * sum_{j>b} half^j / j!, all terms positive: no cancellation
    term = half**b / math.factorial(b) if b > 0 else 1.0
    total = 0.0
    j = b
    while True:
        j += 1
        term *= half / j
        total += term
        if term <= 1e-30 * (total + 1e-300):
            return 2.0 * total


def tail_bound(a_row, box_bound: int) -> float:
    """Sup-norm bound on the mass outside the box: with
    S_j = 2 e^{|a_j|/2} - 1 and P_j its degree-B partial sum, returns
    prod S_j - prod P_j, accumulated without cancellation."""
    if box_bound < 0:
        raise ValidationError(f"box_bound must be >= 0, got {box_bound}")
    a_row = np.atleast_1d(np.asarray(a_row, dtype=np.float64))
    diff = 0.0
    prod_partial = 1.0
    for ai in a_row:
        half = abs(ai) / 2.0
        tail = _exp_half_tail(half, box_bound)
        partial = 1.0 + 2.0 * sum(
            half**j / math.factorial(j) for j in range(1, box_bound + 1)
        )
        full = partial + tail
        diff = diff * full + prod_partial * tail
        prod_partial *= partial
    return diff


def amplitude_order(k: MultiIndex, l: MultiIndex) -> AmplitudeOrder:
    """Componentwise-domination predicate behind amplitude sorting.

    GREATER means |alpha_k(a)| > |alpha_l(a)| is guaranteed for every a
    with 0 < |a_j| <= 1.  Index pairs whose entrywise absolute values
    coincide (e.g. sign flips) always share the same magnitude, so they
    report EQUAL rather than a strict ordering.
    """
    if len(k) != len(l):
        raise ValidationError("indices must share length")
    ka = tuple(abs(int(e)) for e in k)
    la = tuple(abs(int(e)) for e in l)
    if ka == la:
        return AmplitudeOrder.EQUAL
    if all(x <= y for x, y in zip(ka, la)):
        return AmplitudeOrder.GREATER
    if all(y <= x for x, y in zip(ka, la)):
        return AmplitudeOrder.LESSER
    return AmplitudeOrder.INCOMPARABLE


def sorting_regime(a_row) -> str:
    """'proved', 'empirical' (holds in practice up to ~1.4), or 'none'."""
    sup = float(np.max(np.abs(np.asarray(a_row, dtype=np.float64))))
    if sup <= SORTING_PROVED_LIMIT:
        return "proved"
    if sup <= SORTING_EMPIRICAL_LIMIT:
        return "empirical"
    return "none"


def _neuron_coefficients(rows, hbias, omega, phi, indices_arr):
    """Per-neuron alpha, cos/sin and complex coefficients for every index.

    rows: (m, n) hidden rows; returns arrays of shape (m, L).
    """
    m, n = rows.shape
    npos = np.max(np.abs(indices_arr)) if indices_arr.size else 0
    jtable = np.empty((m, n, npos + 1))
    for i in range(m):
        for j in range(n):
            for order in range(npos + 1):
                jtable[i, j, order] = bessel_j(order, rows[i, j])
    absk = np.abs(indices_arr)  # (L, n)
    neg_odd = (indices_arr < 0) & (absk % 2 == 1)
    parity = np.where(neg_odd.sum(axis=1) % 2 == 1, -1.0, 1.0)  # (L,)
    cols = np.arange(n)
    kphi = indices_arr @ phi  # (L,)
    alphas = np.empty((m, indices_arr.shape[0]))
    cos_amps = np.empty_like(alphas)
    sin_amps = np.empty_like(alphas)
    complex_coeffs = np.empty(alphas.shape, dtype=np.complex128)
    total_parity = np.where(absk.sum(axis=1) % 2 == 1, -1.0, 1.0)
    for i in range(m):
        factors = jtable[i][cols[None, :], absk]  # (L, n)
        alpha = factors.prod(axis=1) * parity
        lam = kphi + hbias[i]
        alphas[i] = alpha
        cos_amps[i] = alpha * np.sin(lam)
        sin_amps[i] = alpha * np.cos(lam)
        bracket = np.exp(1j * hbias[i]) - total_parity * np.exp(-1j * hbias[i])
        complex_coeffs[i] = alpha * np.exp(1j * kphi) * bracket / 2j
    return alphas, cos_amps, sin_amps, complex_coeffs


def _chunked(indices_arr, worker):
    """Apply worker to row-chunks of indices_arr and stitch results in order."""
    threads = thread_count()
    nrows = indices_arr.shape[0]
    if threads <= 1 or nrows < 4096:
        return worker(indices_arr)
    bounds = np.linspace(0, nrows, threads + 1, dtype=int)
    chunks = [indices_arr[lo:hi] for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(worker, chunks))
    return tuple(np.concatenate([p[i] for p in parts], axis=-1) for i in range(4))


def _expand(rows, hbias, cweights, constant, omega, phi, spec, cap):
    n = omega.shape[0]
    indices = enumerate_indices(n, spec, cap)
    indices_arr = np.array(indices, dtype=np.int64).reshape(len(indices), n)
    worker = lambda chunk: _neuron_coefficients(rows, hbias, omega, phi, chunk)
    alphas, cos_amps, sin_amps, complex_coeffs = _chunked(indices_arr, worker)
    line_cos = cweights @ cos_amps
    line_sin = cweights @ sin_amps
    line_complex = cweights @ complex_coeffs
    freqs = indices_arr @ omega
    bound = float(np.abs(cweights) @ [tail_bound(rows[i], spec.box_bound) for i in range(rows.shape[0])])

    keep = np.ones(len(indices), dtype=bool)
    if spec.amplitude_floor is not None and spec.amplitude_floor > 0.0:
        mags = np.hypot(line_cos, line_sin)
        keep = mags >= spec.amplitude_floor
        bound += float(mags[~keep].sum())

    lines = tuple(
        SpectrumLine(
            index=indices[i],
            frequency=float(freqs[i]),
            cos_amp=float(line_cos[i]),
            sin_amp=float(line_sin[i]),
            complex_coeff=complex(line_complex[i]),
        )
        for i in np.nonzero(keep)[0]
    )
    return Spectrum(lines=lines, constant=constant, truncation=spec, tail_bound=bound)


def expand_neuron(
    a_row, omega, phi, b: float, spec: TruncationSpec, cap: int = DEFAULT_ENUMERATION_CAP
) -> Spectrum:
    """Truncated expansion of a single hidden neuron."""
    a_row = np.atleast_1d(np.asarray(a_row, dtype=np.float64))
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    phi = np.atleast_1d(np.asarray(phi, dtype=np.float64))
    if not (a_row.shape == omega.shape == phi.shape):
        raise ValidationError("weight row, frequencies and phases must share length")
    rows = a_row.reshape(1, -1)
    return _expand(
        rows,
        np.array([float(b)]),
        np.array([1.0]),
        0.0,
        omega,
        phi,
        spec,
        cap,
    )


def expand_network(
    net: SinusoidalNetwork, spec: TruncationSpec, cap: int = DEFAULT_ENUMERATION_CAP
) -> Spectrum:
    """Truncated expansion of a whole network; every neuron contributes
    over the same index set, so the frequency set depends only on omega
    and the box bound."""
    return _expand(
        net.hidden_matrix,
        net.hidden_bias,
        net.linear_weights,
        net.linear_bias,
        net.omega,
        net.phi,
        spec,
        cap,
    )


def _class_key(index: MultiIndex) -> tuple:
    return (sum(abs(e) for e in index), index)


def canonical_spectrum(spectrum: Spectrum, freq_tol: float = DEFAULT_FREQ_TOL) -> Spectrum:
    """Fold the two-sided line set onto nonnegative frequencies, merge
    lines closer than freq_tol, and move zero-frequency mass into the
    constant.  The evaluated signal is unchanged."""
    folded = []
    for line in spectrum.lines:
        if line.frequency < 0.0:
            folded.append(
                (
                    -line.frequency,
                    line.cos_amp,
                    -line.sin_amp,
                    tuple(-e for e in line.index),
                    line.index,
                )
            )
        else:
            folded.append((line.frequency, line.cos_amp, line.sin_amp, line.index, line.index))
    folded.sort(key=lambda item: (item[0], _class_key(item[3])))

    constant = spectrum.constant
    lines = []
    i = 0
    while i < len(folded):
        j = i + 1
        while j < len(folded) and folded[j][0] - folded[j - 1][0] <= freq_tol:
            j += 1
        group = folded[i:j]
        freq = group[0][0]
        cos_amp = math.fsum(item[1] for item in group)
        sin_amp = math.fsum(item[2] for item in group)
        if freq <= freq_tol:
            constant += cos_amp
        else:
            # representative: first member (in class order) that did not flip
            unflipped = [item for item in group if item[3] == item[4]]
            rep = min(unflipped or group, key=lambda item: _class_key(item[3]))[3]
            lines.append(
                SpectrumLine(
                    index=rep,
                    frequency=freq,
                    cos_amp=cos_amp,
                    sin_amp=sin_amp,
                    complex_coeff=complex(cos_amp, -sin_amp) / 2.0,
                )
            )
        i = j
    return Spectrum(
        lines=tuple(lines),
        constant=constant,
        truncation=spectrum.truncation,
        tail_bound=spectrum.tail_bound,
        folded=True,
    )


def spectrum_to_csv(spectrum: Spectrum) -> str:
    """CSV with header k;frequency;alpha;A;B;c_re;c_im (alpha = line magnitude)."""
    out = ["k;frequency;alpha;A;B;c_re;c_im"]
    for line in spectrum.lines:
        k = ",".join(str(e) for e in line.index)
        out.append(
            f"{k};{line.frequency!r};{line.magnitude!r};{line.cos_amp!r};"
            f"{line.sin_amp!r};{line.complex_coeff.real!r};{line.complex_coeff.imag!r}"
        )
    return "\n".join(out) + "\n"


def spectrum_to_json(spectrum: Spectrum) -> str:
    payload = {
        "truncation": {
            "box_bound": spectrum.truncation.box_bound,
            "amplitude_floor": spectrum.truncation.amplitude_floor,
        },
        "tail_bound": spectrum.tail_bound,
        "constant": spectrum.constant,
        "folded": spectrum.folded,
        "lines": [
            {
                "k": list(line.index),
                "frequency": line.frequency,
                "alpha": line.magnitude,
                "A": line.cos_amp,
                "B": line.sin_amp,
                "c_re": line.complex_coeff.real,
                "c_im": line.complex_coeff.imag,
            }
            for line in spectrum.lines
        ],
    }
    return json.dumps(payload, indent=2) + "\n"
