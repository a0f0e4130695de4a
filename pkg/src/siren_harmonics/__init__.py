"""Harmonic analysis of single-hidden-layer sinusoidal networks.

Expand sinusoidal MLPs into exact harmonic sums with Bessel-product
amplitudes, certify truncations with analytic tail bounds, derive
initialization schemes from the expansion, train small networks against
harmonic targets, and cross-verify analytic spectra against FFT
measurements.
"""

from .backend import available_backends, get_backend, set_backend, thread_count
from .bessel import ARGUMENT_GUARD, bessel_j, bessel_j_quadrature, j0_j1_crossing
from .errors import (
    DomainError,
    EnumerationCapError,
    ParseError,
    SirenHarmonicsError,
    TrainingDivergedError,
    ValidationError,
)
from .expansion import (
    AmplitudeOrder,
    HarmonicTerm,
    Spectrum,
    SpectrumLine,
    TruncationSpec,
    amplitude_order,
    amplitude_upper_bound,
    canonical_classes,
    canonical_spectrum,
    enumerate_indices,
    expand_network,
    expand_neuron,
    exponential_coeff,
    harmonic_term,
    sine_cosine_coeffs,
    siren_amplitude_bound,
    sorting_regime,
    tail_bound,
)
from .initialization import (
    FrequencyFit,
    PeriodicInitSpec,
    TargetSpectrum,
    least_squares_frequencies,
    periodic_first_layer,
    periodic_init,
    siren_init,
    solve_frequency_system,
    width_lower_bound,
)
from .model import (
    FreezeMask,
    ParameterGradient,
    SinusoidalNetwork,
    deserialize,
    evaluate,
    evaluate_x_derivative,
    gradient,
    serialize,
)
from .training import (
    SampleSet,
    TrainOptions,
    fit,
    l2_error,
    make_square_wave,
    make_twelve_sines,
    mse,
)
from .verification import (
    EmpiricalSpectrum,
    dft_of_network,
    dft_spectrum,
    gibbs_overshoot,
    max_bin_gap,
    parseval_residual,
    periodicity_residual,
    square_wave_fourier_partial,
)

__version__ = "0.1.0"
