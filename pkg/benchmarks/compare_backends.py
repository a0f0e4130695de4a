#!/usr/bin/env python3
"""Time the hot kernels under both backends.

Run after installing the package (numba optional but recommended):

    python benchmarks/compare_backends.py

Each kernel is warmed once (numba JIT compilation happens there) and
then timed over repeated calls.
"""

import math
import time

import numpy as np

from siren_harmonics import backend
from siren_harmonics.initialization import siren_init
from siren_harmonics.model import FreezeMask
from siren_harmonics.training import SampleSet, TrainOptions, fit


def timed(fn, repeats):
    fn()  # warm-up / JIT
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def kernel_cases():
    rng = np.random.default_rng(0)
    net = siren_init(4, seed=0)
    xs = rng.uniform(-1, 1, 4096)
    freqs = rng.uniform(-50, 50, 4096)
    cos_a = rng.normal(0, 1, 4096)
    sin_a = rng.normal(0, 1, 4096)
    grid = rng.uniform(-1, 1, 1024)
    signal = (rng.normal(0, 1, 4096) + 0j).astype(np.complex128)

    data = SampleSet(xs=np.linspace(-1, 1, 1024), ys=np.sin(np.linspace(-1, 1, 1024) * 9.0),
                     domain=(-1.0, 1.0))
    opts = TrainOptions(steps=500, learning_rate=1e-3, freeze=FreezeMask.groups(4, omega=True))

    k = backend.kernels()
    return [
        ("forward_batch (width 4, 4096 pts)", 20,
         lambda: k.forward_batch(net.omega, net.phi, net.hidden_matrix, net.hidden_bias,
                                 net.linear_weights, net.linear_bias, xs)),
        ("accumulate_sinusoids (4096 lines x 1024 pts)", 5,
         lambda: k.accumulate_sinusoids(freqs, cos_a, sin_a, grid, 0.0)),
        ("fft_radix2 (4096)", 20, lambda: k.fft_radix2(signal)),
        ("adam_fit (500 steps, width 4, 1024 pts)", 3,
         lambda: fit(net, data, opts)),
    ]


def main():
    rows = {}
    for name in backend.available_backends():
        backend.set_backend(name)
        for label, repeats, fn in kernel_cases():
            rows.setdefault(label, {})[name] = timed(fn, repeats)

    names = backend.available_backends()
    width = max(len(label) for label in rows)
    header = f"{'kernel'.ljust(width)}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) > 1:
        header += "  speedup"
    print(header)
    print("-" * len(header))
    for label, times in rows.items():
        line = label.ljust(width) + "  " + "  ".join(f"{times[n] * 1e3:9.3f} ms" for n in names)
        if "numba" in times and "numpy" in times:
            line += f"  {times['numpy'] / times['numba']:6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
