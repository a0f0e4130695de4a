"""Vectorized numpy implementations of the hot kernels.

Signature-compatible twin of ``_kernels_numba``; pure numpy so it runs
everywhere.  All float inputs are float64 C-contiguous arrays.
"""

from __future__ import annotations

import numpy as np

# Adam updates leave frozen entries bit-identical by writing only through
# the free mask; gradients of frozen entries are still computed (cheap)
# but never consumed.


def forward_batch(omega, phi, hidden, hbias, lweights, lbias, xs):
    """Network output at every x: sum_i c_i sin(sum_j a_ij sin(w_j x + p_j) + b_i) + d."""
    s = np.sin(np.outer(xs, omega) + phi)
    z = s @ hidden.T + hbias
    return np.sin(z) @ lweights + lbias


def hidden_preactivations(omega, phi, hidden, hbias, xs):
    """Per-sample hidden pre-activations z_i (rows: samples)."""
    s = np.sin(np.outer(xs, omega) + phi)
    return s @ hidden.T + hbias


def adam_fit(
    omega,
    phi,
    hidden,
    hbias,
    lweights,
    lbias,
    xs,
    ys,
    steps,
    lr,
    beta1,
    beta2,
    eps,
    free_omega,
    free_phi,
    free_hidden,
    free_hbias,
    free_lweights,
    free_lbias,
    divergence_limit,
):
    """Full-batch Adam on the mean squared error.

    Returns the updated parameter arrays, the per-step mse history
    (length steps+1, entry 0 is the starting loss) and a status int:
    -1 on success, otherwise the step index at which the loss exceeded
    ``divergence_limit`` (history is truncated with NaN beyond it).
    """
    omega = omega.copy()
    phi = phi.copy()
    hidden = hidden.copy()
    hbias = hbias.copy()
    lweights = lweights.copy()
    lbias = float(lbias)

    npts = xs.shape[0]
    hist = np.full(steps + 1, np.nan)

    m_om = np.zeros_like(omega)
    v_om = np.zeros_like(omega)
    m_ph = np.zeros_like(phi)
    v_ph = np.zeros_like(phi)
    m_hd = np.zeros_like(hidden)
    v_hd = np.zeros_like(hidden)
    m_hb = np.zeros_like(hbias)
    v_hb = np.zeros_like(hbias)
    m_lw = np.zeros_like(lweights)
    v_lw = np.zeros_like(lweights)
    m_lb = 0.0
    v_lb = 0.0

    xcol = xs[:, None]
    for step in range(steps + 1):
        arg = xcol * omega + phi
        s = np.sin(arg)
        z = s @ hidden.T + hbias
        sz = np.sin(z)
        f = sz @ lweights + lbias
        r = f - ys
        mse = float(r @ r) / npts
        hist[step] = mse
        if not np.isfinite(mse) or mse > divergence_limit:
            return omega, phi, hidden, hbias, lweights, lbias, hist, step
        if step == steps:
            break

        cz = np.cos(z)
        c1 = np.cos(arg)
        w = (2.0 / npts) * r
        wc = (cz * lweights) * w[:, None]
        g_lw = sz.T @ w
        g_lb = float(w.sum())
        g_hb = wc.sum(axis=0)
        g_hd = wc.T @ s
        u = (wc @ hidden) * c1
        g_ph = u.sum(axis=0)
        g_om = (u * xcol).sum(axis=0)

        t = step + 1
        c_m = 1.0 - beta1**t
        c_v = 1.0 - beta2**t

        for par, grad, m, v, free in (
            (omega, g_om, m_om, v_om, free_omega),
            (phi, g_ph, m_ph, v_ph, free_phi),
            (hidden, g_hd, m_hd, v_hd, free_hidden),
            (hbias, g_hb, m_hb, v_hb, free_hbias),
            (lweights, g_lw, m_lw, v_lw, free_lweights),
        ):
            m *= beta1
            m += (1.0 - beta1) * grad
            v *= beta2
            v += (1.0 - beta2) * grad * grad
            delta = lr * (m / c_m) / (np.sqrt(v / c_v) + eps)
            par[free] -= delta[free]

        if free_lbias:
            m_lb = beta1 * m_lb + (1.0 - beta1) * g_lb
            v_lb = beta2 * v_lb + (1.0 - beta2) * g_lb * g_lb
            lbias -= lr * (m_lb / c_m) / (np.sqrt(v_lb / c_v) + eps)

    return omega, phi, hidden, hbias, lweights, lbias, hist, -1


def accumulate_sinusoids(freqs, cos_amps, sin_amps, xs, constant):
    """constant + sum_l A_l cos(f_l x) + B_l sin(f_l x) at every x."""
    out = np.full(xs.shape[0], constant)
    # chunk the line axis to bound the (points x lines) temporaries
    chunk = max(1, int(4_000_000 // max(1, xs.shape[0])))
    for lo in range(0, freqs.shape[0], chunk):
        hi = lo + chunk
        arg = np.outer(xs, freqs[lo:hi])
        out += np.cos(arg) @ cos_amps[lo:hi]
        out += np.sin(arg) @ sin_amps[lo:hi]
    return out


def fft_radix2(values):
    """Iterative radix-2 decimation-in-time FFT; length must be a power of two."""
    x = np.asarray(values, dtype=np.complex128).copy()
    n = x.shape[0]
    if n & (n - 1) or n == 0:
        raise ValueError(f"fft length must be a power of two, got {n}")
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.intp)
    idx = np.arange(n)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    x = x[rev]
    half = 1
    while half < n:
        tw = np.exp(-1j * np.pi * np.arange(half) / half)
        blocks = x.reshape(-1, 2 * half)
        even = blocks[:, :half].copy()
        odd = blocks[:, half:] * tw
        blocks[:, :half] = even + odd
        blocks[:, half:] = even - odd
        half *= 2
    return x
