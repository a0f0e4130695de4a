"""Numba-jitted implementations of the hot kernels.

Loop-style twins of ``_kernels_numpy``; importing this module requires
numba.  Compilation is cached on disk after the first call.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def forward_batch(omega, phi, hidden, hbias, lweights, lbias, xs):
    n = omega.shape[0]
    npts = xs.shape[0]
    out = np.empty(npts)
    s = np.empty(n)
    for p in range(npts):
        x = xs[p]
        for j in range(n):
            s[j] = math.sin(omega[j] * x + phi[j])
        acc = lbias
        for i in range(n):
            z = hbias[i]
            for j in range(n):
                z += hidden[i, j] * s[j]
            acc += lweights[i] * math.sin(z)
        out[p] = acc
    return out


@njit(cache=True)
def hidden_preactivations(omega, phi, hidden, hbias, xs):
    n = omega.shape[0]
    npts = xs.shape[0]
    out = np.empty((npts, n))
    for p in range(npts):
        x = xs[p]
        for i in range(n):
            z = hbias[i]
            for j in range(n):
                z += hidden[i, j] * math.sin(omega[j] * x + phi[j])
            out[p, i] = z
    return out


@njit(cache=True)
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
    n = omega.shape[0]
    npts = xs.shape[0]

    w_om = omega.copy()
    w_ph = phi.copy()
    w_hd = hidden.copy()
    w_hb = hbias.copy()
    w_lw = lweights.copy()
    w_lb = lbias

    hist = np.full(steps + 1, np.nan)

    m_om = np.zeros(n)
    v_om = np.zeros(n)
    m_ph = np.zeros(n)
    v_ph = np.zeros(n)
    m_hd = np.zeros((n, n))
    v_hd = np.zeros((n, n))
    m_hb = np.zeros(n)
    v_hb = np.zeros(n)
    m_lw = np.zeros(n)
    v_lw = np.zeros(n)
    m_lb = 0.0
    v_lb = 0.0

    g_om = np.empty(n)
    g_ph = np.empty(n)
    g_hd = np.empty((n, n))
    g_hb = np.empty(n)
    g_lw = np.empty(n)

    s = np.empty(n)
    c1 = np.empty(n)
    sz = np.empty(n)
    cz = np.empty(n)
    wc = np.empty(n)

    for step in range(steps + 1):
        for i in range(n):
            g_om[i] = 0.0
            g_ph[i] = 0.0
            g_hb[i] = 0.0
            g_lw[i] = 0.0
            for j in range(n):
                g_hd[i, j] = 0.0
        g_lb = 0.0
        sse = 0.0

        for p in range(npts):
            x = xs[p]
            for j in range(n):
                arg = w_om[j] * x + w_ph[j]
                s[j] = math.sin(arg)
                c1[j] = math.cos(arg)
            f = w_lb
            for i in range(n):
                z = w_hb[i]
                for j in range(n):
                    z += w_hd[i, j] * s[j]
                sz[i] = math.sin(z)
                cz[i] = math.cos(z)
                f += w_lw[i] * sz[i]
            r = f - ys[p]
            sse += r * r
            w2 = 2.0 * r / npts
            g_lb += w2
            for i in range(n):
                wci = w2 * w_lw[i] * cz[i]
                wc[i] = wci
                g_lw[i] += w2 * sz[i]
                g_hb[i] += wci
                for j in range(n):
                    g_hd[i, j] += wci * s[j]
            for j in range(n):
                u = 0.0
                for i in range(n):
                    u += wc[i] * w_hd[i, j]
                g_ph[j] += u * c1[j]
                g_om[j] += u * c1[j] * x

        mse = sse / npts
        hist[step] = mse
        if not math.isfinite(mse) or mse > divergence_limit:
            return w_om, w_ph, w_hd, w_hb, w_lw, w_lb, hist, step
        if step == steps:
            break

        t = step + 1
        c_m = 1.0 - beta1**t
        c_v = 1.0 - beta2**t

        for j in range(n):
            if free_omega[j]:
                m_om[j] = beta1 * m_om[j] + (1.0 - beta1) * g_om[j]
                v_om[j] = beta2 * v_om[j] + (1.0 - beta2) * g_om[j] * g_om[j]
                w_om[j] -= lr * (m_om[j] / c_m) / (math.sqrt(v_om[j] / c_v) + eps)
            if free_phi[j]:
                m_ph[j] = beta1 * m_ph[j] + (1.0 - beta1) * g_ph[j]
                v_ph[j] = beta2 * v_ph[j] + (1.0 - beta2) * g_ph[j] * g_ph[j]
                w_ph[j] -= lr * (m_ph[j] / c_m) / (math.sqrt(v_ph[j] / c_v) + eps)
            if free_hbias[j]:
                m_hb[j] = beta1 * m_hb[j] + (1.0 - beta1) * g_hb[j]
                v_hb[j] = beta2 * v_hb[j] + (1.0 - beta2) * g_hb[j] * g_hb[j]
                w_hb[j] -= lr * (m_hb[j] / c_m) / (math.sqrt(v_hb[j] / c_v) + eps)
            if free_lweights[j]:
                m_lw[j] = beta1 * m_lw[j] + (1.0 - beta1) * g_lw[j]
                v_lw[j] = beta2 * v_lw[j] + (1.0 - beta2) * g_lw[j] * g_lw[j]
                w_lw[j] -= lr * (m_lw[j] / c_m) / (math.sqrt(v_lw[j] / c_v) + eps)
            for i in range(n):
                if free_hidden[j, i]:
                    m_hd[j, i] = beta1 * m_hd[j, i] + (1.0 - beta1) * g_hd[j, i]
                    v_hd[j, i] = beta2 * v_hd[j, i] + (1.0 - beta2) * g_hd[j, i] * g_hd[j, i]
                    w_hd[j, i] -= lr * (m_hd[j, i] / c_m) / (math.sqrt(v_hd[j, i] / c_v) + eps)

        if free_lbias:
            m_lb = beta1 * m_lb + (1.0 - beta1) * g_lb
            v_lb = beta2 * v_lb + (1.0 - beta2) * g_lb * g_lb
            w_lb -= lr * (m_lb / c_m) / (math.sqrt(v_lb / c_v) + eps)

    return w_om, w_ph, w_hd, w_hb, w_lw, w_lb, hist, -1


@njit(cache=True)
def accumulate_sinusoids(freqs, cos_amps, sin_amps, xs, constant):
    npts = xs.shape[0]
    nlines = freqs.shape[0]
    out = np.full(npts, constant)
    for l in range(nlines):
        f = freqs[l]
        a = cos_amps[l]
        b = sin_amps[l]
        for p in range(npts):
            arg = f * xs[p]
            out[p] += a * math.cos(arg) + b * math.sin(arg)
    return out


@njit(cache=True)
def fft_radix2(values):
    x = values.astype(np.complex128)
    n = x.shape[0]
    if n & (n - 1) or n == 0:
        raise ValueError("fft length must be a power of two")
    # bit-reversal permutation
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            x[i], x[j] = x[j], x[i]
    half = 1
    while half < n:
        step = math.pi / half
        for start in range(0, n, 2 * half):
            for k in range(half):
                ang = -step * k
                tw = complex(math.cos(ang), math.sin(ang))
                a = x[start + k]
                b = x[start + k + half] * tw
                x[start + k] = a + b
                x[start + k + half] = a - b
        half *= 2
    return x
