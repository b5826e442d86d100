"""Numpy implementations of the hot kernels (fallback for ``_ckernels``).

Both functions evaluate defining sums over the rectangular block window
directly; they never use the closed-form weights, so they serve as oracles
for the simplified expressions.
"""
import numpy as np


def _twiddles(n_fft):
    # tw[q] = exp(-j 2 pi q / n_fft)
    return np.exp(-2j * np.pi * np.arange(n_fft) / n_fft)


def direct_coefficients(taps, l_d, n_fft, n_cp, sc_offset, n_sc, blocks):
    """Demodulated coefficients ``H[b, l, i]`` from the k/m double sum.

    ``H[b, l, i] = 1/N sum_k sum_m h[m] exp(-j2pi (l m - k (l - i) + b l N_cp) / N)
    rect[k - m - b (N + N_cp)]``. Returns shape ``(len(blocks), n_sc, n_sc)``
    indexed ``[b, l - sc_offset, i - sc_offset]``.
    """
    taps = np.ascontiguousarray(taps, dtype=np.complex128)
    ms = np.arange(taps.size, dtype=np.int64) - l_d
    ls = np.arange(sc_offset, sc_offset + n_sc, dtype=np.int64)
    ks = np.arange(n_fft, dtype=np.int64)
    tw = _twiddles(n_fft)

    g = taps[:, None] * tw[np.outer(ms, ls) % n_fft]
    up = np.conj(tw)[np.outer(ks, ls) % n_fft]
    down = tw[np.outer(ks, ls) % n_fft]
    out = np.empty((len(blocks), n_sc, n_sc), dtype=np.complex128)
    for bi, b in enumerate(blocks):
        lag = ks[:, None] - ms[None, :] - b * (n_fft + n_cp)
        window = ((lag >= -n_cp) & (lag <= n_fft - 1)).astype(np.float64)
        q = window @ g
        phase = tw[(b * ls * n_cp) % n_fft]
        out[bi] = phase[:, None] * ((q * up).T @ down) / n_fft
    return out


def window_sums(ms, deltas, n_fft, n_cp):
    """``1/N sum_k exp(j2pi k delta / N) rect(k - m)``, shape ``(len(deltas), len(ms))``."""
    ms = np.asarray(ms, dtype=np.int64)
    deltas = np.asarray(deltas, dtype=np.int64)
    ks = np.arange(n_fft, dtype=np.int64)
    lag = ks[:, None] - ms[None, :]
    window = ((lag >= -n_cp) & (lag <= n_fft - 1)).astype(np.float64)
    rot = np.conj(_twiddles(n_fft))[np.outer(deltas, ks) % n_fft]
    return rot @ window / n_fft
