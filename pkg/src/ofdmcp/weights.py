"""Weight functions that turn each demodulated channel coefficient into a
single weighted Fourier sum over the channel taps.

``c[m]`` is the fraction of the FFT window overlapped by the block window of a
tap at delay ``m`` (a trapezoid in ``m``). ``ctilde[l, i][m]`` is the complex
leakage from subcarrier ``l`` into subcarrier ``i`` for the same tap, and
``a[b, l, i][m]`` is either of them shifted by ``b`` blocks and phase-rotated.

Phases are evaluated from integer arguments reduced modulo ``n_fft`` so that
large ``m * (l - i)`` products do not lose precision.
"""
from __future__ import annotations

import numpy as np

from .core import OfdmGrid


def _cis(q, n_fft: int):
    """``exp(j 2 pi q / n_fft)`` for integer ``q`` (scalar or array)."""
    return np.exp(2j * np.pi * (np.mod(q, n_fft) / n_fft))


def c_weight(m: int, grid: OfdmGrid) -> float:
    """Trapezoidal overlap weight ``c[m]`` in ``[0, 1]``."""
    n, cp = grid.n_fft, grid.n_cp
    if -n <= m <= 0:
        return (n + m) / n
    if 0 <= m <= cp:
        return 1.0
    if cp <= m <= cp + n:
        return (n - (m - cp)) / n
    return 0.0


def _check_pair(l: int, i: int, n_fft: int) -> int:
    delta = l - i
    if delta == 0:
        raise ValueError("ctilde is only defined for l != i")
    if delta % n_fft == 0:
        raise ValueError(f"l - i = {delta} is a multiple of n_fft; leakage weight is singular")
    return delta


def ctilde_weight(m: int, l: int, i: int, grid: OfdmGrid) -> complex:
    """Inter-carrier leakage weight ``ctilde[l, i][m]`` for ``l != i``."""
    n, cp = grid.n_fft, grid.n_cp
    delta = _check_pair(l, i, n)
    denom = n * (1.0 - _cis(delta, n))
    if -n <= m <= 0:
        return complex((1.0 - _cis(m * delta, n)) / denom)
    if 0 <= m <= cp:
        return 0j
    if cp <= m <= cp + n:
        return complex((_cis((m - cp) * delta, n) - 1.0) / denom)
    return 0j


def a_weight(b: int, m: int, l: int, i: int, grid: OfdmGrid) -> complex:
    """Block-shifted, phase-rotated weight of block ``b`` seen in block 0."""
    shifted = m + b * grid.block_length
    phase = complex(_cis(-b * l * grid.n_cp, grid.n_fft))
    if l == i:
        return phase * c_weight(shifted, grid)
    return phase * ctilde_weight(shifted, l, i, grid)


def c_weights(ms, grid: OfdmGrid) -> np.ndarray:
    """Vectorized :func:`c_weight` over an array of delays."""
    n, cp = grid.n_fft, grid.n_cp
    ms = np.asarray(ms, dtype=np.int64)
    out = np.zeros(ms.shape)
    rise = (ms >= -n) & (ms <= 0)
    flat = (ms > 0) & (ms <= cp)
    fall = (ms > cp) & (ms <= cp + n)
    out[rise] = (n + ms[rise]) / n
    out[flat] = 1.0
    out[fall] = (n - (ms[fall] - cp)) / n
    return out


def ctilde_table(ms, deltas, grid: OfdmGrid) -> np.ndarray:
    """Leakage weights for every subcarrier difference ``l - i`` and delay.

    Returns an array of shape ``(len(deltas), len(ms))``. Every entry of
    ``deltas`` must be non-zero modulo ``n_fft``.
    """
    n, cp = grid.n_fft, grid.n_cp
    ms = np.asarray(ms, dtype=np.int64)[None, :]
    deltas = np.asarray(deltas, dtype=np.int64)[:, None]
    if np.any(deltas % n == 0):
        raise ValueError("ctilde_table requires l - i != 0 mod n_fft")
    denom = n * (1.0 - _cis(deltas, n))
    out = np.zeros((deltas.shape[0], ms.shape[1]), dtype=complex)
    rise = np.broadcast_to((ms >= -n) & (ms <= 0), out.shape)
    fall = np.broadcast_to((ms > cp) & (ms <= cp + n), out.shape)
    lead = (1.0 - _cis(ms * deltas, n)) / denom
    trail = (_cis((ms - cp) * deltas, n) - 1.0) / denom
    out[rise] = lead[rise]
    out[fall] = trail[fall]
    return out


def leakage_power(ms, grid: OfdmGrid) -> np.ndarray:
    """``sum_{l != i} |ctilde[l, i][m]|^2`` for every allocated ``i``.

    Returns shape ``(n_sc, len(ms))``; row ``k`` is subcarrier
    ``sc_offset + k``. For a full allocation this equals ``c - c**2``.
    """
    n_sc = grid.n_sc
    ms = np.asarray(ms, dtype=np.int64)
    if n_sc == 1:
        return np.zeros((1, ms.size))
    deltas = np.arange(-(n_sc - 1), n_sc)
    power = np.abs(ctilde_table(ms, deltas[deltas != 0], grid)) ** 2
    # Reinsert a zero row for delta = 0 so row index is delta + n_sc - 1.
    power = np.insert(power, n_sc - 1, 0.0, axis=0)
    cums = np.vstack([np.zeros((1, ms.size)), np.cumsum(power, axis=0)])
    k = np.arange(n_sc)
    # For observed index k, l - i runs over -k ... n_sc - 1 - k.
    lo = n_sc - 1 - k
    return cums[lo + n_sc] - cums[lo]
