"""Demodulated channel coefficients ``H[b, l, i]``.

``H[b, l, i]`` is the gain from data symbol ``x[b, l]`` (block ``b``,
subcarrier ``l``) into the FFT output of subcarrier ``i`` of block 0. Block 0
with ``l == i`` is the desired channel, block 0 with ``l != i`` is ICI and
``b != 0`` is ISI.

Two routes are provided. :func:`h_bli_direct` and ``mode="direct"`` evaluate
the double sum over FFT samples ``k`` and taps ``m``; the ``h_0ii``, ``h_0li``,
``h_isi`` family and ``mode="simplified"`` use single weighted Fourier sums
over the taps.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .core import Cir, OfdmGrid, SupportError
from .weights import _cis, c_weight, c_weights, ctilde_table, ctilde_weight

ADJACENT_BLOCKS = (-1, 0, 1)


@dataclass(frozen=True, eq=False)
class CoeffSet:
    """Dense coefficient cube for one channel realization.

    ``values[j, l - sc_offset, i - sc_offset]`` holds ``H[blocks[j], l, i]``.
    """

    grid: OfdmGrid
    blocks: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.complex128)
        n = self.grid.n_sc
        if values.shape != (len(self.blocks), n, n):
            raise ValueError(f"values shape {values.shape} does not match blocks/grid")
        if 0 not in self.blocks:
            raise ValueError("block 0 is required")
        if not np.all(np.isfinite(values)):
            raise ValueError("coefficients must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "blocks", tuple(int(b) for b in self.blocks))
        object.__setattr__(self, "values", values)

    def block(self, b: int) -> np.ndarray:
        """``(n_sc, n_sc)`` matrix indexed ``[l, i]`` for block ``b``."""
        return self.values[self.blocks.index(b)]

    def __getitem__(self, key) -> complex:
        b, l, i = key
        off = self.grid.sc_offset
        return complex(self.block(b)[self.grid.check_subcarrier(l) - off,
                                     self.grid.check_subcarrier(i) - off])

    def max_abs_diff(self, other: "CoeffSet") -> float:
        common = [b for b in self.blocks if b in other.blocks]
        return max(float(np.max(np.abs(self.block(b) - other.block(b)))) for b in common)


def _check_window_support(cir: Cir, grid: OfdmGrid):
    if cir.l_d > grid.n_fft or cir.l_u > grid.n_fft + grid.n_cp:
        raise SupportError(
            f"support [-{cir.l_d}, {cir.l_u}] exceeds weight support "
            f"[-{grid.n_fft}, {grid.n_fft + grid.n_cp}]")


def h_bli_direct(b: int, l: int, i: int, cir: Cir, grid: OfdmGrid) -> complex:
    """Coefficient ``H[b, l, i]`` from the unsimplified double sum (any support)."""
    grid.check_subcarrier(l)
    grid.check_subcarrier(i)
    n, cp = grid.n_fft, grid.n_cp
    k = np.arange(n)[:, None]
    m = cir.delays[None, :]
    lag = k - m - b * grid.block_length
    window = (lag >= -cp) & (lag <= n - 1)
    phase = _cis(-(l * m - k * (l - i) + b * l * cp), n)
    return complex(np.sum(cir.taps[None, :] * phase * window) / n)


def h_0ii(i: int, cir: Cir, grid: OfdmGrid) -> complex:
    """Desired-signal channel ``H[0, i, i] = sum_m c[m] h[m] exp(-j2pi i m / N)``."""
    grid.check_subcarrier(i)
    _check_window_support(cir, grid)
    m = cir.delays
    return complex(np.sum(c_weights(m, grid) * cir.taps * _cis(-i * m, grid.n_fft)))


def h_0li(l: int, i: int, cir: Cir, grid: OfdmGrid) -> complex:
    """ICI channel ``H[0, l, i]`` from subcarrier ``l != i``."""
    grid.check_subcarrier(l)
    grid.check_subcarrier(i)
    if l == i:
        raise ValueError("h_0li requires l != i; use h_0ii for the desired channel")
    _check_window_support(cir, grid)
    m = cir.delays
    w = ctilde_table(m, [l - i], grid)[0]
    return complex(np.sum(w * cir.taps * _cis(-l * m, grid.n_fft)))


def h_isi(b: int, l: int, i: int, cir: Cir, grid: OfdmGrid) -> complex:
    """ISI channel from the previous (``b = -1``) or next (``b = +1``) block.

    Requires ``l_d, l_u <= n_fft - 1``. The previous block leaks through taps
    ``m >= n_cp`` and the next block through taps ``m <= 0``.
    """
    if b not in (-1, 1):
        raise ValueError(f"h_isi handles b = -1 or +1, got {b}")
    grid.check_subcarrier(l)
    grid.check_subcarrier(i)
    cir.check_within(grid)
    n, cp = grid.n_fft, grid.n_cp
    if b == -1:
        ms = range(cp, cir.l_u + 1)
    else:
        ms = range(-cir.l_d, 1)
    total = 0j
    for m in ms:
        if l == i:
            w = 1.0 - c_weight(m, grid)
        else:
            w = -ctilde_weight(m, l, i, grid)
        total += cir.tap(m) * _cis(-l * m, n) * w
    # previous block: exp(+j2pi l N_cp / N); next block: exp(-j2pi l N_cp / N)
    return complex(_cis(-b * l * cp, n) * total)


def h_dft(i: int, cir: Cir, grid: OfdmGrid) -> complex:
    """Channel frequency response at subcarrier ``i`` of a causal CIR."""
    if not cir.is_causal:
        raise ValueError("h_dft requires a causal channel (l_d = 0)")
    return complex(np.sum(cir.taps * _cis(-i * cir.delays, grid.n_fft)))


def _simplified_blocks(cir: Cir, grid: OfdmGrid) -> np.ndarray:
    n, cp, n_sc = grid.n_fft, grid.n_cp, grid.n_sc
    m = cir.delays
    ls = grid.subcarriers
    c = c_weights(m, grid)
    deltas = np.arange(-(n_sc - 1), n_sc)
    # leak[l - i + n_sc - 1, m]; delta = 0 row is a placeholder replaced below
    leak = np.zeros((deltas.size, m.size), dtype=complex)
    nz = deltas != 0
    if np.any(nz):
        leak[nz] = ctilde_table(m, deltas[nz], grid)
    idx = ls[:, None] - ls[None, :] + n_sc - 1
    diag = np.eye(n_sc, dtype=bool)[:, :, None]

    g = cir.taps[None, :] * _cis(-np.outer(ls, m), n)   # [l, m]
    w0 = np.where(diag, c[None, None, :], leak[idx])
    w_isi = np.where(diag, (1.0 - c)[None, None, :], -leak[idx])

    h0 = np.einsum("lim,lm->li", w0, g)
    prev = np.einsum("lim,lm->li", w_isi * (m >= cp), g) * _cis(ls * cp, n)[:, None]
    nxt = np.einsum("lim,lm->li", w_isi * (m <= 0), g) * _cis(-ls * cp, n)[:, None]

    if cir.is_causal:
        # Causal channel: previous-block ISI is fixed by the desired and ICI terms.
        freq = np.array([h_dft(i, cir, grid) for i in ls])
        prev = -h0 * _cis(ls * cp, n)[:, None]
        prev[np.diag_indices(n_sc)] = _cis(ls * cp, n) * (freq - np.diag(h0))
    return np.stack([prev, h0, nxt])


def build_coeff_set(cir: Cir, grid: OfdmGrid, mode: str = "simplified",
                    blocks: Sequence[int] = ADJACENT_BLOCKS) -> CoeffSet:
    """Populate ``H[b, l, i]`` for all allocated ``l, i``.

    ``mode="direct"`` evaluates the double sum for any ``blocks`` and any
    support. ``mode="simplified"`` requires ``l_d, l_u <= n_fft - 1`` and
    returns blocks ``(-1, 0, 1)``; all farther blocks are exactly zero.
    """
    if mode == "direct":
        values = _backend.direct_coefficients(
            cir.taps, cir.l_d, grid.n_fft, grid.n_cp, grid.sc_offset, grid.n_sc,
            list(blocks))
        return CoeffSet(grid, tuple(blocks), values)
    if mode == "simplified":
        cir.check_within(grid)
        if tuple(blocks) != ADJACENT_BLOCKS:
            raise ValueError("simplified mode covers blocks (-1, 0, 1) only")
        return CoeffSet(grid, ADJACENT_BLOCKS, _simplified_blocks(cir, grid))
    raise ValueError(f"unknown mode {mode!r}; expected 'direct' or 'simplified'")
