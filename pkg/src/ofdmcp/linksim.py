"""Time-domain OFDM link simulation used as an empirical oracle.

Stream layout: block ``b`` of a stream starting at block ``first`` occupies
samples ``[(b - first) * (n_fft + n_cp), (b - first + 1) * (n_fft + n_cp))``;
its CP comes first, so in-block sample ``k`` (``-n_cp <= k <= n_fft - 1``)
sits at offset ``n_cp + k``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .coefficients import CoeffSet
from .core import Cir, OfdmGrid

Seed = Union[int, np.random.Generator, None]


class Constellation(str, enum.Enum):
    QPSK = "qpsk"
    GAUSSIAN = "gaussian"


def _rng(seed: Seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class SimConfig:
    grid: OfdmGrid
    n_blocks: int = 4096
    symbol_power: float = 1.0
    noise_variance: float = 0.0
    seed: int = 0
    constellation: Constellation = Constellation.QPSK

    def __post_init__(self):
        if self.n_blocks < 3:
            raise ValueError("n_blocks must be >= 3 so that interior blocks have both neighbours")
        if self.symbol_power <= 0:
            raise ValueError("symbol_power must be positive")
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be non-negative")
        object.__setattr__(self, "constellation", Constellation(self.constellation))

    @classmethod
    def for_snr(cls, grid: OfdmGrid, snr_linear: float, **kwargs) -> "SimConfig":
        """Pick the time-domain noise variance giving ``P / sigma_n^2 = snr_linear``."""
        power = kwargs.get("symbol_power", 1.0)
        sigma_n2 = 0.0 if math.isinf(snr_linear) else power / snr_linear
        return cls(grid, noise_variance=sigma_n2 * grid.n_fft / grid.n_sc, **kwargs)

    @property
    def post_fft_noise_variance(self) -> float:
        return self.noise_variance * self.grid.n_sc / self.grid.n_fft


@dataclass(frozen=True, eq=False)
class EmpiricalReport:
    """Measured per-subcarrier powers over the interior blocks of one run."""

    subcarriers: np.ndarray
    signal_power: np.ndarray
    interference_power: np.ndarray
    noise_power: np.ndarray
    sinr_linear: np.ndarray
    sinr_se: np.ndarray
    sample_count: int

    @property
    def sinr_db(self) -> np.ndarray:
        return 10.0 * np.log10(self.sinr_linear)


def draw_symbols(n_blocks: int, grid: OfdmGrid, rng: np.random.Generator,
                 constellation: Constellation = Constellation.QPSK,
                 power: float = 1.0) -> np.ndarray:
    shape = (n_blocks, grid.n_sc)
    if Constellation(constellation) is Constellation.QPSK:
        bits = rng.integers(0, 2, size=(2,) + shape)
        x = ((1 - 2 * bits[0]) + 1j * (1 - 2 * bits[1])) / math.sqrt(2)
    else:
        g = rng.standard_normal((2,) + shape)
        x = (g[0] + 1j * g[1]) / math.sqrt(2)
    return math.sqrt(power) * x


def modulate(symbols, grid: OfdmGrid) -> np.ndarray:
    """OFDM modulation with ``1/sqrt(n_sc)`` scaling and CP insertion.

    ``symbols`` has shape ``(n_blocks, n_sc)``; the result has
    ``n_blocks * (n_cp + n_fft)`` samples.
    """
    x = np.atleast_2d(np.asarray(symbols, dtype=np.complex128))
    if x.shape[1] != grid.n_sc:
        raise ValueError(f"expected {grid.n_sc} symbols per block, got {x.shape[1]}")
    bins = np.zeros((x.shape[0], grid.n_fft), dtype=np.complex128)
    bins[:, grid.sc_offset:grid.sc_offset + grid.n_sc] = x
    body = np.fft.ifft(bins, axis=1) * (grid.n_fft / math.sqrt(grid.n_sc))
    blocks = np.concatenate([body[:, grid.n_fft - grid.n_cp:], body], axis=1)
    return blocks.reshape(-1)


def awgn(n_samples: int, variance: float, seed: Seed = None) -> np.ndarray:
    g = _rng(seed).standard_normal((2, n_samples))
    return math.sqrt(variance / 2.0) * (g[0] + 1j * g[1])


def transmit(stream, cir: Cir, noise_variance: float = 0.0, seed: Seed = None) -> np.ndarray:
    """``r[k] = sum_m h[m] s[k - m] + z[k]``, same length and indexing as ``stream``."""
    s = np.asarray(stream, dtype=np.complex128)
    full = np.convolve(s, cir.taps)
    r = full[cir.l_d:cir.l_d + s.size]
    if noise_variance > 0:
        r = r + awgn(s.size, noise_variance, seed)
    return r


def demodulate(received, block_index: int, grid: OfdmGrid) -> np.ndarray:
    """Remove the CP of one block and apply the ``sqrt(n_sc)/n_fft`` FFT.

    ``block_index`` counts blocks from the start of ``received``.
    """
    r = np.asarray(received)
    n_blocks = r.size // grid.block_length
    if not 0 <= block_index < n_blocks:
        raise IndexError(f"block {block_index} not inside a stream of {n_blocks} blocks")
    return demodulate_all(r[:n_blocks * grid.block_length], grid)[block_index]


def demodulate_all(received, grid: OfdmGrid) -> np.ndarray:
    """Demodulate every complete block; shape ``(n_blocks, n_sc)``."""
    r = np.asarray(received)
    n_blocks = r.size // grid.block_length
    frames = r[:n_blocks * grid.block_length].reshape(n_blocks, grid.block_length)
    y = np.fft.fft(frames[:, grid.n_cp:], axis=1) * (math.sqrt(grid.n_sc) / grid.n_fft)
    return y[:, grid.sc_offset:grid.sc_offset + grid.n_sc]


def measure_coefficients(cir: Cir, grid: OfdmGrid,
                         blocks: Sequence[int] = (-1, 0, 1)) -> CoeffSet:
    """Probe ``H[b, l, i]`` with lone unit symbols and noise-free transmission.

    The stream spans blocks ``-reach ... reach``; block 0 is demodulated.
    """
    cir.check_within(grid)
    reach = max(2, max(abs(b) for b in blocks))
    n_stream = 2 * reach + 1
    values = np.empty((len(blocks), grid.n_sc, grid.n_sc), dtype=np.complex128)
    for j, b in enumerate(blocks):
        for li in range(grid.n_sc):
            x = np.zeros((n_stream, grid.n_sc), dtype=np.complex128)
            x[b + reach, li] = 1.0
            r = transmit(modulate(x, grid), cir)
            values[j, li] = demodulate(r, reach, grid)
    return CoeffSet(grid, tuple(blocks), values)


def monte_carlo_sinr(cir: Cir, sim: SimConfig, coeffs: Optional[CoeffSet] = None) -> EmpiricalReport:
    """Empirical SINR from i.i.d. data blocks.

    Signal power is ``|H[0,i,i]|^2 P`` with the noise-free probed coefficient;
    interference and noise powers are sample means of the demodulated error
    ``y[i] - H[0,i,i] x[i]`` split into its data-driven and noise parts. The
    first and last blocks are excluded.
    """
    grid = sim.grid
    rng = np.random.default_rng(sim.seed)
    if coeffs is None:
        coeffs = measure_coefficients(cir, grid, blocks=(0,))
    desired = np.diag(coeffs.block(0))

    x = draw_symbols(sim.n_blocks, grid, rng, sim.constellation, sim.symbol_power)
    clean = demodulate_all(transmit(modulate(x, grid), cir), grid)[1:-1]
    x_mid = x[1:-1]
    err_int = clean - desired[None, :] * x_mid
    n_samples = sim.n_blocks * grid.block_length
    noise = demodulate_all(awgn(n_samples, sim.noise_variance, rng), grid)[1:-1]
    err = err_int + noise

    count = err.shape[0]
    p_int = np.mean(np.abs(err_int) ** 2, axis=0)
    p_noise = np.mean(np.abs(noise) ** 2, axis=0)
    e2 = np.abs(err) ** 2
    p_total = e2.mean(axis=0)
    se_total = e2.std(axis=0, ddof=1) / math.sqrt(count)
    signal = np.abs(desired) ** 2 * sim.symbol_power
    with np.errstate(divide="ignore", invalid="ignore"):
        sinr = signal / p_total
        sinr_se = sinr * se_total / p_total
    return EmpiricalReport(grid.subcarriers, signal, p_int, p_noise, sinr, sinr_se, count)
