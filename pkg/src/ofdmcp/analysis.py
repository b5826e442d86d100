"""Per-subcarrier SINR for one channel realization and the average-signal to
average-interference-plus-noise ratio (aSaINR) for a power-delay profile.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import CoeffSet, build_coeff_set, h_dft
from .core import Cir, OfdmGrid, Pdp, SnrSpec
from .weights import c_weights, leakage_power


def to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


@dataclass(frozen=True, eq=False)
class SinrReport:
    """Per-subcarrier power decomposition; every array has length ``n_sc``.

    ``sinr_linear == signal_power / (ici_power + isi_power + noise_power)``.
    """

    subcarriers: np.ndarray
    signal_power: np.ndarray
    ici_power: np.ndarray
    isi_power: np.ndarray
    noise_power: np.ndarray
    sinr_linear: np.ndarray
    sinr_db: np.ndarray

    @classmethod
    def from_powers(cls, subcarriers, signal, ici, isi, noise_term: float) -> "SinrReport":
        noise = np.full(len(subcarriers), float(noise_term))
        with np.errstate(divide="ignore", invalid="ignore"):
            sinr = signal / (ici + isi + noise)
        return cls(np.asarray(subcarriers), signal, ici, isi, noise, sinr, to_db(sinr))

    @property
    def interference_power(self) -> np.ndarray:
        return self.ici_power + self.isi_power

    def rows(self):
        for k, idx in enumerate(self.subcarriers):
            yield {
                "subcarrier": int(idx),
                "signal_power": float(self.signal_power[k]),
                "ici_power": float(self.ici_power[k]),
                "isi_power": float(self.isi_power[k]),
                "noise_power": float(self.noise_power[k]),
                "sinr_linear": float(self.sinr_linear[k]),
                "sinr_db": float(self.sinr_db[k]),
            }


def report_from_coefficients(coeffs: CoeffSet, snr: SnrSpec) -> SinrReport:
    """Accumulate signal, ICI and ISI powers from a coefficient cube."""
    h0 = np.abs(coeffs.block(0)) ** 2
    signal = np.diag(h0).copy()
    ici = h0.sum(axis=0) - signal
    isi = sum(np.abs(coeffs.block(b)) ** 2 for b in coeffs.blocks if b != 0).sum(axis=0)
    return SinrReport.from_powers(coeffs.grid.subcarriers, signal, ici, isi, snr.noise_term)


def sinr_general(cir: Cir, grid: OfdmGrid, snr: SnrSpec, mode: str = "simplified") -> SinrReport:
    """SINR with all ICI and adjacent-block ISI terms; requires ``l_d, l_u <= n_fft - 1``."""
    cir.check_within(grid)
    return report_from_coefficients(build_coeff_set(cir, grid, mode=mode), snr)


def sinr_causal(cir: Cir, grid: OfdmGrid, snr: SnrSpec) -> SinrReport:
    """Causal-channel shortcut: ISI is expressed through the desired and ICI terms.

    Interference is ``|H_i - H[0,i,i]|^2 + 2 sum_{l != i} |H[0,l,i]|^2``.
    """
    if not cir.is_causal:
        raise ValueError("sinr_causal requires a causal channel (l_d = 0)")
    cir.check_within(grid)
    h0 = build_coeff_set(cir, grid).block(0)
    desired = np.diag(h0)
    freq = np.array([h_dft(i, cir, grid) for i in grid.subcarriers])
    signal = np.abs(desired) ** 2
    ici = (np.abs(h0) ** 2).sum(axis=0) - signal
    isi = np.abs(freq - desired) ** 2 + ici
    return SinrReport.from_powers(grid.subcarriers, signal, ici, isi, snr.noise_term)


@dataclass(frozen=True, eq=False)
class AsainrTerms:
    """Average powers per allocated subcarrier (numerator and denominator parts)."""

    signal: np.ndarray
    ici: np.ndarray
    isi: np.ndarray

    @property
    def interference(self) -> np.ndarray:
        return self.ici + self.isi


def asainr_terms(pdp: Pdp, grid: OfdmGrid) -> AsainrTerms:
    """Expected ``|H[0,i,i]|^2``, total ICI and total ISI power under ``pdp``."""
    pdp.check_within(grid)
    m = pdp.delays
    c = c_weights(m, grid)
    leak = leakage_power(m, grid)             # [i, m]
    e = pdp.energies
    signal = np.full(grid.n_sc, np.sum(c ** 2 * e))
    ici = leak @ e
    isi = np.sum((1.0 - c) ** 2 * e) + ici
    return AsainrTerms(signal, ici, isi)


def asainr(pdp: Pdp, grid: OfdmGrid, snr: SnrSpec) -> np.ndarray:
    """aSaINR for every allocated subcarrier (linear)."""
    terms = asainr_terms(pdp, grid)
    with np.errstate(divide="ignore"):
        return terms.signal / (terms.interference + snr.noise_term)


def asainr_fullband(pdp: Pdp, grid: OfdmGrid, snr: SnrSpec) -> float:
    """Subcarrier-independent aSaINR for a full allocation (``n_sc == n_fft``)."""
    if grid.n_sc != grid.n_fft:
        raise ValueError(f"full-band form requires n_sc == n_fft, got {grid.n_sc} != {grid.n_fft}")
    pdp.check_within(grid)
    c = c_weights(pdp.delays, grid)
    e = pdp.energies
    signal = float(np.sum(c ** 2 * e))
    interference = float(np.sum((1.0 - c ** 2) * e))
    denom = interference + snr.noise_term
    return signal / denom if denom > 0 else float("inf")
