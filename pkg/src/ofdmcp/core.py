"""Shared domain types: numerology, channel realizations, power-delay profiles.

Index conventions used throughout the package:

* time indices are in samples; ``m = 0`` is the time of reference (TOR)
  chosen by the receiver's synchronization, so taps at ``m < 0`` describe
  an observed channel that is not causal;
* subcarrier indices ``l`` and ``i`` are absolute FFT bin indices ranging
  over ``[sc_offset, sc_offset + n_sc - 1]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np


class SupportError(ValueError):
    """Raised when a tap support exceeds what an operation can handle."""


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class OfdmGrid:
    """OFDM numerology in samples and subcarrier indices.

    Parameters
    ----------
    n_fft : int
        FFT/IFFT size.
    n_cp : int
        Cyclic prefix length.
    n_sc : int, optional
        Number of consecutively allocated subcarriers (default: all of them).
    sc_offset : int
        Index of the first allocated subcarrier.
    """

    n_fft: int
    n_cp: int
    n_sc: Optional[int] = None
    sc_offset: int = 0

    def __post_init__(self):
        if self.n_sc is None:
            object.__setattr__(self, "n_sc", self.n_fft)
        for name in ("n_fft", "n_cp", "n_sc", "sc_offset"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.n_fft < 1:
            raise ValueError(f"n_fft must be positive, got {self.n_fft}")
        if self.n_cp < 0 or self.n_cp >= self.n_fft:
            raise ValueError(f"n_cp must satisfy 0 <= n_cp < n_fft, got {self.n_cp}")
        if not 1 <= self.n_sc <= self.n_fft:
            raise ValueError(f"n_sc must satisfy 1 <= n_sc <= n_fft, got {self.n_sc}")
        if self.sc_offset < 0 or self.sc_offset + self.n_sc > self.n_fft:
            raise ValueError(
                f"allocation [{self.sc_offset}, {self.sc_offset + self.n_sc}) "
                f"does not fit in {self.n_fft} subcarriers")

    @property
    def block_length(self) -> int:
        """Samples per OFDM block including its CP."""
        return self.n_fft + self.n_cp

    @property
    def subcarriers(self) -> np.ndarray:
        return np.arange(self.sc_offset, self.sc_offset + self.n_sc)

    def check_subcarrier(self, idx: int) -> int:
        if not self.sc_offset <= idx < self.sc_offset + self.n_sc:
            raise IndexError(
                f"subcarrier {idx} outside allocation "
                f"[{self.sc_offset}, {self.sc_offset + self.n_sc - 1}]")
        return int(idx)

    def with_cp(self, n_cp: int) -> "OfdmGrid":
        return OfdmGrid(self.n_fft, n_cp, self.n_sc, self.sc_offset)


def rect_window(n: int, grid: OfdmGrid) -> int:
    """OFDM block window: 1 on ``[-n_cp, n_fft - 1]`` and 0 elsewhere."""
    return 1 if -grid.n_cp <= n <= grid.n_fft - 1 else 0


@dataclass(frozen=True, eq=False)
class _TapSupport:
    l_d: int
    l_u: int

    def _check_support(self, length: int):
        if self.l_d < 0 or self.l_u < 0:
            raise ValueError(f"l_d and l_u must be non-negative, got {self.l_d}, {self.l_u}")
        if length != self.l_d + self.l_u + 1:
            raise ValueError(
                f"expected {self.l_d + self.l_u + 1} taps for support "
                f"[-{self.l_d}, {self.l_u}], got {length}")

    @property
    def delays(self) -> np.ndarray:
        """Tap indices ``m = -l_d ... l_u``."""
        return np.arange(-self.l_d, self.l_u + 1)

    @property
    def is_causal(self) -> bool:
        return self.l_d == 0

    def check_within(self, grid: OfdmGrid):
        """Require ``l_d, l_u <= n_fft - 1`` (interference limited to adjacent blocks)."""
        if self.l_d > grid.n_fft - 1 or self.l_u > grid.n_fft - 1:
            raise SupportError(
                f"support [-{self.l_d}, {self.l_u}] exceeds n_fft - 1 = {grid.n_fft - 1}")


@dataclass(frozen=True, eq=False)
class Cir(_TapSupport):
    """One channel impulse response realization ``h[m]`` for ``m = -l_d ... l_u``."""

    taps: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "l_d", int(self.l_d))
        object.__setattr__(self, "l_u", int(self.l_u))
        taps = _frozen_array(self.taps, np.complex128)
        self._check_support(taps.size)
        if not np.all(np.isfinite(taps)):
            raise ValueError("taps must be finite")
        object.__setattr__(self, "taps", taps)

    @classmethod
    def from_dict(cls, taps: dict) -> "Cir":
        """Build from a ``{delay: gain}`` mapping; missing delays are zero."""
        l_d = max(0, -min(taps))
        l_u = max(0, max(taps))
        values = np.zeros(l_d + l_u + 1, dtype=complex)
        for m, g in taps.items():
            values[m + l_d] = g
        return cls(l_d, l_u, values)

    @classmethod
    def delta(cls, m0: int, gain: complex = 1.0) -> "Cir":
        return cls.from_dict({m0: gain})

    @classmethod
    def from_pdp(cls, pdp: "Pdp", rng: np.random.Generator) -> "Cir":
        """Draw independent zero-mean complex Gaussian taps with variances ``E_m``."""
        noise = rng.standard_normal((2, pdp.energies.size))
        taps = np.sqrt(pdp.energies / 2.0) * (noise[0] + 1j * noise[1])
        return cls(pdp.l_d, pdp.l_u, taps)

    def tap(self, m: int) -> complex:
        if -self.l_d <= m <= self.l_u:
            return complex(self.taps[m + self.l_d])
        return 0j

    def scaled(self, factor: complex) -> "Cir":
        return Cir(self.l_d, self.l_u, self.taps * factor)


@dataclass(frozen=True, eq=False)
class Pdp(_TapSupport):
    """Power-delay profile: average tap energies ``E_m`` on ``m = -l_d ... l_u``.

    Energies are stored as given; see :meth:`normalized` for unit total energy.
    """

    energies: np.ndarray = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "l_d", int(self.l_d))
        object.__setattr__(self, "l_u", int(self.l_u))
        energies = _frozen_array(self.energies, np.float64)
        self._check_support(energies.size)
        if not np.all(np.isfinite(energies)) or np.any(energies < 0):
            raise ValueError("energies must be finite and non-negative")
        if not np.any(energies > 0):
            raise ValueError("at least one energy must be strictly positive")
        object.__setattr__(self, "energies", energies)

    @property
    def total_energy(self) -> float:
        return float(self.energies.sum())

    def normalized(self) -> "Pdp":
        return Pdp(self.l_d, self.l_u, self.energies / self.total_energy)

    @classmethod
    def from_cir(cls, cir: Cir) -> "Pdp":
        return cls(cir.l_d, cir.l_u, np.abs(cir.taps) ** 2)

    @classmethod
    def exponential(cls, tau: float, l_u: int, l_d: int = 0) -> "Pdp":
        """``E_m = exp(-|m| / tau)`` on ``[-l_d, l_u]``."""
        if tau <= 0:
            raise ValueError(f"tau must be positive, got {tau}")
        m = np.arange(-l_d, l_u + 1)
        return cls(l_d, l_u, np.exp(-np.abs(m) / tau))

    @classmethod
    def uniform(cls, l_u: int, l_d: int = 0) -> "Pdp":
        return cls(l_d, l_u, np.ones(l_d + l_u + 1))

    @classmethod
    def two_tap(cls, delay: int, ratio: float) -> "Pdp":
        """Unit tap at ``m = 0`` and a tap of energy ``ratio`` at ``m = delay``."""
        if delay < 1:
            raise ValueError(f"delay must be >= 1, got {delay}")
        energies = np.zeros(delay + 1)
        energies[0] = 1.0
        energies[delay] = ratio
        return cls(0, delay, energies)


@dataclass(frozen=True)
class SnrSpec:
    """Per-subcarrier SNR ``P / sigma_n^2``.

    ``no_noise=True`` selects interference-limited analysis: the noise term in
    every SINR denominator is exactly zero.
    """

    snr_linear: float = math.inf
    no_noise: bool = False

    def __post_init__(self):
        if self.no_noise:
            object.__setattr__(self, "snr_linear", math.inf)
            return
        snr = float(self.snr_linear)
        if not math.isfinite(snr) or snr <= 0:
            raise ValueError(f"snr_linear must be positive and finite, got {snr}")
        object.__setattr__(self, "snr_linear", snr)

    @classmethod
    def from_db(cls, snr_db: float) -> "SnrSpec":
        return cls(10.0 ** (snr_db / 10.0))

    @classmethod
    def noiseless(cls) -> "SnrSpec":
        return cls(no_noise=True)

    @property
    def noise_term(self) -> float:
        """The ``1/SNR`` term of the SINR denominator."""
        return 0.0 if self.no_noise else 1.0 / self.snr_linear

    @property
    def snr_db(self) -> float:
        return math.inf if self.no_noise else 10.0 * math.log10(self.snr_linear)
