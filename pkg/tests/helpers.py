import numpy as np
from ofdmcp import Cir, OfdmGrid

GRIDS = [(8, 2), (16, 4), (64, 16)]


def random_cir(rng, n_fft, l_d=None, l_u=None, causal=False):
    """Complex Gaussian taps on a random support within ``[-(n_fft-1), n_fft-1]``."""
    if l_d is None:
        l_d = 0 if causal else int(rng.integers(0, n_fft))
    if l_u is None:
        l_u = int(rng.integers(0, n_fft))
    size = l_d + l_u + 1
    taps = (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2 * size)
    return Cir(l_d, l_u, taps)

