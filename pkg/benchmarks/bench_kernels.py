"""Compare the compiled and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from ofdmcp import _pykernels

try:
    from ofdmcp import _ckernels
except ImportError:
    _ckernels = None

CASES = [(16, 4, 16), (64, 16, 64), (256, 32, 64), (256, 64, 256)]


def _taps(rng, n_fft):
    l_d, l_u = n_fft // 4, n_fft - 1
    taps = rng.standard_normal(l_d + l_u + 1) + 1j * rng.standard_normal(l_d + l_u + 1)
    return taps, l_d


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':<22}{'n_fft':>6}{'n_cp':>6}{'n_sc':>6}" + "".join(f"{n:>12}" for n, _ in backends)
          + ("     speedup" if len(backends) == 2 else ""))
    for n_fft, n_cp, n_sc in CASES:
        taps, l_d = _taps(rng, n_fft)
        ms = np.arange(-n_fft, n_fft + n_cp + 1)
        deltas = np.arange(-(n_sc - 1), n_sc)
        jobs = {
            "direct_coefficients": lambda k: k.direct_coefficients(taps, l_d, n_fft, n_cp, 0, n_sc, [-1, 0, 1]),
            "window_sums": lambda k: k.window_sums(ms, deltas, n_fft, n_cp),
        }
        for name, job in jobs.items():
            times = []
            for _, mod in backends:
                number = 3
                t = min(timeit.repeat(lambda: job(mod), number=number, repeat=args.repeat)) / number
                times.append(t)
            line = f"{name:<22}{n_fft:>6}{n_cp:>6}{n_sc:>6}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
            if len(times) == 2:
                line += f"{times[0] / times[1]:>11.1f}x"
            print(line)


if __name__ == "__main__":
    main()
