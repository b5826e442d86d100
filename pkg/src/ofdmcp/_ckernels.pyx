# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``ofdmcp._pykernels``.

Window-restricted sums are taken as differences of running sums, and the
sum over FFT samples ``k`` in ``direct_coefficients`` is an FFT over ``k``.
Neither step uses the closed-form weights.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()


cdef inline long pmod(long a, long n) nogil:
    cdef long r = a % n
    return r + n if r < 0 else r


cdef double complex[::1] _twiddles(long n_fft, double sign):
    cdef double complex[::1] tw = np.empty(n_fft, dtype=np.complex128)
    cdef long q
    cdef double ang
    for q in range(n_fft):
        ang = sign * 2.0 * M_PI * q / n_fft
        tw[q] = cos(ang) + 1j * sin(ang)
    return tw


def direct_coefficients(taps, long l_d, long n_fft, long n_cp, long sc_offset,
                        long n_sc, blocks):
    cdef const double complex[::1] h = np.ascontiguousarray(taps, dtype=np.complex128)
    cdef double complex[::1] tw = _twiddles(n_fft, -1.0)
    cdef long n_taps = h.shape[0]
    cdef long l_u = n_taps - 1 - l_d
    cdef long n_blocks = len(blocks)
    cdef const long[::1] bs = np.asarray(blocks, dtype=np.int64)
    cdef long bi, b, shift, k, li, l, t, lo, hi, idx, step

    # run[l, t] = sum_{m' < t} h[m'] exp(-j2pi l m / N), m = m' - l_d
    run_arr = np.zeros((n_sc, n_taps + 1), dtype=np.complex128)
    cdef double complex[:, ::1] run = run_arr
    with nogil:
        for li in range(n_sc):
            l = sc_offset + li
            step = pmod(l, n_fft)
            idx = pmod(-l * l_d, n_fft)
            for t in range(n_taps):
                run[li, t + 1] = run[li, t] + h[t] * tw[idx]
                idx = idx + step
                if idx >= n_fft:
                    idx = idx - n_fft

    out = np.empty((n_blocks, n_sc, n_sc), dtype=np.complex128)
    a_arr = np.empty((n_fft, n_sc), dtype=np.complex128)
    cdef double complex[:, ::1] a = a_arr
    ls = np.arange(sc_offset, sc_offset + n_sc)
    for bi in range(n_blocks):
        b = bs[bi]
        shift = b * (n_fft + n_cp)
        with nogil:
            for k in range(n_fft):
                # taps m with -n_cp <= k - m - shift <= n_fft - 1
                lo = k - shift - (n_fft - 1)
                hi = k - shift + n_cp
                if lo < -l_d:
                    lo = -l_d
                if hi > l_u:
                    hi = l_u
                for li in range(n_sc):
                    if lo > hi:
                        a[k, li] = 0
                    else:
                        # times exp(+j2pi k l / N) so the FFT over k yields exp(j2pi k (l - i) / N)
                        a[k, li] = (run[li, hi + l_d + 1] - run[li, lo + l_d]) * \
                            tw[pmod(-k * (sc_offset + li), n_fft)]
        spec = np.fft.fft(a_arr, axis=0)[sc_offset:sc_offset + n_sc]   # [i, l]
        phase = np.asarray(tw)[(b * ls * n_cp) % n_fft]
        out[bi] = phase[:, None] * spec.T / n_fft
    return out


def window_sums(ms, deltas, long n_fft, long n_cp):
    cdef const long[::1] mv = np.ascontiguousarray(ms, dtype=np.int64)
    cdef const long[::1] dv = np.ascontiguousarray(deltas, dtype=np.int64)
    cdef double complex[::1] tw = _twiddles(n_fft, 1.0)
    out_arr = np.zeros((dv.shape[0], mv.shape[0]), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef double complex[::1] run = np.zeros(n_fft + 1, dtype=np.complex128)
    cdef long di, mi, k, m, lo, hi, idx, step
    with nogil:
        for di in range(dv.shape[0]):
            step = pmod(dv[di], n_fft)
            idx = 0
            for k in range(n_fft):
                run[k + 1] = run[k] + tw[idx]
                idx = idx + step
                if idx >= n_fft:
                    idx = idx - n_fft
            for mi in range(mv.shape[0]):
                m = mv[mi]
                # samples k in [0, n_fft - 1] with -n_cp <= k - m <= n_fft - 1
                lo = m - n_cp
                hi = m + n_fft - 1
                if lo < 0:
                    lo = 0
                if hi > n_fft - 1:
                    hi = n_fft - 1
                if lo <= hi:
                    out[di, mi] = (run[hi + 1] - run[lo]) / n_fft
    return out_arr
