import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ofdmcp import (Cir, OfdmGrid, Pdp, SnrSpec, SupportError, asainr, asainr_fullband,
                    asainr_terms, build_coeff_set, sinr_causal, sinr_general)
from ofdmcp.analysis import report_from_coefficients
from ofdmcp.weights import c_weights

from .helpers import random_cir


class TestSinrGeneral:
    def test_flat_channel(self):
        rep = sinr_general(Cir.delta(0), OfdmGrid(16, 4), SnrSpec(10))
        np.testing.assert_allclose(rep.sinr_linear, 10.0, rtol=1e-14)
        np.testing.assert_allclose(rep.sinr_db, 10.0, rtol=1e-14)
        assert np.all(rep.ici_power == 0) or np.abs(rep.ici_power).max() < 1e-30

    def test_single_tap_noiseless(self):
        # c = 11/16; signal c^2, interference 1 - c^2 (checked against brute-force sums)
        g = OfdmGrid(16, 4)
        rep = sinr_general(Cir.delta(4 + 5), g, SnrSpec.noiseless())
        np.testing.assert_allclose(rep.sinr_linear, 121 / 135, rtol=1e-12)
        assert np.all(rep.noise_power == 0)

    def test_decomposition_invariant(self, rng):
        g = OfdmGrid(16, 4)
        rep = sinr_general(random_cir(rng, 16), g, SnrSpec(50))
        np.testing.assert_array_equal(
            rep.sinr_linear, rep.signal_power / (rep.ici_power + rep.isi_power + rep.noise_power))
        assert np.all(rep.ici_power >= 0) and np.all(rep.isi_power >= 0)
        assert len(list(rep.rows())) == 16

    def test_direct_mode_agrees(self, rng):
        g = OfdmGrid(16, 4)
        cir = random_cir(rng, 16, l_d=4, l_u=12)
        a = sinr_general(cir, g, SnrSpec(30))
        b = sinr_general(cir, g, SnrSpec(30), mode="direct")
        np.testing.assert_allclose(a.sinr_linear, b.sinr_linear, rtol=1e-12)

    def test_phase_invariance(self, rng):
        g = OfdmGrid(16, 4)
        cir = random_cir(rng, 16)
        a = sinr_general(cir, g, SnrSpec(30))
        b = sinr_general(cir.scaled(np.exp(0.73j)), g, SnrSpec(30))
        np.testing.assert_allclose(a.sinr_linear, b.sinr_linear, rtol=1e-12)

    def test_interference_independent_of_snr(self, rng):
        g = OfdmGrid(16, 4)
        cir = random_cir(rng, 16)
        a = sinr_general(cir, g, SnrSpec(10))
        b = sinr_general(cir, g, SnrSpec(20))
        np.testing.assert_array_equal(a.ici_power, b.ici_power)
        np.testing.assert_array_equal(a.isi_power, b.isi_power)
        assert np.all(b.sinr_linear > a.sinr_linear)

    def test_support_error(self):
        with pytest.raises(SupportError):
            sinr_general(Cir.delta(16), OfdmGrid(16, 4), SnrSpec(10))


class TestSinrCausal:
    def test_sufficient_cp(self, rng):
        g = OfdmGrid(16, 4)
        cir = random_cir(rng, 16, causal=True, l_u=4)
        rep = sinr_causal(cir, g, SnrSpec(100))
        np.testing.assert_allclose(rep.sinr_linear, np.abs(np.fft.fft(cir.taps, 16)) ** 2 * 100,
                                   rtol=1e-12)

    def test_two_tap_matches_general(self):
        g = OfdmGrid(16, 4)
        cir = Cir.from_dict({0: 1.0, 6: 0.5})
        a = sinr_causal(cir, g, SnrSpec(100))
        b = sinr_general(cir, g, SnrSpec(100))
        np.testing.assert_allclose(a.sinr_linear, b.sinr_linear, rtol=1e-12)
        np.testing.assert_allclose(a.ici_power, b.ici_power, rtol=1e-12)
        np.testing.assert_allclose(a.isi_power, b.isi_power, rtol=1e-12)

    def test_scaled_single_tap(self):
        g = OfdmGrid(8, 2)
        rep = sinr_causal(Cir.delta(0, 0.5 - 0.5j), g, SnrSpec(40))
        np.testing.assert_allclose(rep.sinr_linear, 0.5 * 40, rtol=1e-14)

    def test_rejects_noncausal(self):
        with pytest.raises(ValueError):
            sinr_causal(Cir.delta(-1), OfdmGrid(8, 2), SnrSpec(1))

    def test_random_matches_general(self, rng):
        g = OfdmGrid(32, 5, n_sc=20, sc_offset=6)
        for _ in range(20):
            cir = random_cir(rng, 32, causal=True)
            a = sinr_causal(cir, g, SnrSpec(300))
            b = sinr_general(cir, g, SnrSpec(300))
            np.testing.assert_allclose(a.sinr_linear, b.sinr_linear, rtol=1e-12)


class TestAsainr:
    def test_energy_inside_cp(self):
        g = OfdmGrid(16, 4)
        for m0 in range(5):
            np.testing.assert_allclose(asainr(Pdp(0, m0, np.eye(m0 + 1)[m0]), g, SnrSpec(25)), 25,
                                       rtol=1e-14)
        np.testing.assert_allclose(asainr_fullband(Pdp.uniform(4).normalized(), g, SnrSpec(25)), 25, rtol=1e-14)

    def test_single_tap_fullband(self):
        g = OfdmGrid(16, 4)
        d, snr = 5, 20.0
        c = (16 - d) / 16
        pdp = Pdp(0, 4 + d, np.eye(10)[9])
        expected = c ** 2 / ((1 - c ** 2) + 1 / snr)
        assert math.isclose(asainr_fullband(pdp, g, SnrSpec(snr)), expected, rel_tol=1e-13)
        np.testing.assert_allclose(asainr(pdp, g, SnrSpec(snr)), expected, rtol=1e-12)

    def test_tap_at_window_edge(self):
        g = OfdmGrid(8, 2)
        # a tap at n_cp + n_fft is outside the n_fft - 1 support bound, the
        # closed form still yields c = 0 there
        assert c_weights([10], g)[0] == 0
        with pytest.raises(SupportError):
            asainr_fullband(Pdp(0, 10, np.eye(11)[10]), g, SnrSpec(5))

    def test_exponential_general_vs_fullband(self):
        g = OfdmGrid(64, 16)
        pdp = Pdp.exponential(8.0, 40)
        full = asainr_fullband(pdp, g, SnrSpec(100))
        np.testing.assert_allclose(asainr(pdp, g, SnrSpec(100)), full, rtol=1e-12)

    def test_terms_match_coefficient_powers_for_deterministic_energy(self):
        # Expected powers are linear in E_m; a single-tap PDP is one realization.
        g = OfdmGrid(16, 4, n_sc=7, sc_offset=2)
        for m0 in (-5, 0, 3, 7, 12):
            pdp = Pdp.from_cir(Cir.delta(m0, 1.3))
            rep = report_from_coefficients(build_coeff_set(Cir.delta(m0, 1.3), g), SnrSpec(1))
            terms = asainr_terms(pdp, g)
            np.testing.assert_allclose(terms.signal, rep.signal_power, rtol=1e-12, atol=1e-15)
            np.testing.assert_allclose(terms.ici, rep.ici_power, rtol=1e-12, atol=1e-15)
            np.testing.assert_allclose(terms.isi, rep.isi_power, rtol=1e-12, atol=1e-15)

    def test_fullband_rejects_partial(self):
        with pytest.raises(ValueError):
            asainr_fullband(Pdp.uniform(3), OfdmGrid(16, 4, n_sc=8), SnrSpec(1))

    @given(st.integers(0, 4), st.integers(1, 20))
    @settings(max_examples=50, deadline=None)
    def test_monotone_in_second_tap_delay(self, cp_idx, ratio_idx):
        n_cp = [0, 2, 4, 8, 15][cp_idx]
        g = OfdmGrid(16, n_cp)
        ratio = ratio_idx / 10
        vals = []
        for d in range(0, 16 - n_cp):
            pdp = Pdp.two_tap(n_cp + d, ratio) if n_cp + d > 0 else Pdp(0, 0, [1 + ratio])
            vals.append(asainr_fullband(pdp, g, SnrSpec(1000)))
        assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))

    def test_non_decreasing_in_cp(self):
        pdp = Pdp.exponential(6.0, 30)
        vals = [asainr(pdp, OfdmGrid(64, cp, n_sc=40), SnrSpec(1000))[5] for cp in (0, 4, 8, 16)]
        assert vals == sorted(vals)
