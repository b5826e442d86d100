import math

import numpy as np
import pytest

from ofdmcp import Cir, OfdmGrid, Pdp, SnrSpec, SupportError, rect_window


class TestOfdmGrid:
    def test_defaults_to_full_allocation(self):
        g = OfdmGrid(16, 4)
        assert g.n_sc == 16
        assert g.sc_offset == 0
        assert g.block_length == 20
        assert list(g.subcarriers) == list(range(16))

    def test_offset_allocation(self):
        g = OfdmGrid(16, 4, n_sc=6, sc_offset=5)
        assert list(g.subcarriers) == [5, 6, 7, 8, 9, 10]
        assert g.check_subcarrier(10) == 10
        with pytest.raises(IndexError):
            g.check_subcarrier(4)

    @pytest.mark.parametrize("kwargs", [
        dict(n_fft=0, n_cp=0),
        dict(n_fft=8, n_cp=8),
        dict(n_fft=8, n_cp=-1),
        dict(n_fft=8, n_cp=2, n_sc=0),
        dict(n_fft=8, n_cp=2, n_sc=9),
        dict(n_fft=8, n_cp=2, n_sc=4, sc_offset=5),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            OfdmGrid(**kwargs)

    def test_non_integer_rejected(self):
        with pytest.raises(TypeError):
            OfdmGrid(8.0, 2)


class TestRectWindow:
    def test_edges(self):
        g = OfdmGrid(8, 2)
        assert rect_window(-2, g) == 1
        assert rect_window(-3, g) == 0
        assert rect_window(7, g) == 1
        assert rect_window(8, g) == 0

    @pytest.mark.parametrize("n_fft,n_cp", [(8, 0), (8, 2), (16, 4), (64, 16)])
    def test_support_size(self, n_fft, n_cp):
        g = OfdmGrid(n_fft, n_cp)
        vals = [rect_window(n, g) for n in range(-3 * n_fft, 3 * n_fft)]
        assert sum(vals) == n_fft + n_cp
        assert all(v * v == v for v in vals)


class TestCir:
    def test_taps_indexing(self):
        cir = Cir.from_dict({-2: 1j, 3: 0.5})
        assert (cir.l_d, cir.l_u) == (2, 3)
        assert cir.tap(-2) == 1j
        assert cir.tap(3) == 0.5
        assert cir.tap(0) == 0
        assert cir.tap(10) == 0
        assert list(cir.delays) == [-2, -1, 0, 1, 2, 3]

    def test_immutable(self):
        cir = Cir.delta(0)
        with pytest.raises(ValueError):
            cir.taps[0] = 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            Cir(1, 1, [1, 2])

    def test_support_check(self):
        g = OfdmGrid(8, 2)
        Cir.delta(7).check_within(g)
        with pytest.raises(SupportError):
            Cir.delta(8).check_within(g)
        with pytest.raises(SupportError):
            Cir.delta(-8).check_within(g)

    def test_from_pdp_statistics(self):
        pdp = Pdp(1, 2, [0.5, 1.0, 0.25, 2.0])
        rng = np.random.default_rng(3)
        draws = np.array([Cir.from_pdp(pdp, rng).taps for _ in range(20000)])
        power = np.mean(np.abs(draws) ** 2, axis=0)
        np.testing.assert_allclose(power, pdp.energies, rtol=0.05)


class TestPdp:
    def test_validation(self):
        with pytest.raises(ValueError):
            Pdp(0, 1, [0.0, 0.0])
        with pytest.raises(ValueError):
            Pdp(0, 1, [1.0, -0.1])

    def test_not_normalized_by_default(self):
        pdp = Pdp(0, 2, [1.0, 2.0, 3.0])
        assert pdp.total_energy == 6.0
        assert math.isclose(pdp.normalized().total_energy, 1.0)

    def test_presets(self):
        exp = Pdp.exponential(8.0, 40)
        assert exp.energies.size == 41
        assert exp.energies[0] == 1.0
        assert math.isclose(exp.energies[8], math.exp(-1))
        two = Pdp.two_tap(19, 0.25)
        assert two.energies[0] == 1.0 and two.energies[19] == 0.25
        assert two.energies[1:19].sum() == 0
        assert np.all(Pdp.uniform(5).energies == 1.0)


class TestSnrSpec:
    def test_db(self):
        assert math.isclose(SnrSpec.from_db(20).snr_linear, 100.0)
        assert math.isclose(SnrSpec(10).noise_term, 0.1)

    def test_noiseless(self):
        s = SnrSpec.noiseless()
        assert s.noise_term == 0.0
        assert s.snr_db == math.inf

    @pytest.mark.parametrize("bad", [0, -1, math.inf, math.nan])
    def test_invalid(self, bad):
        with pytest.raises(ValueError):
            SnrSpec(bad)
