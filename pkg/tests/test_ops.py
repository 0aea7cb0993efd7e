import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import balanced, rand_signal, unit_gauss
from gaborwigner import Grid, NonLatticeShift, PhaseField, Signal, UnsupportedDilation, l2_norm, l2_norm2
from gaborwigner.ops import (Shift2D, chirp, conjugate, dilate, involution_dagger, mod2, modulate,
                             reflect, shift2, star, translate, z_xi)
from gaborwigner.transforms import fourier, stft, wavepacket

G = Grid(32, 0.25)
steps = st.integers(-40, 40)


def _sig(rng, grid=G):
    return Signal(grid, rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))


def _field(rng, grid=G):
    n = grid.n
    return PhaseField(grid, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))


class TestTranslate:
    def test_zero_shift(self, rng):
        s = _sig(rng)
        np.testing.assert_array_equal(translate(s, 0.0).values, s.values)

    def test_moves_delta_one_node(self):
        v = np.zeros(G.n)
        v[0] = 1
        out = translate(Signal(G, v), G.dx).values
        assert out[1] == 1 and np.count_nonzero(out) == 1

    @given(steps)
    def test_group_law(self, k):
        s = Signal(G, np.arange(G.n) + 0j)
        a = k * G.dx
        np.testing.assert_array_equal(translate(translate(s, a), -a).values, s.values)

    def test_rejects_off_lattice(self, rng):
        with pytest.raises(NonLatticeShift):
            translate(_sig(rng), 0.3 * G.dx)

    def test_semantics(self):
        s = Signal(G, np.exp(-8 * (G.x - 0.5) ** 2))
        np.testing.assert_allclose(translate(s, 1.0).values, np.exp(-8 * (G.x - 1.5) ** 2),
                                   atol=1e-12)

    def test_wraps_periodically(self):
        v = np.zeros(G.n)
        v[-1] = 1
        assert translate(Signal(G, v), 2 * G.dx).values[1] == 1


class TestModulate:
    def test_zero(self, rng):
        s = _sig(rng)
        np.testing.assert_array_equal(modulate(s, 0.0).values, s.values)

    @given(st.floats(-10, 10))
    def test_unimodular(self, b):
        s = Signal(G, np.exp(-G.x ** 2))
        np.testing.assert_allclose(np.abs(modulate(s, b).values), np.abs(s.values), rtol=1e-14)

    @given(steps, steps)
    def test_commutation(self, k, kb):
        # exact on the periodic grid when b is a multiple of dw
        s = Signal(G, np.exp(-G.x ** 2) * (1 + 1j * G.x))
        a, b = k * G.dx, kb * G.dw
        lhs = translate(modulate(s, b), a).values
        rhs = np.exp(-2j * np.pi * a * b) * modulate(translate(s, a), b).values
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * np.max(np.abs(s.values))


class TestDilate:
    def test_inverse_pair(self, rng):
        s = rand_signal(balanced(128), rng, width=0.8)
        back = dilate(dilate(s, 2), 0.5)
        assert np.linalg.norm(back.values - s.values) * np.sqrt(s.grid.dx) < 1e-10

    def test_gaussian(self):
        g = balanced(256)
        out = dilate(Signal(g, np.exp(-np.pi * g.x ** 2)), 2)
        expect = 2 ** -0.5 * np.exp(-np.pi * g.x ** 2 / 4)
        assert np.max(np.abs(out.values - expect)) < 1e-10

    def test_unitary(self, rng):
        s = rand_signal(balanced(128), rng, width=0.8)
        assert abs(l2_norm(dilate(s, 2)) - l2_norm(s)) < 1e-10

    @pytest.mark.parametrize("t", [3, 1.5, 0.25, -2])
    def test_other_factors_rejected(self, t, rng):
        with pytest.raises(UnsupportedDilation):
            dilate(_sig(rng), t)


class TestReflections:
    def test_reflect_semantics(self):
        s = Signal(G, G.x ** 3 + 1)
        np.testing.assert_allclose(reflect(s).values[1:], (-G.x[1:]) ** 3 + 1)

    def test_involutive(self, rng):
        s = _sig(rng)
        np.testing.assert_array_equal(reflect(reflect(s)).values, s.values)
        np.testing.assert_array_equal(involution_dagger(involution_dagger(s)).values, s.values)

    def test_fourier_of_conjugate(self, rng):
        s = _sig(rng)
        lhs = fourier(conjugate(s)).values
        rhs = conjugate(reflect(fourier(s))).values
        np.testing.assert_allclose(lhs, rhs, atol=1e-13)


class TestPhaseSpaceShifts:
    def test_zero(self, rng):
        F = _field(rng)
        np.testing.assert_array_equal(shift2(F, Shift2D()).values, F.values)
        np.testing.assert_array_equal(mod2(F, Shift2D()).values, F.values)

    @given(steps, steps)
    def test_shift_back(self, a, b):
        F = PhaseField(G, np.arange(G.n ** 2, dtype=float).reshape(G.n, G.n))
        sh = Shift2D(a * G.dx, b * G.dw)
        back = shift2(shift2(F, sh), Shift2D(-sh.u, -sh.eta))
        np.testing.assert_array_equal(back.values, F.values)

    @given(steps, steps)
    def test_mod2_unimodular(self, a, b):
        F = PhaseField(G, np.ones((G.n, G.n)))
        out = mod2(F, Shift2D(a * G.dx, b * G.dw))
        np.testing.assert_allclose(np.abs(out.values), 1, rtol=1e-14)

    def test_shift2_semantics(self):
        F = PhaseField.delta(G, 3, 5)
        out = shift2(F, Shift2D(2 * G.dx, -G.dw))
        assert out.values[5, 4] == 1

    def test_off_lattice(self, rng):
        with pytest.raises(NonLatticeShift):
            shift2(_field(rng), Shift2D(0.5 * G.dx, 0))
        with pytest.raises(NonLatticeShift):
            mod2(_field(rng), Shift2D(0, 0.1 * G.dw))

    def test_unitary(self, rng):
        F = _field(rng)
        n0 = l2_norm2(F)
        sh = Shift2D(3 * G.dx, -2 * G.dw)
        for out in (shift2(F, sh), mod2(F, sh), chirp(F, 0.7)):
            assert abs(l2_norm2(out) - n0) <= 1e-12 * n0

    def test_signal_operators_unitary(self, rng):
        s = _sig(rng)
        n0 = l2_norm(s)
        for out in (translate(s, 5 * G.dx), modulate(s, 1.3), reflect(s)):
            assert abs(l2_norm(out) - n0) <= 1e-12 * n0


class TestZXi:
    def test_zero_on_even_field(self, rng):
        n = G.n
        A = rng.normal(size=(n, n))
        A = A + A[:, (-np.arange(n)) % n]
        F = PhaseField(G, A)
        np.testing.assert_array_equal(z_xi(F, 0.0).values, F.values)

    @given(steps)
    def test_involutive(self, k):
        F = PhaseField(G, np.arange(G.n ** 2, dtype=float).reshape(G.n, G.n))
        xi = k * G.dw
        np.testing.assert_array_equal(z_xi(z_xi(F, xi), xi).values, F.values)

    def test_delta(self):
        n = G.n
        out = z_xi(PhaseField.delta(G, 2, 20), 3 * G.dw)
        # w_20 = 4 dw, so xi - w = -dw which is index n/2 - 1
        assert out.values[2, n // 2 - 1] == 1 and np.count_nonzero(out.values) == 1

    def test_off_lattice(self, rng):
        with pytest.raises(NonLatticeShift):
            z_xi(_field(rng), 0.5 * G.dw)


class TestStar:
    def test_involutive(self, rng):
        F = _field(rng)
        np.testing.assert_array_equal(star(star(F)).values, F.values)

    def test_real_even_fixed(self, rng):
        n = G.n
        A = rng.normal(size=(n, n))
        A = A + A[:, (-np.arange(n)) % n]
        np.testing.assert_array_equal(star(PhaseField(G, A)).values, A)

    def test_stft_of_conjugate(self, rng):
        g = balanced(64)
        f = rand_signal(g, rng)
        w = unit_gauss(g)
        np.testing.assert_allclose(star(stft(f, w)).values, stft(f.conj(), w).values, atol=1e-13)


class TestChirp:
    def test_zero(self, rng):
        F = _field(rng)
        np.testing.assert_array_equal(chirp(F, 0.0).values, F.values)

    @given(st.floats(-3, 3))
    def test_inverse(self, c):
        F = PhaseField(G, np.ones((G.n, G.n)))
        np.testing.assert_allclose(chirp(chirp(F, c), -c).values, F.values, atol=1e-14)

    def test_wavepacket_relation(self, rng):
        g = balanced(64)
        f, w = rand_signal(g, rng), rand_signal(g, rng)
        np.testing.assert_allclose(wavepacket(f, w).values,
                                   chirp(stft(f, reflect(w)), 1.0).values, atol=1e-14)
