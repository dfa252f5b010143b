import numpy as np
import pytest

from xydqpt.gibbs import InitialStateParams, mode_state, two_point
from xydqpt.spectrum import ModelParams, bogoliubov_angle


class TestModeState:
    def test_infinite_temperature_is_balanced(self, rng):
        for _ in range(10):
            spec = ModelParams(rng.uniform(0.1, 1), rng.uniform(0, 2))
            ms = mode_state(spec, InitialStateParams(0.0), rng.uniform(0.1, np.pi - 0.1))
            assert ms.a_plus == pytest.approx(1 / np.sqrt(2))
            assert ms.a_minus_mag == pytest.approx(1 / np.sqrt(2))
            assert ms.z_k == pytest.approx(2.0)

    def test_ground_state_limit(self):
        ms = mode_state(ModelParams(0.5, 0.5), InitialStateParams(1000.0), 1.0)
        assert ms.a_plus == 0.0
        assert ms.a_minus_mag == 1.0

    def test_normalized(self, rng):
        for _ in range(50):
            spec = ModelParams(rng.uniform(0.1, 1), rng.uniform(0, 2))
            beta = 10 ** rng.uniform(-3, 3)
            ms = mode_state(spec, InitialStateParams(beta), rng.uniform(0.1, np.pi - 0.1))
            assert ms.a_plus**2 + ms.a_minus_mag**2 == pytest.approx(1.0, abs=1e-12)
            assert ms.a_plus >= 0 and ms.a_minus_mag >= 0
            assert ms.z_k >= 2.0

    def test_params_validation(self):
        with pytest.raises(ValueError):
            InitialStateParams(-1.0)
        with pytest.raises(ValueError):
            InitialStateParams(np.inf)
        # phi is folded onto (-pi, pi]
        assert InitialStateParams(1.0, 3 * np.pi).phi == pytest.approx(np.pi)


class TestTwoPoint:
    def test_infinite_temperature_zero_phase(self):
        tp = two_point(ModelParams(0.5, 0.7), InitialStateParams(0.0, 0.0), 1.3)
        assert tp.cdag_c == pytest.approx(0.5)
        assert tp.c_cdag == pytest.approx(0.5)

    def test_ground_state_limit_matches_angle(self, rng):
        # beta -> inf kills the Boltzmann cross terms; occupation becomes
        # cos^2(theta) exactly, checked by comparing beta = 100 and 200
        for _ in range(20):
            spec = ModelParams(rng.uniform(0.2, 1), rng.uniform(0, 0.8))
            k = rng.uniform(0.3, np.pi - 0.3)
            th = bogoliubov_angle(spec, k)
            t1 = two_point(spec, InitialStateParams(100.0, -np.pi / 2), k)
            t2 = two_point(spec, InitialStateParams(200.0, -np.pi / 2), k)
            assert t1.cdag_c.real == pytest.approx(np.cos(th) ** 2, abs=1e-8)
            assert t1.c_cdag.real == pytest.approx(np.sin(th) ** 2, abs=1e-8)
            assert abs(t1.cdag_c - t2.cdag_c) < 1e-8

    def test_hermiticity_pairing(self, rng):
        for _ in range(50):
            spec = ModelParams(rng.uniform(0.05, 1) * rng.choice([-1, 1]), rng.uniform(0, 2))
            init = InitialStateParams(10 ** rng.uniform(-2, 2), rng.uniform(-np.pi, np.pi))
            k = rng.uniform(0.05, np.pi - 0.05)
            tp = two_point(spec, init, k)
            assert tp.c_c == pytest.approx(np.conj(tp.cdag_cdag), abs=1e-12)

    def test_real_diagonal_and_bounds(self, rng):
        for _ in range(50):
            spec = ModelParams(rng.uniform(0.05, 1), rng.uniform(0, 2))
            init = InitialStateParams(10 ** rng.uniform(-2, 2), rng.uniform(-np.pi, np.pi))
            k = rng.uniform(0.05, np.pi - 0.05)
            tp = two_point(spec, init, k)
            assert abs(tp.cdag_c.imag) < 1e-12
            assert abs(tp.c_cdag.imag) < 1e-12
            assert -1e-12 <= tp.cdag_c.real <= 1 + 1e-12
            # the pair shares its occupation: the trace pair sums to one
            assert tp.cdag_c.real + tp.c_cdag.real == pytest.approx(1.0, abs=1e-12)

    def test_extreme_beta_is_finite(self):
        tp = two_point(ModelParams(0.5, 2.0), InitialStateParams(1e3, -np.pi / 2), 2.0)
        for v in (tp.cdag_cdag, tp.cdag_c, tp.c_c, tp.c_cdag):
            assert np.isfinite(v.real) and np.isfinite(v.imag)


class TestFockOracle:
    def test_two_point_matches_dense_state(self, chain8, rng):
        for _ in range(4):
            spec = ModelParams(
                rng.uniform(0.1, 1) * rng.choice([-1, 1]), rng.uniform(0, 2)
            )
            init = InitialStateParams(
                float(rng.choice([0.1, 1.0, 10.0])), float(rng.choice([0.0, -np.pi / 2]))
            )
            psi = chain8.coherent_state(spec, init)
            assert np.vdot(psi, psi).real == pytest.approx(1.0, abs=1e-12)
            for k in chain8.grid.ks:
                ref = chain8.two_point(psi, k)
                tp = two_point(spec, init, k)
                got = (tp.cdag_cdag, tp.cdag_c, tp.c_c, tp.c_cdag)
                for a, b in zip(got, ref):
                    assert a == pytest.approx(b, abs=1e-10)

    def test_dense_chain_anticommutators(self, chain8):
        # sanity for the oracle itself
        c0, c1 = chain8.c[0], chain8.c[3]
        d0 = chain8.cdag[0]
        eye = np.eye(chain8.dim)
        assert np.allclose(c0 @ d0 + d0 @ c0, eye)
        assert np.abs(c0 @ c1 + c1 @ c0).max() < 1e-14
        k = chain8.grid.ks[1]
        ck, ckd = chain8.c_k[k], chain8.cdag_k[k]
        assert np.allclose(ck @ ckd + ckd @ ck, eye)
