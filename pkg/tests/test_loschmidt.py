import numpy as np
import pytest

from xydqpt.gibbs import InitialStateParams
from xydqpt.loschmidt import (
    QuenchProtocol,
    RateTrace,
    detect_cusps,
    mode_amplitude,
    population_imbalance,
    rate_finite,
    rate_integral,
)
from xydqpt.oracle import mode_amplitude_2x2
from xydqpt.spectrum import ModelParams, dispersion


def random_protocol(rng, n_sites=None):
    g0, gf = rng.uniform(0.1, 1.0, 2) * rng.choice([-1.0, 1.0], 2)
    l0, lf = rng.uniform(0.0, 2.0, 2)
    beta = 10 ** rng.uniform(-1.5, 1.5)
    phi = rng.uniform(-np.pi, np.pi)
    return QuenchProtocol(
        ModelParams(g0, l0), ModelParams(gf, lf), InitialStateParams(beta, phi), n_sites
    )


PATH_B = QuenchProtocol(
    ModelParams(0.5, 0.5), ModelParams(0.5, 1.5), InitialStateParams(10.0, -np.pi / 2)
)


class TestModeAmplitude:
    def test_unity_at_time_zero(self, rng):
        for _ in range(10):
            proto = random_protocol(rng)
            assert mode_amplitude(proto, rng.uniform(0.1, 3.0), 0.0) == pytest.approx(1.0)

    def test_no_quench_ground_state_pure_phase(self):
        p = ModelParams(0.6, 0.4)
        proto = QuenchProtocol(p, p, InitialStateParams(1000.0, -np.pi / 2))
        for t in (0.5, 2.0, 7.3):
            assert abs(mode_amplitude(proto, 1.1, t)) == pytest.approx(1.0, abs=1e-12)

    def test_matches_matrix_exponential(self, rng):
        for _ in range(100):
            proto = random_protocol(rng)
            k = rng.uniform(0.05, np.pi - 0.05)
            t = rng.uniform(0.0, 20.0)
            assert mode_amplitude(proto, k, t) == pytest.approx(
                mode_amplitude_2x2(proto, k, t), abs=1e-10
            )

    def test_modulus_bounded_and_periodic(self, rng):
        for _ in range(30):
            proto = random_protocol(rng)
            k = rng.uniform(0.1, np.pi - 0.1)
            eps1 = dispersion(proto.post, k)
            t = rng.uniform(0, 5)
            g1 = mode_amplitude(proto, k, t)
            g2 = mode_amplitude(proto, k, t + 2 * np.pi / eps1)
            assert abs(g1) <= 1 + 1e-12
            assert g2 == pytest.approx(g1, abs=1e-9)

    def test_imbalance_consistent_with_boltzmann_weights(self, rng):
        # the tanh/sech bracket must agree with the explicit e^{+-beta eps}
        # population difference (same algebra, different evaluation route)
        from xydqpt.spectrum import delta_theta

        for _ in range(40):
            proto = random_protocol(rng)
            k = float(rng.uniform(0.05, np.pi - 0.05))
            w = population_imbalance(proto, k)[0]
            eps = dispersion(proto.pre, k)
            dth = delta_theta(proto.pre, proto.post, k)
            beta, phi = proto.init.beta, proto.init.phi
            z = 2 * np.cosh(beta * eps)
            p_plus = (
                np.exp(-beta * eps) * np.cos(dth) ** 2
                + np.exp(beta * eps) * np.sin(dth) ** 2
                + np.sin(2 * dth) * np.sin(phi)
            ) / z
            p_minus = (
                np.exp(-beta * eps) * np.sin(dth) ** 2
                + np.exp(beta * eps) * np.cos(dth) ** 2
                - np.sin(2 * dth) * np.sin(phi)
            ) / z
            assert w == pytest.approx(p_minus - p_plus, abs=1e-12)
            assert p_plus + p_minus == pytest.approx(1.0, abs=1e-12)


class TestRateFinite:
    def test_zero_at_time_zero(self, rng):
        proto = random_protocol(rng, n_sites=64)
        trace = rate_finite(proto, np.linspace(0, 5, 64))
        assert trace.values[0] == pytest.approx(0.0, abs=1e-14)

    def test_no_quench_ground_state_vanishes(self):
        p = ModelParams(0.5, 0.5)
        proto = QuenchProtocol(p, p, InitialStateParams(1000.0, -np.pi / 2), 64)
        trace = rate_finite(proto, np.linspace(0, 5, 256))
        assert np.max(np.abs(trace.values)) < 1e-12
        assert trace.cusps == []

    def test_nonnegative(self, rng):
        for _ in range(5):
            proto = random_protocol(rng, n_sites=128)
            trace = rate_finite(proto, np.linspace(0, 8, 200), detect=False)
            assert np.all(trace.values >= -1e-9)

    def test_doubling_approaches_integral(self):
        proto_tl = QuenchProtocol(PATH_B.pre, PATH_B.post, PATH_B.init)
        times = np.linspace(0.2, 1.2, 41)  # clear of the first cusp at 1.695
        ref = rate_integral(proto_tl, times, detect=False).values
        errs = []
        for n in (64, 128, 256):
            proto = QuenchProtocol(PATH_B.pre, PATH_B.post, PATH_B.init, n)
            errs.append(np.max(np.abs(rate_finite(proto, times, detect=False).values - ref)))
        assert errs[2] < errs[1] < errs[0]


class TestRateIntegral:
    def test_zero_at_time_zero(self):
        trace = rate_integral(PATH_B, np.array([0.0]), detect=False)
        assert trace.values[0] == pytest.approx(0.0, abs=1e-12)

    def test_path_b_has_cusp_at_critical_time(self):
        from xydqpt.fisher import find_crossings

        proto = QuenchProtocol(
            ModelParams(0.5, 0.5), ModelParams(0.5, 1.5), InitialStateParams(10.0, -np.pi / 2)
        )
        trace = rate_integral(proto, np.linspace(0, 4, 801))
        assert trace.cusps, "expected at least one cusp"
        t_c = find_crossings(proto)[0].t_crit[0]
        assert min(abs(c - t_c) for c in trace.cusps) < 1e-3

    def test_agrees_with_finite_chain(self):
        times = np.linspace(0.1, 1.5, 30)
        ref = rate_integral(PATH_B, times, detect=False).values
        proto = QuenchProtocol(PATH_B.pre, PATH_B.post, PATH_B.init, 4096)
        got = rate_finite(proto, times, detect=False).values
        assert np.max(np.abs(got - ref)) < 2e-3


class TestDetectCusps:
    def test_zero_trace_empty(self):
        times = np.linspace(0, 10, 500)
        assert detect_cusps(RateTrace(times, np.zeros_like(times))) == []

    def test_abs_sine_kinks(self):
        times = np.linspace(0, 10, 2001)
        trace = RateTrace(times, np.abs(np.sin(times)))
        cusps = detect_cusps(trace)
        expected = [np.pi, 2 * np.pi, 3 * np.pi]
        assert len(cusps) == len(expected)
        h = times[1] - times[0]
        for c, e in zip(cusps, expected):
            assert abs(c - e) <= h

    def test_smooth_trace_empty_with_refinement(self):
        times = np.linspace(0, 10, 1001)
        values = np.sin(times) ** 2 + 0.3 * np.cos(3 * times)
        trace = RateTrace(times, values)
        got = detect_cusps(
            trace, evaluate=lambda ts: np.sin(ts) ** 2 + 0.3 * np.cos(3 * ts)
        )
        assert got == []

    def test_path_a_stiff_initial_state_has_no_cusp(self):
        proto = QuenchProtocol(
            ModelParams(0.5, 0.0), ModelParams(0.5, 0.5), InitialStateParams(10.0, -np.pi / 2)
        )
        trace = rate_integral(proto, np.linspace(0, 10, 1001))
        assert trace.cusps == []

    def test_requires_uniform_grid(self):
        times = np.concatenate([np.linspace(0, 1, 10), [1.5, 1.7, 2.4]])
        with pytest.raises(ValueError):
            detect_cusps(RateTrace(times, np.zeros_like(times)))
