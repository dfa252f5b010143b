"""Oracle suites behind the ``selftest`` CLI command.

Smaller, faster versions of the certification tests: every production
path is checked against an independent brute-force construction.
"""

from __future__ import annotations

import numpy as np

from .gibbs import InitialStateParams, two_point
from .loschmidt import QuenchProtocol, mode_amplitude
from .magnetization import contractions, correlator_x, correlator_y, m_z
from .oracle import DenseChain, mode_amplitude_2x2
from .pfaffian import pfaffian, pfaffian_cofactor
from .spectrum import ModelParams


def _random_skew(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a - a.T


def _check_pfaffian(rng) -> float:
    worst = 0.0
    for _ in range(200):
        n = 2 * rng.integers(1, 17)
        a = _random_skew(rng, n)
        pf = pfaffian(a)
        det = np.linalg.det(a)
        worst = max(worst, abs(pf**2 - det) / max(abs(det), 1e-30))
    for _ in range(100):
        n = 2 * rng.integers(1, 5)
        a = _random_skew(rng, n)
        worst = max(worst, abs(pfaffian(a) - pfaffian_cofactor(a)))
    return worst


def _random_protocol(rng) -> QuenchProtocol:
    g0, gf = rng.uniform(0.1, 1.0, 2) * rng.choice([-1.0, 1.0], 2)
    l0, lf = rng.uniform(0.0, 2.0, 2)
    beta = rng.uniform(0.05, 20.0)
    phi = rng.uniform(-np.pi, np.pi)
    return QuenchProtocol(
        ModelParams(g0, l0), ModelParams(gf, lf), InitialStateParams(beta, phi)
    )


def _check_mode_amplitude(rng) -> float:
    worst = 0.0
    for _ in range(200):
        proto = _random_protocol(rng)
        k = rng.uniform(0.05, np.pi - 0.05)
        t = rng.uniform(0.0, 20.0)
        worst = max(worst, abs(mode_amplitude(proto, k, t) - mode_amplitude_2x2(proto, k, t)))
    return worst


def _check_fock(rng) -> float:
    chain = DenseChain(8)
    worst = 0.0
    for _ in range(6):
        gamma = float(rng.uniform(0.1, 1.0) * rng.choice([-1.0, 1.0]))
        lam = float(rng.uniform(0.0, 2.0))
        beta = float(rng.choice([0.1, 1.0, 10.0]))
        phi = float(rng.choice([0.0, -np.pi / 2]))
        spec = ModelParams(gamma, lam)
        init = InitialStateParams(beta, phi)
        psi = chain.coherent_state(spec, init)
        for k in chain.grid.ks:
            got = two_point(spec, init, k)
            ref = chain.two_point(psi, k)
            for a, b in zip((got.cdag_cdag, got.cdag_c, got.c_c, got.c_cdag), ref):
                worst = max(worst, abs(a - b))
        table = contractions(spec, init, 8, 3)
        for r in (1, 2, 3):
            worst = max(worst, abs(table.q[r] - chain.contraction_q(psi, r)))
            worst = max(worst, abs(table.s[r] - chain.contraction_s(psi, r)))
            worst = max(worst, abs(table.g_at(r) - chain.contraction_g(psi, r)))
            worst = max(worst, abs(correlator_x(table, r) - chain.string_x(psi, r)))
            worst = max(worst, abs(correlator_y(table, r) - chain.string_y(psi, r)))
        worst = max(worst, abs(m_z(spec, init, 8) - chain.m_z(psi)))
    return worst


def run_selftest(verbose: bool = True) -> int:
    rng = np.random.default_rng(2024)
    checks = [
        ("pfaffian vs det and cofactor oracle", _check_pfaffian, 1e-10),
        ("mode amplitude vs 2x2 exponentiation", _check_mode_amplitude, 1e-10),
        ("state pipeline vs dense Fock oracle", _check_fock, 1e-10),
    ]
    failures = 0
    for name, fn, tol in checks:
        worst = fn(rng)
        ok = worst < tol
        failures += not ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}: worst deviation {worst:.3e} (tol {tol:g})")
    return 1 if failures else 0
