"""Brute-force oracles: dense Fock space and direct 2x2 evolution.

Everything here trades efficiency for independence.  The dense chain
builds site fermions as explicit sign-string matrices, momentum modes by
discrete transform, and the initial state pair by pair, so expectation
values come straight from operator algebra with no Wick factorisation,
no Pfaffians and no closed-form two-point expressions.  The test-suite
and the ``selftest`` CLI command compare the production paths against
these constructions.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .gibbs import InitialStateParams, mode_state
from .loschmidt import QuenchProtocol
from .spectrum import ModelParams, bogoliubov_angle, momentum_grid

__all__ = ["DenseChain", "mode_amplitude_2x2", "hamiltonian_2x2", "pair_state_2x2"]

_A1 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # annihilate |1> -> |0>
_Z1 = np.diag([1.0, -1.0]).astype(complex)
_I1 = np.eye(2, dtype=complex)


class DenseChain:
    """Dense fermionic Fock space of a short periodic chain (N <= 12)."""

    def __init__(self, n_sites: int):
        if n_sites % 2 or n_sites < 2 or n_sites > 12:
            raise ValueError("DenseChain wants an even 2 <= N <= 12")
        self.n_sites = n_sites
        self.dim = 2**n_sites
        self.c = [self._site_annihilator(j) for j in range(n_sites)]
        self.cdag = [op.conj().T for op in self.c]
        self.a_op = [self.cdag[j] + self.c[j] for j in range(n_sites)]
        self.b_op = [self.cdag[j] - self.c[j] for j in range(n_sites)]
        self.grid = momentum_grid(n_sites)
        # momentum modes c_k = N^{-1/2} sum_j e^{+ikj} c_j for k = +-(2n-1)pi/N
        self.c_k = {}
        for k in self.grid.ks:
            for kk in (k, -k):
                phases = np.exp(1j * kk * np.arange(n_sites)) / np.sqrt(n_sites)
                self.c_k[kk] = sum(p * cj for p, cj in zip(phases, self.c))
        self.cdag_k = {k: op.conj().T for k, op in self.c_k.items()}

    def _site_annihilator(self, j: int) -> np.ndarray:
        ops = [_Z1] * j + [_A1] + [_I1] * (self.n_sites - j - 1)
        out = ops[0]
        for op in ops[1:]:
            out = np.kron(out, op)
        return out

    def coherent_state(self, spec: ModelParams, init: InitialStateParams) -> np.ndarray:
        """Assemble the initial state pair by pair on the vacuum."""
        psi = np.zeros(self.dim, dtype=complex)
        psi[0] = 1.0
        for k in self.grid.ks:
            theta = bogoliubov_angle(spec, k)
            ms = mode_state(spec, init, k)
            phase = np.exp(1j * ms.phi)
            u = -1j * np.sin(theta) * ms.a_plus + np.cos(theta) * ms.a_minus_mag * phase
            v = np.cos(theta) * ms.a_plus - 1j * np.sin(theta) * ms.a_minus_mag * phase
            pair = self.cdag_k[k] @ (self.cdag_k[-k] @ psi)
            psi = v * psi + u * pair
        return psi

    @staticmethod
    def expect(psi: np.ndarray, *ops: np.ndarray) -> complex:
        vec = psi
        for op in reversed(ops):
            vec = op @ vec
        return complex(np.vdot(psi, vec))

    def two_point(self, psi: np.ndarray, k: float):
        """The four pair expectation values at positive momentum k."""
        return (
            self.expect(psi, self.cdag_k[k], self.cdag_k[-k]),
            self.expect(psi, self.cdag_k[k], self.c_k[k]),
            self.expect(psi, self.c_k[-k], self.c_k[k]),
            self.expect(psi, self.c_k[-k], self.cdag_k[-k]),
        )

    def m_z(self, psi: np.ndarray) -> float:
        total = 0.0
        for k in self.grid.ks:
            total += self.expect(psi, self.cdag_k[k], self.c_k[k]).real
            total += self.expect(psi, self.cdag_k[-k], self.c_k[-k]).real
        return (2.0 / self.n_sites) * total - 1.0

    def contraction_q(self, psi: np.ndarray, r: int) -> complex:
        return self.expect(psi, self.a_op[0], self.a_op[r])

    def contraction_s(self, psi: np.ndarray, r: int) -> complex:
        return self.expect(psi, self.b_op[0], self.b_op[r])

    def contraction_g(self, psi: np.ndarray, r: int) -> complex:
        i, j = (0, r) if r >= 0 else (-r, 0)
        return self.expect(psi, self.b_op[i], self.a_op[j])

    def string_x(self, psi: np.ndarray, r: int) -> complex:
        ops = [self.b_op[0]]
        for t in range(1, r):
            ops += [self.a_op[t], self.b_op[t]]
        ops.append(self.a_op[r])
        return self.expect(psi, *ops)

    def string_y(self, psi: np.ndarray, r: int) -> complex:
        ops = [self.a_op[0]]
        for t in range(1, r):
            ops += [self.b_op[t], self.a_op[t]]
        ops.append(self.b_op[r])
        return (-1.0) ** r * self.expect(psi, *ops)


def hamiltonian_2x2(params: ModelParams, k: float) -> np.ndarray:
    """Momentum block in the (occupied-pair, empty) basis."""
    a = -params.lam - np.cos(k)
    b = params.gamma * np.sin(k)
    return np.array([[a, 1j * b], [-1j * b, -a]], dtype=complex)


def pair_state_2x2(spec: ModelParams, init: InitialStateParams, k: float) -> np.ndarray:
    """Initial pair state as a 2-vector in the (occupied-pair, empty) basis."""
    theta = bogoliubov_angle(spec, k)
    ms = mode_state(spec, init, k)
    phase = np.exp(1j * ms.phi)
    plus = np.array([-1j * np.sin(theta), np.cos(theta)], dtype=complex)
    minus = np.array([np.cos(theta), -1j * np.sin(theta)], dtype=complex)
    return ms.a_plus * plus + ms.a_minus_mag * phase * minus


def mode_amplitude_2x2(proto: QuenchProtocol, k: float, t: float) -> complex:
    """<psi_k(0)| exp(-i H'_k t) |psi_k(0)> by direct matrix exponentiation."""
    psi0 = pair_state_2x2(proto.pre, proto.init, k)
    u = expm(-1j * hamiltonian_2x2(proto.post, k) * t)
    return complex(np.vdot(psi0, u @ psi0))
