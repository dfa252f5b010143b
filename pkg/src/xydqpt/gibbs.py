"""Coherent Gibbs initial state: per-mode amplitudes and fermionic two-point values.

The initial state is a pure product state over momentum pairs (k, -k).
Each pair carries Boltzmann-weighted amplitudes on the two eigenvectors
of the pre-quench 2x2 block and a uniform relative phase ``phi`` on the
lower branch.  The squared amplitudes reproduce the thermal populations
exp(-+ beta*eps)/Z_k; the off-diagonal coherence is what distinguishes
this state from an actual Gibbs mixture.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectrum import DegenerateAngle, ModelParams, _eps_theta, dispersion, wrap_angle

__all__ = [
    "InitialStateParams",
    "ModeState",
    "FermionTwoPoint",
    "mode_state",
    "two_point",
    "two_point_arrays",
]


@dataclass(frozen=True)
class InitialStateParams:
    """Effective inverse temperature and relative phase of the initial state."""

    beta: float
    phi: float = -np.pi / 2

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0.0:
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        if not np.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi}")
        object.__setattr__(self, "phi", float(wrap_angle(self.phi)))


@dataclass(frozen=True)
class ModeState:
    """Amplitudes of one momentum pair.

    ``a_plus`` multiplies the upper eigenvector, ``a_minus_mag`` the lower
    one; the relative phase ``phi`` is attached to the lower branch.
    Both amplitudes are non-negative and a_plus^2 + a_minus_mag^2 = 1.
    """

    a_plus: float
    a_minus_mag: float
    phi: float
    z_k: float


def mode_state(spec: ModelParams, init: InitialStateParams, k: float) -> ModeState:
    """Normalised Boltzmann amplitudes for mode ``k``.

    Evaluated through q = exp(-2 beta eps) so the result stays exact for
    arbitrarily large beta*eps (a_plus -> 0, a_minus_mag -> 1) instead of
    overflowing; z_k = 2 cosh(beta eps) itself may overflow to inf.
    """
    eps = dispersion(spec, k)
    q = np.exp(-2.0 * init.beta * eps)
    a_plus = np.sqrt(q / (1.0 + q))
    a_minus = np.sqrt(1.0 / (1.0 + q))
    with np.errstate(over="ignore"):
        z_k = 2.0 * np.cosh(init.beta * eps)
    return ModeState(float(a_plus), float(a_minus), init.phi, float(z_k))


@dataclass(frozen=True)
class FermionTwoPoint:
    """The four two-operator expectation values of one (k, -k) pair.

    Fields follow the operator content: ``cdag_cdag`` = <c_k^+ c_-k^+>,
    ``cdag_c`` = <c_k^+ c_k>, ``c_c`` = <c_-k c_k>, ``c_cdag`` = <c_-k c_-k^+>.
    """

    cdag_cdag: complex
    cdag_c: complex
    c_c: complex
    c_cdag: complex


def two_point_arrays(spec: ModelParams, init: InitialStateParams, ks):
    """Vectorised two-point values over an array of positive momenta.

    Returns the tuple (cdag_cdag, cdag_c, c_c, c_cdag) of complex arrays.
    The pre-quench dispersion of ``spec`` enters all Boltzmann factors.
    All four expressions are rescaled by exp(-beta*eps) so they remain
    finite for any beta.
    """
    eps, theta, degenerate = _eps_theta(spec, ks)
    if np.any(degenerate):
        raise DegenerateAngle("two-point values undefined at a gap closing")
    s = np.sin(theta)
    c = np.cos(theta)
    sc = s * c
    beta, phi = init.beta, init.phi
    q = np.exp(-2.0 * beta * eps)      # e^{-beta eps} / e^{+beta eps}
    eb = np.exp(-beta * eps)
    den = 1.0 + q
    eip = np.exp(1j * phi)
    eim = np.exp(-1j * phi)
    cdag_cdag = (1j * (q - 1.0) * sc + eb * (eip * s**2 + eim * c**2)) / den
    cdag_c = (-2.0 * np.sin(phi) * sc * eb + c**2 + q * s**2) / den + 0j
    c_c = (1j * (1.0 - q) * sc + eb * (eip * c**2 + eim * s**2)) / den
    c_cdag = (2.0 * np.sin(phi) * sc * eb + q * c**2 + s**2) / den + 0j
    return cdag_cdag, cdag_c, c_c, c_cdag


def two_point(spec: ModelParams, init: InitialStateParams, k: float) -> FermionTwoPoint:
    """Two-point expectation values of the pair (k, -k), k > 0."""
    cc2, nk, ck, ckd = two_point_arrays(spec, init, np.asarray([k], dtype=float))
    return FermionTwoPoint(
        cdag_cdag=complex(cc2[0]),
        cdag_c=complex(nk[0]),
        c_c=complex(ck[0]),
        c_cdag=complex(ckd[0]),
    )
