"""Single-particle building blocks of the transverse-field XY chain.

Energies are measured in units of the exchange coupling (J = 1) and
hbar = k_B = 1.  Only the antiperiodic momentum sector k = (2n-1)*pi/N
is implemented; every downstream quantity consumes these functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ANGLE_TOL = 1e-12

__all__ = [
    "ANGLE_TOL",
    "DegenerateAngle",
    "ModelParams",
    "MomentumGrid",
    "ModeData",
    "momentum_grid",
    "dispersion",
    "bogoliubov_angle",
    "delta_theta",
    "delta_theta_grid",
    "wrap_angle",
    "mode_data",
]


class DegenerateAngle(ValueError):
    """The Bogoliubov-angle numerator vanishes and the angle is a 0/0."""


@dataclass(frozen=True)
class ModelParams:
    """Couplings of one Hamiltonian instance.

    Parameters
    ----------
    gamma : float
        Anisotropy between the two in-plane couplings, in [-1, 1].
    lam : float
        Transverse field, >= 0.
    """

    gamma: float
    lam: float

    def __post_init__(self):
        if not np.isfinite(self.gamma) or abs(self.gamma) > 1.0:
            raise ValueError(f"gamma must lie in [-1, 1], got {self.gamma}")
        if not np.isfinite(self.lam) or self.lam < 0.0:
            raise ValueError(f"lam must be finite and >= 0, got {self.lam}")


@dataclass(frozen=True, eq=False)
class MomentumGrid:
    """Positive momenta of an even chain in the antiperiodic sector."""

    n_sites: int
    ks: np.ndarray


def momentum_grid(n_sites: int) -> MomentumGrid:
    """Grid k_n = (2n-1)*pi/N for n = 1..N/2, strictly inside (0, pi)."""
    if n_sites < 2 or n_sites % 2 != 0:
        raise ValueError(f"chain length must be even and positive, got {n_sites}")
    ks = (2.0 * np.arange(1, n_sites // 2 + 1) - 1.0) * np.pi / n_sites
    return MomentumGrid(n_sites, ks)


@dataclass(frozen=True)
class ModeData:
    """Per-momentum bundle consumed by the quench machinery."""

    k: float
    eps: float
    theta: float
    delta_theta: float | None = None


def _eps_theta(params: ModelParams, ks):
    """Vectorised dispersion and Bogoliubov angle with a degeneracy mask."""
    ks = np.asarray(ks, dtype=float)
    ak = params.lam + np.cos(ks)
    bk = params.gamma * np.sin(ks)
    eps = np.hypot(ak, bk)
    re = -ak - eps
    theta = np.arctan2(bk, re)
    # arctan2 can return -pi for signed zeros; fold onto (-pi, pi]
    theta = np.where(theta <= -np.pi, np.pi, theta)
    degenerate = (np.abs(re) < ANGLE_TOL) & (np.abs(bk) < ANGLE_TOL)
    return eps, theta, degenerate


def dispersion(params: ModelParams, k):
    """Quasiparticle energy eps_k = sqrt((lam + cos k)^2 + gamma^2 sin^2 k)."""
    k = np.asarray(k, dtype=float)
    eps = np.hypot(params.lam + np.cos(k), params.gamma * np.sin(k))
    return float(eps) if eps.ndim == 0 else eps


def bogoliubov_angle(params: ModelParams, k: float) -> float:
    """Rotation angle diagonalising the 2x2 momentum block.

    The angle is the argument, taken in (-pi, pi], of the complex number
    (-lam - cos k - eps_k) + i gamma sin k, so exp(i theta_k) has unit
    modulus by construction.

    Raises
    ------
    DegenerateAngle
        If both real and imaginary parts of that number fall below
        ``ANGLE_TOL``; there the angle is a 0/0 and the caller must
        decide how to proceed.
    """
    eps, theta, degenerate = _eps_theta(params, k)
    if np.any(degenerate):
        raise DegenerateAngle(
            f"angle undefined at k={k!r} for gamma={params.gamma}, lam={params.lam}"
        )
    theta = np.asarray(theta)
    return float(theta) if theta.ndim == 0 else theta


def wrap_angle(d):
    """Wrap an angle (difference) onto the branch (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(d, dtype=float), 2.0 * np.pi)


def delta_theta(pre: ModelParams, post: ModelParams, k: float) -> float:
    """Bogoliubov-angle mismatch theta_k(pre) - theta_k(post), wrapped to (-pi, pi]."""
    d = wrap_angle(bogoliubov_angle(pre, k) - bogoliubov_angle(post, k))
    d = np.asarray(d)
    return float(d) if d.ndim == 0 else d


def delta_theta_grid(pre: ModelParams, post: ModelParams, ks):
    """Vectorised ``delta_theta`` over an array of momenta."""
    eps0, th0, d0 = _eps_theta(pre, ks)
    eps1, th1, d1 = _eps_theta(post, ks)
    if np.any(d0) or np.any(d1):
        raise DegenerateAngle("angle undefined somewhere on the requested grid")
    return wrap_angle(th0 - th1)


def mode_data(params: ModelParams, k: float, post: ModelParams | None = None) -> ModeData:
    """Bundle (k, eps, theta) and, for a quench pair, the angle mismatch."""
    eps = dispersion(params, k)
    theta = bogoliubov_angle(params, k)
    dth = None if post is None else delta_theta(params, post, k)
    return ModeData(k=float(k), eps=eps, theta=theta, delta_theta=dth)
