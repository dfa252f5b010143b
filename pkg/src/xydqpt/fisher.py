"""Fisher zeros of the boundary-partition function and critical quantities.

After continuing the return amplitude to complex time, each momentum
mode contributes a line of zeros

    z_n(k) = [ln|num/den| + i (2n+1) pi] / (2 eps'_k),

where num/den is the ratio of initial-state populations on the two
post-quench eigenvectors.  The line crosses the imaginary axis where the
populations balance, i.e. at roots of

    g(k) = sinh(beta eps_k) cos(2 dtheta_k) - sin(phi) sin(2 dtheta_k),

and each root k* fixes a family of critical times (2n+1) pi / (2 eps'_{k*}).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import bisect

from .gibbs import InitialStateParams
from .loschmidt import QuenchProtocol, population_imbalance
from .spectrum import delta_theta_grid, dispersion

__all__ = [
    "FisherCurve",
    "Crossing",
    "BetaCritical",
    "NonMonotoneBracket",
    "crossing_condition",
    "fisher_curve",
    "find_crossings",
    "critical_beta",
]

K_BISECT_TOL = 1e-10
BETA_BISECT_TOL = 1e-4
DEFAULT_SCAN_POINTS = 2048


class NonMonotoneBracket(ArithmeticError):
    """Crossing existence is re-entrant in beta; bisection would be unsound."""


@dataclass(frozen=True)
class Crossing:
    """One critical momentum with its first few critical times."""

    k_star: float
    eps_post: float
    t_crit: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class FisherCurve:
    """Branch-n zero line sampled over (0, pi).

    ``infinite`` flags samples where numerator or denominator of the
    population ratio vanished (the line runs to +-inf there); such
    samples are kept, with re_z = +-inf.
    """

    branch: int
    ks: np.ndarray
    re_z: np.ndarray
    im_z: np.ndarray
    infinite: np.ndarray
    crossings: list


def _scan_grid(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) * np.pi / n


def crossing_condition(proto: QuenchProtocol, ks):
    """g(k) = sinh(beta eps) cos(2 dtheta) - sin(phi) sin(2 dtheta).

    Literal form; it overflows once beta*eps exceeds ~700.  Root finding
    uses ``population_imbalance`` instead, which equals g * (2/Z_k) and
    is bounded, with identical sign structure.
    """
    ks = np.atleast_1d(np.asarray(ks, dtype=float))
    eps = dispersion(proto.pre, ks)
    dth = delta_theta_grid(proto.pre, proto.post, ks)
    with np.errstate(over="ignore"):
        return np.sinh(proto.init.beta * eps) * np.cos(2.0 * dth) - np.sin(
            proto.init.phi
        ) * np.sin(2.0 * dth)


def _population_log_ratio(proto: QuenchProtocol, ks):
    """ln(P+ / P-) with underflow flags; P+- are the eigenbasis populations."""
    eps = dispersion(proto.pre, ks)
    dth = delta_theta_grid(proto.pre, proto.post, ks)
    q = np.exp(-2.0 * proto.init.beta * eps)
    eb = np.exp(-proto.init.beta * eps)
    sphi = np.sin(proto.init.phi)
    s2, c2 = np.sin(dth) ** 2, np.cos(dth) ** 2
    cross = eb * sphi * np.sin(2.0 * dth)
    num = np.maximum(q * c2 + s2 + cross, 0.0)
    den = np.maximum(q * s2 + c2 - cross, 0.0)
    infinite = (num == 0.0) | (den == 0.0)
    with np.errstate(divide="ignore"):
        return np.log(num) - np.log(den), infinite


def fisher_curve(
    proto: QuenchProtocol, branch: int = 0, resolution: int = 512
) -> FisherCurve:
    """Sample the branch-n zero line on a uniform momentum grid over (0, pi)."""
    if resolution < 256:
        raise ValueError(f"resolution must be >= 256, got {resolution}")
    ks = _scan_grid(resolution)
    eps1 = dispersion(proto.post, ks)
    log_ratio, infinite = _population_log_ratio(proto, ks)
    re_z = log_ratio / (2.0 * eps1)
    im_z = (2 * branch + 1) * np.pi / (2.0 * eps1)
    crossings = find_crossings(proto, branches=(branch,))
    return FisherCurve(branch, ks, re_z, im_z, infinite, crossings)


def find_crossings(
    proto: QuenchProtocol,
    branches=(0, 1, 2),
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> list[Crossing]:
    """Locate all imaginary-axis crossings and their critical times.

    The sign of the population imbalance is scanned on ``scan_points``
    momenta; each sign change is narrowed by bisection to |dk| < 1e-10.
    An empty list means the protocol shows no dynamical transition.
    """
    ks = _scan_grid(scan_points)
    w = population_imbalance(proto, ks)

    def w_scalar(k: float) -> float:
        return float(population_imbalance(proto, k)[0])

    roots = []
    sign = np.sign(w)
    for i in range(len(ks) - 1):
        if sign[i] == 0.0:
            if 0 < i and sign[i - 1] * sign[i + 1] < 0:
                roots.append(float(ks[i]))
            continue
        if sign[i] * sign[i + 1] < 0:
            roots.append(float(bisect(w_scalar, ks[i], ks[i + 1], xtol=K_BISECT_TOL)))

    out = []
    for k_star in roots:
        eps1 = dispersion(proto.post, k_star)
        t_crit = tuple((2 * n + 1) * np.pi / (2.0 * eps1) for n in branches)
        out.append(Crossing(k_star=k_star, eps_post=float(eps1), t_crit=t_crit))
    return out


@dataclass(frozen=True)
class BetaCritical:
    """Outcome of the critical effective-inverse-temperature search.

    ``status`` is "ok" (``beta_c`` set), "always" (crossings persist up to
    the ceiling) or "never" (none even at the floor).
    """

    status: str
    beta_c: float | None = None


def _has_crossing(proto: QuenchProtocol, beta: float, ks: np.ndarray) -> bool:
    trial = replace(proto, init=InitialStateParams(beta=beta, phi=proto.init.phi))
    w = population_imbalance(trial, ks)
    s = np.sign(w)
    return bool(np.any(s[:-1] * s[1:] < 0))


def critical_beta(
    proto: QuenchProtocol,
    beta_lo: float = 1e-3,
    beta_hi: float = 1e3,
    scan_points: int = DEFAULT_SCAN_POINTS,
) -> BetaCritical:
    """Boundary of crossing existence in beta for a fixed quench.

    The protocol's own ``init.beta`` is ignored; the bracket
    [beta_lo, beta_hi] is pre-scanned on 8 logarithmic points to verify
    that crossing existence switches off monotonically before bisecting
    the boundary to |dbeta| < 1e-4.

    Raises
    ------
    NonMonotoneBracket
        If the pre-scan sees existence re-enter at larger beta; the
        situation is surfaced instead of silently bisected.
    """
    ks = _scan_grid(scan_points)
    if not _has_crossing(proto, beta_lo, ks):
        return BetaCritical(status="never")
    if _has_crossing(proto, beta_hi, ks):
        return BetaCritical(status="always")

    pre_betas = np.geomspace(beta_lo, beta_hi, 8)
    flags = [_has_crossing(proto, b, ks) for b in pre_betas]
    if any(flags[i] and not flags[i - 1] for i in range(1, len(flags))):
        raise NonMonotoneBracket(
            f"crossing existence is not monotone over beta in [{beta_lo}, {beta_hi}]"
        )
    lo = max(b for b, f in zip(pre_betas, flags) if f)
    hi = min(b for b, f in zip(pre_betas, flags) if not f)
    while hi - lo > BETA_BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if _has_crossing(proto, mid, ks):
            lo = mid
        else:
            hi = mid
    return BetaCritical(status="ok", beta_c=0.5 * (lo + hi))
