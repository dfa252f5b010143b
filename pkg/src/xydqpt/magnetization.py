"""Magnetizations of the coherent Gibbs state.

The transverse component follows directly from the mode occupations.
The in-plane order parameters are square roots of the long-distance
limit of string correlators C_x(r), C_y(r): products of 2r Majorana-type
operators A_j = c_j^+ + c_j and B_j = c_j^+ - c_j whose Gaussian
expectation reduces, by Wick's theorem, to the Pfaffian of a
skew-symmetric matrix of pair contractions

    Q_r = <A_i A_{i+r}>,  S_r = <B_i B_{i+r}>,  G_r = <B_i A_{i+r}> = -D_{-r}.

Each contraction is a mode sum over the momentum grid; positive momenta
are grouped with their -k partners exactly as the summands pair them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gibbs import InitialStateParams, two_point_arrays
from .pfaffian import pfaffian, pfaffian_log
from .spectrum import ModelParams, momentum_grid

__all__ = [
    "ContractionTable",
    "MagnetizationPoint",
    "OrderParameterResult",
    "PatternMismatch",
    "NegativeLimit",
    "m_z",
    "contractions",
    "correlator_x",
    "correlator_y",
    "order_parameter",
    "order_parameter_batch",
    "magnetization_point",
]

LOG_PFAFFIAN_DIM = 100


class PatternMismatch(AssertionError):
    """Assembled correlator matrix disagrees with the reference first row."""


class NegativeLimit(ArithmeticError):
    """The correlator limit came out negative beyond numerical noise."""


@dataclass(frozen=True, eq=False)
class ContractionTable:
    """Pair contractions out to distance ``r_max`` on an N-site chain.

    ``q`` and ``s`` hold Q_r, S_r for r = 0..r_max (both odd in r, so the
    negative side is implicit); ``g`` holds G_r for r = -r_max..r_max with
    ``g[r + r_max]`` addressing distance r, and D_r = -G_{-r}.
    """

    n_sites: int
    r_max: int
    q: np.ndarray
    s: np.ndarray
    g: np.ndarray

    def g_at(self, r: int) -> complex:
        return complex(self.g[r + self.r_max])

    def d_at(self, r: int) -> complex:
        return complex(-self.g[-r + self.r_max])


@dataclass(frozen=True)
class MagnetizationPoint:
    """Magnetization triple of one initial state with convergence metadata."""

    mx: float
    my: float
    mz: float
    r_used: int
    converged: bool


@dataclass(frozen=True)
class OrderParameterResult:
    value: float
    r_used: int
    converged: bool
    history: tuple


def m_z(spec: ModelParams, init: InitialStateParams, n_sites: int) -> float:
    """Transverse magnetization (2/N) sum_k <c_k^+ c_k> - 1 over all N modes.

    Positive momenta contribute their occupation directly; each -k
    partner enters through 1 - Re<c_{-k} c_{-k}^+> of the same pair.
    """
    grid = momentum_grid(n_sites)
    _, cdag_c, _, c_cdag = two_point_arrays(spec, init, grid.ks)
    occupations = cdag_c.real + (1.0 - c_cdag.real)
    return float((2.0 / n_sites) * occupations.sum() - 1.0)


def _tables_for_betas(
    spec: ModelParams, betas, phi: float, n_sites: int, r_max: int
) -> list[ContractionTable]:
    """Contraction tables for several beta values sharing one spectrum."""
    if r_max >= n_sites // 2:
        raise ValueError(f"r_max must stay below N/2, got {r_max} with N={n_sites}")
    grid = momentum_grid(n_sites)
    ks = grid.ks
    rs = np.arange(r_max + 1)
    sin_rk = np.sin(np.outer(rs, ks))
    cos_rk = np.cos(np.outer(rs, ks))

    tables = []
    for beta in np.atleast_1d(np.asarray(betas, dtype=float)):
        init = InitialStateParams(beta=float(beta), phi=phi)
        cdag_cdag, cdag_c, c_c, c_cdag = two_point_arrays(spec, init, ks)
        # summand of mode k minus that of its partner -k
        qb = cdag_c + c_c + cdag_cdag + c_cdag
        sb = cdag_c - c_c - cdag_cdag + c_cdag
        gc = cdag_c - c_cdag
        gs = c_c - cdag_cdag
        q = (-1j / n_sites) * (sin_rk @ (2.0 * (qb - 1.0)))
        s = (+1j / n_sites) * (sin_rk @ (2.0 * (sb - 1.0)))
        g_even = (2.0 / n_sites) * (cos_rk @ gc)
        g_odd = (2j / n_sites) * (sin_rk @ gs)
        g = np.concatenate([(g_even - g_odd)[:0:-1], g_even + g_odd])
        tables.append(ContractionTable(n_sites, r_max, q, s, g))
    return tables


def contractions(
    spec: ModelParams, init: InitialStateParams, n_sites: int, r_max: int
) -> ContractionTable:
    """Evaluate Q_r, S_r, G_r on the momentum grid of an N-site chain."""
    return _tables_for_betas(spec, [init.beta], init.phi, n_sites, r_max)[0]


def _string_ops(direction: str, r: int):
    """Operator sequence of the length-r string as (is_b, site) arrays.

    x-strings read B_i A_{i+1} B_{i+1} ... A_{i+r}; y-strings swap the
    A/B roles.
    """
    sites = np.empty(2 * r, dtype=int)
    is_b = np.empty(2 * r, dtype=bool)
    first_is_b = direction == "x"
    sites[0], is_b[0] = 0, first_is_b
    for t in range(1, r):
        sites[2 * t - 1], is_b[2 * t - 1] = t, not first_is_b
        sites[2 * t], is_b[2 * t] = t, first_is_b
    sites[2 * r - 1], is_b[2 * r - 1] = r, not first_is_b
    return is_b, sites


def _assemble(table: ContractionTable, direction: str, r: int) -> np.ndarray:
    """Skew-symmetric contraction matrix of the 2r string operators."""
    if r < 1 or r > table.r_max:
        raise ValueError(f"need 1 <= r <= r_max={table.r_max}, got {r}")
    is_b, sites = _string_ops(direction, r)
    rm = table.r_max
    # odd extensions for the same-type contractions, full table for G
    q_look = np.concatenate([-table.q[:0:-1], table.q])
    s_look = np.concatenate([-table.s[:0:-1], table.s])
    g_look = table.g
    d_look = -g_look[::-1]

    d_idx = sites[None, :] - sites[:, None] + rm
    bb = np.outer(is_b, is_b)
    aa = np.outer(~is_b, ~is_b)
    ba = np.outer(is_b, ~is_b)
    ab = np.outer(~is_b, is_b)
    mat = (
        aa * q_look[d_idx]
        + bb * s_look[d_idx]
        + ba * g_look[d_idx]
        + ab * d_look[d_idx]
    )
    np.fill_diagonal(mat, 0.0)
    if not np.array_equal(mat, -mat.T):
        raise PatternMismatch("assembled matrix is not exactly skew-symmetric")

    # first row must reproduce the reference pattern of the string
    expected = np.empty(2 * r - 1, dtype=complex)
    for j in range(1, 2 * r):
        dist = (j + 1) // 2
        if direction == "x":
            expected[j - 1] = table.g_at(dist) if j % 2 else table.s[dist]
        else:
            expected[j - 1] = table.d_at(dist) if j % 2 else table.q[dist]
    if not np.array_equal(mat[0, 1:], expected):
        raise PatternMismatch(f"first row deviates from the C_{direction} pattern")
    return mat


def _pf(mat: np.ndarray) -> complex:
    if mat.shape[0] > LOG_PFAFFIAN_DIM:
        log_mag, phase = pfaffian_log(mat)
        if log_mag == -np.inf:
            return 0.0 + 0.0j
        with np.errstate(over="ignore"):
            return complex(phase * np.exp(log_mag))
    return pfaffian(mat)


def correlator_x(table: ContractionTable, r: int) -> complex:
    """String correlator C_x(r) as the Pfaffian of the assembled matrix."""
    return _pf(_assemble(table, "x", r))


def correlator_y(table: ContractionTable, r: int) -> complex:
    """String correlator C_y(r); the swapped string carries a (-1)^r prefactor."""
    return (-1.0) ** r * _pf(_assemble(table, "y", r))


_R_LADDER = (8, 16, 32, 64, 128, 256)


def order_parameter(
    spec: ModelParams,
    init: InitialStateParams,
    direction: str,
    tol: float = 1e-6,
    r_cap: int = 256,
) -> OrderParameterResult:
    """In-plane order parameter sqrt(lim_r C(r)) by distance doubling.

    C is evaluated at r = 8, 16, 32, ... (chain length kept at N = 8r)
    until successive values agree to ``tol`` relatively, with an absolute
    floor of 1e-12.  A limit that fails to settle by ``r_cap`` is
    returned unconverged with the average of the last two values.

    Raises
    ------
    NegativeLimit
        If the accepted limit is below -10*tol; small negative values
        are numerical noise and clamp to zero instead.
    """
    batch = order_parameter_batch(spec, [init.beta], init.phi, direction, tol, r_cap)
    return batch[0]


def order_parameter_batch(
    spec: ModelParams,
    betas,
    phi: float,
    direction: str,
    tol: float = 1e-6,
    r_cap: int = 256,
) -> list[OrderParameterResult]:
    """Doubling-convergence order parameters for many betas at once.

    The betas share each chain's spectrum and trigonometric kernels, so
    sweeping an initial-state grid costs one table build per distance.
    """
    if direction not in ("x", "y"):
        raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")
    betas = np.atleast_1d(np.asarray(betas, dtype=float))
    ladder = [r for r in _R_LADDER if r <= r_cap]
    if not ladder:
        raise ValueError(f"r_cap must be >= {_R_LADDER[0]}, got {r_cap}")
    nb = betas.size
    prev = np.full(nb, np.nan)
    results: list[OrderParameterResult | None] = [None] * nb
    history: list[list] = [[] for _ in range(nb)]
    active = np.ones(nb, dtype=bool)

    for step, r in enumerate(ladder):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        tables = _tables_for_betas(spec, betas[idx], phi, 8 * r, r)
        for j, table in zip(idx, tables):
            c = (correlator_x if direction == "x" else correlator_y)(table, r).real
            history[j].append((r, c))
            if step and abs(c - prev[j]) < tol * max(abs(prev[j]), 1e-12):
                if c < -10.0 * tol:
                    raise NegativeLimit(
                        f"C_{direction} -> {c} at r={r} for beta={betas[j]}"
                    )
                results[j] = OrderParameterResult(
                    float(np.sqrt(max(c, 0.0))), r, True, tuple(history[j])
                )
                active[j] = False
            prev[j] = c

    for j in np.flatnonzero(active):
        # limit still oscillating at the distance cap: summarise with the
        # average of the last two values and flag the point as unconverged
        c = float(np.mean([c for _, c in history[j][-2:]]))
        results[j] = OrderParameterResult(
            float(np.sqrt(max(c, 0.0))), ladder[-1], False, tuple(history[j])
        )
    return results  # type: ignore[return-value]


def magnetization_point(
    spec: ModelParams,
    init: InitialStateParams,
    tol: float = 1e-6,
    n_sites_mz: int = 1024,
    r_cap: int = 256,
) -> MagnetizationPoint:
    """All three magnetizations of one initial state."""
    px = order_parameter(spec, init, "x", tol=tol, r_cap=r_cap)
    py = order_parameter(spec, init, "y", tol=tol, r_cap=r_cap)
    return MagnetizationPoint(
        mx=px.value,
        my=py.value,
        mz=m_z(spec, init, n_sites_mz),
        r_used=max(px.r_used, py.r_used),
        converged=px.converged and py.converged,
    )
