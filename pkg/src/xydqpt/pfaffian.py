"""Pfaffians of even-dimensional skew-symmetric matrices.

The workhorse is a skew-symmetric Gaussian elimination (congruence
tridiagonalisation) with partial pivoting; a factorial-cost cofactor
expansion is kept as an independent oracle for small sizes, and a
log-magnitude variant covers matrices whose Pfaffian underflows.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional accelerator
    _HAVE_NUMBA = False

__all__ = ["NotSkew", "pfaffian", "pfaffian_log", "pfaffian_cofactor"]

SKEW_RTOL = 1e-12


class NotSkew(ValueError):
    """Input violates the skew-symmetric (even-dimensional) contract."""


def _checked_copy(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSkew(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n % 2 != 0:
        raise NotSkew(f"dimension must be even, got {n}")
    scale = np.max(np.abs(a)) if n else 0.0
    if n and np.max(np.abs(a + a.T)) > SKEW_RTOL * max(scale, 1.0):
        raise NotSkew("matrix is not skew-symmetric within tolerance")
    return np.array(a, dtype=complex)


def _eliminate(a: np.ndarray):
    """Reduce to even-tridiagonal form by congruence, yielding pivots.

    Returns (pivots, sign) with Pf(a) = sign * prod(pivots); an exactly
    singular matrix yields a zero pivot.
    """
    n = a.shape[0]
    sign = 1.0
    pivots = np.empty(n // 2, dtype=complex)
    for j in range(0, n - 1, 2):
        col = np.abs(a[j + 1:, j])
        p = j + 1 + int(np.argmax(col))
        if np.abs(a[p, j]) == 0.0:
            pivots[j // 2 :] = 0.0
            return pivots, sign
        if p != j + 1:
            a[[j + 1, p], j:] = a[[p, j + 1], j:]
            a[j:, [j + 1, p]] = a[j:, [p, j + 1]]
            sign = -sign
        piv = a[j + 1, j]
        if j + 2 < n:
            f = a[j + 2:, j] / piv
            # symmetric row/column updates on the trailing block keep it
            # skew; earlier rows and columns are final and never re-read
            a[j + 2:, j + 1:] -= np.outer(f, a[j + 1, j + 1:])
            a[j + 1:, j + 2:] -= np.outer(a[j + 1:, j + 1], f)
        pivots[j // 2] = a[j, j + 1]
    return pivots, sign


def _eliminate_loops(a):
    """Loop form of :func:`_eliminate`; the numba target when available."""
    n = a.shape[0]
    sign = 1.0
    pivots = np.empty(n // 2, dtype=np.complex128)
    fs = np.empty(n, dtype=np.complex128)
    for j in range(0, n - 1, 2):
        p = j + 1
        best = abs(a[j + 1, j])
        for i in range(j + 2, n):
            v = abs(a[i, j])
            if v > best:
                best = v
                p = i
        if best == 0.0:
            for m in range(j // 2, n // 2):
                pivots[m] = 0.0
            return pivots, sign
        if p != j + 1:
            for col in range(j, n):
                tmp = a[j + 1, col]
                a[j + 1, col] = a[p, col]
                a[p, col] = tmp
            for row in range(j, n):
                tmp = a[row, j + 1]
                a[row, j + 1] = a[row, p]
                a[row, p] = tmp
            sign = -sign
        piv = a[j + 1, j]
        for i in range(j + 2, n):
            fs[i] = a[i, j] / piv
        for i in range(j + 2, n):
            f = fs[i]
            if f != 0.0:
                for col in range(j + 1, n):
                    a[i, col] -= f * a[j + 1, col]
        for row in range(j + 1, n):
            c1 = a[row, j + 1]
            if c1 != 0.0:
                for col in range(j + 2, n):
                    a[row, col] -= c1 * fs[col]
        pivots[j // 2] = a[j, j + 1]
    return pivots, sign


if _HAVE_NUMBA:
    _eliminate_loops = njit(cache=True)(_eliminate_loops)

    def _eliminate_dispatch(a):
        return _eliminate_loops(np.ascontiguousarray(a))

else:
    _eliminate_dispatch = _eliminate


def pfaffian(a) -> complex:
    """Pfaffian of an even-dimensional skew-symmetric matrix.

    Uses elimination with partial pivoting (largest pivot in the active
    column, rows and columns swapped together with sign tracking), which
    stays stable for the near-singular correlator matrices that occur
    deep in the disordered phase.  Satisfies Pf(a)^2 = det(a).

    Raises
    ------
    NotSkew
        If the matrix is not square, not even-dimensional, or violates
        skew symmetry beyond ``SKEW_RTOL`` relative tolerance.
    """
    a = _checked_copy(a)
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    pivots, sign = _eliminate_dispatch(a)
    return complex(sign * np.prod(pivots))


def pfaffian_log(a):
    """Log-magnitude form ``(log|Pf|, phase)`` with Pf = phase * exp(log|Pf|).

    Intended for dimensions beyond ~100 where the Pfaffian magnitude
    leaves the double-precision range; ``phase`` has unit modulus, and a
    singular matrix returns (-inf, 0).
    """
    a = _checked_copy(a)
    if a.shape[0] == 0:
        return 0.0, 1.0 + 0.0j
    pivots, sign = _eliminate_dispatch(a)
    mags = np.abs(pivots)
    if np.any(mags == 0.0):
        return -np.inf, 0.0 + 0.0j
    log_mag = float(np.sum(np.log(mags)))
    phase = sign * np.prod(pivots / mags)
    return log_mag, complex(phase)


def pfaffian_cofactor(a) -> complex:
    """Recursive cofactor expansion along the first row (oracle only).

    Factorial cost; refuses dimensions above 10.
    """
    a = _checked_copy(a)
    n = a.shape[0]
    if n > 10:
        raise ValueError("cofactor expansion is an oracle; use dim <= 10")

    def rec(m: np.ndarray) -> complex:
        dim = m.shape[0]
        if dim == 0:
            return 1.0 + 0.0j
        if dim == 2:
            return m[0, 1]
        total = 0.0 + 0.0j
        rest = np.arange(1, dim)
        for idx, j in enumerate(rest):
            keep = np.delete(rest, idx)
            total += (-1.0) ** idx * m[0, j] * rec(m[np.ix_(keep, keep)])
        return total

    return complex(rec(a))
