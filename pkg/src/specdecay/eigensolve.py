"""Symmetric eigenvalue routines.

Dense matrices are reduced to tridiagonal form by Householder reflections and
then diagonalised by implicit-shift QL. Tridiagonal matrices additionally get
Sturm-sequence counting, which gives extreme eigenvalues by bisection without
a full decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from specdecay.operators import SymmetricOperator

MAX_QL_SWEEPS = 30
DENSE_THRESHOLD = 4096
EXTREME_ATOL = 1e-10
_EPS = np.finfo(float).eps
_SAFMIN = np.finfo(float).tiny


class ConvergenceError(RuntimeError):
    """QL iteration did not deflate an eigenvalue within the sweep limit."""

    def __init__(self, index: int):
        super().__init__(
            f"QL iteration failed to converge for eigenvalue index {index} "
            f"after {MAX_QL_SWEEPS} sweeps"
        )
        self.index = index


class SizeLimitError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralSample:
    """Sorted eigenvalues of one operator realisation plus provenance."""

    eigenvalues: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.eigenvalues.size


@njit(cache=True)
def _householder_tridiagonal(a):
    # a: full symmetric matrix, overwritten
    n = a.shape[0]
    diag = np.empty(n)
    off = np.zeros(max(n - 1, 0))
    u = np.empty(n)
    p = np.empty(n)
    for k in range(n - 2):
        m = n - k - 1
        diag[k] = a[k, k]
        # column scaled by its largest entry so the squares cannot underflow
        scale = 0.0
        for i in range(m):
            scale = max(scale, abs(a[k + 1 + i, k]))
        if scale == 0.0:
            off[k] = 0.0
            continue
        sigma = 0.0
        for i in range(m):
            u[i] = a[k + 1 + i, k] / scale
            sigma += u[i] * u[i]
        sigma = math.sqrt(sigma)
        alpha = -sigma if u[0] >= 0.0 else sigma
        u[0] -= alpha
        unorm = 0.0
        for i in range(m):
            unorm += u[i] * u[i]
        unorm = math.sqrt(unorm)
        for i in range(m):
            u[i] /= unorm
        alpha *= scale
        # p = A u on the trailing block, then q = p - (u.p) u
        kk = 0.0
        for i in range(m):
            s = 0.0
            for j in range(m):
                s += a[k + 1 + i, k + 1 + j] * u[j]
            p[i] = s
            kk += u[i] * s
        for i in range(m):
            p[i] -= kk * u[i]
        for i in range(m):
            for j in range(i + 1):
                val = a[k + 1 + i, k + 1 + j] - 2.0 * (u[i] * p[j] + p[i] * u[j])
                a[k + 1 + i, k + 1 + j] = val
                a[k + 1 + j, k + 1 + i] = val
        off[k] = alpha
    if n >= 2:
        diag[n - 2] = a[n - 2, n - 2]
        off[n - 2] = a[n - 1, n - 2]
    if n >= 1:
        diag[n - 1] = a[n - 1, n - 1]
    return diag, off


@njit(cache=True)
def _ql_implicit(d, off, tol, max_sweeps):
    # eigenvalues of the tridiagonal (d, off) left in d; returns failing index or -1
    n = d.size
    e = np.zeros(n)
    for i in range(n - 1):
        e[i] = off[i]
    # norm-relative floor: graded off-diagonals next to zero diagonals never
    # satisfy the element-relative test alone
    anorm = 0.0
    for i in range(n):
        row = abs(d[i]) + abs(e[i])
        if i > 0:
            row += abs(e[i - 1])
        anorm = max(anorm, row)
    floor = 2.220446049250313e-16 * anorm + 2.2250738585072014e-308
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            if sweeps == max_sweeps:
                return l
            sweeps += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0.0 else -r))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            early = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    early = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if early:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return -1


@njit(cache=True)
def _sturm_count(diag, off2, x, pivmin):
    # number of eigenvalues strictly below x (zero pivots nudged to -pivmin)
    count = 0
    q = 1.0
    for i in range(diag.size):
        if i == 0:
            q = diag[0] - x
        else:
            q = diag[i] - x - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


@njit(cache=True)
def _bisect_kth(diag, off2, k, lo, hi, atol, pivmin):
    # k-th smallest eigenvalue (1-based) inside [lo, hi]
    for _ in range(256):
        width = hi - lo
        scale = max(abs(lo), abs(hi))
        if width <= max(atol, 4.0 * 2.220446049250313e-16 * scale):
            break
        mid = 0.5 * (lo + hi)
        if _sturm_count(diag, off2, mid, pivmin) >= k:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def _pivmin(off2) -> float:
    return _SAFMIN * max(1.0, float(off2.max()) if off2.size else 1.0)


def _tridiagonal_of(op: SymmetricOperator, max_dense: int):
    if op.kind == "tridiagonal":
        return op.diag.copy(), op.offdiag.copy()
    if op.n > max_dense:
        raise SizeLimitError(
            f"dense eigensolve limited to n <= {max_dense}, operator has n = {op.n}"
        )
    return _householder_tridiagonal(np.ascontiguousarray(op.to_dense()))


def tridiagonalize(op: SymmetricOperator, max_dense: int = DENSE_THRESHOLD) -> SymmetricOperator:
    """Orthogonally similar tridiagonal operator (Householder reduction)."""
    d, e = _tridiagonal_of(op, max_dense)
    return SymmetricOperator.tridiagonal(d, e)


def eigenvalues_symmetric(
    op: SymmetricOperator,
    tol: float = _EPS,
    max_dense: int = DENSE_THRESHOLD,
) -> np.ndarray:
    """All eigenvalues of ``op`` in ascending order.

    Parameters
    ----------
    op : SymmetricOperator
    tol : float
        Relative deflation threshold of the QL iteration; an off-diagonal is
        dropped once it is below ``tol * (|d_m| + |d_m+1|)`` or below
        machine epsilon times the matrix norm.
    max_dense : int
        Largest dimension accepted for dense or sparse input.

    Raises
    ------
    ConvergenceError
        If some eigenvalue needs more than ``MAX_QL_SWEEPS`` QL sweeps.
    SizeLimitError
        If a non-tridiagonal operator exceeds ``max_dense``.
    """
    if op.kind == "diagonal":
        return np.sort(op.diag)
    d, e = _tridiagonal_of(op, max_dense)
    failed = _ql_implicit(d, e, max(float(tol), _EPS), MAX_QL_SWEEPS)
    if failed >= 0:
        raise ConvergenceError(int(failed))
    return np.sort(d)


def spectral_sample(op: SymmetricOperator, **meta) -> SpectralSample:
    return SpectralSample(eigenvalues_symmetric(op), dict(meta))


def count_at_or_below(tridiag: SymmetricOperator, E: float) -> int:
    """Number of eigenvalues ``<= E`` by a Sturm (LDL^T inertia) count.

    The count is taken at ``E + 2**-40 * (1 + |E|)`` so that an eigenvalue
    sitting exactly on ``E`` is counted, matching a count over the sorted list.
    """
    if tridiag.kind != "tridiagonal":
        raise ValueError(f"Sturm counting needs tridiagonal storage, got {tridiag.kind}")
    off2 = tridiag.offdiag**2
    shift = 2.0**-40 * (1.0 + abs(E))
    return int(_sturm_count(tridiag.diag, off2, float(E) + shift, _pivmin(off2)))


def extreme_eigenvalues(op: SymmetricOperator, max_dense: int = DENSE_THRESHOLD) -> tuple[float, float]:
    """``(min, max)`` of the spectrum to about ``1e-10`` absolute.

    Tridiagonal operators use bisection on the Sturm count inside the
    Gershgorin interval; dense and sparse ones go through the full solver.
    """
    if op.kind == "diagonal":
        return float(op.diag.min()), float(op.diag.max())
    if op.kind == "tridiagonal":
        if op.n == 1:
            return float(op.diag[0]), float(op.diag[0])
        off2 = op.offdiag**2
        lo, hi = op.gershgorin_bounds()
        pad = 2.0 * _EPS * max(abs(lo), abs(hi), 1.0)
        lo, hi = lo - pad, hi + pad
        piv = _pivmin(off2)
        atol = EXTREME_ATOL / 4
        emin = _bisect_kth(op.diag, off2, 1, lo, hi, atol, piv)
        emax = _bisect_kth(op.diag, off2, op.n, lo, hi, atol, piv)
        return float(emin), float(emax)
    ev = eigenvalues_symmetric(op, max_dense=max_dense)
    return float(ev[0]), float(ev[-1])
