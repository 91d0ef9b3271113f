"""Counting functions, empirical spectral measures and distances between them."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from specdecay.operators import SymmetricOperator, trace_square

HW_RTOL = 1e-9


@dataclass(frozen=True)
class EmpiricalCDF:
    """Right-continuous step function ``E -> #{support <= E} / N``."""

    support: np.ndarray
    normalizer: int

    def __post_init__(self):
        s = np.asarray(self.support, dtype=float)
        if s.size > 1 and np.any(np.diff(s) < 0):
            s = np.sort(s)
        object.__setattr__(self, "support", s)
        if self.normalizer < 1:
            raise ValueError("normalizer must be a positive integer")

    @classmethod
    def from_values(cls, values, normalizer: int | None = None) -> "EmpiricalCDF":
        v = np.sort(np.asarray(values, dtype=float))
        return cls(v, v.size if normalizer is None else normalizer)

    def __call__(self, E):
        return np.searchsorted(self.support, E, side="right") / self.normalizer

    def left_limit(self, E):
        return np.searchsorted(self.support, E, side="left") / self.normalizer


def counting_function(eigenvalues, E):
    """``#{lambda <= E}`` for a sorted eigenvalue list (vectorised in ``E``)."""
    ev = getattr(eigenvalues, "eigenvalues", eigenvalues)
    out = np.searchsorted(ev, E, side="right")
    return int(out) if np.ndim(out) == 0 else out


def wasserstein_p(a: EmpiricalCDF, b: EmpiricalCDF, p: float = 2.0) -> float:
    """``W_p`` between two equal-size empirical measures via sorted matching."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if a.support.size != b.support.size or a.normalizer != b.normalizer:
        raise ValueError(
            "wasserstein_p needs empirical measures with the same number of atoms"
        )
    diff = np.abs(a.support - b.support)
    return float(np.mean(diff**p) ** (1.0 / p))


@dataclass(frozen=True)
class HoffmanWielandt:
    lhs: float
    rhs: float
    holds: bool


def hoffman_wielandt_certificate(spec_a, spec_b, diff: SymmetricOperator) -> HoffmanWielandt:
    """Check ``sum_j |lambda_j^A - lambda_j^B|^2 <= tr((A-B)^2)`` for sorted spectra."""
    a = np.asarray(spec_a, dtype=float)
    b = np.asarray(spec_b, dtype=float)
    if a.shape != b.shape or a.size != diff.n:
        raise ValueError(
            f"spectra of length {a.size} and {b.size} do not match operator dimension {diff.n}"
        )
    lhs = float(np.sum((a - b) ** 2))
    rhs = trace_square(diff)
    return HoffmanWielandt(lhs, rhs, lhs <= rhs + HW_RTOL * (1.0 + rhs))


@dataclass(frozen=True)
class WassersteinBound:
    w2: float
    bound: float
    holds: bool


def wasserstein_bound_certificate(sample_h, sample_free, potential_diagonal) -> WassersteinBound:
    """Compare ``W_2(mu_H, mu_free)`` with ``sqrt(tr(V^2) / N)``."""
    h = np.asarray(getattr(sample_h, "eigenvalues", sample_h), dtype=float)
    f = np.asarray(getattr(sample_free, "eigenvalues", sample_free), dtype=float)
    v = np.asarray(potential_diagonal, dtype=float)
    if not (h.size == f.size == v.size):
        raise ValueError(
            f"dimension mismatch: {h.size} vs {f.size} eigenvalues, {v.size} potential entries"
        )
    n = h.size
    w2 = wasserstein_p(EmpiricalCDF(h, n), EmpiricalCDF(f, n), 2.0)
    bound = float(np.sqrt(np.sum(v**2) / n))
    return WassersteinBound(w2, bound, w2 <= bound + 1e-9)


def arcsine_cdf(E):
    """IDS of the one-dimensional free Laplacian, ``1 - arccos(E/2)/pi``."""
    x = np.clip(np.asarray(E, dtype=float) / 2.0, -1.0, 1.0)
    return 1.0 - np.arccos(x) / np.pi


@dataclass(frozen=True)
class FreeIDS:
    """IDS of the free Laplacian on ``Z^d``, tabulated for ``d >= 3``.

    ``N_d(E) = (1/pi) int_0^pi N_{d-1}(E - 2cos(theta)) dtheta``: each extra
    dimension adds an arcsine-distributed term. The integral uses the
    ``resolution`` equal-mass nodes ``2cos(pi (j+1/2)/R)`` of that arcsine law,
    so the density's endpoint singularities never enter the quadrature. The
    ``d-1`` level is the closed form for ``d=2`` and a linearly interpolated
    table on a ``resolution``-cell grid of ``[-2(d-1), 2(d-1)]`` beyond that.
    """

    d: int
    resolution: int = 2048
    grid: np.ndarray = field(init=False, repr=False)
    table: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.d >= 2 and self.resolution < 1024:
            raise ValueError("resolution must be at least 1024 for d >= 2")
        nodes = self._nodes()
        grid = np.linspace(-2.0 * (self.d - 1), 2.0 * (self.d - 1), self.resolution + 1)
        table = arcsine_cdf(grid)
        for k in range(2, self.d):
            prev_grid, prev_table = grid, table
            grid = np.linspace(-2.0 * k, 2.0 * k, self.resolution + 1)
            table = _integrate_shift(
                lambda x: np.interp(x, prev_grid, prev_table, left=0.0, right=1.0),
                grid, nodes,
            )
            table = 0.5 * (table + 1.0 - table[::-1])
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "table", table)

    def _nodes(self):
        return 2.0 * np.cos(np.pi * (np.arange(self.resolution) + 0.5) / self.resolution)

    def _lower(self, x):
        if self.d == 2:
            return arcsine_cdf(x)
        return np.interp(x, self.grid, self.table, left=0.0, right=1.0)

    def __call__(self, E):
        E = np.asarray(E, dtype=float)
        if self.d == 1:
            out = arcsine_cdf(E)
        else:
            flat = E.ravel()
            out = np.empty_like(flat)
            for start in range(0, flat.size, 256):
                chunk = flat[start:start + 256]
                out[start:start + 256] = _integrate_shift(self._lower, chunk, self._nodes())
            out = out.reshape(E.shape)
            lim = 2.0 * self.d
            out = np.where(E <= -lim, 0.0, np.where(E >= lim, 1.0, out))
        return float(out) if out.ndim == 0 else out


def _integrate_shift(lower: Callable, E, nodes):
    return lower(np.asarray(E)[:, None] - nodes[None, :]).mean(axis=1)


@lru_cache(maxsize=16)
def _free_ids_table(d: int, resolution: int) -> FreeIDS:
    return FreeIDS(d, resolution)


def free_ids(d: int, E, resolution: int = 2048):
    """Integrated density of states ``N^0(E)`` of the free Laplacian on ``Z^d``."""
    if d == 1:
        out = arcsine_cdf(E)
        return float(out) if np.ndim(out) == 0 else out
    return _free_ids_table(int(d), int(resolution))(E)


def ks_distance(emp: EmpiricalCDF, model: Callable) -> float:
    """Sup distance between an empirical CDF and a model CDF.

    Evaluated at the jump points, on both sides of each jump.
    """
    x = np.unique(emp.support)
    if x.size == 0:
        return 0.0
    g = np.asarray(model(x), dtype=float)
    right = emp(x)
    left = emp.left_limit(x)
    return float(max(np.max(np.abs(right - g)), np.max(np.abs(left - g))))
