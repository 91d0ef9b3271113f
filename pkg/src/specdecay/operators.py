"""Finite-volume Laplacian, potential and Hamiltonian as symmetric operators."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from specdecay.lattice import LatticeCube


@dataclass(frozen=True, eq=False)
class SymmetricOperator:
    """A real symmetric matrix in one of four storage layouts.

    ``kind`` is one of ``"diagonal"``, ``"tridiagonal"``, ``"sparse"`` or
    ``"dense"``:

    * diagonal: ``diag`` only.
    * tridiagonal: ``diag`` and ``offdiag`` (length ``n-1``).
    * sparse: ``diag`` plus the upper-triangle edge list ``rows < cols`` with
      ``values``; each edge stands for both ``(i, j)`` and ``(j, i)``.
    * dense: ``lower``, the lower triangle of the matrix (upper part zero).

    Symmetry is a property of the layout; nothing is checked numerically.
    """

    n: int
    kind: str
    diag: Optional[np.ndarray] = None
    offdiag: Optional[np.ndarray] = None
    rows: Optional[np.ndarray] = None
    cols: Optional[np.ndarray] = None
    values: Optional[np.ndarray] = None
    lower: Optional[np.ndarray] = None

    @classmethod
    def diagonal(cls, values) -> "SymmetricOperator":
        v = np.array(values, dtype=float).ravel()
        return cls(n=v.size, kind="diagonal", diag=v)

    @classmethod
    def tridiagonal(cls, diag, offdiag) -> "SymmetricOperator":
        a = np.array(diag, dtype=float).ravel()
        b = np.array(offdiag, dtype=float).ravel()
        if b.size != max(a.size - 1, 0):
            raise ValueError(f"off-diagonal must have length {a.size - 1}, got {b.size}")
        return cls(n=a.size, kind="tridiagonal", diag=a, offdiag=b)

    @classmethod
    def sparse(cls, n, rows, cols, values, diag=None) -> "SymmetricOperator":
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        if np.any(rows >= cols):
            raise ValueError("sparse edges must satisfy row < col")
        dg = np.zeros(n) if diag is None else np.array(diag, dtype=float)
        return cls(
            n=int(n), kind="sparse", diag=dg, rows=rows, cols=cols,
            values=np.asarray(values, dtype=float),
        )

    @classmethod
    def dense(cls, matrix) -> "SymmetricOperator":
        """Wrap a square matrix; only its lower triangle is read."""
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"dense operator needs a square matrix, got {m.shape}")
        return cls(n=m.shape[0], kind="dense", lower=np.tril(m))

    def diagonal_values(self) -> np.ndarray:
        if self.kind == "dense":
            return np.diag(self.lower).copy()
        return self.diag

    def to_dense(self) -> np.ndarray:
        if self.kind == "dense":
            low = self.lower
            return low + np.tril(low, -1).T
        m = np.diag(self.diag)
        if self.kind == "tridiagonal" and self.n > 1:
            idx = np.arange(self.n - 1)
            m[idx, idx + 1] = self.offdiag
            m[idx + 1, idx] = self.offdiag
        elif self.kind == "sparse":
            np.add.at(m, (self.rows, self.cols), self.values)
            np.add.at(m, (self.cols, self.rows), self.values)
        return m

    def gershgorin_bounds(self) -> tuple[float, float]:
        """Interval containing the whole spectrum."""
        radius = np.zeros(self.n)
        if self.kind == "tridiagonal":
            ab = np.abs(self.offdiag)
            radius[:-1] += ab
            radius[1:] += ab
        elif self.kind == "sparse":
            np.add.at(radius, self.rows, np.abs(self.values))
            np.add.at(radius, self.cols, np.abs(self.values))
        elif self.kind == "dense":
            full = np.abs(self.to_dense())
            radius = full.sum(axis=1) - np.diag(full)
        dg = self.diagonal_values()
        return float(np.min(dg - radius)), float(np.max(dg + radius))


def build_laplacian(cube: LatticeCube) -> SymmetricOperator:
    """Adjacency operator of ``Z^d`` truncated to the cube (no wraparound).

    Tridiagonal for ``d=1``, sparse edge list for ``d>1``. There is no
    diagonal term, so the spectrum lies inside ``[-2d, 2d]``.
    """
    n = cube.n_sites
    if cube.d == 1:
        return SymmetricOperator.tridiagonal(np.zeros(n), np.ones(max(n - 1, 0)))
    side = cube.side
    index = np.arange(n).reshape((side,) * cube.d)
    rows, cols = [], []
    for axis in range(cube.d):
        lo = [slice(None)] * cube.d
        hi = [slice(None)] * cube.d
        lo[axis] = slice(0, side - 1)
        hi[axis] = slice(1, side)
        rows.append(index[tuple(lo)].ravel())
        cols.append(index[tuple(hi)].ravel())
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    return SymmetricOperator.sparse(n, rows, cols, np.ones(rows.size))


def build_hamiltonian(laplacian: SymmetricOperator, potential_diagonal) -> SymmetricOperator:
    """``Delta_L + V_L`` keeping the Laplacian's storage layout."""
    v = np.asarray(potential_diagonal, dtype=float).ravel()
    if v.size != laplacian.n:
        raise ValueError(
            f"potential has {v.size} entries but the operator has dimension {laplacian.n}"
        )
    if laplacian.kind == "tridiagonal":
        return SymmetricOperator.tridiagonal(laplacian.diag + v, laplacian.offdiag)
    if laplacian.kind == "sparse":
        return SymmetricOperator.sparse(
            laplacian.n, laplacian.rows, laplacian.cols, laplacian.values,
            diag=laplacian.diag + v,
        )
    if laplacian.kind == "diagonal":
        return SymmetricOperator.diagonal(laplacian.diag + v)
    return SymmetricOperator.dense(laplacian.lower + np.diag(v))


def laplacian_spectrum_exact(cube: LatticeCube) -> np.ndarray:
    """Closed-form Dirichlet spectrum ``{sum_i 2cos(pi k_i / (2L+2))}``, sorted."""
    # 2cos(pi k/(2L+2)) written as a sine: exact zero and exact +/- pairs
    j = np.arange(cube.L, -cube.L - 1, -1)
    one_dim = 2.0 * np.sin(np.pi * j / (2 * cube.L + 2))
    total = np.zeros(1)
    for _ in range(cube.d):
        total = (total[:, None] + one_dim[None, :]).ravel()
    return np.sort(total)


def trace_square(op: SymmetricOperator) -> float:
    """``tr(A^2)``, i.e. the sum of squares of all matrix entries."""
    if op.kind == "dense":
        low = op.lower
        return float(np.sum(np.diag(low) ** 2) + 2.0 * np.sum(np.tril(low, -1) ** 2))
    total = float(np.sum(op.diag**2))
    if op.kind == "tridiagonal":
        total += 2.0 * float(np.sum(op.offdiag**2))
    elif op.kind == "sparse":
        total += 2.0 * float(np.sum(op.values**2))
    return total
