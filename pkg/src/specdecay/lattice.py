"""The cube of lattice sites ``{n in Z^d : |n_i| <= L}`` and its norms."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

MAX_SITES = 2**31


class NormKind(str, Enum):
    SUP = "sup"
    EUCLIDEAN = "euclidean"
    L1 = "l1"


@dataclass(frozen=True)
class LatticeCube:
    """Cube of side ``2L+1`` centred at the origin of ``Z^d``.

    Sites are enumerated lexicographically in ``(n_1, ..., n_d)`` with each
    coordinate running from ``-L`` to ``L``. A site's position in that
    enumeration is its row/column index in every operator built on the cube.
    """

    L: int
    d: int
    norm_kind: NormKind = NormKind.SUP
    max_sites: int = MAX_SITES

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 0:
            raise ValueError(f"L must be a non-negative integer, got {self.L!r}")
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "norm_kind", NormKind(self.norm_kind))
        if self.n_sites > self.max_sites:
            raise ValueError(
                f"cube with L={self.L}, d={self.d} has {self.n_sites} sites, "
                f"above the limit {self.max_sites}"
            )

    @property
    def side(self) -> int:
        return 2 * self.L + 1

    @property
    def n_sites(self) -> int:
        return self.side**self.d

    @cached_property
    def sites(self) -> np.ndarray:
        """Integer array of shape ``(n_sites, d)`` in canonical order."""
        return enumerate_sites(self)

    @cached_property
    def norms(self) -> np.ndarray:
        """``|n|`` for every site, in canonical order."""
        return site_norm(self.sites, self.norm_kind)


def enumerate_sites(cube: LatticeCube) -> np.ndarray:
    """Return all sites of ``cube`` as rows of an ``(N, d)`` integer array.

    The last coordinate varies fastest, so for ``d=2`` the order starts
    ``(-L,-L), (-L,-L+1), ...`` and ends at ``(L, L)``.
    """
    axis = np.arange(-cube.L, cube.L + 1, dtype=np.int64)
    grids = np.meshgrid(*([axis] * cube.d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def site_norm(n, norm_kind: NormKind | str = NormKind.SUP):
    """Norm of a site (or of each row of an array of sites).

    Examples
    --------
    >>> site_norm((3, -4), "sup"), site_norm((3, -4), "euclidean")
    (4.0, 5.0)
    """
    kind = NormKind(norm_kind)
    arr = np.abs(np.asarray(n, dtype=float))
    scalar = arr.ndim <= 1
    arr = np.atleast_2d(arr)
    if kind is NormKind.SUP:
        out = arr.max(axis=1)
    elif kind is NormKind.EUCLIDEAN:
        out = np.sqrt((arr**2).sum(axis=1))
    else:
        out = arr.sum(axis=1)
    return float(out[0]) if scalar else out


def shell_counts(cube: LatticeCube) -> np.ndarray:
    """Number of sites at each sup-norm radius ``r = 0..L``.

    ``s_0 = 1`` and ``s_r = (2r+1)^d - (2r-1)^d``. Counts are returned as
    floats when they would overflow int64.
    """
    if cube.norm_kind is not NormKind.SUP:
        raise ValueError(
            "shell counts are only defined for the sup norm; "
            "enumerate the sites directly for other norms"
        )
    return sup_shell_counts(cube.L, cube.d)


def sup_shell_counts(L: int, d: int) -> np.ndarray:
    r = np.arange(L + 1)
    if d * np.log2(2 * L + 1) < 62:
        r = r.astype(np.int64)
        counts = (2 * r + 1) ** d - np.abs(2 * r - 1) ** d
    else:
        rf = r.astype(float)
        counts = (2 * rf + 1) ** d - np.abs(2 * rf - 1) ** d
    counts[0] = 1
    return counts
