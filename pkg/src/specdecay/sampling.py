"""Single-site laws, decay envelopes and reproducible per-site random streams."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special

from specdecay.lattice import LatticeCube

_TWO_POW_M53 = 2.0**-53
_UINT64 = 2**64


class SiteDistribution:
    """Base class for the law of a single ``omega_n``.

    Subclasses provide :meth:`cdf`, :meth:`survival` and :meth:`ppf`; all three
    accept scalars or arrays.
    """

    tag = "abstract"

    @property
    def second_moment(self) -> float:
        raise NotImplementedError

    @property
    def symmetric(self) -> bool:
        return False

    def cdf(self, t):
        raise NotImplementedError

    def survival(self, t):
        return 1.0 - self.cdf(t)

    def ppf(self, u):
        raise NotImplementedError

    def sample(self, u):
        """Inverse-CDF transform of uniforms ``u`` strictly inside ``(0, 1)``."""
        arr = np.asarray(u, dtype=float)
        if np.any(~((arr > 0.0) & (arr < 1.0))):
            raise ValueError("uniform variates must lie strictly inside (0, 1)")
        out = self.ppf(arr)
        return float(out) if np.ndim(out) == 0 else out

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ParetoSymmetric(SiteDistribution):
    """Symmetric power law with density ``(delta/2)|x|^(-1-delta)`` on ``|x| > 1``."""

    delta: float
    tag = "pareto_symmetric"

    def __post_init__(self):
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be positive and finite, got {self.delta!r}")

    @property
    def second_moment(self) -> float:
        if self.delta > 2:
            return self.delta / (self.delta - 2)
        return math.inf

    @property
    def symmetric(self) -> bool:
        return True

    def _tail(self, t):
        # P(X > t) for t >= 1, never formed by subtraction
        with np.errstate(divide="ignore"):
            return 0.5 * np.power(np.maximum(np.abs(t), 1.0), -self.delta)

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        tail = self._tail(t)
        out = np.where(t <= -1.0, tail, np.where(t >= 1.0, 1.0 - tail, 0.5))
        return out[()] if out.ndim == 0 else out

    def survival(self, t):
        t = np.asarray(t, dtype=float)
        tail = self._tail(t)
        out = np.where(t >= 1.0, tail, np.where(t <= -1.0, 1.0 - tail, 0.5))
        return out[()] if out.ndim == 0 else out

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        lower = -np.power(2.0 * np.minimum(u, 0.5), -1.0 / self.delta)
        upper = np.power(2.0 * np.minimum(1.0 - u, 0.5), -1.0 / self.delta)
        # u == 1/2 goes to the positive branch
        out = np.where(u < 0.5, lower, upper)
        return out[()] if out.ndim == 0 else out

    def to_dict(self) -> dict:
        return {"kind": self.tag, "delta": self.delta}


@dataclass(frozen=True)
class Uniform(SiteDistribution):
    a: float = 0.0
    b: float = 1.0
    tag = "uniform"

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"uniform law needs a < b, got [{self.a}, {self.b}]")

    @property
    def second_moment(self) -> float:
        return (self.a**2 + self.a * self.b + self.b**2) / 3.0

    @property
    def symmetric(self) -> bool:
        return self.a == -self.b

    def cdf(self, t):
        out = np.clip((np.asarray(t, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)
        return out[()] if out.ndim == 0 else out

    def survival(self, t):
        out = np.clip((self.b - np.asarray(t, dtype=float)) / (self.b - self.a), 0.0, 1.0)
        return out[()] if out.ndim == 0 else out

    def ppf(self, u):
        return self.a + (self.b - self.a) * np.asarray(u, dtype=float)

    def to_dict(self) -> dict:
        return {"kind": self.tag, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Gaussian(SiteDistribution):
    mean: float = 0.0
    sd: float = 1.0
    tag = "gaussian"

    def __post_init__(self):
        if not self.sd > 0:
            raise ValueError(f"sd must be positive, got {self.sd!r}")

    @property
    def second_moment(self) -> float:
        return self.mean**2 + self.sd**2

    @property
    def symmetric(self) -> bool:
        return self.mean == 0

    def cdf(self, t):
        return special.ndtr((np.asarray(t, dtype=float) - self.mean) / self.sd)

    def survival(self, t):
        return special.ndtr((self.mean - np.asarray(t, dtype=float)) / self.sd)

    def ppf(self, u):
        return self.mean + self.sd * special.ndtri(np.asarray(u, dtype=float))

    def to_dict(self) -> dict:
        return {"kind": self.tag, "mean": self.mean, "sd": self.sd}


_LAWS = {cls.tag: cls for cls in (ParetoSymmetric, Uniform, Gaussian)}


def law_from_dict(spec: dict) -> SiteDistribution:
    """Build a law from ``{"kind": ..., **params}``."""
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind not in _LAWS:
        raise ValueError(f"unknown law kind {kind!r}; expected one of {sorted(_LAWS)}")
    try:
        return _LAWS[kind](**{k: float(v) for k, v in spec.items()})
    except TypeError as exc:
        raise ValueError(f"bad parameters for law {kind!r}: {exc}") from None


@dataclass(frozen=True)
class DecayProfile:
    """Envelope ``a_n`` multiplying ``omega_n``.

    By default ``a_n = (1 + |n|)^(-alpha)`` using the cube's norm; ``alpha=0``
    is the ergodic (unweighted) case. ``custom_weights`` replaces the envelope
    by an arbitrary finite sequence in canonical site order.
    """

    alpha: float = 0.0
    custom_weights: Optional[Sequence[float]] = None

    def __post_init__(self):
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be non-negative, got {self.alpha!r}")
        if self.custom_weights is not None:
            w = np.asarray(self.custom_weights, dtype=float)
            if not np.all(np.isfinite(w)):
                raise ValueError("custom weights must be finite")

    def weights(self, cube: LatticeCube) -> np.ndarray:
        if self.custom_weights is not None:
            w = np.asarray(self.custom_weights, dtype=float)
            if w.shape != (cube.n_sites,):
                raise ValueError(
                    f"expected {cube.n_sites} custom weights, got shape {w.shape}"
                )
            return w
        if self.alpha == 0:
            return np.ones(cube.n_sites)
        return np.power(1.0 + cube.norms, -self.alpha)


@dataclass(frozen=True)
class StreamSpec:
    """Key of the uniform stream for one trial.

    The uniform for site rank ``k`` is a pure function of
    ``(master_seed, trial_index, k)``: a Philox4x64 counter generator keyed by
    ``(master_seed, trial_index)`` evaluated at counter position ``k``.
    """

    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        if self.trial_index < 0:
            raise ValueError("trial_index must be non-negative")

    def uniforms(self, count: int, start: int = 0) -> np.ndarray:
        """Uniforms for site ranks ``start, ..., start+count-1``."""
        key = np.array(
            [int(self.master_seed) % _UINT64, int(self.trial_index) % _UINT64],
            dtype=np.uint64,
        )
        gen = np.random.Philox(key=key)
        block, offset = divmod(start, 4)
        if block:
            gen.advance(block)
        raw = gen.random_raw(offset + count)[offset:]
        # top 53 bits, shifted half a step: never 0, never 1
        return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_POW_M53


def sample_potential(
    cube: LatticeCube,
    profile: DecayProfile,
    dist: SiteDistribution,
    stream: StreamSpec,
) -> np.ndarray:
    """Diagonal of ``V_L`` in canonical site order for one realisation."""
    weights = profile.weights(cube)
    return weights * np.asarray(dist.sample(stream.uniforms(cube.n_sites)), dtype=float)
