"""Extreme eigenvalues under heavy-tailed decaying potentials.

Normalisations ``Gamma_L`` and ``b``, the exact finite-volume laws of the
potential's extreme order statistics, their Frechet-type limits, and a Monte
Carlo driver comparing all of them against sampled Hamiltonians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from specdecay import eigensolve
from specdecay.lattice import LatticeCube, NormKind, site_norm, sup_shell_counts, enumerate_sites
from specdecay.operators import build_hamiltonian, build_laplacian
from specdecay.sampling import DecayProfile, SiteDistribution, StreamSpec, sample_potential
from specdecay.spectra import EmpiricalCDF, ks_distance

CRITICAL_RTOL = 1e-12
CURVE_POINTS = 512


@dataclass(frozen=True)
class ScalingRegime:
    """Exponents ``(d, alpha, delta)`` with ``alpha * delta <= d``."""

    d: int
    alpha: float
    delta: float

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.alpha * self.delta > self.d * (1 + CRITICAL_RTOL):
            raise ValueError(
                f"alpha*delta = {self.alpha * self.delta:g} exceeds d = {self.d}; "
                "no extreme-value normalisation exists in that range"
            )

    @property
    def regime(self) -> str:
        if self.alpha == 0:
            return "ergodic"
        if math.isclose(self.alpha * self.delta, self.d, rel_tol=CRITICAL_RTOL):
            return "critical"
        return "sub_critical"

    def gamma_pow_delta(self, L: int) -> float:
        """``Gamma_L ** delta`` computed directly (exact for integer powers)."""
        side = 2 * L + 1
        if self.regime == "ergodic":
            return float(side**self.d)
        if self.regime == "critical":
            if side < 3:
                raise ValueError("the critical regime needs L >= 1 so that ln(2L+1) > 0")
            return math.log(side)
        return float(side) ** (self.d - self.alpha * self.delta)

    def gamma_L(self, L: int) -> float:
        side = 2 * L + 1
        if self.regime == "ergodic":
            return float(side) ** (self.d / self.delta)
        if self.regime == "critical":
            return self.gamma_pow_delta(L) ** (1.0 / self.delta)
        return float(side) ** ((self.d - self.alpha * self.delta) / self.delta)


def gamma_L(regime: ScalingRegime, L: int) -> float:
    return regime.gamma_L(L)


@lru_cache(maxsize=32)
def norm_multiplicities(L: int, d: int, norm_kind: str = "sup") -> tuple[np.ndarray, np.ndarray]:
    """Distinct values of ``|n|`` on the cube and how many sites take each."""
    if NormKind(norm_kind) is NormKind.SUP:
        return np.arange(L + 1, dtype=float), sup_shell_counts(L, d).astype(float)
    cube = LatticeCube(L, d, norm_kind)
    norms = site_norm(enumerate_sites(cube), norm_kind)
    values, counts = np.unique(norms, return_counts=True)
    return values, counts.astype(float)


def b_partial(regime: ScalingRegime, L: int, norm_kind: str = "sup") -> float:
    """``Gamma_L^-delta * sum_{n in cube} (1+|n|)^(-alpha*delta)``."""
    if regime.regime == "ergodic":
        return (2 * L + 1) ** regime.d / regime.gamma_pow_delta(L)
    values, counts = norm_multiplicities(L, regime.d, str(NormKind(norm_kind).value))
    total = math.fsum(counts * np.power(1.0 + values, -regime.alpha * regime.delta))
    return total / regime.gamma_pow_delta(L)


def b_estimate(regime: ScalingRegime, norm_kind: str = "sup", L_star: int | None = None) -> tuple[float, float]:
    """Large-``L`` value of :func:`b_partial` and its change since ``L_star/2``.

    The second number is only an error proxy: in the critical regime the
    partial values approach the limit like ``1/ln L``.
    """
    if L_star is None:
        fast = regime.d == 1 and NormKind(norm_kind) is NormKind.SUP
        L_star = 10**6 if fast else 10**3
    value = b_partial(regime, L_star, norm_kind)
    half = b_partial(regime, max(L_star // 2, 1), norm_kind)
    return value, abs(value - half)


def _site_thresholds(regime: ScalingRegime, L: int, norm_kind: str):
    values, counts = norm_multiplicities(L, regime.d, str(NormKind(norm_kind).value))
    scale = np.power(1.0 + values, regime.alpha) * regime.gamma_L(L)
    return scale, counts


def _log_cdf(dist: SiteDistribution, t):
    surv = dist.survival(t)
    with np.errstate(divide="ignore"):
        return np.where(surv < 0.5, np.log1p(-surv), np.log(dist.cdf(t)))


def _log_survival(dist: SiteDistribution, t):
    cdf = dist.cdf(t)
    with np.errstate(divide="ignore"):
        return np.where(cdf < 0.5, np.log1p(-cdf), np.log(dist.survival(t)))


def _product_log(regime, L, dist, x, norm_kind, log_factor):
    scale, counts = _site_thresholds(regime, L, norm_kind)
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty(flat.size)
    step = max(1, 2**20 // max(scale.size, 1))
    for start in range(0, flat.size, step):
        t = flat[start:start + step, None] * scale[None, :]
        with np.errstate(invalid="ignore"):
            out[start:start + step] = np.sum(counts * log_factor(dist, t), axis=1)
    return out.reshape(x.shape)


def exact_diagonal_max_cdf(regime: ScalingRegime, L: int, dist: SiteDistribution, x, norm_kind: str = "sup"):
    """``P(max_n V_n / Gamma_L <= x) = prod_n F((1+|n|)^alpha Gamma_L x)``."""
    log_m = _product_log(regime, L, dist, x, norm_kind, _log_cdf)
    out = np.exp(log_m)
    return float(out) if out.ndim == 0 else out


def exact_diagonal_min_cdf(regime: ScalingRegime, L: int, dist: SiteDistribution, x, norm_kind: str = "sup"):
    """``P(min_n V_n / Gamma_L <= x) = 1 - prod_n P(omega > (1+|n|)^alpha Gamma_L x)``."""
    log_m = _product_log(regime, L, dist, x, norm_kind, _log_survival)
    out = -np.expm1(log_m)
    return float(out) if out.ndim == 0 else out


def limit_max_cdf(b: float, delta: float, x):
    """Frechet-type limit ``exp(-b / (2 x^delta))`` for ``x > 0``, else 0."""
    x = np.asarray(x, dtype=float)
    pos = np.where(x > 0, x, 1.0)
    out = np.where(x > 0, np.exp(-b / (2.0 * pos**delta)), 0.0)
    return float(out) if out.ndim == 0 else out


def limit_min_cdf(b: float, delta: float, x):
    """Mirror law ``1 - exp(-b / (2 |x|^delta))`` for ``x < 0``, else 1."""
    x = np.asarray(x, dtype=float)
    neg = np.where(x < 0, -x, 1.0)
    out = np.where(x < 0, -np.expm1(-b / (2.0 * neg**delta)), 1.0)
    return float(out) if out.ndim == 0 else out


def limit_max_quantile(b: float, delta: float, p):
    return (b / (2.0 * -np.log(p))) ** (1.0 / delta)


def curve_grid(b: float, delta: float, n: int = CURVE_POINTS) -> np.ndarray:
    """``n`` points spanning the 0.1%-99.9% quantiles of the limiting max law."""
    lo, hi = limit_max_quantile(b, delta, np.array([0.001, 0.999]))
    return np.linspace(lo, hi, n)


@dataclass(frozen=True)
class ExtremeTrialRecord:
    trial_index: int
    E_max: float
    E_min: float
    diag_max: float
    diag_min: float
    gamma_L: float


@dataclass
class ExtremeExperiment:
    regime: ScalingRegime
    L: int
    dist: SiteDistribution
    norm_kind: str
    records: list
    b_partial: float
    b_estimate: float
    b_increment: float
    ks: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def gamma_L(self) -> float:
        return self.regime.gamma_L(self.L)

    def normalized(self, name: str) -> np.ndarray:
        return self.column(name) / self.gamma_L

    @property
    def max_bracket_gap(self) -> float:
        """Largest ``|E - diag|`` over all records and both edges."""
        gaps = np.concatenate([
            np.abs(self.column("E_max") - self.column("diag_max")),
            np.abs(self.column("E_min") - self.column("diag_min")),
        ])
        return float(np.nanmax(gaps)) if np.any(np.isfinite(gaps)) else float("nan")

    def exact_max(self, x):
        return exact_diagonal_max_cdf(self.regime, self.L, self.dist, x, self.norm_kind)

    def exact_min(self, x):
        return exact_diagonal_min_cdf(self.regime, self.L, self.dist, x, self.norm_kind)

    def curves(self, n: int = CURVE_POINTS) -> dict:
        x = curve_grid(self.b_partial, self.regime.delta, n)
        delta = self.regime.delta
        emp = {k: EmpiricalCDF.from_values(self.normalized(k))
               for k in ("E_max", "diag_max", "E_min", "diag_min")}
        return {
            "x": x,
            "emp_cdf_max": emp["E_max"](x),
            "emp_cdf_diag_max": emp["diag_max"](x),
            "exact_ML": self.exact_max(x),
            "limit_frechet": limit_max_cdf(self.b_partial, delta, x),
            "x_min": -x[::-1],
            "emp_cdf_min": emp["E_min"](-x[::-1]),
            "emp_cdf_diag_min": emp["diag_min"](-x[::-1]),
            "exact_min": self.exact_min(-x[::-1]),
            "limit_frechet_min": limit_min_cdf(self.b_partial, delta, -x[::-1]),
        }


def _ks_table(exp: ExtremeExperiment) -> dict:
    delta = exp.regime.delta
    table = {}
    for side, exact, limit in (
        ("max", exp.exact_max, limit_max_cdf),
        ("min", exp.exact_min, limit_min_cdf),
    ):
        for source in ("diag", "E"):
            vals = exp.normalized(f"{source}_{side}")
            if not np.all(np.isfinite(vals)):
                continue
            emp = EmpiricalCDF.from_values(vals)
            key = f"{source}_{side}"
            table[f"{key}_vs_exact"] = ks_distance(emp, exact)
            table[f"{key}_vs_limit_b_partial"] = ks_distance(
                emp, lambda x, b=exp.b_partial: limit(b, delta, x))
            table[f"{key}_vs_limit_b_estimate"] = ks_distance(
                emp, lambda x, b=exp.b_estimate: limit(b, delta, x))
    return table


def run_extreme_experiment(
    regime: ScalingRegime,
    L: int,
    dist: SiteDistribution,
    trials: int,
    master_seed: int,
    norm_kind: str = "sup",
    diagonal_only: bool = False,
    L_star: int | None = None,
    max_dense: int = eigensolve.DENSE_THRESHOLD,
) -> ExtremeExperiment:
    """Sample ``trials`` potentials and record the extremes of ``V`` and ``H``.

    Diagonal extremes come straight from the potential vector; the Hamiltonian
    extremes use :func:`specdecay.eigensolve.extreme_eigenvalues` unless
    ``diagonal_only`` is set, in which case they are recorded as NaN. Any
    solver failure aborts the whole run.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cube = LatticeCube(L, regime.d, norm_kind)
    profile = DecayProfile(regime.alpha)
    gam = regime.gamma_L(L)
    laplacian = None if diagonal_only else build_laplacian(cube)
    if laplacian is not None and laplacian.kind != "tridiagonal" and cube.n_sites > max_dense:
        raise eigensolve.SizeLimitError(
            f"cube has {cube.n_sites} sites, above the dense limit {max_dense}; "
            "use diagonal_only"
        )
    records = []
    for t in range(trials):
        v = sample_potential(cube, profile, dist, StreamSpec(master_seed, t))
        if laplacian is None:
            e_min = e_max = math.nan
        else:
            e_min, e_max = eigensolve.extreme_eigenvalues(
                build_hamiltonian(laplacian, v), max_dense=max_dense)
        records.append(ExtremeTrialRecord(t, e_max, e_min, float(v.max()), float(v.min()), gam))
    b_star, b_inc = b_estimate(regime, norm_kind, L_star)
    exp = ExtremeExperiment(
        regime=regime, L=L, dist=dist, norm_kind=str(NormKind(norm_kind).value),
        records=records, b_partial=b_partial(regime, L, norm_kind),
        b_estimate=b_star, b_increment=b_inc,
    )
    exp.ks = _ks_table(exp)
    return exp
