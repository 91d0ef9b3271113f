"""Experiment configuration: parsing, defaults and validation."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Optional, Union

from specdecay.eigensolve import DENSE_THRESHOLD
from specdecay.lattice import MAX_SITES, NormKind
from specdecay.sampling import ParetoSymmetric, SiteDistribution, Uniform, law_from_dict

EXPERIMENTS = ("ids", "wasserstein", "extremes", "free-ids", "spectrum")


class ConfigError(ValueError):
    """A configuration rule was violated; the message names the rule."""


@dataclass
class ExperimentConfig:
    experiment: str
    d: int = 1
    L: Union[int, list, None] = None
    alpha: float = 0.0
    delta: Optional[float] = None
    law: Optional[dict] = None
    trials: int = 1
    master_seed: int = 0
    norm_kind: str = "sup"
    output_dir: Optional[str] = None
    resolution: int = 2048
    override_infinite_variance: bool = False

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "experiment" not in data:
            raise ConfigError("config must name an experiment")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @property
    def L_values(self) -> list:
        if self.L is None:
            return []
        return list(self.L) if isinstance(self.L, (list, tuple)) else [self.L]

    def site_law(self) -> SiteDistribution:
        if self.law is not None:
            try:
                return law_from_dict(self.law)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
        if self.experiment == "extremes":
            return ParetoSymmetric(float(self.delta))
        return Uniform(0.0, 1.0)

    def validate(self) -> "ExperimentConfig":
        """Check every rule before any computation; raise :class:`ConfigError`."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(
                f"unknown experiment {self.experiment!r}; expected one of {', '.join(EXPERIMENTS)}"
            )
        _require_int(self.d, "d", minimum=1)
        _require_int(self.trials, "trials", minimum=1)
        _require_int(self.master_seed, "master_seed", minimum=None)
        _require_int(self.resolution, "resolution", minimum=1)
        if self.d >= 2 and self.resolution < 1024:
            raise ConfigError("resolution must be >= 1024 for d >= 2")
        if not _is_number(self.alpha) or self.alpha < 0:
            raise ConfigError(f"alpha must be a non-negative number, got {self.alpha!r}")
        try:
            NormKind(self.norm_kind)
        except ValueError:
            raise ConfigError(f"norm_kind must be one of sup, euclidean, l1, got {self.norm_kind!r}") from None
        if not isinstance(self.override_infinite_variance, bool):
            raise ConfigError("override_infinite_variance must be true or false")
        for L in self.L_values:
            _require_int(L, "L", minimum=0)
            if (2 * L + 1) ** self.d > MAX_SITES:
                raise ConfigError(f"cube L={L}, d={self.d} exceeds {MAX_SITES} sites")
        if self.experiment != "free-ids" and not self.L_values:
            raise ConfigError(f"experiment {self.experiment!r} needs L")

        if self.experiment in ("ids", "wasserstein", "spectrum", "extremes") and self.d >= 2:
            for L in self.L_values:
                if (2 * L + 1) ** self.d > DENSE_THRESHOLD:
                    raise ConfigError(
                        f"cube L={L}, d={self.d} has {(2 * L + 1) ** self.d} sites; "
                        f"dense eigensolve is limited to {DENSE_THRESHOLD}"
                    )
        if self.experiment == "extremes":
            self._validate_extremes()
        elif self.experiment in ("ids", "wasserstein", "spectrum"):
            law = self.site_law()
            if (self.experiment != "spectrum" and not math.isfinite(law.second_moment)
                    and not self.override_infinite_variance):
                raise ConfigError(
                    f"law {law.to_dict()} has infinite second moment; "
                    "set override_infinite_variance to run anyway"
                )
        return self

    def _validate_extremes(self):
        if self.delta is None or not _is_number(self.delta) or not self.delta > 0:
            raise ConfigError("extremes needs a positive delta")
        if len(self.L_values) != 1:
            raise ConfigError("extremes takes a single L")
        if self.alpha * self.delta > self.d:
            raise ConfigError(
                f"alpha*delta = {self.alpha * self.delta:g} > d = {self.d}: regime not admissible"
            )
        law = self.site_law()
        if not isinstance(law, ParetoSymmetric) or law.delta != float(self.delta):
            raise ConfigError("extremes needs a pareto_symmetric law with the configured delta")
        from specdecay.extremes import ScalingRegime

        if ScalingRegime(self.d, float(self.alpha), float(self.delta)).regime == "critical" and self.L_values[0] < 1:
            raise ConfigError("critical regime needs L >= 1")


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _require_int(value, name, minimum):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {value}")
