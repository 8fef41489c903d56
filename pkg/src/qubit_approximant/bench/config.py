"""Experiment configuration: parsing, validation and hashing."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..encoding import BENCHMARKS
from ..targets import FUNCS_1D, FUNCS_2D

FAMILIES = ("fourier", "uat", "classical-fourier", "classical-uat")
FOURIER_FAMILIES = ("fourier", "classical-fourier")
OPTIMIZERS = ("lbfgs", "cma")
OPTIMIZER_KEYS = {
    "lbfgs": {"method", "max_iters", "grad_tol", "f_tol", "gradient"},
    "cma": {"method", "population", "sigma0", "budget", "f_target"},
}
GRADIENTS = ("parameter_shift", "finite_diff")
MAX_LAYERS = 6


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    """One benchmark sweep over targets x families x layer counts.

    A target is a registry name (``"tanh5"``, ``"himmelblau"``,
    ``"tanh5+i*relu"``) or a table ``{"name": ..., "file": "data.csv"}``.
    """

    targets: list
    families: list[str]
    layers: list[int] = field(default_factory=lambda: list(range(1, MAX_LAYERS + 1)))
    benchmark: str = "Z"
    points_1d: int = 101
    points_2d: int = 31
    optimizer: dict = field(default_factory=lambda: {"method": "lbfgs"})
    restarts: int = 10
    shots: int | None = None
    seed: int = 0
    output_dir: str = "results"
    max_layers: int = MAX_LAYERS
    fourier_resolution: int = 10_000

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        raw = dict(raw)
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "layers" in raw:
            layers = raw["layers"]
            if isinstance(layers, int):
                layers = [layers]
            elif isinstance(layers, dict):
                layers = list(range(int(layers["from"]), int(layers["to"]) + 1))
            raw["layers"] = [int(k) for k in layers]
        if isinstance(raw.get("targets"), str):
            raw["targets"] = [raw["targets"]]
        if isinstance(raw.get("families"), str):
            raw["families"] = [raw["families"]]
        for key in ("targets", "families"):
            if key not in raw:
                raise ConfigError(f"config is missing {key!r}")
        cfg = cls(**raw)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        # table paths and the output directory are relative to the config file
        if isinstance(raw.get("output_dir"), str) and not Path(raw["output_dir"]).is_absolute():
            raw["output_dir"] = str((path.parent / raw["output_dir"]).resolve())
        targets = raw.get("targets")
        if isinstance(targets, list):
            for t in targets:
                if isinstance(t, dict) and "file" in t and not Path(t["file"]).is_absolute():
                    t["file"] = str((path.parent / t["file"]).resolve())
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return asdict(self)

    def config_hash(self) -> str:
        # output_dir does not change results
        d = self.to_dict()
        d.pop("output_dir")
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def target_name(self, target) -> str:
        return target["name"] if isinstance(target, dict) else target

    def target_dim(self, target) -> int:
        if isinstance(target, dict):
            import csv

            with open(target["file"], newline="") as fh:
                header = next(csv.reader(fh))
            return 2 if "y" in header else 1
        name = target.split("+i*")[0]
        return 2 if name in FUNCS_2D else 1

    def validate(self) -> None:
        if not self.targets:
            raise ConfigError("no targets given")
        if not self.families:
            raise ConfigError("no model families given")
        if self.benchmark not in BENCHMARKS:
            raise ConfigError(f"benchmark must be one of {BENCHMARKS}, got {self.benchmark!r}")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigError(f"unknown family {fam!r}; choose from {FAMILIES}")
        if not self.layers:
            raise ConfigError("no layer counts given")
        for k in self.layers:
            if not 1 <= k <= self.max_layers:
                raise ConfigError(f"layer count {k} outside [1, {self.max_layers}]")
        if self.restarts < 1:
            raise ConfigError("restarts must be at least 1")
        if self.shots is not None and self.shots < 1:
            raise ConfigError("shots must be positive when given")
        if self.points_1d < 2 or self.points_2d < 2:
            raise ConfigError("grids need at least 2 points per dimension")
        method = self.optimizer.get("method", "lbfgs")
        if method not in OPTIMIZERS:
            raise ConfigError(f"optimizer method must be one of {OPTIMIZERS}, got {method!r}")
        extra = set(self.optimizer) - OPTIMIZER_KEYS[method]
        if extra:
            raise ConfigError(f"unknown {method} options {sorted(extra)}; allowed {sorted(OPTIMIZER_KEYS[method])}")
        if self.optimizer.get("gradient", "parameter_shift") not in GRADIENTS:
            raise ConfigError(f"gradient must be one of {GRADIENTS}")

        names = set()
        for t in self.targets:
            name = self.target_name(t)
            if name in names:
                raise ConfigError(f"duplicate target {name!r}")
            names.add(name)
            if isinstance(t, dict):
                if "file" not in t or "name" not in t:
                    raise ConfigError("table targets need 'name' and 'file'")
                if not Path(t["file"]).exists():
                    raise ConfigError(f"target table not found: {t['file']}")
                is_complex = _table_is_complex(t["file"])
            else:
                parts = name.split("+i*")
                if len(parts) == 2:
                    if not all(p in FUNCS_1D for p in parts):
                        raise ConfigError(f"complex target {name!r} must combine 1D functions")
                    is_complex = True
                elif name in FUNCS_1D or name in FUNCS_2D:
                    is_complex = False
                else:
                    raise ConfigError(f"unknown target {name!r}")
            if is_complex and self.benchmark == "Z":
                raise ConfigError(f"complex target {name!r} needs the XY benchmark")
            if self.target_dim(t) != 1:
                bad = [f for f in self.families if f in FOURIER_FAMILIES]
                if bad:
                    raise ConfigError(f"{bad} only support 1D targets, {name!r} is 2D")


def _table_is_complex(path) -> bool:
    import csv

    with open(path, newline="") as fh:
        return "imag" in next(csv.reader(fh))
