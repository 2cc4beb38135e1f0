"""Run configuration: a JSON document with model, scan, output and verify blocks."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .rho_alpha import DEFAULT_TIMES, SCAN_PARAMS, ModelError, RhoAlphaNigModel


class ConfigError(ValueError):
    pass


@dataclass
class ModelBlock:
    gamma: list[float]
    delta: list[float]
    beta: list[float]
    rho: list[list[float]]
    a: float
    # accepted, never used by the dependence computations
    drift: Optional[list[float]] = None

    def build(self) -> RhoAlphaNigModel:
        return RhoAlphaNigModel(self.gamma, self.delta, self.beta, self.rho, self.a)


@dataclass
class ScanBlock:
    param: str = "rho"
    start: float = -1.0
    stop: float = 1.0
    steps: int = 41

    def grid(self) -> list[float]:
        if self.steps < 1:
            raise ConfigError(f"scan steps must be >= 1, got {self.steps}")
        if self.steps == 1:
            return [float(self.start)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]


@dataclass
class OutputBlock:
    path: str = "scan.csv"
    format: str = "csv"


@dataclass
class VerifyBlock:
    seed: int = 20190601
    num_paths: int = 1_000_000


@dataclass
class RunConfig:
    model: ModelBlock
    scan: ScanBlock = field(default_factory=ScanBlock)
    orders: int = 4
    times: list[float] = field(default_factory=lambda: list(DEFAULT_TIMES))
    output: OutputBlock = field(default_factory=OutputBlock)
    verify: VerifyBlock = field(default_factory=VerifyBlock)

    def validate(self) -> RhoAlphaNigModel:
        try:
            model = self.model.build()
        except ModelError as exc:
            raise ConfigError(str(exc)) from None
        if self.scan.param not in SCAN_PARAMS:
            raise ConfigError(f"scan.param must be one of {SCAN_PARAMS}, got {self.scan.param!r}")
        if self.output.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.output.format!r}")
        if self.orders < 1:
            raise ConfigError(f"orders must be >= 1, got {self.orders}")
        if not self.times or any(not t > 0 for t in self.times):
            raise ConfigError("times must be a non-empty list of positive reals")
        return model

    def to_dict(self) -> dict:
        d = asdict(self)
        s = d.pop("scan")
        d["scan"] = {"param": s["param"], "from": s["start"], "to": s["stop"], "steps": s["steps"]}
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        try:
            m = raw["model"]
            model = ModelBlock(
                gamma=[float(v) for v in m["gamma"]],
                delta=[float(v) for v in m["delta"]],
                beta=[float(v) for v in m["beta"]],
                rho=[[float(v) for v in row] for row in m["rho"]],
                a=float(m["a"]),
                drift=None if m.get("drift") is None else [float(v) for v in m["drift"]],
            )
            s = raw.get("scan", {})
            scan = ScanBlock(
                param=str(s.get("param", "rho")),
                start=float(s.get("from", -1.0)),
                stop=float(s.get("to", 1.0)),
                steps=int(s.get("steps", 41)),
            )
            o = raw.get("output", {})
            v = raw.get("verify", {})
            return cls(
                model=model,
                scan=scan,
                orders=int(raw.get("orders", 4)),
                times=[float(t) for t in raw.get("times", DEFAULT_TIMES)],
                output=OutputBlock(str(o.get("path", "scan.csv")), str(o.get("format", "csv"))),
                verify=VerifyBlock(int(v.get("seed", 20190601)), int(v.get("num_paths", 1_000_000))),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config: {exc!r}") from None

    @classmethod
    def loads(cls, text: str) -> "RunConfig":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(raw)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        return cls.loads(text)


def default_config() -> RunConfig:
    """The calibrated bivariate parameter set shipped with the package."""
    text = resources.files("levycumulants").joinpath("data/footnote.json").read_text()
    return RunConfig.loads(text)
