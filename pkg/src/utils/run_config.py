# src/utils/run_config.py
"""
Run configuration: one JSON document per command run, with CLI overrides
for the scalar fields. Validation failures raise ConfigError.
"""
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.lab.errors import ConfigError

TOOL_NAME = "dlplab"
TOOL_VERSION = "0.1.0"

COMMANDS = (
    "spectrum",
    "dirichlet",
    "match-verify",
    "match-melnikov",
    "match-powers",
    "branch-points",
    "reflect",
    "trap-check",
    "reciprocity",
    "sphere-check",
    "gauss-check",
    "nonexistence",
)

# commands that draw random numbers and therefore need a seed
SEEDED_COMMANDS = ("trap-check", "reciprocity", "sphere-check", "nonexistence")

MIN_N = 16


def _power_of_two(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= MIN_N and value & (value - 1) == 0


@dataclass
class RunConfig:
    command: str
    N: int = 256
    curve: Optional[Dict[str, Any]] = None
    levels: List[int] = field(default_factory=list)
    tolerances: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None
    trials: Optional[int] = None
    samples: Optional[int] = None
    params: Dict[str, Any] = field(default_factory=dict)
    out: str = "output"

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def to_dict(self) -> Dict[str, Any]:
        """Everything that determines the computation; the output directory is left out."""
        data = {
            "command": self.command,
            "N": self.N,
            "curve": self.curve,
            "levels": self.levels,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "trials": self.trials,
            "samples": self.samples,
            "params": self.params,
        }
        return {k: v for k, v in data.items() if v is not None}

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_config_file(path: Path) -> Dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", field="config")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", field="config")
    if not isinstance(data, dict):
        raise ConfigError("config document must be a JSON object", field="config")
    return data


def parse_run_config(data: Dict[str, Any], command: Optional[str] = None,
                     overrides: Optional[Dict[str, Any]] = None, default_N: int = 256,
                     default_out: str = "output") -> RunConfig:
    """Merge the document, the command argument and CLI overrides, then validate."""
    data = dict(data)
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}

    doc_command = data.get("command")
    if command and doc_command and command != doc_command:
        raise ConfigError(f"command {command!r} does not match config command {doc_command!r}", field="command")
    command = command or doc_command
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}", field="command")

    known = {"command", "N", "curve", "levels", "tolerances", "seed", "trials", "samples", "params", "out"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"unknown config fields: {', '.join(unknown)}", field=unknown[0])

    levels = list(data.get("levels", []))
    N = data.get("N", default_N)
    if "N" in overrides:
        N = overrides["N"]
        if levels:
            levels[0] = N
            levels = sorted(set(levels))
    config = RunConfig(
        command=command,
        N=N,
        curve=data.get("curve"),
        levels=levels,
        tolerances=dict(data.get("tolerances", {})),
        seed=overrides.get("seed", data.get("seed")),
        trials=data.get("trials"),
        samples=data.get("samples"),
        params=dict(data.get("params", {})),
        out=str(overrides.get("out", data.get("out", default_out))),
    )
    validate(config)
    return config


def validate(config: RunConfig) -> None:
    if not _power_of_two(config.N):
        raise ConfigError(f"N must be a power of two >= {MIN_N}, got {config.N!r}", field="N")
    for level in config.levels:
        if not _power_of_two(level):
            raise ConfigError(f"refinement levels must be powers of two >= {MIN_N}, got {level!r}", field="levels")
    if config.levels and sorted(set(config.levels)) != sorted(config.levels):
        raise ConfigError("refinement levels must be distinct", field="levels")
    for name, value in config.tolerances.items():
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
            raise ConfigError(f"tolerance {name!r} must be a positive number", field=f"tolerances.{name}")
    if config.command in SEEDED_COMMANDS:
        if config.seed is None:
            raise ConfigError(f"command {config.command!r} uses randomness and needs a seed", field="seed")
    if config.seed is not None:
        if not isinstance(config.seed, int) or isinstance(config.seed, bool) or not 0 <= config.seed < 2 ** 64:
            raise ConfigError("seed must be an unsigned 64-bit integer", field="seed")
    for name in ("trials", "samples"):
        value = getattr(config, name)
        if value is not None and (not isinstance(value, int) or isinstance(value, bool) or value < 1):
            raise ConfigError(f"{name} must be a positive integer", field=name)
    if config.curve is not None and not isinstance(config.curve, dict):
        raise ConfigError("curve must be an object with a 'kind' field", field="curve")
