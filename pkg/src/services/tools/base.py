from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

from src.lab import io as lab_io
from src.lab.curve import CurveSpec, curve_from_dict
from src.lab.errors import ConfigError
from src.lab.rational import RationalFn
from src.utils.run_config import RunConfig


def curve_spec(config: RunConfig) -> CurveSpec:
    if not config.curve:
        raise ConfigError(f"command {config.command!r} needs a curve", field="curve")
    try:
        return curve_from_dict(config.curve)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid curve: {exc}", field="curve")


def rational_param(config: RunConfig, name: str) -> RationalFn:
    data = config.params.get(name)
    if data is None:
        raise ConfigError(f"command {config.command!r} needs params.{name}", field=f"params.{name}")
    try:
        if isinstance(data, dict):
            return RationalFn.from_dict(data)
        return RationalFn.polynomial([lab_io.complex_from_json(c) for c in data])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid rational function in params.{name}: {exc}", field=f"params.{name}")


def levels_or(config: RunConfig, default: Sequence[int]) -> List[int]:
    return list(config.levels) if config.levels else list(default)


@dataclass
class Check:
    """A named pass/fail comparison of a measured value against a threshold."""
    name: str
    passed: bool
    value: Any = None
    threshold: Any = None
    detail: str = ""

    @classmethod
    def below(cls, name: str, value: float, threshold: float, detail: str = "") -> "Check":
        return cls(name, bool(value < threshold), float(value), float(threshold), detail)

    @classmethod
    def above(cls, name: str, value: float, threshold: float, detail: str = "") -> "Check":
        return cls(name, bool(value > threshold), float(value), float(threshold), detail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class Table:
    """CSV artifact: header plus rows, written by the reporter."""
    header: Sequence[str]
    rows: List[Tuple[Any, ...]]


@dataclass
class ToolResult:
    payload: Dict[str, Any] = field(default_factory=dict)
    checks: List[Check] = field(default_factory=list)
    tables: Dict[str, Table] = field(default_factory=dict)


class BaseTool(ABC):
    """
    Base class for all command tools.
    Tools are stateless: one RunConfig in, one ToolResult out.
    """

    name: str = "base-tool"
    commands: Tuple[str, ...] = ()

    @abstractmethod
    def execute(self, config: RunConfig) -> ToolResult:
        pass

    def __call__(self, config: RunConfig) -> ToolResult:
        return self.execute(config)
