"""Configuration records shared by the library and the CLI

Defaults live here rather than in the numerical modules, so that a run can be
reproduced from the RunConfig embedded in its artifacts.

"""

from dataclasses import asdict, dataclass, field
from enum import Enum, auto
import os
from typing import Any, Optional

from voronoicells.errors import ConfigError

PRECISION_ENV = "VORONOICELLS_PRECISION"

DEFAULT_PRECISION_BITS = 256
DEFAULT_EXTRACTION_BITS = 512


class NamedEnum(Enum):
    """An enum supporting string conversion of its values"""

    def __str__(self) -> str:
        return str(self.name).lower()

    @classmethod
    def parse(cls, name: str) -> "NamedEnum":
        try:
            return cls[name.upper()]
        except KeyError:
            choices = ", ".join(str(m) for m in cls)
            raise ConfigError(f"unknown {cls.__name__} {name!r}; expected {choices}")


class ILTMethod(NamedEnum):
    """A numerical inverse Laplace transform method."""

    DEFORMED_CONTOUR = auto()
    ACCELERATED_FOURIER = auto()

    def mpmath_name(self) -> str:
        if self is ILTMethod.DEFORMED_CONTOUR:
            return "talbot"
        else:
            return "dehoog"

    def other(self) -> "ILTMethod":
        if self is ILTMethod.DEFORMED_CONTOUR:
            return ILTMethod.ACCELERATED_FOURIER
        else:
            return ILTMethod.DEFORMED_CONTOUR


class OutputFormat(NamedEnum):
    CSV = auto()
    JSON = auto()


def default_precision() -> int:
    """Default working precision in bits

    Reads the VORONOICELLS_PRECISION environment variable, falling back to 256
    bits.  Raises a ConfigError if the variable is set to anything but a
    positive integer.

    """

    raw = os.getenv(PRECISION_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_PRECISION_BITS

    try:
        bits = int(raw)
    except ValueError:
        raise ConfigError(f"{PRECISION_ENV}={raw!r} is not an integer")
    if bits < 53:
        raise ConfigError(f"{PRECISION_ENV}={bits} is below 53 bits")
    return bits


@dataclass(frozen=True)
class ExtrapolationConfig:
    """Richardson extrapolation settings for coefficient ratio sequences"""

    order: int = 3
    min_points: int = 10

    def __post_init__(self):
        if self.order < 1:
            raise ConfigError("extrapolation order must be positive")
        if self.min_points < self.order + 2:
            raise ConfigError(
                "need at least order + 2 points to estimate an extrapolation error"
            )


# The distance profile ratios have corrections in (s^4 / N)^k, so low orders
# stall well above the 2% level for s >= 2 at N <= 200.
PROFILE_EXTRAPOLATION = ExtrapolationConfig(order=16, min_points=24)


@dataclass(frozen=True)
class ILTConfig:
    """Settings for numerical inverse Laplace transforms

    Both methods are always run; `method` selects the one whose value is
    returned, the other only serves as the error estimate.

    """

    method: ILTMethod = ILTMethod.DEFORMED_CONTOUR
    node_count: int = 48
    precision_bits: int = 192
    target_tol: float = 1e-6

    def __post_init__(self):
        if self.node_count < 8:
            raise ConfigError("ILT node count must be at least 8")
        if self.precision_bits < 53:
            raise ConfigError("ILT precision must be at least 53 bits")
        if not self.target_tol > 0:
            raise ConfigError("ILT tolerance must be positive")

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["method"] = str(self.method)
        return d


@dataclass(frozen=True)
class ContourSpec:
    """The integration contour for the local limit integrals

    Two half-lines from the origin at angles of plus or minus 45 degrees
    (33.75 degrees when mu < 0), truncated at `ray_length`, plus a
    back-and-forth excursion along the real axis from 0 to (36 mu)^(1/4)
    when mu > 0.

    """

    mu: Any = 0
    ray_length: int = 12
    quadrature: str = "gauss-legendre"
    node_count: int = 8
    precision_bits: int = DEFAULT_EXTRACTION_BITS

    def __post_init__(self):
        if self.ray_length <= 0:
            raise ConfigError("ray length must be positive")
        if self.quadrature not in ("gauss-legendre", "tanh-sinh"):
            raise ConfigError(f"unknown quadrature {self.quadrature!r}")
        if self.node_count < 2:
            raise ConfigError("need at least two quadrature panels per segment")


@dataclass
class RunConfig:
    """Everything needed to reproduce a CLI run"""

    command: str
    arguments: dict[str, Any] = field(default_factory=dict)
    precision_bits: int = DEFAULT_PRECISION_BITS
    orders: dict[str, int] = field(default_factory=dict)
    ilt: Optional[ILTConfig] = None
    output: Optional[str] = None
    output_format: OutputFormat = OutputFormat.CSV
    jobs: int = 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "arguments": {k: _jsonable(v) for k, v in self.arguments.items()},
            "precision_bits": self.precision_bits,
            "orders": dict(self.orders),
            "ilt": self.ilt.to_dict() if self.ilt else None,
            "output": self.output,
            "output_format": str(self.output_format),
            "jobs": self.jobs,
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)
