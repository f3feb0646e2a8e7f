"""Validated build settings shared by the CLI, the pipeline and benchmarks."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
import math
import os
from pathlib import Path

from .bifiltration.chains import UNBOUNDED
from .bifiltration.elements import DEFAULT_MAX_FRIENDS
from .geometry import InputFormat, Metric
from .sparseballs import RadiusVariant


SEED_ENVIRONMENT_VARIABLE = "SPARSE_MC_SEED"
DEFAULT_EPSILON = 0.5
DEFAULT_MAX_DIM = 2


class ConfigurationError(ValueError):
    """Settings that cannot be combined or are out of range."""


class InputKind(Enum):
    POINTS = "points"
    MATRIX = "matrix"


def default_radius(metric: Metric) -> RadiusVariant:
    """Quadratic radius for l2 input, the linear upper envelope otherwise."""

    return RadiusVariant.QUADRATIC if metric is Metric.L2 else RadiusVariant.LINEAR_U


def resolve_seed(
    flag: int | None, environ: Mapping[str, str] | None = None
) -> tuple[int, bool]:
    """Seed from the flag, else from ``SPARSE_MC_SEED``, else 0.

    The second value tells whether a seed was given explicitly.
    """

    if flag is not None:
        return int(flag), True
    environ = os.environ if environ is None else environ
    text = environ.get(SEED_ENVIRONMENT_VARIABLE)
    if text is None or not text.strip():
        return 0, False
    try:
        return int(text.strip()), True
    except ValueError as error:
        raise ConfigurationError(
            f"{SEED_ENVIRONMENT_VARIABLE} must be an integer, got {text!r}"
        ) from error


@dataclass(frozen=True, slots=True)
class BuildConfig:
    """One build request.

    ``metric`` follows the input kind and ``radius`` the metric when unset.
    ``max_dim`` of ``-1`` means unbounded and ``threads`` defaults to the
    CPU count.
    """

    input: Path
    output: str
    kind: InputKind = InputKind.POINTS
    metric: Metric | None = None
    epsilon: float = DEFAULT_EPSILON
    radius: RadiusVariant | None = None
    max_dim: int = DEFAULT_MAX_DIM
    seed: int = 0
    seed_given: bool = False
    max_friends: int = DEFAULT_MAX_FRIENDS
    threads: int | None = None
    input_format: InputFormat = InputFormat.CSV
    header: bool = False
    dedup: bool = False
    poset_only: bool = False
    h5: Path | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "input", Path(self.input))
        if self.kind is InputKind.MATRIX:
            if self.metric not in (None, Metric.MATRIX):
                raise ConfigurationError("distance-matrix input implies the matrix metric")
            object.__setattr__(self, "metric", Metric.MATRIX)
        elif self.metric is Metric.MATRIX:
            raise ConfigurationError("the matrix metric needs --kind matrix input")
        elif self.metric is None:
            object.__setattr__(self, "metric", Metric.L2)
        if self.radius is None:
            object.__setattr__(self, "radius", default_radius(self.point_metric))
        if self.metric is not Metric.L2 and self.radius is RadiusVariant.QUADRATIC:
            raise ConfigurationError(
                f"the quadratic radius requires the l2 metric, not {self.point_metric.value}"
            )
        if self.metric is Metric.L2 and self.radius is RadiusVariant.LINEAR_U:
            raise ConfigurationError(
                "the linearU radius has no exact intersection test under the l2 metric; "
                "use --radius quadratic or --metric linf"
            )
        eps = self.epsilon
        if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not math.isfinite(eps):
            raise ConfigurationError(f"epsilon must be a real number, got {eps!r}")
        if not 0.0 < eps <= 1.0:
            raise ConfigurationError(f"epsilon must lie in (0, 1], got {eps!r}")
        object.__setattr__(self, "epsilon", float(eps))
        if self.max_dim < UNBOUNDED:
            raise ConfigurationError(f"max_dim must be -1 or non-negative, got {self.max_dim}")
        if self.max_friends < 0:
            raise ConfigurationError(f"max_friends must be non-negative, got {self.max_friends}")
        threads = self.threads if self.threads is not None else (os.cpu_count() or 1)
        if threads < 1:
            raise ConfigurationError(f"threads must be positive, got {threads}")
        object.__setattr__(self, "threads", threads)

    @property
    def point_metric(self) -> Metric:
        assert self.metric is not None
        return self.metric

    @property
    def radius_variant(self) -> RadiusVariant:
        assert self.radius is not None
        return self.radius

    @property
    def thread_count(self) -> int:
        assert self.threads is not None
        return self.threads


__all__ = [
    "BuildConfig",
    "ConfigurationError",
    "DEFAULT_EPSILON",
    "DEFAULT_MAX_DIM",
    "InputKind",
    "SEED_ENVIRONMENT_VARIABLE",
    "default_radius",
    "resolve_seed",
]
