"""Point clouds under a norm, explicit finite metrics, and their file formats."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
import logging
import math
from pathlib import Path
import re

import numpy as np
from scipy.spatial.distance import cdist


logger = logging.getLogger(__name__)

TRIANGLE_TOLERANCE = 1e-9
SYMMETRY_TOLERANCE = 1e-9

_DELIMITERS = re.compile(r"[,\s]+")


class Metric(Enum):
    """Distance used between input points."""

    L2 = "l2"
    LINF = "linf"
    MATRIX = "matrix"


class InputFormat(Enum):
    """Text layouts accepted for coordinate files."""

    CSV = "csv"
    WHITESPACE = "whitespace"


class InputError(ValueError):
    """Invalid point or distance input."""


class EmptyInputError(InputError):
    """The input contains no data rows."""


class RaggedRowsError(InputError):
    """Rows of a coordinate or matrix file have different lengths."""

    def __init__(self, row: int, expected: int, found: int) -> None:
        self.row = row
        self.expected = expected
        self.found = found
        super().__init__(
            f"row {row} has {found} columns, expected {expected}"
        )


class NonNumericError(InputError):
    """A field is not a finite decimal number."""

    def __init__(self, row: int, column: int, text: str) -> None:
        self.row = row
        self.column = column
        self.text = text
        super().__init__(
            f"row {row}, column {column}: {text!r} is not a finite number"
        )


class DuplicatePointError(InputError):
    """Two input points coincide."""

    def __init__(self, first: int, second: int) -> None:
        self.first = first
        self.second = second
        super().__init__(f"points {first} and {second} coincide")


class AsymmetryError(InputError):
    """A distance matrix is not symmetric."""

    def __init__(self, i: int, j: int, forward: float, backward: float) -> None:
        self.i = i
        self.j = j
        super().__init__(
            f"dist[{i}][{j}] = {forward!r} differs from dist[{j}][{i}] = {backward!r}"
        )


class NegativeDistanceError(InputError):
    """A distance matrix has a negative entry."""

    def __init__(self, i: int, j: int, value: float) -> None:
        self.i = i
        self.j = j
        super().__init__(f"dist[{i}][{j}] = {value!r} is negative")


class TriangleError(InputError):
    """A distance matrix violates the triangle inequality."""

    def __init__(self, i: int, j: int, k: int) -> None:
        self.i = i
        self.j = j
        self.k = k
        super().__init__(
            f"dist[{i}][{j}] exceeds dist[{i}][{k}] + dist[{k}][{j}]"
        )


@dataclass(frozen=True, slots=True, eq=False)
class PointSet:
    """Immutable input geometry with its full distance table.

    Euclidean input keeps its coordinates (``coords`` is ``n x d``) and a
    norm; metric input keeps only the validated distance matrix.  Both modes
    materialize the ``n x n`` table once.
    """

    metric: Metric
    coords: np.ndarray | None
    distances: np.ndarray = field(repr=False)

    @classmethod
    def from_coordinates(
        cls,
        coords: Sequence[Sequence[float]] | np.ndarray,
        metric: Metric = Metric.L2,
    ) -> PointSet:
        if metric is Metric.MATRIX:
            raise ValueError("coordinates require the l2 or linf metric")
        array = np.array(coords, dtype=np.float64)
        if array.ndim == 1:
            array = array.reshape(-1, 1)
        if array.ndim != 2 or array.shape[0] == 0 or array.shape[1] == 0:
            raise EmptyInputError("a point set needs at least one point and one column")
        if not np.all(np.isfinite(array)):
            raise InputError("coordinates must be finite")
        duplicate = _first_duplicate(array)
        if duplicate is not None:
            raise DuplicatePointError(*duplicate)
        kind = "euclidean" if metric is Metric.L2 else "chebyshev"
        table = cdist(array, array, metric=kind)
        table = np.minimum(table, table.T)
        np.fill_diagonal(table, 0.0)
        array.setflags(write=False)
        table.setflags(write=False)
        return cls(metric=metric, coords=array, distances=table)

    @classmethod
    def from_distance_matrix(
        cls, matrix: Sequence[Sequence[float]] | np.ndarray
    ) -> PointSet:
        table = np.array(matrix, dtype=np.float64)
        _validate_metric(table)
        table = np.minimum(table, table.T)
        table.setflags(write=False)
        return cls(metric=Metric.MATRIX, coords=None, distances=table)

    @property
    def n(self) -> int:
        return int(self.distances.shape[0])

    @property
    def dim(self) -> int | None:
        return None if self.coords is None else int(self.coords.shape[1])

    @property
    def is_euclidean(self) -> bool:
        return self.coords is not None

    def dist(self, i: int, j: int) -> float:
        return float(self.distances[i, j])

    def row(self, i: int) -> np.ndarray:
        """Distances from point ``i`` to every point."""

        return self.distances[i]

    def distances_to(self, probes: np.ndarray) -> np.ndarray:
        """Distances from arbitrary probe coordinates to every point."""

        if self.coords is None:
            raise TypeError("metric input has no coordinates to probe")
        array = np.atleast_2d(np.asarray(probes, dtype=np.float64))
        if array.shape[1] != self.coords.shape[1]:
            raise ValueError(
                f"probe dimension {array.shape[1]} does not match point "
                f"dimension {self.coords.shape[1]}"
            )
        kind = "euclidean" if self.metric is Metric.L2 else "chebyshev"
        return cdist(array, self.coords, metric=kind)

    def prefix(self, count: int) -> PointSet:
        """The sub-point-set made of the first ``count`` points."""

        if not 1 <= count <= self.n:
            raise ValueError(f"prefix size must be in [1, {self.n}], got {count}")
        table = self.distances[:count, :count].copy()
        table.setflags(write=False)
        coords = None
        if self.coords is not None:
            coords = self.coords[:count].copy()
            coords.setflags(write=False)
        return PointSet(metric=self.metric, coords=coords, distances=table)


def dist(ps: PointSet, i: int, j: int) -> float:
    """Distance between points ``i`` and ``j`` under the point set's metric."""

    return ps.dist(i, j)


def load_points(
    path: str | Path,
    format: InputFormat = InputFormat.CSV,
    *,
    metric: Metric = Metric.L2,
    header: bool = False,
    dedup: bool = False,
) -> PointSet:
    """Read one point per row from a CSV or whitespace table."""

    rows = _read_table(Path(path), format, header=header)
    if dedup:
        rows = _drop_duplicates(rows)
    else:
        duplicate = _first_duplicate(np.array(rows, dtype=np.float64))
        if duplicate is not None:
            raise DuplicatePointError(*duplicate)
    logger.info("loaded %d points of dimension %d from %s", len(rows), len(rows[0]), path)
    return PointSet.from_coordinates(rows, metric)


def load_distance_matrix(path: str | Path, *, header: bool = False) -> PointSet:
    """Read a square distance matrix for the finite-metric (Rips) mode.

    Entries may be separated by commas or whitespace.
    """

    rows = _read_table(Path(path), InputFormat.CSV, header=header)
    if len(rows) != len(rows[0]):
        raise InputError(
            f"distance matrix must be square, got {len(rows)} rows of {len(rows[0])}"
        )
    logger.info("loaded a %d-point distance matrix from %s", len(rows), path)
    return PointSet.from_distance_matrix(rows)


def _read_table(path: Path, format: InputFormat, *, header: bool) -> list[list[float]]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if header and lines:
        lines = lines[1:]
    rows: list[list[float]] = []
    width: int | None = None
    for line in lines:
        stripped = line.strip()
        if not stripped:
            continue
        if format is InputFormat.CSV:
            fields = [token for token in _DELIMITERS.split(stripped) if token]
        else:
            fields = stripped.split()
        row = [_parse_number(token, len(rows), column) for column, token in enumerate(fields)]
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise RaggedRowsError(len(rows), width, len(row))
        rows.append(row)
    if not rows:
        raise EmptyInputError(f"{path} contains no data rows")
    return rows


def _parse_number(token: str, row: int, column: int) -> float:
    try:
        value = float(token)
    except ValueError as error:
        raise NonNumericError(row, column, token) from error
    if not math.isfinite(value):
        raise NonNumericError(row, column, token)
    return value


def _first_duplicate(array: np.ndarray) -> tuple[int, int] | None:
    seen: dict[tuple[float, ...], int] = {}
    for index, row in enumerate(array.tolist()):
        key = tuple(row)
        if key in seen:
            return seen[key], index
        seen[key] = index
    return None


def _drop_duplicates(rows: Iterable[list[float]]) -> list[list[float]]:
    seen: dict[tuple[float, ...], int] = {}
    kept: list[list[float]] = []
    for index, row in enumerate(rows):
        key = tuple(row)
        if key in seen:
            logger.warning("dropping point %d, a duplicate of point %d", index, seen[key])
            continue
        seen[key] = index
        kept.append(row)
    return kept


def _validate_metric(table: np.ndarray) -> None:
    if table.ndim != 2 or table.shape[0] == 0:
        raise EmptyInputError("a distance matrix needs at least one row")
    if table.shape[0] != table.shape[1]:
        raise InputError(
            f"distance matrix must be square, got shape {table.shape}"
        )
    if not np.all(np.isfinite(table)):
        raise InputError("distances must be finite")
    negative = np.argwhere(table < 0)
    if negative.size:
        i, j = (int(value) for value in negative[0])
        raise NegativeDistanceError(i, j, float(table[i, j]))
    asymmetric = np.argwhere(np.abs(table - table.T) > SYMMETRY_TOLERANCE)
    if asymmetric.size:
        i, j = (int(value) for value in asymmetric[0])
        raise AsymmetryError(i, j, float(table[i, j]), float(table[j, i]))
    diagonal = np.flatnonzero(np.diag(table) != 0)
    if diagonal.size:
        index = int(diagonal[0])
        raise InputError(f"dist[{index}][{index}] must be zero")
    zero = np.argwhere((table == 0) & ~np.eye(table.shape[0], dtype=bool))
    if zero.size:
        i, j = sorted(int(value) for value in zero[0])
        raise DuplicatePointError(i, j)
    for k in range(table.shape[0]):
        through = table[:, k : k + 1] + table[k : k + 1, :]
        slack = TRIANGLE_TOLERANCE * np.maximum(1.0, through)
        violated = np.argwhere(table > through + slack)
        if violated.size:
            i, j = (int(value) for value in violated[0])
            raise TriangleError(i, j, k)


__all__ = [
    "AsymmetryError",
    "DuplicatePointError",
    "EmptyInputError",
    "InputError",
    "InputFormat",
    "Metric",
    "NegativeDistanceError",
    "NonNumericError",
    "PointSet",
    "RaggedRowsError",
    "TriangleError",
    "dist",
    "load_distance_matrix",
    "load_points",
]
