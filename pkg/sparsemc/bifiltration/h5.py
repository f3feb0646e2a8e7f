"""HDF5 archive of one build: the greedy net, elements and chains."""

from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Any

import h5py  # type: ignore[import-untyped]
import numpy as np

from ..greedy import PersistentNet
from ..sparseballs import SparseBallSystem
from .chains import ChainSimplex
from .elements import PosetElement
from .io import BifiltrationMeta


class H5Writer:
    """Write the sparse-bifiltration schema to one new H5 file.

    Ragged per-item lists (vertices, staircases, chain members, grades) are
    stored as flat value arrays plus an ``offsets`` array of length
    ``count + 1``.
    """

    def __init__(self, path: str | Path) -> None:
        self.path = Path(path)
        self._file: h5py.File | None = None

    def open(self, meta: BifiltrationMeta) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = h5py.File(self.path, "x")
        self._file.attrs["schema_version"] = "1"
        self._file.attrs["format"] = "sparse-bifiltration"
        self._file.attrs["epsilon"] = meta.epsilon
        self._file.attrs["metric"] = meta.metric.value
        self._file.attrs["radius"] = meta.radius.value
        self._file.attrs["n"] = meta.n
        self._file.attrs["seed"] = meta.seed

    def write(
        self,
        net: PersistentNet,
        system: SparseBallSystem,
        elements: Sequence[PosetElement],
        chains: Sequence[ChainSimplex],
    ) -> None:
        h5_file = self._require_file()
        self._write_net(h5_file.require_group("net"), net, system)
        self._write_elements(h5_file.require_group("elements"), elements)
        self._write_chains(h5_file.require_group("chains"), chains)
        h5_file.flush()

    def close(self) -> None:
        if self._file is not None:
            self._file.close()
            self._file = None

    def __enter__(self) -> H5Writer:
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    def _require_file(self) -> h5py.File:
        if self._file is None:
            raise RuntimeError("H5Writer.open() must be called before write()")
        return self._file

    @staticmethod
    def _write_net(group: h5py.Group, net: PersistentNet, system: SparseBallSystem) -> None:
        _write_value(group, "order", np.asarray(net.order, dtype=np.int64))
        _write_value(group, "ins", np.asarray(net.ins, dtype=np.float64))
        _write_value(group, "slow", np.asarray(system.slow, dtype=np.float64))
        _write_value(group, "dis", np.asarray(system.dis, dtype=np.float64))
        if net.covering_seq is not None:
            _write_ragged(group, "covering_seq", [list(seq) for seq in net.covering_seq], np.int64)

    @staticmethod
    def _write_elements(group: h5py.Group, elements: Sequence[PosetElement]) -> None:
        _write_value(group, "r_star", np.asarray([e.r_star for e in elements], dtype=np.float64))
        _write_value(group, "r_end", np.asarray([e.r_end for e in elements], dtype=np.float64))
        _write_ragged(group, "vertices", [list(e.vertices) for e in elements], np.int64)
        _write_ragged(group, "stair_r", [list(e.staircase.scales) for e in elements], np.float64)
        _write_ragged(group, "stair_k", [list(e.staircase.values) for e in elements], np.int64)

    @staticmethod
    def _write_chains(group: h5py.Group, chains: Sequence[ChainSimplex]) -> None:
        _write_value(group, "dim", np.asarray([c.dim for c in chains], dtype=np.int64))
        _write_ragged(group, "members", [list(c.elements) for c in chains], np.int64)
        _write_ragged(group, "grade_r", [[r for r, _ in c.grades] for c in chains], np.float64)
        _write_ragged(group, "grade_k", [[k for _, k in c.grades] for c in chains], np.int64)


def _write_ragged(
    group: h5py.Group, name: str, rows: Sequence[Sequence[Any]], dtype: type
) -> None:
    offsets = np.zeros(len(rows) + 1, dtype=np.int64)
    offsets[1:] = np.cumsum([len(row) for row in rows])
    flat = np.asarray([value for row in rows for value in row], dtype=dtype)
    ragged = group.require_group(name)
    _write_value(ragged, "values", flat)
    _write_value(ragged, "offsets", offsets)


def _write_value(group: h5py.Group, name: str, value: np.ndarray) -> None:
    if not isinstance(value, np.ndarray):
        raise TypeError(f"cannot persist {name!r} with type {type(value).__name__}")
    if name in group:
        del group[name]
    group.create_dataset(name, data=value)


def read_ragged(group: h5py.Group, name: str) -> list[np.ndarray]:
    """Split a ragged dataset written by :class:`H5Writer` back into rows."""

    values = group[name]["values"][()]
    offsets = group[name]["offsets"][()]
    return [values[offsets[i] : offsets[i + 1]] for i in range(len(offsets) - 1)]


__all__ = ["H5Writer", "read_ragged"]
