"""The ``sparse-bifiltration v1`` text format.

::

    # sparse-bifiltration v1
    # epsilon=<decimal> metric=<l2|linf|matrix> radius=<quadratic|linearU> n=<int> seed=<int>
    element <id> vertices=<i1,i2,...> rstar=<decimal> rend=<decimal|inf> stair=<r1:k1;...>
    simplex dim=<m> chain=<id0<id1<...> grades=<r1:k1;...>

Decimals carry 17 significant digits so every double reads back exactly.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
import math
from pathlib import Path
import sys
from typing import TextIO

from ..geometry import Metric
from ..sparseballs import RadiusVariant
from ..staircase import Breakpoint, WeightStaircase
from .chains import ChainSimplex
from .elements import PosetElement


MAGIC = "# sparse-bifiltration v1"


class BifiltrationFormatError(ValueError):
    """A file does not follow the ``sparse-bifiltration v1`` layout."""

    def __init__(self, line: int, message: str) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}")


@dataclass(frozen=True, slots=True)
class BifiltrationMeta:
    epsilon: float
    metric: Metric
    radius: RadiusVariant
    n: int
    seed: int


@dataclass(frozen=True, slots=True)
class BifiltrationFile:
    meta: BifiltrationMeta
    elements: tuple[PosetElement, ...]
    chains: tuple[ChainSimplex, ...]


def format_decimal(value: float) -> str:
    if math.isinf(value) and value > 0:
        return "inf"
    return format(value, ".17g")


def _format_steps(steps: Iterable[Breakpoint]) -> str:
    return ";".join(f"{format_decimal(r)}:{k}" for r, k in steps)


def format_header(meta: BifiltrationMeta) -> str:
    return (
        f"{MAGIC}\n"
        f"# epsilon={format_decimal(meta.epsilon)} metric={meta.metric.value} "
        f"radius={meta.radius.value} n={meta.n} seed={meta.seed}\n"
    )


def format_element(element: PosetElement) -> str:
    return (
        f"element {element.id} vertices={','.join(str(v) for v in element.vertices)} "
        f"rstar={format_decimal(element.r_star)} rend={format_decimal(element.r_end)} "
        f"stair={_format_steps(element.staircase.breakpoints)}\n"
    )


def format_chain(chain: ChainSimplex) -> str:
    return (
        f"simplex dim={chain.dim} chain={'<'.join(str(i) for i in chain.elements)} "
        f"grades={_format_steps(chain.grades)}\n"
    )


def dump_bifiltration(
    stream: TextIO,
    chains: Sequence[ChainSimplex],
    elements: Sequence[PosetElement],
    meta: BifiltrationMeta,
    *,
    poset_only: bool = False,
) -> None:
    stream.write(format_header(meta))
    for element in elements:
        stream.write(format_element(element))
    if poset_only:
        return
    for chain in chains:
        stream.write(format_chain(chain))


def write_bifiltration(
    chains: Sequence[ChainSimplex],
    elements: Sequence[PosetElement],
    meta: BifiltrationMeta,
    path: str | Path,
    *,
    poset_only: bool = False,
) -> None:
    """Write the bifiltration to ``path``; ``-`` writes to standard output."""

    if str(path) == "-":
        dump_bifiltration(sys.stdout, chains, elements, meta, poset_only=poset_only)
        sys.stdout.flush()
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    with target.open("w", encoding="utf-8", newline="\n") as stream:
        dump_bifiltration(stream, chains, elements, meta, poset_only=poset_only)


def read_bifiltration(path: str | Path) -> BifiltrationFile:
    """Parse a file written by :func:`write_bifiltration`."""

    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 2 or lines[0] != MAGIC:
        raise BifiltrationFormatError(1, f"expected {MAGIC!r}")
    meta = _parse_meta(lines[1])
    elements: list[PosetElement] = []
    chains: list[ChainSimplex] = []
    for number, line in enumerate(lines[2:], start=3):
        kind, _, rest = line.partition(" ")
        try:
            if kind == "element":
                elements.append(_parse_element(rest))
            elif kind == "simplex":
                chains.append(_parse_chain(rest))
            else:
                raise ValueError(f"unknown record {kind!r}")
        except (KeyError, ValueError) as error:
            raise BifiltrationFormatError(number, str(error)) from error
    return BifiltrationFile(meta=meta, elements=tuple(elements), chains=tuple(chains))


def _fields(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for token in text.split():
        key, separator, value = token.partition("=")
        if not separator:
            raise ValueError(f"expected key=value, got {token!r}")
        pairs[key] = value
    return pairs


def _parse_meta(line: str) -> BifiltrationMeta:
    if not line.startswith("# "):
        raise BifiltrationFormatError(2, "expected the metadata line")
    try:
        pairs = _fields(line[2:])
        return BifiltrationMeta(
            epsilon=float(pairs["epsilon"]),
            metric=Metric(pairs["metric"]),
            radius=RadiusVariant(pairs["radius"]),
            n=int(pairs["n"]),
            seed=int(pairs["seed"]),
        )
    except (KeyError, ValueError) as error:
        raise BifiltrationFormatError(2, str(error)) from error


def _parse_steps(text: str) -> tuple[Breakpoint, ...]:
    steps: list[Breakpoint] = []
    for item in text.split(";"):
        r, _, k = item.partition(":")
        steps.append((float(r), int(k)))
    return tuple(steps)


def _parse_element(rest: str) -> PosetElement:
    identifier, _, tail = rest.partition(" ")
    pairs = _fields(tail)
    return PosetElement(
        id=int(identifier),
        vertices=tuple(int(v) for v in pairs["vertices"].split(",")),
        r_star=float(pairs["rstar"]),
        r_end=float(pairs["rend"]),
        staircase=WeightStaircase.from_breakpoints(_parse_steps(pairs["stair"])),
    )


def _parse_chain(rest: str) -> ChainSimplex:
    pairs = _fields(rest)
    elements = tuple(int(i) for i in pairs["chain"].split("<"))
    if int(pairs["dim"]) != len(elements) - 1:
        raise ValueError(f"dim={pairs['dim']} does not match a chain of {len(elements)}")
    return ChainSimplex(elements=elements, grades=_parse_steps(pairs["grades"]))


__all__ = [
    "BifiltrationFile",
    "BifiltrationFormatError",
    "BifiltrationMeta",
    "MAGIC",
    "dump_bifiltration",
    "format_decimal",
    "read_bifiltration",
    "write_bifiltration",
]
