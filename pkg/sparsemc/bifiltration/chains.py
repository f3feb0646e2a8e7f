"""Strictly nested chains of elements and their multicritical grades."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import logging

from ..staircase import Breakpoint, grades, grades_contain, pointwise_min
from .elements import PosetElement


logger = logging.getLogger(__name__)

UNBOUNDED = -1


@dataclass(frozen=True, slots=True)
class ChainSimplex:
    """A chain ``sigma_0 < ... < sigma_m`` of element ids with its grades."""

    elements: tuple[int, ...]
    grades: tuple[Breakpoint, ...]

    @property
    def dim(self) -> int:
        return len(self.elements) - 1

    def contains(self, r: float, k: int) -> bool:
        return grades_contain(self.grades, r, k)


def chain_grades(members: Sequence[PosetElement]) -> tuple[Breakpoint, ...]:
    """Minimal grades of the pointwise minimum of the members' staircases.

    The largest member meets last, so the chain starts at its ``r_star``;
    the maximum guards against rounding between nested members.
    """

    start = max(member.r_star for member in members)
    return grades(pointwise_min([member.staircase for member in members], start))


def superset_index(elements: Sequence[PosetElement]) -> tuple[tuple[int, ...], ...]:
    """For each element id, the ids of the elements strictly containing it."""

    containing: dict[int, set[int]] = {}
    for element in elements:
        for vertex in element.vertices:
            containing.setdefault(vertex, set()).add(element.id)
    supersets: list[tuple[int, ...]] = []
    for element in elements:
        common = set.intersection(*(containing[vertex] for vertex in element.vertices))
        supersets.append(
            tuple(sorted(other for other in common if elements[other].size > element.size))
        )
    return tuple(supersets)


def build_chains(
    elements: Sequence[PosetElement],
    max_dim: int = 2,
    *,
    threads: int = 1,
) -> list[ChainSimplex]:
    """All chains with at most ``max_dim + 1`` members, in canonical order.

    ``max_dim`` of ``-1`` enumerates chains of every length.  Chains sort by
    dimension, then by the vertex tuples of their members.
    """

    if max_dim < UNBOUNDED:
        raise ValueError(f"max_dim must be -1 or non-negative, got {max_dim}")
    for position, element in enumerate(elements):
        if element.id != position:
            raise ValueError("element ids must match their positions")
    if max_dim == UNBOUNDED:
        logger.warning("enumerating chains of every length; the output may be large")
    limit = None if max_dim == UNBOUNDED else max_dim + 1
    supersets = superset_index(elements)

    def walk(start: int) -> list[ChainSimplex]:
        found: list[ChainSimplex] = []

        def extend(chain: tuple[int, ...]) -> None:
            members = [elements[i] for i in chain]
            found.append(ChainSimplex(elements=chain, grades=chain_grades(members)))
            if limit is not None and len(chain) >= limit:
                return
            for following in supersets[chain[-1]]:
                extend((*chain, following))

        extend((start,))
        return found

    starts = range(len(elements))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="sparsemc-chains") as pool:
            per_start = list(pool.map(walk, starts))
    else:
        per_start = [walk(start) for start in starts]

    chains = [chain for found in per_start for chain in found]
    chains.sort(key=lambda chain: (chain.dim, tuple(elements[i].vertices for i in chain.elements)))
    logger.info("built %d chains up to dimension %s", len(chains), "any" if limit is None else max_dim)
    return chains


__all__ = ["ChainSimplex", "UNBOUNDED", "build_chains", "chain_grades", "superset_index"]
