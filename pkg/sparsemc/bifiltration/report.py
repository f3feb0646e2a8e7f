"""Size statistics of a built bifiltration."""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
import math
from types import MappingProxyType
from typing import Any

from .chains import ChainSimplex
from .elements import PosetElement


@dataclass(frozen=True, slots=True)
class SizeReport:
    n: int
    element_count: int
    chains_per_dim: Mapping[int, int]
    max_grades: int
    mean_grades: float
    max_friends: int
    timings: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "chains_per_dim", MappingProxyType(dict(self.chains_per_dim)))
        object.__setattr__(self, "timings", MappingProxyType(dict(self.timings)))

    @property
    def chain_count(self) -> int:
        return sum(self.chains_per_dim.values())

    @property
    def chains_per_point(self) -> float:
        return self.chain_count / self.n if self.n else math.nan

    def as_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "elements": self.element_count,
            "chains": self.chain_count,
            "chains_per_dim": {str(dim): count for dim, count in sorted(self.chains_per_dim.items())},
            "max_grades": self.max_grades,
            "mean_grades": self.mean_grades,
            "max_friends": self.max_friends,
            "timings": dict(self.timings),
        }

    def format_table(self) -> str:
        rows = [
            ("points", str(self.n)),
            ("elements", str(self.element_count)),
            ("chains", str(self.chain_count)),
        ]
        rows.extend(
            (f"  dim {dim}", str(count)) for dim, count in sorted(self.chains_per_dim.items())
        )
        rows.extend(
            [
                ("chains per point", f"{self.chains_per_point:.3f}"),
                ("max grades per chain", str(self.max_grades)),
                ("mean grades per chain", f"{self.mean_grades:.3f}"),
                ("max friends", str(self.max_friends)),
            ]
        )
        rows.extend((f"time {stage} [s]", f"{seconds:.3f}") for stage, seconds in self.timings.items())
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


def size_report(
    elements: Sequence[PosetElement],
    chains: Sequence[ChainSimplex],
    *,
    n: int,
    max_friends: int = 0,
    timings: Mapping[str, float] | None = None,
) -> SizeReport:
    grade_counts = [len(chain.grades) for chain in chains]
    return SizeReport(
        n=n,
        element_count=len(elements),
        chains_per_dim=dict(sorted(Counter(chain.dim for chain in chains).items())),
        max_grades=max(grade_counts, default=0),
        mean_grades=sum(grade_counts) / len(grade_counts) if grade_counts else 0.0,
        max_friends=max_friends,
        timings=timings or {},
    )


def packing_bound(eps: float, dim: int) -> float:
    """Crude upper bound on the friends of a point in ``R^dim``.

    Friends of ``x`` are ``ins(x)``-separated and lie within
    ``2 (1 + 3 eps)(1 + eps) / eps * ins(x)`` of it, so a volume argument
    caps their number by ``(1 + 4 (1 + 3 eps)(1 + eps) / eps) ** dim``.
    """

    return (1.0 + 4.0 * (1.0 + 3.0 * eps) * (1.0 + eps) / eps) ** dim


__all__ = ["SizeReport", "packing_bound", "size_report"]
