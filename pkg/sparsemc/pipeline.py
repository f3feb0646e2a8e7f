"""End-to-end build: greedy net, sparse balls, elements, chains."""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping
from contextlib import contextmanager
from dataclasses import dataclass
import logging
import time
from typing import TypeVar

import numpy as np

from .bifiltration import (
    BifiltrationMeta,
    ChainSimplex,
    PosetElement,
    SizeReport,
    all_friends,
    build_chains,
    build_elements,
    size_report,
)
from .bifiltration.elements import DEFAULT_MAX_FRIENDS
from .config import BuildConfig, InputKind, default_radius
from .geometry import PointSet, load_distance_matrix, load_points
from .greedy import PersistentNet, covering_sequences, gonzalez
from .sparseballs import RadiusVariant, SparseBallSystem


logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True, slots=True, eq=False)
class BuildResult:
    points: PointSet
    net: PersistentNet
    system: SparseBallSystem
    friend_sets: tuple[tuple[int, ...], ...]
    elements: tuple[PosetElement, ...]
    chains: tuple[ChainSimplex, ...]
    meta: BifiltrationMeta
    timings: Mapping[str, float]

    def report(self) -> SizeReport:
        return size_report(
            self.elements,
            self.chains,
            n=self.points.n,
            max_friends=max((len(found) for found in self.friend_sets), default=0),
            timings=self.timings,
        )


def first_point(n: int, seed: int, seed_given: bool) -> int:
    """Index 0 unless a seed was given, which then picks the start at random."""

    if not seed_given:
        return 0
    return int(np.random.default_rng(seed).integers(n))


class _Stopwatch:
    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        yield
        self.timings[name] = time.perf_counter() - started
        logger.info("%s took %.3f s", name, self.timings[name])

    def measure(self, name: str, action: Callable[[], T]) -> T:
        with self.stage(name):
            return action()


def build_bifiltration(
    ps: PointSet,
    eps: float,
    *,
    radius: RadiusVariant | None = None,
    seed: int = 0,
    first: int = 0,
    max_dim: int = 2,
    max_friends: int = DEFAULT_MAX_FRIENDS,
    threads: int = 1,
) -> BuildResult:
    variant = radius if radius is not None else default_radius(ps.metric)
    watch = _Stopwatch()
    greedy_net = watch.measure("greedy", lambda: gonzalez(ps, first))
    net = watch.measure("covering", lambda: covering_sequences(greedy_net, eps))
    system = SparseBallSystem.from_net(net, eps, variant)
    friend_sets = watch.measure("friends", lambda: all_friends(net, system, ps))
    elements = watch.measure(
        "elements",
        lambda: build_elements(
            net,
            system,
            ps,
            seed,
            max_friends=max_friends,
            threads=threads,
            friend_sets=friend_sets,
        ),
    )
    chains = watch.measure("chains", lambda: build_chains(elements, max_dim, threads=threads))
    meta = BifiltrationMeta(epsilon=system.eps, metric=ps.metric, radius=variant, n=ps.n, seed=seed)
    return BuildResult(
        points=ps,
        net=net,
        system=system,
        friend_sets=friend_sets,
        elements=tuple(elements),
        chains=tuple(chains),
        meta=meta,
        timings=watch.timings,
    )


def load_input(config: BuildConfig) -> PointSet:
    if config.kind is InputKind.MATRIX:
        return load_distance_matrix(config.input, header=config.header)
    return load_points(
        config.input,
        config.input_format,
        metric=config.point_metric,
        header=config.header,
        dedup=config.dedup,
    )


def run_build(config: BuildConfig, points: PointSet | None = None) -> BuildResult:
    ps = points if points is not None else load_input(config)
    return build_bifiltration(
        ps,
        config.epsilon,
        radius=config.radius_variant,
        seed=config.seed,
        first=first_point(ps.n, config.seed, config.seed_given),
        max_dim=config.max_dim,
        max_friends=config.max_friends,
        threads=config.thread_count,
    )


__all__ = ["BuildResult", "build_bifiltration", "first_point", "load_input", "run_build"]
