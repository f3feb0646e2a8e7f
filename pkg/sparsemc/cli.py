"""Command-line front end: ``build``, ``verify``, ``stats`` and ``miniball``.

Exit codes: 0 success, 1 configuration error, 2 input error, 3 numerical
failure or friends cap, 4 verification violation.
"""

from __future__ import annotations

import argparse
from collections.abc import Sequence
import csv
from dataclasses import dataclass, replace
import json
import logging
import math
from pathlib import Path
import sys
from typing import TYPE_CHECKING, Any, NoReturn, TextIO

import numpy as np

from .bifiltration import FriendsCapExceeded, PosetElement, write_bifiltration
from .bifiltration.io import format_decimal
from .config import (
    DEFAULT_EPSILON,
    SEED_ENVIRONMENT_VARIABLE,
    BuildConfig,
    ConfigurationError,
    InputKind,
    resolve_seed,
)
from .geometry import InputError, InputFormat, Metric, PointSet
from .lp import Constraint, NumericalFailure, solve_M
from .oracle import (
    brute_chains,
    brute_elements,
    check_interleaving,
    compare_chains,
    compare_elements,
)
from .pipeline import BuildResult, load_input, run_build
from .sparseballs import RadiusVariant, check_covering_lemma
from .staircase import WeightStaircase

if TYPE_CHECKING:
    from .bifiltration.h5 import H5Writer


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_VIOLATION = 4

ORACLE_LIMIT = 12

logger = logging.getLogger("sparsemc")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def epsilon_value(value: str) -> float:
    try:
        eps = float(value)
    except ValueError as error:
        raise argparse.ArgumentTypeError(f"epsilon must be a number, got {value!r}") from error
    if not math.isfinite(eps) or not 0.0 < eps <= 1.0:
        raise argparse.ArgumentTypeError(f"epsilon must be in (0,1], got {value}")
    return eps


def scaling_sizes(value: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(item) for item in value.split(",") if item.strip())
    except ValueError as error:
        raise argparse.ArgumentTypeError("scaling sizes must be comma-separated integers") from error
    if not sizes or any(size < 1 for size in sizes):
        raise argparse.ArgumentTypeError("scaling sizes must be positive")
    return sizes


def configure_logging(verbosity: int, stream: TextIO | None = None) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.handlers[:] = [handler]
    logger.setLevel(level)


def _add_build_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-i", "--input", type=Path, required=True)
    parser.add_argument("--kind", choices=[kind.value for kind in InputKind], default="points")
    parser.add_argument(
        "--format", choices=[fmt.value for fmt in InputFormat], default="csv", dest="input_format"
    )
    parser.add_argument("--header", action="store_true", help="skip the first input line")
    parser.add_argument("--dedup", action="store_true", help="drop repeated points with a warning")
    parser.add_argument("--metric", choices=[metric.value for metric in Metric])
    parser.add_argument("-e", "--epsilon", type=epsilon_value, default=DEFAULT_EPSILON)
    parser.add_argument("--radius", choices=[variant.value for variant in RadiusVariant])
    parser.add_argument("--max-dim", type=int, default=2, help="-1 for unbounded")
    parser.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENVIRONMENT_VARIABLE} or 0")
    parser.add_argument("--max-friends", type=int, default=30)
    parser.add_argument("--threads", type=int, help="defaults to the CPU count")
    parser.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="sparsemc",
        description="Sparse (1+eps)-approximations of the multicover bifiltration.",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = commands.add_parser("build", help="write the sparse subdivision bifiltration")
    _add_build_arguments(build)
    build.add_argument("-o", "--output", required=True, help="output path, '-' for stdout")
    build.add_argument("--poset-only", action="store_true", help="write elements only")
    build.add_argument("--h5", type=Path, help="also write an HDF5 archive")

    verify = commands.add_parser("verify", help="check a build against brute-force oracles")
    _add_build_arguments(verify)
    verify.add_argument("--probes", type=int, default=200)
    verify.add_argument("--scales", type=int, default=20)
    verify.add_argument("--lemma-scales", type=int, default=100)
    verify.add_argument("--max-k", type=int, default=5)
    verify.add_argument("--report", type=Path, help="write a JSON summary")
    verify.add_argument("--corrupt-staircase", action="store_true", help=argparse.SUPPRESS)

    stats = commands.add_parser("stats", help="print size statistics as CSV")
    _add_build_arguments(stats)
    stats.add_argument("--scaling", type=scaling_sizes, help="comma-separated prefix sizes")
    stats.add_argument("--net-csv", type=Path, help="write rank,index,ins,slow,dis per point")

    miniball = commands.add_parser("miniball", help="solve one minimum-reach problem")
    miniball.add_argument("-i", "--input", type=Path, required=True)
    miniball.add_argument("--header", action="store_true")
    miniball.add_argument("--seed", type=int)
    miniball.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def config_from_args(args: argparse.Namespace, output: str = "-") -> BuildConfig:
    seed, seed_given = resolve_seed(args.seed)
    return BuildConfig(
        input=args.input,
        output=output,
        kind=InputKind(args.kind),
        metric=Metric(args.metric) if args.metric else None,
        epsilon=args.epsilon,
        radius=RadiusVariant(args.radius) if args.radius else None,
        max_dim=args.max_dim,
        seed=seed,
        seed_given=seed_given,
        max_friends=args.max_friends,
        threads=args.threads,
        input_format=InputFormat(args.input_format),
        header=args.header,
        dedup=args.dedup,
        poset_only=getattr(args, "poset_only", False),
        h5=getattr(args, "h5", None),
    )


class OutputError(Exception):
    """An output target cannot be written."""


def cmd_build(cfg: BuildConfig, stdout: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    archive = _archive_writer(cfg.h5) if cfg.h5 is not None else None
    result = run_build(cfg)
    write_bifiltration(
        result.chains, result.elements, result.meta, cfg.output, poset_only=cfg.poset_only
    )
    if archive is not None:
        with archive as writer:
            writer.open(result.meta)
            writer.write(result.net, result.system, result.elements, result.chains)
    table = result.report().format_table()
    print(table, file=sys.stderr if cfg.output == "-" else stdout)
    return EXIT_OK


def _archive_writer(path: Path) -> H5Writer:
    """Writer for a new archive at ``path``, checked before anything is built."""

    try:
        from .bifiltration.h5 import H5Writer
    except ImportError as error:
        raise ConfigurationError("--h5 needs the optional h5 extra (h5py)") from error
    if path.exists():
        raise OutputError(f"{path} already exists; archives are never overwritten")
    return H5Writer(path)


@dataclass(frozen=True, slots=True)
class VerifyOptions:
    probes: int = 200
    scales: int = 20
    lemma_scales: int = 100
    max_k: int = 5
    report: Path | None = None
    corrupt_staircase: bool = False


def _corrupted(elements: Sequence[PosetElement]) -> tuple[PosetElement, ...]:
    target = next((e for e in elements if e.size > 1), elements[0])
    steps = list(target.staircase.breakpoints)
    scale, value = steps[-1]
    steps[-1] = (scale, value + 1)
    broken = replace(target, staircase=WeightStaircase.from_breakpoints(steps))
    return tuple(broken if e.id == target.id else e for e in elements)


def cmd_verify(cfg: BuildConfig, options: VerifyOptions, stdout: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    result = run_build(cfg)
    ps, net, system = result.points, result.net, result.system
    if options.corrupt_staircase and ps.n > ORACLE_LIMIT:
        raise ConfigurationError(
            f"--corrupt-staircase needs the oracle comparison, which only runs for n <= {ORACLE_LIMIT}"
        )
    summary: dict[str, Any] = {
        "n": ps.n,
        "epsilon": system.eps,
        "metric": ps.metric.value,
        "radius": system.variant.value,
        "tolerances": {"r_star": 1e-6, "lp": 1e-9, "lemma": 1e-12},
    }
    failures = 0

    if ps.is_euclidean:
        interleaving = check_interleaving(
            system, net, ps, options.probes, options.scales, cfg.seed, max_k=options.max_k
        )
        summary["interleaving"] = interleaving.as_dict()
        failures += interleaving.violation_count
    else:
        logger.warning("interleaving check skipped: metric input has no probe coordinates")
        summary["interleaving"] = None

    rng = np.random.default_rng(cfg.seed)
    finite = system.finite_deletion_times
    top = 1.1 * float(finite.max()) if finite.size else 1.0
    lemma_scales = sorted({0.0, *finite.tolist(), *rng.uniform(0.0, top, options.lemma_scales).tolist()})
    lemma_failures = []
    for r in lemma_scales:
        lemma = check_covering_lemma(system, net, ps, r)
        for check in lemma.checks:
            if not check.passed:
                lemma_failures.append(
                    {"scale": r, "property": check.name, "witnesses": [list(w) for w in check.witnesses]}
                )
    summary["covering_lemma"] = {"scales": len(lemma_scales), "failures": lemma_failures}
    failures += len(lemma_failures)

    elements = result.elements
    if options.corrupt_staircase:
        elements = _corrupted(elements)
    antichain = [
        list(chain.elements)
        for chain in result.chains
        if any(
            not (r0 < r1 and k0 < k1)
            for (r0, k0), (r1, k1) in zip(chain.grades, chain.grades[1:])
        )
    ]
    summary["grade_structure"] = {"invalid_chains": antichain[:20]}
    failures += len(antichain)

    if ps.n <= ORACLE_LIMIT:
        oracle_elements = brute_elements(system, net, ps)
        mismatches = compare_elements(elements, oracle_elements)
        if not mismatches:
            mismatches = compare_chains(
                elements, result.chains, brute_chains(system, net, oracle_elements, cfg.max_dim)
            )
        summary["oracle"] = {"skipped": False, "mismatches": mismatches[:20]}
        failures += len(mismatches)
    else:
        logger.warning("oracle comparison skipped for n=%d > %d", ps.n, ORACLE_LIMIT)
        summary["oracle"] = {"skipped": True, "mismatches": []}

    summary["passed"] = failures == 0
    if options.report is not None:
        options.report.parent.mkdir(parents=True, exist_ok=True)
        options.report.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if failures:
        print(f"verification failed: {failures} violations", file=stdout)
        for line in _first_witnesses(summary):
            print(f"  {line}", file=stdout)
        return EXIT_VIOLATION
    print(f"verification passed for n={ps.n}, epsilon={format_decimal(system.eps)}", file=stdout)
    return EXIT_OK


def _first_witnesses(summary: dict[str, Any]) -> list[str]:
    lines: list[str] = []
    interleaving = summary.get("interleaving")
    if interleaving:
        lines.extend(json.dumps(w, sort_keys=True) for w in interleaving["witnesses"][:3])
    lines.extend(json.dumps(f, sort_keys=True) for f in summary["covering_lemma"]["failures"][:3])
    lines.extend(str(chain) for chain in summary["grade_structure"]["invalid_chains"][:3])
    lines.extend(summary["oracle"]["mismatches"][:3])
    return lines


def cmd_stats(
    cfg: BuildConfig,
    scaling: Sequence[int] | None = None,
    net_csv: Path | None = None,
    stdout: TextIO | None = None,
) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    points = load_input(cfg)
    sizes = list(scaling) if scaling else [points.n]
    for size in sizes:
        if size > points.n:
            raise ConfigurationError(f"scaling size {size} exceeds the {points.n} input points")
    reports = []
    for size in sizes:
        result = run_build(cfg, _prefix(points, size))
        reports.append(result.report())
        if net_csv is not None and size == points.n:
            _write_net_csv(net_csv, result)
    if net_csv is not None and points.n not in sizes:
        _write_net_csv(net_csv, run_build(replace(cfg, max_dim=0), points))

    top_dim = max((dim for report in reports for dim in report.chains_per_dim), default=0)
    writer = csv.writer(stdout, lineterminator="\n")
    writer.writerow(
        ["n", "elements", "chains", *(f"chains_dim{dim}" for dim in range(top_dim + 1)),
         "chains_per_n", "grades_max", "grades_mean", "friends_max", "seconds"]
    )
    for report in reports:
        writer.writerow(
            [
                report.n,
                report.element_count,
                report.chain_count,
                *(report.chains_per_dim.get(dim, 0) for dim in range(top_dim + 1)),
                f"{report.chains_per_point:.6g}",
                report.max_grades,
                f"{report.mean_grades:.6g}",
                report.max_friends,
                f"{sum(report.timings.values()):.3f}",
            ]
        )
    return EXIT_OK


def _prefix(points: PointSet, size: int) -> PointSet:
    return points if size == points.n else points.prefix(size)


def _write_net_csv(path: Path, result: BuildResult) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["rank", "index", "ins", "slow", "dis"])
        for rank, index in enumerate(result.net.order):
            writer.writerow(
                [
                    rank,
                    index,
                    format_decimal(float(result.net.ins[index])),
                    format_decimal(float(result.system.slow[index])),
                    format_decimal(float(result.system.dis[index])),
                ]
            )


def cmd_miniball(path: Path, *, header: bool, seed: int, stdout: TextIO | None = None) -> int:
    """Solve the constraints in ``path`` (columns ``p_1..p_d, alpha, beta``)."""

    stdout = stdout if stdout is not None else sys.stdout
    rows = _read_constraints(path, header=header)
    solution = solve_M(rows, seed)
    print(f"z={','.join(format_decimal(float(v)) for v in solution.center)}", file=stdout)
    print(f"s={format_decimal(solution.value)}", file=stdout)
    print(f"basis={','.join(str(label) for label in solution.basis.labels)}", file=stdout)
    return EXIT_OK


def _read_constraints(path: Path, *, header: bool) -> list[Constraint]:
    lines = path.read_text(encoding="utf-8").splitlines()
    if header and lines:
        lines = lines[1:]
    constraints: list[Constraint] = []
    for row, line in enumerate(line for line in lines if line.strip()):
        fields = [token for token in line.replace(",", " ").split() if token]
        if len(fields) < 3:
            raise InputError(f"row {row}: need p_1..p_d, alpha and beta")
        try:
            values = [float(token) for token in fields]
            constraints.append(Constraint.of(values[:-2], values[-2], values[-1], label=row))
        except ValueError as error:
            raise InputError(f"row {row}: {error}") from error
    if not constraints:
        raise InputError(f"{path} contains no constraints")
    if len({c.dim for c in constraints}) != 1:
        raise InputError("all constraints need the same dimension")
    return constraints


def _fail(stage: str, error: BaseException, code: int) -> int:
    print(f"sparsemc {stage}: {error}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        if args.command == "miniball":
            seed, _ = resolve_seed(args.seed)
            return cmd_miniball(args.input, header=args.header, seed=seed)
        cfg = config_from_args(args, getattr(args, "output", "-"))
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            options = VerifyOptions(
                probes=args.probes,
                scales=args.scales,
                lemma_scales=args.lemma_scales,
                max_k=args.max_k,
                report=args.report,
                corrupt_staircase=args.corrupt_staircase,
            )
            return cmd_verify(cfg, options)
        return cmd_stats(cfg, args.scaling, args.net_csv)
    except ConfigurationError as error:
        return _fail("config", error, EXIT_CONFIG)
    except OutputError as error:
        return _fail("output", error, EXIT_INPUT)
    except InputError as error:
        return _fail("input", error, EXIT_INPUT)
    except OSError as error:
        return _fail("input", error, EXIT_INPUT)
    except NumericalFailure as error:
        return _fail("numerical", error, EXIT_NUMERICAL)
    except FriendsCapExceeded as error:
        return _fail("elements", error, EXIT_NUMERICAL)


__all__ = [
    "BuildConfig",
    "EXIT_CONFIG",
    "EXIT_INPUT",
    "EXIT_NUMERICAL",
    "EXIT_OK",
    "EXIT_VIOLATION",
    "OutputError",
    "VerifyOptions",
    "build_parser",
    "cmd_build",
    "cmd_miniball",
    "cmd_stats",
    "cmd_verify",
    "config_from_args",
    "configure_logging",
    "main",
]
