"""Sparse approximations of the subdivision-Rips and multicover bifiltrations."""

from .bifiltration import (
    BifiltrationMeta,
    ChainSimplex,
    FriendsCapExceeded,
    PosetElement,
    SizeReport,
    build_chains,
    build_elements,
    read_bifiltration,
    write_bifiltration,
)
from .config import BuildConfig, ConfigurationError, InputKind
from .geometry import InputError, Metric, PointSet, load_distance_matrix, load_points
from .greedy import PersistentNet, covering_sequences, gonzalez
from .lp import Constraint, NumericalFailure, solve_M
from .pipeline import BuildResult, build_bifiltration, run_build
from .sparseballs import RadiusVariant, SparseBallSystem

__version__ = "0.1.0"

__all__ = [
    "BifiltrationMeta",
    "BuildConfig",
    "BuildResult",
    "ChainSimplex",
    "ConfigurationError",
    "Constraint",
    "FriendsCapExceeded",
    "InputError",
    "InputKind",
    "Metric",
    "NumericalFailure",
    "PersistentNet",
    "PointSet",
    "PosetElement",
    "RadiusVariant",
    "SizeReport",
    "SparseBallSystem",
    "__version__",
    "build_bifiltration",
    "build_chains",
    "build_elements",
    "covering_sequences",
    "gonzalez",
    "load_distance_matrix",
    "load_points",
    "read_bifiltration",
    "run_build",
    "solve_M",
    "write_bifiltration",
]
