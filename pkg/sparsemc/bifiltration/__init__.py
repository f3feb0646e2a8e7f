"""Elements, chains and grades of the sparse subdivision bifiltration.

The HDF5 archive lives in :mod:`sparsemc.bifiltration.h5` and needs the
optional ``h5`` extra.
"""

from .chains import UNBOUNDED, ChainSimplex, build_chains, chain_grades
from .elements import (
    DEFAULT_MAX_FRIENDS,
    FriendsCapExceeded,
    PosetElement,
    build_elements,
    element_staircase,
)
from .friends import all_friends, friend_radius, friends
from .io import (
    BifiltrationFile,
    BifiltrationFormatError,
    BifiltrationMeta,
    read_bifiltration,
    write_bifiltration,
)
from .report import SizeReport, packing_bound, size_report


__all__ = [
    "BifiltrationFile",
    "BifiltrationFormatError",
    "BifiltrationMeta",
    "ChainSimplex",
    "DEFAULT_MAX_FRIENDS",
    "FriendsCapExceeded",
    "PosetElement",
    "SizeReport",
    "UNBOUNDED",
    "all_friends",
    "build_chains",
    "build_elements",
    "chain_grades",
    "element_staircase",
    "friend_radius",
    "friends",
    "packing_bound",
    "read_bifiltration",
    "size_report",
    "write_bifiltration",
]
