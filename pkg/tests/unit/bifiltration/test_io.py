from __future__ import annotations

import io
from pathlib import Path

import pytest

from sparsemc.bifiltration import (
    BifiltrationFormatError,
    BifiltrationMeta,
    build_chains,
    build_elements,
    read_bifiltration,
    write_bifiltration,
)
from sparsemc.bifiltration.io import MAGIC, dump_bifiltration, format_decimal
from sparsemc.geometry import Metric
from sparsemc.sparseballs import RadiusVariant


META = BifiltrationMeta(epsilon=1.0, metric=Metric.L2, radius=RadiusVariant.QUADRATIC, n=4, seed=0)


@pytest.fixture
def line_build(line_points, line_net, line_system):
    elements = build_elements(line_net, line_system, line_points)
    return elements, build_chains(elements, max_dim=2)


def test_decimals_are_exact_and_infinity_is_spelled_out() -> None:
    assert format_decimal(0.1) == "0.10000000000000001"
    assert float(format_decimal(1 / 3)) == 1 / 3
    assert format_decimal(float("inf")) == "inf"
    assert format_decimal(3.5) == "3.5"


def test_text_layout_of_the_line_instance(line_build) -> None:
    elements, chains = line_build
    stream = io.StringIO()

    dump_bifiltration(stream, chains, elements, META)
    lines = stream.getvalue().splitlines()

    assert lines[0] == MAGIC
    assert lines[1] == "# epsilon=1 metric=l2 radius=quadratic n=4 seed=0"
    assert lines[2] == "element 0 vertices=0 rstar=0 rend=inf stair=0:1;8:2;24:3;56:4"
    assert "element 6 vertices=0,3 rstar=3.5 rend=56 stair=3.5:2;8:3;24:4" in lines
    assert lines[2 + len(elements)].startswith("simplex dim=0 chain=0 grades=0:1;8:2")
    assert sum(line.startswith("simplex ") for line in lines) == len(chains)


def test_written_files_read_back_unchanged(tmp_path: Path, line_build) -> None:
    elements, chains = line_build
    path = tmp_path / "out" / "line.bif"

    write_bifiltration(chains, elements, META, path)
    loaded = read_bifiltration(path)

    assert loaded.meta == META
    assert loaded.elements == tuple(elements)
    assert loaded.chains == tuple(chains)


def test_poset_only_output_omits_chains(tmp_path: Path, line_build) -> None:
    elements, chains = line_build
    path = tmp_path / "poset.bif"

    write_bifiltration(chains, elements, META, path, poset_only=True)

    assert read_bifiltration(path).chains == ()
    assert "simplex" not in path.read_text()


def test_dash_writes_to_standard_output(capsys, line_build) -> None:
    elements, chains = line_build

    write_bifiltration(chains, elements, META, "-")

    assert capsys.readouterr().out.startswith(MAGIC + "\n")


@pytest.mark.parametrize(
    ("text", "line", "message"),
    [
        ("hello\n", 1, "sparse-bifiltration v1"),
        (f"{MAGIC}\nmeta\n", 2, "metadata line"),
        (f"{MAGIC}\n# epsilon=1 metric=l3 radius=quadratic n=1 seed=0\n", 2, "l3"),
        (
            f"{MAGIC}\n# epsilon=1 metric=l2 radius=quadratic n=1 seed=0\nedge 0\n",
            3,
            "unknown record",
        ),
        (
            f"{MAGIC}\n# epsilon=1 metric=l2 radius=quadratic n=1 seed=0\n"
            "simplex dim=2 chain=0<1 grades=0:1\n",
            3,
            "does not match",
        ),
    ],
)
def test_malformed_files_report_the_offending_line(tmp_path: Path, text, line, message) -> None:
    path = tmp_path / "bad.bif"
    path.write_text(text)

    with pytest.raises(BifiltrationFormatError, match=message) as caught:
        read_bifiltration(path)
    assert caught.value.line == line
