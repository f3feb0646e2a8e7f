from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from sparsemc.bifiltration import read_bifiltration
from sparsemc.cli import (
    EXIT_CONFIG,
    EXIT_INPUT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_VIOLATION,
    build_parser,
    main,
)
from sparsemc.geometry import Metric
from sparsemc.lp import NumericalFailure


@pytest.fixture
def line_csv(write_rows) -> Path:
    return write_rows([[0.0], [1.0], [3.0], [7.0]], name="line.csv")


def test_build_writes_the_bifiltration_and_prints_the_size_table(
    tmp_path: Path, line_csv: Path, capsys
) -> None:
    output = tmp_path / "line.bif"

    code = main(["build", "-i", str(line_csv), "-e", "1", "-o", str(output), "--threads", "1"])

    assert code == EXIT_OK
    loaded = read_bifiltration(output)
    assert loaded.meta.n == 4
    assert loaded.meta.metric is Metric.L2
    assert len(loaded.elements) == 15
    assert max(chain.dim for chain in loaded.chains) == 2
    table = capsys.readouterr().out
    assert "elements" in table and "15" in table


def test_build_to_standard_output_moves_the_table_to_stderr(line_csv: Path, capsys) -> None:
    assert main(["build", "-i", str(line_csv), "-e", "1", "-o", "-", "--poset-only"]) == EXIT_OK

    captured = capsys.readouterr()
    assert captured.out.startswith("# sparse-bifiltration v1\n")
    assert "simplex" not in captured.out
    assert "elements" in captured.err


def test_matrix_input_builds_the_rips_reading(tmp_path: Path, write_rows) -> None:
    matrix = write_rows("0 1 3 7\n1 0 2 6\n3 2 0 4\n7 6 4 0\n", name="line.txt")
    output = tmp_path / "rips.bif"

    code = main(["build", "-i", str(matrix), "--kind", "matrix", "-e", "1", "-o", str(output)])

    assert code == EXIT_OK
    loaded = read_bifiltration(output)
    assert loaded.meta.metric is Metric.MATRIX
    assert loaded.meta.radius.value == "linearU"


def test_epsilon_out_of_range_is_rejected_by_the_parser(line_csv: Path, capsys) -> None:
    with pytest.raises(SystemExit) as caught:
        main(["build", "-i", str(line_csv), "-e", "2.0", "-o", "-"])

    assert caught.value.code == EXIT_CONFIG
    assert "epsilon must be in (0,1]" in capsys.readouterr().err


@pytest.mark.parametrize(
    "flags",
    [
        ["--metric", "linf", "--radius", "quadratic"],
        ["--radius", "linearU"],
        ["--kind", "matrix", "--metric", "l2"],
    ],
)
def test_incompatible_settings_exit_with_a_configuration_error(
    line_csv: Path, capsys, flags
) -> None:
    code = main(["build", "-i", str(line_csv), "-o", "-", *flags])

    assert code == EXIT_CONFIG
    assert capsys.readouterr().err.startswith("sparsemc config:")


def test_unreadable_or_malformed_input_exits_with_an_input_error(
    tmp_path: Path, write_rows, capsys
) -> None:
    assert main(["build", "-i", str(tmp_path / "missing.csv"), "-o", "-"]) == EXIT_INPUT
    assert capsys.readouterr().err.startswith("sparsemc input:")

    ragged = write_rows("0,0\n1\n", name="ragged.csv")
    assert main(["build", "-i", str(ragged), "-o", "-"]) == EXIT_INPUT
    assert "row 1 has 1 columns" in capsys.readouterr().err


def test_friends_cap_exits_with_code_three(line_csv: Path, capsys) -> None:
    code = main(["build", "-i", str(line_csv), "-e", "1", "--max-friends", "1", "-o", "-"])

    assert code == EXIT_NUMERICAL
    assert "above the cap of 1" in capsys.readouterr().err


def test_numerical_failures_exit_with_code_three(line_csv: Path, mocker, capsys) -> None:
    mocker.patch("sparsemc.cli.run_build", side_effect=NumericalFailure("basis changes did not settle"))

    assert main(["build", "-i", str(line_csv), "-o", "-"]) == EXIT_NUMERICAL
    assert "sparsemc numerical: basis changes did not settle" in capsys.readouterr().err


def test_an_existing_archive_is_refused_before_anything_is_written(
    tmp_path: Path, line_csv: Path, mocker, capsys
) -> None:
    pytest.importorskip("h5py")
    archive = tmp_path / "line.h5"
    archive.write_bytes(b"keep")
    output = tmp_path / "line.bif"
    build = mocker.patch("sparsemc.cli.run_build")

    code = main(["build", "-i", str(line_csv), "-o", str(output), "--h5", str(archive)])

    assert code == EXIT_INPUT
    assert capsys.readouterr().err.startswith(f"sparsemc output: {archive} already exists")
    build.assert_not_called()
    assert not output.exists()
    assert archive.read_bytes() == b"keep"


def test_build_writes_a_new_archive_next_to_the_text_file(tmp_path: Path, line_csv: Path) -> None:
    h5py = pytest.importorskip("h5py")
    archive = tmp_path / "runs" / "line.h5"

    code = main(["build", "-i", str(line_csv), "-e", "1", "-o", str(tmp_path / "line.bif"),
                 "--h5", str(archive)])

    assert code == EXIT_OK
    with h5py.File(archive, "r") as h5_file:
        assert h5_file["net/order"][()].tolist() == [0, 3, 2, 1]


def test_verify_passes_on_the_line_instance_and_writes_a_report(
    tmp_path: Path, line_csv: Path, capsys
) -> None:
    report = tmp_path / "reports" / "verify.json"

    code = main(
        ["verify", "-i", str(line_csv), "-e", "1", "--probes", "40", "--scales", "6",
         "--lemma-scales", "20", "--report", str(report)]
    )

    assert code == EXIT_OK
    assert "verification passed for n=4" in capsys.readouterr().out
    summary = json.loads(report.read_text())
    assert summary["passed"] is True
    assert summary["oracle"] == {"skipped": False, "mismatches": []}
    assert summary["interleaving"]["violations"] == 0
    assert summary["covering_lemma"]["failures"] == []


def test_verify_catches_a_corrupted_staircase(tmp_path: Path, line_csv: Path, capsys) -> None:
    report = tmp_path / "verify.json"

    code = main(
        ["verify", "-i", str(line_csv), "-e", "1", "--probes", "10", "--scales", "2",
         "--lemma-scales", "5", "--report", str(report), "--corrupt-staircase"]
    )

    assert code == EXIT_VIOLATION
    out = capsys.readouterr().out
    assert out.startswith("verification failed")
    assert "element [0, 1]: staircase" in out
    assert json.loads(report.read_text())["passed"] is False


def test_corrupt_staircase_is_refused_above_the_oracle_limit(write_rows, capsys) -> None:
    cloud = write_rows([[2.0**i] for i in range(13)], name="thirteen.csv")

    code = main(["verify", "-i", str(cloud), "-e", "1", "--probes", "5", "--scales", "2",
                 "--lemma-scales", "2", "--corrupt-staircase"])

    assert code == EXIT_CONFIG
    err = capsys.readouterr().err
    assert err.startswith("sparsemc config: --corrupt-staircase needs the oracle comparison")
    assert "n <= 12" in err


def test_corrupt_staircase_hook_is_hidden_from_help() -> None:
    parser = build_parser()
    stream = io.StringIO()
    subparsers = next(action for action in parser._actions if action.dest == "command")
    subparsers.choices["verify"].print_help(stream)

    assert "--corrupt-staircase" not in stream.getvalue()
    assert "--report" in stream.getvalue()


def test_stats_prints_one_csv_row_per_prefix(tmp_path: Path, line_csv: Path, capsys) -> None:
    net_csv = tmp_path / "net.csv"

    code = main(
        ["stats", "-i", str(line_csv), "-e", "1", "--scaling", "2,4", "--max-dim", "1",
         "--net-csv", str(net_csv)]
    )

    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [row["n"] for row in rows] == ["2", "4"]
    assert rows[0]["elements"] == "3"
    assert rows[1]["chains"] == "65"
    assert rows[1]["chains_dim1"] == "50"
    net_rows = list(csv.DictReader(net_csv.open()))
    assert [row["index"] for row in net_rows] == ["0", "3", "2", "1"]
    assert net_rows[0]["dis"] == "inf"
    assert net_rows[3]["slow"] == "2"


def test_stats_rejects_prefixes_larger_than_the_input(line_csv: Path, capsys) -> None:
    assert main(["stats", "-i", str(line_csv), "--scaling", "10"]) == EXIT_CONFIG
    assert "exceeds the 4 input points" in capsys.readouterr().err


def test_miniball_prints_center_value_and_basis(write_rows, capsys) -> None:
    path = write_rows("x,y,alpha,beta\n0,0,1,0\n4,0,1,0\n2,1,1,0\n", name="constraints.csv")

    assert main(["miniball", "-i", str(path), "--header"]) == EXIT_OK

    fields = dict(line.split("=", 1) for line in capsys.readouterr().out.splitlines())
    assert [float(v) for v in fields["z"].split(",")] == pytest.approx([2.0, 0.0])
    assert float(fields["s"]) == pytest.approx(4.0)
    assert sorted(int(label) for label in fields["basis"].split(",")) == [0, 1]


def test_miniball_rejects_invalid_weights(write_rows, capsys) -> None:
    path = write_rows("0,0,0,0\n", name="bad.csv")

    assert main(["miniball", "-i", str(path)]) == EXIT_INPUT
    assert "alpha must be positive" in capsys.readouterr().err
