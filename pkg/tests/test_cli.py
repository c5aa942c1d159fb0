import json
import os
from unittest.mock import patch

import pytest

from src import cli, config
from src.tensor_branching import LeapSweepReport


@pytest.fixture(autouse=True)
def quiet_environment():
    """No global logging setup and no seed from the caller's shell."""
    with patch("src.cli.configure_logging"), patch.dict(os.environ, {}, clear=True):
        yield


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_dim_exact_text(capsys):
    code, out = run(capsys, "dim", "--family", "odd-a", "--n", "1")

    assert code == cli.EXIT_OK
    assert "dimension: 3" in out
    assert "shell_polynomial: 1,3,3" in out


def test_dim_exact_json_uses_default_seed(capsys):
    code, out = run(capsys, "dim", "--family", "odd-d", "--n", "2", "--emit", "json")

    document = json.loads(out)
    assert code == cli.EXIT_OK
    assert document["dimension"] == 3
    assert document["seed"] == config.DEFAULT_SEED
    assert document["schema_version"] == config.SCHEMA_VERSION


def test_seed_from_environment(capsys):
    with patch.dict(os.environ, {config.SEED_ENV_VAR: "5"}):
        _, out = run(capsys, "dim", "--family", "even-b", "--n", "1", "--emit", "json")

    assert json.loads(out)["seed"] == 5


def test_output_is_deterministic(capsys):
    argv = ["zeta", "--family", "odd-a", "--n", "1", "--p", "4", "--cutoff", "500"]
    argv += ["--emit", "json"]

    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)

    assert first == second


def test_dim_fit(capsys):
    code, out = run(
        capsys, "dim", "--family", "even-b", "--n", "1", "--method", "fit",
        "--cutoff", "100", "--emit", "json",
    )

    document = json.loads(out)
    assert code == cli.EXIT_OK
    assert document["window"] == [50, 100]
    assert document["estimate"] == pytest.approx(2.0, abs=0.1)


def test_dim_certificate_failure_exits_2(capsys):
    with patch("src.length_operator.find_root", return_value=None):
        code, out = run(capsys, "dim", "--family", "odd-a", "--n", "1")

    assert code == cli.EXIT_FAILURE
    assert out == ""


def test_zeta_requires_p(capsys):
    code, _ = run(capsys, "zeta", "--family", "even-b", "--n", "1")

    assert code == cli.EXIT_USAGE


def test_zeta_json(capsys):
    code, out = run(
        capsys, "zeta", "--family", "even-b", "--n", "1", "--p", "3", "--cutoff", "1000",
        "--emit", "json",
    )

    document = json.loads(out)
    assert code == cli.EXIT_OK
    assert document["converged"] is True
    assert document["partial_sum"] == pytest.approx(5.4899, abs=1e-3)


def test_graph_without_root(capsys):
    code, out = run(capsys, "graph", "--family", "odd-a", "--n", "1", "--c", "1.5")

    assert code == cli.EXIT_OK
    assert "no root" in out


def test_graph_chain_path(capsys):
    code, out = run(capsys, "graph", "--family", "even-b", "--n", "1", "--cutoff", "4")

    assert code == cli.EXIT_OK
    assert "root: (0,)" in out
    assert "path: 0 -> 1 -> 2 -> 3 -> 4" in out


def test_graph_dot_and_csv(capsys):
    _, dot = run(capsys, "graph", "--family", "odd-a", "--n", "1", "--emit", "dot")
    _, table = run(
        capsys, "graph", "--family", "odd-d", "--n", "2", "--cutoff", "3", "--emit", "csv"
    )

    assert dot.startswith("digraph growth {")
    assert table.splitlines() == ['index,length', '"(0,)",1', '"(1,)",1', '"(2,)",2', '"(3,)",3']


def test_graph_cutoff_limit(capsys):
    code, _ = run(capsys, "graph", "--cutoff", str(config.MAX_GRAPH_CUTOFF + 1))

    assert code == cli.EXIT_USAGE


def test_report_csv(capsys):
    code, out = run(capsys, "report", "--max-n", "2", "--emit", "csv")

    lines = out.splitlines()
    assert code == cli.EXIT_OK
    assert lines[0] == "family,n,sphere_dim,spectral_dim,match"
    assert lines[1:] == [
        "odd-a,1,3,3,True",
        "odd-a,2,5,5,True",
        "even-b,1,2,2,True",
        "even-b,2,4,4,True",
        "odd-d,2,3,3,True",
    ]


def test_spectrum_csv_and_json(capsys):
    _, table = run(capsys, "spectrum", "--family", "even-b", "--n", "1", "--cutoff", "3")
    _, document = run(
        capsys, "spectrum", "--family", "odd-a", "--n", "1", "--cutoff", "1", "--emit", "json"
    )

    assert table.splitlines()[1:] == ['"(0,)",1', '"(1,)",3', '"(2,)",5', '"(3,)",7']
    entries = json.loads(document)["entries"]
    assert entries[-1] == {"index": [1, 1], "dimension": 3}


def test_verify_leap_passes(capsys):
    code, out = run(capsys, "verify", "leap", "--family", "odd-a", "--n", "2", "--max-gamma", "3")

    assert code == cli.EXIT_OK
    assert out.startswith("verify leap: PASS (seed 42)")
    assert "note:" in out


def test_verify_failure_exits_2(capsys):
    fake = LeapSweepReport(
        family="even-b", n=1, max_gamma=2, checked=3, max_shift=2, one_sided_violations=0
    )
    with patch("src.verification.bounded_leap_sweep", return_value=fake):
        code, out = run(capsys, "verify", "leap", "--family", "even-b", "--n", "1", "--emit", "csv")

    assert code == cli.EXIT_FAILURE
    assert out.splitlines()[1].endswith(",False")


@pytest.mark.parametrize(
    "argv",
    [
        ["dim", "--family", "odd-d", "--n", "1"],
        ["dim", "--family", "odd-c"],
        ["dim", "--window", "1,2,3"],
        ["dim", "--config", "/nonexistent/run.cfg"],
    ],
)
def test_invalid_configuration_exits_1(capsys, argv):
    code, out = run(capsys, *argv)

    assert code == cli.EXIT_USAGE
    assert out == ""


def test_unknown_command_exits_1():
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["frobnicate"])

    assert excinfo.value.code == cli.EXIT_USAGE


def test_config_file_and_flag_precedence(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("family = even-b\nn = 2\nseed = 9\n", encoding="utf-8")

    code, out = run(capsys, "config", "--config", str(path), "--n", "3")

    assert code == cli.EXIT_OK
    assert "family = EvenB" in out
    assert "n = 3" in out
    assert "seed = 9" in out


def test_report_writes_json_file(tmp_path, capsys):
    path = tmp_path / "table.json"

    code, out = run(capsys, "report", "--max-n", "1", "--out", str(path))

    document = json.loads(path.read_text(encoding="utf-8"))
    assert code == cli.EXIT_OK
    assert "odd-a" in out
    assert document["seed"] == config.DEFAULT_SEED
    assert [(r["family"], r["n"], r["spectral_dim"]) for r in document["rows"]] == [
        ("odd-a", 1, 3),
        ("even-b", 1, 2),
    ]


@pytest.mark.slow
def test_report_json_is_byte_identical(capsys):
    argv = ["report", "--max-n", "10", "--emit", "json"]

    code, first = run(capsys, *argv)
    _, second = run(capsys, *argv)

    assert code == cli.EXIT_OK
    assert first == second
    assert all(row["match"] for row in json.loads(first)["rows"])


def test_verify_dirac_without_root_exits_2(capsys):
    with patch("src.verification.find_root", return_value=None):
        code, out = run(capsys, "verify", "dirac", "--family", "even-b", "--n", "1")

    assert code == cli.EXIT_FAILURE
    assert out == ""
