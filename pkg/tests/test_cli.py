"""Tests for the stmod command line."""

import json

import pytest

from stmod.cli import EXIT_OK, EXIT_USAGE, main


def _write(path, data):
    path.write_text(json.dumps(data))
    return path


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured


def _only_check(stdout):
    report = json.loads(stdout)
    assert len(report["checks"]) == 1
    return report["checks"][0]


def test_classify_gh_group(capsys):
    """Test classify on C3."""
    code, out = _run(capsys, ["classify", "--group", "C3"])
    check = _only_check(out.out)
    assert code == EXIT_OK
    assert check["details"]["verdict"] == "GH holds"
    assert "witness" not in check


def test_classify_klein_four_ships_a_ghost(capsys):
    """Test classify on C2×C2: GH fails with a replayable witness."""
    code, out = _run(capsys, ["classify", "--group", "C2xC2", "--bound", "1"])
    check = _only_check(out.out)
    assert code == EXIT_OK
    assert check["details"]["verdict"] == "GH fails"
    assert check["details"]["subgroup"]["kind"] == "elementary_abelian_rank2"
    assert check["details"]["stably_nontrivial"]
    assert check["witness"]["map"]["matrix"]


def test_bad_module_file_is_a_usage_error(capsys, tmp_path):
    """Test exit code 2 and the error line for a malformed file."""
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out = _run(capsys, ["jordan", "--module", str(path)])
    assert code == EXIT_USAGE
    assert "❌ ERROR" in out.err
    assert str(path) in out.err
    assert out.out == ""


def test_module_file_with_dim_is_accepted(capsys, tmp_path):
    """Test jordan and stable-hom on a module file that states its dimension."""
    path = _write(
        tmp_path / "l2.json",
        {"group": {"cyclic": 4}, "p": 2, "dim": 2, "generators": {"1": [[1, 0], [1, 1]]}},
    )
    code, out = _run(capsys, ["jordan", "--module", str(path)])
    assert code == EXIT_OK
    assert _only_check(out.out)["details"]["sizes"] == [2]
    code, out = _run(capsys, ["stable-hom", "--module", str(path), "--target", str(path)])
    assert code == EXIT_OK
    assert _only_check(out.out)["details"]["stable_dim"] == 2


@pytest.mark.parametrize(
    "content",
    [
        b'{"name": "X", "table": [[0, 1], [1]]}',
        b'{"name": "X", "table": [[0, 1], [1, 100000000000000000000000000000]]}',
        b'{"cyclic": "\xff"}',
    ],
)
def test_malformed_group_file_is_a_usage_error(capsys, tmp_path, content):
    """Test exit code 2 for ragged, overflowing and undecodable group files."""
    path = tmp_path / "g.json"
    path.write_bytes(content)
    code, out = _run(capsys, ["classify", "--group", str(path)])
    assert code == EXIT_USAGE
    assert str(path) in out.err


@pytest.mark.parametrize("group", ["C40000", "CpxCp:200"])
def test_oversized_group_shorthand_is_a_usage_error(capsys, group):
    """Test that the order limit is reported before any table is built."""
    code, out = _run(capsys, ["classify", "--group", group])
    assert code == EXIT_USAGE
    assert "exceeds" in out.err


def test_jordan_command(capsys, tmp_path):
    """Test Jordan type output over C4."""
    path = _write(tmp_path / "m.json", {"group": "C4", "jordan": [4, 2, 1]})
    code, out = _run(capsys, ["jordan", "--module", str(path)])
    details = _only_check(out.out)["details"]
    assert code == EXIT_OK
    assert details == {"sizes": [4, 2, 1], "non_projective": [2, 1], "projective_count": 1}


def test_stable_hom_command(capsys, tmp_path):
    """Test stable Hom(L2, L2) over C4."""
    path = _write(tmp_path / "l2.json", {"group": "C4", "cyclic_length": 2})
    code, out = _run(capsys, ["stable-hom", "--module", str(path), "--target", str(path)])
    details = _only_check(out.out)["details"]
    assert code == EXIT_OK
    assert details == {"hom_dim": 2, "phom_dim": 0, "stable_dim": 2}


def test_tate_command(capsys, tmp_path):
    """Test Tate dimensions of k over C5."""
    path = _write(tmp_path / "k.json", {"group": "C5", "builtin": "trivial"})
    code, out = _run(capsys, ["tate", "--module", str(path), "--bound", "1"])
    assert code == EXIT_OK
    assert _only_check(out.out)["details"]["dims"] == {"-1": 1, "0": 1, "1": 1}


def test_omega_command(capsys, tmp_path):
    """Test Ωk over C4."""
    path = _write(tmp_path / "k.json", {"group": "C4", "builtin": "trivial"})
    code, out = _run(capsys, ["omega", "--module", str(path)])
    details = _only_check(out.out)["details"]
    assert code == EXIT_OK
    assert (details["dim"], details["projective_free_dim"], details["free_rank"]) == (3, 3, 0)


def test_induce_and_restrict_commands(capsys, tmp_path):
    """Test induction along ⟨σ²⟩ ≤ C8 and restriction back."""
    path = _write(tmp_path / "l2.json", {"group": "C4", "cyclic_length": 2})
    code, out = _run(
        capsys, ["induce", "--group", "C8", "--subgroup", "2", "--module", str(path)]
    )
    details = _only_check(out.out)["details"]
    assert code == EXIT_OK
    assert (details["dim"], details["index"]) == (4, 2)

    induced = _write(tmp_path / "induced.json", details["module"])
    code, out = _run(capsys, ["restrict", "--subgroup", "2", "--module", str(induced)])
    assert code == EXIT_OK
    assert _only_check(out.out)["details"]["dim"] == 4


def test_restrict_rejects_bad_element(capsys, tmp_path):
    """Test that subgroup generators must be elements of the group."""
    path = _write(tmp_path / "k.json", {"group": "C4", "builtin": "trivial"})
    code, out = _run(capsys, ["restrict", "--subgroup", "7", "--module", str(path)])
    assert code == EXIT_USAGE
    assert "out of range" in out.err


def test_ghost_check_writes_report_file(capsys, tmp_path):
    """Test a certified ghost verdict written to --out."""
    module = {"group": "C4", "cyclic_length": 2}
    path = _write(
        tmp_path / "phi.json", {"source": module, "target": module, "matrix": [[0, 0], [1, 0]]}
    )
    out_path = tmp_path / "reports" / "ghost.json"
    code, out = _run(
        capsys, ["ghost-check", "--map", str(path), "--bound", "1", "--out", str(out_path)]
    )
    assert code == EXIT_OK
    assert out.out == ""
    check = _only_check(out_path.read_text())
    assert check["name"] == "ghost_check"
    assert check["details"]["verdict"]["certificate"] == "central-element"
    assert check["details"]["stably_nontrivial"]


def test_ghost_check_reports_non_ghost_witness(capsys, tmp_path):
    """Test that the identity is reported with a degree-0 witness."""
    module = {"group": "C4", "cyclic_length": 2}
    path = _write(
        tmp_path / "id.json", {"source": module, "target": module, "matrix": [[1, 0], [0, 1]]}
    )
    code, out = _run(capsys, ["ghost-check", "--map", str(path), "--dual"])
    check = _only_check(out.out)
    assert code == EXIT_OK
    assert check["name"] == "dual_ghost_check"
    assert check["details"]["verdict"]["kind"] == "non_ghost"
    assert check["witness"]["degree"] == 0


def test_verify_refuses_c4_without_override(capsys):
    """Test that the no-ghost sweep over C4 is a usage error by default."""
    code, out = _run(capsys, ["verify", "no-ghosts", "--group", "C4", "--seed", "1"])
    assert code == EXIT_USAGE
    assert "--override-unsafe" in out.err


def test_verify_needs_group(capsys):
    """Test that group-specific targets require --group."""
    code, out = _run(capsys, ["verify", "fullness", "--seed", "1"])
    assert code == EXIT_USAGE
    assert "needs --group" in out.err


def test_verify_rejects_negative_seed(capsys):
    """Test seed validation."""
    code, out = _run(capsys, ["verify", "syzygies", "--seed", "-3"])
    assert code == EXIT_USAGE
    assert "seed" in out.err


def test_verify_requires_seed():
    """Test that --seed is mandatory."""
    with pytest.raises(SystemExit) as excinfo:
        main(["verify", "syzygies"])
    assert excinfo.value.code == 2


@pytest.mark.slow
def test_verify_syzygies_writes_metrics(capsys, tmp_path):
    """Test a full verify run with report and metrics files."""
    report_path = tmp_path / "syzygies.json"
    metrics_path = tmp_path / "metrics.prom"
    code, _ = _run(
        capsys,
        [
            "verify",
            "syzygies",
            "--seed",
            "0",
            "--out",
            str(report_path),
            "--metrics-out",
            str(metrics_path),
        ],
    )
    assert code == EXIT_OK
    report = json.loads(report_path.read_text())
    assert report["config"]["seed"] == 0
    assert all(check["outcome"] == "pass" for check in report["checks"])
    assert "stmod_checks_total" in metrics_path.read_text()


@pytest.mark.slow
def test_verify_all_on_c2(capsys):
    """Test the full verification run over C2 at a small scale."""
    code, out = _run(
        capsys,
        [
            "verify",
            "all",
            "--group",
            "C2",
            "--seed",
            "7",
            "--trials",
            "3",
            "--dim-bound",
            "4",
            "--bound",
            "1",
        ],
    )
    report = json.loads(out.out)
    assert code == EXIT_OK
    assert report["config"]["target"] == "all"
    names = {check["name"] for check in report["checks"]}
    assert {"no_ghosts.empirical", "decomposition.sampled", "fullness.window"} <= names
