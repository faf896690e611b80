import subprocess
import sys

import pytest

from conftest import FIXTURES, GOLDEN


CLEAN = str(FIXTURES / "required_by_conflict.pco")
A1_VIOL = str(FIXTURES / "a1_viol.pco")


def test_matrix_prints_18_rows(run_cli):
    code, out, err = run_cli("matrix")
    assert code == 0
    assert err == ""
    lines = out.rstrip("\n").split("\n")
    assert len(lines) == 19  # header + 18 rows
    assert lines[1].startswith("*")
    assert "consumes" in lines[1]


def test_matrix_check_appends_report(run_cli):
    code, out, err = run_cli("matrix", "--check")
    assert code == 0
    assert out.count("R001 warning") == 4


def test_matrix_canonical_golden(run_cli):
    code, out, err = run_cli("matrix", "--format", "canonical")
    assert code == 0
    assert out == GOLDEN.joinpath("matrix_canonical.txt").read_text(encoding="utf-8")


def test_schema_canonical_golden(run_cli):
    code, out, err = run_cli("schema", "--format", "canonical")
    assert code == 0
    assert out == GOLDEN.joinpath("schema_canonical.txt").read_text(encoding="utf-8")


def test_validate_clean_fixture(run_cli):
    code, out, err = run_cli("validate", CLEAN)
    assert code == 0
    assert out == ""
    assert err == ""


def test_validate_a1_violation(run_cli):
    code, out, err = run_cli("validate", A1_VIOL)
    assert code == 1
    assert err == ""
    a1_lines = [line for line in out.splitlines() if line.startswith("A1 ")]
    assert len(a1_lines) == 1
    assert "wp1,pe1" in a1_lines[0]


def test_validate_strict_flag(run_cli):
    code, out, err = run_cli("validate", CLEAN, "--strict")
    assert code == 1
    assert out.splitlines() == [
        "M002 error tool1: 'tool1' has 0 'is_required_by' targets, lower bound is 1"]


def test_validate_canonical_format(run_cli):
    code, out, err = run_cli("validate", A1_VIOL, "--format", "canonical")
    assert code == 1
    assert out.startswith("procco-report\tv1\nmode\tlenient\n")
    assert "finding\tA1\terror\twp1,pe1\t" in out


def test_validate_parse_failure(run_cli, tmp_path):
    bad = tmp_path / "bad.pco"
    bad.write_text("entity x : Workflow {}\n", encoding="utf-8")
    code, out, err = run_cli("validate", str(bad))
    assert code == 2
    assert out == ""
    assert "P002" in err


def test_validate_multiple_files(run_cli, tmp_path):
    bad = tmp_path / "bad.pco"
    bad.write_text("entity x : Workflow {}\n", encoding="utf-8")
    code, out, err = run_cli("validate", CLEAN, str(bad))
    assert code == 2
    assert f"# {CLEAN}" in out


def test_validate_missing_file(run_cli):
    code, out, err = run_cli("validate", "no_such_file.pco")
    assert code == 2
    assert "cannot read" in err


def test_lint_never_fails_on_findings(run_cli):
    code, out, err = run_cli("lint", A1_VIOL)
    assert code == 0
    assert any(line.startswith("A1 ") for line in out.splitlines())


def test_lint_parse_failure_still_fatal(run_cli, tmp_path):
    bad = tmp_path / "bad.pco"
    bad.write_text("entity x : Workflow {}\n", encoding="utf-8")
    assert run_cli("lint", str(bad))[0] == 2


def test_validate_partition_override(run_cli, tmp_path):
    model = tmp_path / "m.pco"
    model.write_text("entity w1 : WorkResource {}\n", encoding="utf-8")
    cfg = tmp_path / "parts.cfg"
    cfg.write_text("WorkResource = disjoint complete\n", encoding="utf-8")
    base_out = run_cli("validate", str(model))[1]
    assert "P001" not in base_out
    code, out, err = run_cli("validate", str(model), "--partitions", str(cfg))
    assert any(line.startswith("P001 ") for line in out.splitlines())


def test_validate_bad_partition_config(run_cli, tmp_path):
    cfg = tmp_path / "parts.cfg"
    cfg.write_text("WorkResource = purple\n", encoding="utf-8")
    code, out, err = run_cli("validate", CLEAN, "--partitions", str(cfg))
    assert code == 3
    assert "partition" in err


def test_validate_transitive_axioms_flag(run_cli, tmp_path):
    model = tmp_path / "deep.pco"
    model.write_text(
        "entity wp1 : WorkProcess {}\n"
        "entity wp2 : WorkProcess {}\n"
        "entity a1 : Activity {}\n"
        "entity pe1 : NaturalProduct {}\n"
        "comp wp1 contains wp2\n"
        "comp wp2 contains a1\n"
        "rel consumes wp1 -> pe1\n"
        "rel consumes a1 -> pe1\n", encoding="utf-8")
    direct_out = run_cli("validate", str(model))[1]
    assert any(line.startswith("A1 ") for line in direct_out.splitlines())
    transitive_out = run_cli("validate", str(model), "--transitive-axioms")[1]
    assert not any(line.startswith("A1 ") for line in transitive_out.splitlines())


def test_export_round_trip_and_determinism(run_cli):
    code, out, err = run_cli("export", CLEAN)
    assert code == 0
    assert out.startswith("procco-graph v1\n")
    assert run_cli("export", CLEAN)[1] == out


def test_stats_canonical(run_cli):
    code, out, err = run_cli("stats", CLEAN, "--format", "canonical")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "procco-stats\tv1"
    assert "total\tentities\t13" in lines
    assert "entity\tTool\t1" in lines


def test_stats_text(run_cli):
    code, out, err = run_cli("stats", A1_VIOL)
    assert code == 0
    assert "entities: 3" in out


def test_query_descendants(run_cli, tmp_path):
    model = tmp_path / "m.pco"
    model.write_text(
        "entity wp : WorkProcess {}\n"
        "entity a1 : Activity {}\nentity a2 : Activity {}\n"
        "entity t1 : Task {}\nentity t2 : Task {}\n"
        "comp wp contains a1\ncomp wp contains a2\n"
        "comp a1 contains t1\ncomp a2 contains t2\n", encoding="utf-8")
    code, out, err = run_cli("query", str(model), "--op", "descendants", "--id", "wp")
    assert code == 0
    assert out.split() == ["a1", "a2"]
    code, out, err = run_cli("query", str(model), "--op", "descendants", "--id", "wp",
                             "--transitive")
    assert out.split() == ["a1", "a2", "t1", "t2"]


def test_query_closure(run_cli):
    code, out, err = run_cli("query", CLEAN, "--op", "closure", "--id", "t1",
                             "--rel", "produces")
    assert code == 0
    assert out.split() == ["wprod1", "wprod2"]


def test_query_witness(run_cli):
    sat = str(FIXTURES / "a5_sat.pco")
    code, out, err = run_cli("query", sat, "--op", "witness", "--axiom", "A5",
                             "--subjects", "wp1,r1")
    assert code == 0
    assert out == "satisfied: true\nwitness: a1\n"
    viol = str(FIXTURES / "a5_viol.pco")
    code, out, err = run_cli("query", viol, "--op", "witness", "--axiom", "A5",
                             "--subjects", "wp1,r1")
    assert out == "satisfied: false\n"


def test_query_usage_errors(run_cli):
    assert run_cli("query", CLEAN, "--op", "descendants")[0] == 3
    assert run_cli("query", CLEAN, "--op", "closure", "--id", "t1")[0] == 3
    assert run_cli("query", CLEAN, "--op", "descendants", "--id", "ghost")[0] == 3
    assert run_cli("query", CLEAN, "--op", "witness", "--axiom", "A1",
                   "--subjects", "t1")[0] == 3


def test_unknown_subcommand_is_usage_error(run_cli):
    assert run_cli("frobnicate")[0] == 3
    assert run_cli("validate")[0] == 3  # missing file argument


def test_figures_written(run_cli, tmp_path):
    figdir = tmp_path / "figs"
    code, out, err = run_cli("stats", CLEAN, "--figures", str(figdir))
    assert code == 0
    pngs = sorted(p.name for p in figdir.glob("*.png"))
    assert pngs == ["stats_required_by_conflict_edges.png",
                    "stats_required_by_conflict_entities.png"]
    assert all((figdir / name).stat().st_size > 0 for name in pngs)
    code, out, err = run_cli("validate", A1_VIOL, "--figures", str(figdir))
    assert code == 1
    assert (figdir / "findings_a1_viol.png").stat().st_size > 0


def test_stdout_bit_identical_across_runs(run_cli):
    for argv in (("matrix",), ("schema",), ("validate", A1_VIOL),
                 ("export", CLEAN), ("stats", CLEAN, "--format", "canonical")):
        assert run_cli(*argv)[1] == run_cli(*argv)[1]


def test_console_script_and_stdin():
    result = subprocess.run(
        [sys.executable, "-m", "procco.cli", "validate", "-"],
        input=b"entity t1 : Task {}\n", capture_output=True)
    assert result.returncode == 0
    one_finding = subprocess.run(
        [sys.executable, "-m", "procco.cli", "validate", "-", "--strict"],
        input=b"entity w1 : WorkEntity {}\n", capture_output=True)
    assert one_finding.returncode == 1
    assert b"P001" in one_finding.stdout
