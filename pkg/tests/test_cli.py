import json

import pytest

from tilediff.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_models_listing(capsys):
    code, out, _ = run(["models"], capsys)
    assert code == 0
    for name in ("silver", "silver_twisted", "cap", "casper_scaffold"):
        assert name in out
    assert "none (load required)" in out
    assert "hat" in out


def test_models_json(capsys):
    code, out, _ = run(["models", "--json"], capsys)
    assert code == 0
    rows = json.loads(out)
    by_name = {r["name"]: r for r in rows}
    assert by_name["cap"]["tiles"] == 24
    assert by_name["casper_scaffold"]["displacement"] == "none (load required)"
    assert by_name["casper_scaffold"]["deformations"] == ["hex", "ht", "spectre"]


def test_peaks_run_and_determinism(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    args = ["peaks", "--model", "silver", "--radius", "2", "--threshold",
            "1e-4", "--iters", "25", "--out", "run1"]
    code, out, _ = run(args, capsys)
    assert code == 0
    assert "peaks with intensity" in out
    args2 = args[:-1] + ["run2"]
    code, _, _ = run(args2, capsys)
    assert code == 0
    b1 = (tmp_path / "run1.csv").read_bytes()
    b2 = (tmp_path / "run2.csv").read_bytes()
    assert b1 == b2
    assert (tmp_path / "run1.json").read_bytes() == \
        (tmp_path / "run2.json").read_bytes()
    assert (tmp_path / "run1.svg").exists()


def test_peaks_deformation_summary(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    code, out, _ = run(["peaks", "--model", "silver", "--deformation",
                        "equal-lengths", "--radius", "2", "--threshold",
                        "1e-4", "--iters", "25"], capsys)
    assert code == 0
    assert "lattice-periodic" in out
    assert "period generators" in out


def test_peaks_from_lengths_exact(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    code, out, _ = run(["peaks", "--model", "silver", "--deformation",
                        "from-lengths:4-2*sqrt2,4-2*sqrt2", "--radius", "1",
                        "--threshold", "1e-4", "--iters", "20"], capsys)
    assert code == 0


def test_peaks_from_lengths_rejects_decimals(capsys):
    code, _, err = run(["peaks", "--model", "silver", "--deformation",
                        "from-lengths:1.17157,1.17157"], capsys)
    assert code == 1
    assert "not exact" in err


def test_peaks_weight_list(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    code, out, _ = run(["peaks", "--model", "silver", "--weights",
                        "1.4142135623730951,-1", "--radius", "1",
                        "--threshold", "1e-25", "--iters", "25"], capsys)
    assert code == 0
    code, _, err = run(["peaks", "--model", "silver", "--weights", "a,b"],
                       capsys)
    assert code == 1


def test_peaks_rejects_unknown_deformation(capsys):
    code, _, err = run(["peaks", "--model", "cap", "--deformation", "spiral"],
                       capsys)
    assert code == 1
    assert "spiral" in err


def test_peaks_missing_data_exit_code(capsys):
    code, _, err = run(["peaks", "--model", "casper_scaffold"], capsys)
    assert code == 3
    assert "displacement" in err


def test_usage_error_exit_code(capsys):
    code, _, _ = run(["peaks", "--model", "nosuch"], capsys)
    assert code == 1


def test_verify_silver(capsys):
    code, out, _ = run(["verify", "--model", "silver"], capsys)
    assert code == 0
    assert "analytic-oracle" in out
    assert "0 failed" in out


def test_verify_cap(capsys):
    code, out, _ = run(["verify", "--model", "cap"], capsys)
    assert code == 0
    assert "sixfold-exact" in out and "pf-eigenvalue" in out


def test_verify_casper_skips_without_data(capsys):
    code, out, _ = run(["verify", "--model", "casper_scaffold"], capsys)
    assert code == 0
    assert "SKIP" in out
    assert "ht-lattice-constant" in out


def test_window_command(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    code, out, _ = run(["window", "--model", "silver", "--generations", "14"],
                       capsys)
    assert code == 0
    assert (tmp_path / "window_silver.svg").exists()
    code, out, _ = run(["window", "--model", "silver_twisted",
                        "--generations", "14", "--zoom", "0,0.5",
                        "--out", "tw.svg"], capsys)
    assert code == 0
    assert "zoom" in (tmp_path / "tw.svg").read_text()


def test_window_missing_data(capsys):
    code, _, _ = run(["window", "--model", "casper_scaffold"], capsys)
    assert code == 3


def test_patch_command(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    code, out, _ = run(["patch", "--model", "silver", "--steps", "5"], capsys)
    assert code == 0
    lines = (tmp_path / "patch_silver.csv").read_text().splitlines()
    assert lines[0] == "type,x,y"
    assert len(lines) > 20


def test_data_loading_via_flag(tmp_path, capsys, monkeypatch):
    # round-trip the silver displacement through --data
    from tilediff.models import builtin, save_displacement
    monkeypatch.setenv("TILEDIFF_OUTDIR", str(tmp_path))
    data = tmp_path / "silver.json"
    save_displacement(builtin("silver").displacement, data)
    code, out, _ = run(["verify", "--model", "silver", "--data", str(data)],
                       capsys)
    assert code == 0


def test_bad_data_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    code, _, err = run(["verify", "--model", "cap", "--data", str(bad)], capsys)
    assert code == 3
    assert "data error" in err
