"""End-to-end coverage of the command-line driver: config parsing, figure
and sweep output, exit codes, and byte-level determinism."""

import filecmp
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from cavshare import (
    ParityKind,
    ParseError,
    SystemParams,
    UnknownKey,
    coherent_concurrence,
)
from cavshare import cli
from cavshare.dissipative import damped_concurrence
from cavshare.verify import SuiteResult, VerifyCase


def _read_csv(path):
    with open(path, "r", encoding="ascii", newline="") as handle:
        raw = handle.read()
    assert raw.endswith("\n") and "\r" not in raw
    lines = raw.splitlines()
    assert lines[0].startswith("# ")
    meta = dict(item.split("=", 1) for item in lines[0][2:].split(" "))
    header = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return meta, header, rows


def _column(header, rows, name, cast=float):
    idx = header.index(name)
    return [cast(row[idx]) for row in rows]


# --- config parsing -----------------------------------------------------------

def test_parse_config_basic_document():
    cfg = cli.parse_config("command = figure\nfigure = fig1\nN = 3\n")
    assert cfg.command == "figure"
    assert cfg.figure == "fig1"
    assert cfg.n == 3
    assert cfg.g is None and cfg.out is None


def test_parse_config_comments_and_blank_lines():
    text = "\n# full-line comment\ncommand = sweep  # trailing comment\n\nalpha2 = 0.5\n"
    cfg = cli.parse_config(text)
    assert cfg.command == "sweep"
    assert cfg.alpha2 == 0.5


def test_parse_config_unknown_key():
    with pytest.raises(UnknownKey):
        cli.parse_config("foo = 1\n")


def test_parse_config_errors_carry_line_numbers():
    with pytest.raises(ParseError) as info:
        cli.parse_config("command = figure\nthis line has no equals sign\n")
    assert info.value.line == 2
    with pytest.raises(ParseError) as info:
        cli.parse_config("N = three\n")
    assert "an integer" in str(info.value)
    with pytest.raises(ParseError) as info:
        cli.parse_config("alpha2 = much\n")
    assert "a number" in str(info.value)
    with pytest.raises(ParseError):
        cli.parse_config("figure = fig9\n")
    with pytest.raises(ParseError):
        cli.parse_config("parity = sideways\n")
    with pytest.raises(ParseError):
        cli.parse_config("command = dance\n")


def test_parse_config_parity_is_case_insensitive():
    assert cli.parse_config("parity = EVEN\n").parity is ParityKind.EVEN
    assert cli.parse_config("parity = Odd\n").parity is ParityKind.ODD


def test_flags_override_config_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    conf = tmp_path / "run.conf"
    conf.write_text("command = figure\nfigure = fig1\nN = 3\npoints = 9\n")
    code = cli.entrypoint(["--config", str(conf), "--N", "5", "--out", "a.csv"])
    assert code == 0
    meta, _, _ = _read_csv(tmp_path / "a.csv")
    assert meta["N"] == "5"
    assert meta["points"] == "9"


# --- figure content -------------------------------------------------------------

def test_fig1_peaks_at_quarter_period(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig1"]) == 0
    meta, header, rows = _read_csv(tmp_path / "fig1.csv")
    assert meta["N"] == "3" and meta["points"] == "801"
    assert header == ["Gt", "concurrence", "mean_photon"]
    gts = _column(header, rows, "Gt")
    cs = _column(header, rows, "concurrence")
    photons = _column(header, rows, "mean_photon")
    top = int(np.argmax(cs))
    assert math.isclose(gts[top], math.pi / 2.0, abs_tol=1e-12)
    assert math.isclose(cs[top], 2.0 / 3.0, abs_tol=1e-12)
    assert photons[top] < 1e-12
    # empty cavity exactly when sharing is maximal
    assert math.isclose(photons[0], 1.0, abs_tol=1e-15)


def test_fig2_surface_covers_both_axes(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig2a", "--points", "5"]) == 0
    meta, header, rows = _read_csv(tmp_path / "fig2a.csv")
    assert meta["parity"] == "odd"
    assert header == ["Gt", "intensity", "concurrence"]
    assert len(rows) == 5 * 61
    xs = sorted(set(_column(header, rows, "intensity")))
    assert xs[0] == 0.0 and xs[-1] == 6.0
    assert cli.entrypoint(["--figure", "fig2b", "--points", "5"]) == 0
    meta_b, _, _ = _read_csv(tmp_path / "fig2b.csv")
    assert meta_b["parity"] == "even"


def test_fig2c_pair_curve_saturates(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig2c"]) == 0
    meta, header, rows = _read_csv(tmp_path / "fig2c.csv")
    assert meta["parity"] == "odd"
    assert header == ["intensity", "max_concurrence", "N"]
    ns = _column(header, rows, "N", int)
    assert sorted(set(ns)) == [2, 3, 5, 10]
    pair_rows = [float(r[1]) for r in rows if int(r[2]) == 2]
    assert len(pair_rows) == 601
    assert all(math.isclose(c, 1.0, abs_tol=1e-12) for c in pair_rows)
    # larger ensembles sit at their sharing ceiling at zero intensity
    n3 = [(float(r[0]), float(r[1])) for r in rows if int(r[2]) == 3]
    assert math.isclose(n3[0][1], 2.0 / 3.0, abs_tol=1e-12)


def test_fig2d_even_curves_have_interior_maxima(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig2d"]) == 0
    meta, header, rows = _read_csv(tmp_path / "fig2d.csv")
    assert meta["parity"] == "even"
    for n in (3, 5, 10):
        cs = [float(r[1]) for r in rows if int(r[2]) == n]
        peak = int(np.argmax(cs))
        assert 0 < peak < len(cs) - 1
        assert cs[0] == 0.0  # vacuum even state carries no pair entanglement


def test_fig3_table_matches_closed_forms(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig3"]) == 0
    _, header, rows = _read_csv(tmp_path / "fig3.csv")
    assert header == ["intensity", "N", "max_concurrence_odd",
                      "max_concurrence_even", "two_over_N"]
    assert len(rows) == 4 * 9
    for row in rows:
        x, n = float(row[0]), int(row[1])
        odd, even, bound = float(row[2]), float(row[3]), float(row[4])
        p_odd = SystemParams(n_crystallites=n, intensity=x, parity=ParityKind.ODD)
        p_even = SystemParams(n_crystallites=n, intensity=x, parity=ParityKind.EVEN)
        assert odd == coherent_concurrence(p_odd, math.pi / 2.0)
        assert even == coherent_concurrence(p_even, math.pi / 2.0)
        assert bound == 2.0 / n
        assert even < odd <= bound + 1e-12


def test_fig4_stronger_loss_decays_faster(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig4"]) == 0
    meta, header, rows = _read_csv(tmp_path / "fig4.csv")
    assert header == ["Gt", "odd_gamma_0.13", "even_gamma_0.13",
                      "odd_gamma_0.5", "even_gamma_0.5"]
    assert meta["alpha2"] == "1" and meta["N"] == "3"
    assert len(rows) == 2401
    for soft, hard in (("odd_gamma_0.13", "odd_gamma_0.5"),
                       ("even_gamma_0.13", "even_gamma_0.5")):
        weak = _column(header, rows, soft)
        strong = _column(header, rows, hard)
        assert max(strong) < max(weak)
        # late-time revivals are suppressed much harder than the first peak
        third = len(rows) // 3
        assert max(strong[2 * third:]) < 0.5 * max(weak[2 * third:])


def test_fig4_rows_match_library_forms(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig4", "--points", "7",
                           "--t_stop", "3.0"]) == 0
    _, header, rows = _read_csv(tmp_path / "fig4.csv")
    for row in rows:
        gt = float(row[0])
        p = SystemParams(n_crystallites=3, decay_rate=0.5, intensity=1.0,
                         parity=ParityKind.EVEN)
        assert float(row[4]) == damped_concurrence(p, gt)


# --- sweep and optimize -----------------------------------------------------------

def test_sweep_lossless_uses_ideal_form(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--command", "sweep", "--N", "4", "--alpha2", "0.6",
                           "--parity", "even", "--points", "11"]) == 0
    meta, header, rows = _read_csv(tmp_path / "sweep.csv")
    assert meta["gamma_over_g"] == "0"
    p = SystemParams(n_crystallites=4, intensity=0.6, parity=ParityKind.EVEN)
    for row in rows:
        assert float(row[1]) == coherent_concurrence(p, float(row[0]))


def test_sweep_lossy_uses_damped_form(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--command", "sweep", "--gamma_over_g", "0.2",
                           "--points", "11", "--out", "lossy.csv"]) == 0
    _, header, rows = _read_csv(tmp_path / "lossy.csv")
    p = SystemParams(n_crystallites=3, decay_rate=0.2, intensity=1.0,
                     parity=ParityKind.ODD)
    for row in rows:
        assert float(row[1]) == damped_concurrence(p, float(row[0]))


def test_optimize_default_covers_small_ensembles(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--command", "optimize"]) == 0
    meta, header, rows = _read_csv(tmp_path / "optimize.csv")
    assert header == ["N", "parity", "intensity", "concurrence", "method",
                      "residual", "iterations"]
    assert meta["parity"] == "odd"
    assert [int(r[0]) for r in rows] == list(range(2, 11))
    assert rows[0][4] == "plateau"
    assert all(r[4] == "golden-section" for r in rows[1:])


def test_optimize_single_n_even(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--command", "optimize", "--N", "3",
                           "--parity", "even"]) == 0
    meta, header, rows = _read_csv(tmp_path / "optimize.csv")
    assert meta["N"] == "3"
    assert len(rows) == 1
    assert math.isclose(float(rows[0][3]), 1.0 / 3.0, abs_tol=1e-9)


# --- verify ------------------------------------------------------------------------

def test_verify_small_run_passes(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code = cli.entrypoint(["--command", "verify", "--points", "2",
                           "--t_stop", "0.8"])
    assert code == 0
    out = capsys.readouterr().out
    assert "0 fail, 0 skip" in out
    meta, header, rows = _read_csv(tmp_path / "verify.csv")
    assert header == ["case_id", "analytic", "oracle", "abs_error",
                      "tolerance", "status"]
    assert all(row[5] == "pass" for row in rows)
    suites = {row[0].split("/", 1)[0] for row in rows}
    assert suites == {"single_photon", "cat", "lindblad"}


def test_verify_capacity_overflow_exits_three(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code = cli.entrypoint(["--command", "verify", "--N", "12", "--points", "2",
                           "--t_stop", "0.8"])
    assert code == 3
    assert "2 skip" in capsys.readouterr().out
    _, _, rows = _read_csv(tmp_path / "verify.csv")
    assert sum(row[5] == "skip" for row in rows) == 2


def test_verify_failures_exit_two(tmp_path, monkeypatch, capsys):
    fake = SuiteResult(
        suite="single_photon",
        cases=[VerifyCase(case_id="single_photon/N=2/Gt=1/law", analytic=0.5,
                          oracle=0.4, abs_error=0.1, tolerance=1e-8,
                          status="fail")],
        pair_records=[],
    )
    monkeypatch.chdir(tmp_path)
    monkeypatch.setattr(cli.verify_mod, "run_all", lambda **kw: [fake])
    assert cli.entrypoint(["--command", "verify"]) == 2
    assert "1 fail" in capsys.readouterr().out


# --- exit codes and robustness ---------------------------------------------------

@pytest.mark.parametrize(
    "argv",
    [
        ["--config", "/nonexistent/path.conf"],
        ["--figure", "fig9"],
        ["--command", "dance"],
        ["--N", "three"],
        ["--alpha2", "much"],
        ["--parity", "sideways"],
        ["--N", "0"],
        ["--N", "-3"],
        ["--points", "1"],
        ["--t_stop", "-1.0"],
        ["--command", "sweep", "--gamma_over_g", "-0.5"],
        ["--not-a-flag"],
    ],
)
def test_bad_input_exits_one(tmp_path, monkeypatch, argv, capsys):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(argv) == 1
    assert "error:" in capsys.readouterr().err


def test_unwritable_output_exits_one(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    code = cli.entrypoint(["--figure", "fig3", "--out", "missing/dir/f.csv"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


# --- determinism -------------------------------------------------------------------

def test_identical_config_gives_identical_bytes(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--figure", "fig1", "--points", "101",
                           "--out", "run.csv"]) == 0
    shutil.copy(tmp_path / "run.csv", tmp_path / "first.csv")
    assert cli.entrypoint(["--figure", "fig1", "--points", "101",
                           "--out", "run.csv"]) == 0
    assert filecmp.cmp(tmp_path / "first.csv", tmp_path / "run.csv",
                       shallow=False)


def test_metadata_line_reruns_the_command(tmp_path, monkeypatch):
    # every key=value in the header is a valid flag assignment
    monkeypatch.chdir(tmp_path)
    assert cli.entrypoint(["--command", "sweep", "--N", "5", "--points", "11",
                           "--out", "first.csv"]) == 0
    meta, _, _ = _read_csv(tmp_path / "first.csv")
    argv = []
    for key, value in meta.items():
        if key == "out":
            value = "second.csv"
        argv.extend([f"--{key}", value])
    assert cli.entrypoint(argv) == 0
    with open(tmp_path / "first.csv", encoding="ascii") as f:
        body_a = f.read().splitlines()[1:]
    with open(tmp_path / "second.csv", encoding="ascii") as f:
        body_b = f.read().splitlines()[1:]
    assert body_a == body_b


# --- process-level smoke -----------------------------------------------------------

def test_module_invocation(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cavshare", "--command", "optimize", "--N", "4",
         "--out", str(tmp_path / "opt.csv")],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0, proc.stderr
    assert "wrote 1 rows" in proc.stdout


def test_console_script(tmp_path):
    exe = shutil.which("cavshare")
    assert exe, "console script should be installed"
    proc = subprocess.run(
        [exe, "--figure", "fig3", "--out", str(tmp_path / "t.csv")],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0, proc.stderr
