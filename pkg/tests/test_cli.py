"""Command-line interface: payload contents, formats, exit codes."""

import json
import math

import pytest

from stokes_unfold.cli import CSV_HEADER, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    return code, json.loads(out)


def as_complex(obj):
    return complex(obj["re"], obj["im"])


def test_invariants_half(capsys):
    code, rec = run_json(capsys, "invariants", "--nu", "0.5")
    assert code == 0
    assert rec["schema_version"] == "1"
    assert rec["command"] == "invariants"
    st0 = rec["payload"]["stokes_0"]
    assert as_complex(st0[0][2]) == pytest.approx(-1j * math.sqrt(math.pi), rel=1e-12)
    assert rec["payload"]["singular_directions"] == pytest.approx([0.0, math.pi])


def test_invariants_identity_case(capsys):
    code, rec = run_json(capsys, "invariants", "--nu", "-2")
    assert code == 0
    for key in ("stokes_0", "stokes_pi"):
        mat = rec["payload"][key]
        for i in range(3):
            for j in range(3):
                assert as_complex(mat[i][j]) == (1.0 if i == j else 0.0)
    assert rec["payload"]["singular_directions"] == []


def test_invariants_nu_one(capsys):
    code, rec = run_json(capsys, "invariants", "--nu", "1")
    assert code == 0
    assert as_complex(rec["payload"]["stokes_pi"][0][1]) == pytest.approx(2j * math.pi, rel=1e-12)


def test_invariants_complex_nu(capsys):
    code, rec = run_json(capsys, "invariants", "--nu", "0.5+0.25i")
    assert code == 0
    assert rec["params"]["nu"] == {"re": 0.5, "im": 0.25}


def test_parse_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["invariants", "--nu", "abc"])
    assert exc.value.code == 2


def test_perturbed_type_b(capsys):
    code, rec = run_json(capsys, "perturbed", "--nu", "2", "--n", "2")
    assert code == 0
    payload = rec["payload"]
    assert payload["resonance_class"] == "B"
    assert as_complex(payload["d_L2"]) == pytest.approx(-1.0, abs=1e-12)
    assert as_complex(payload["d_R3"]) == pytest.approx(-0.5, abs=1e-12)
    assert payload["infinity_relation_residual"] <= 1e-12


def test_perturbed_type_c_monodromy_pattern(capsys):
    code, rec = run_json(capsys, "perturbed", "--nu", "0.5", "--n", "2")
    assert code == 0
    payload = rec["payload"]
    assert payload["resonance_class"] == "C"
    m_r = payload["M_R"]
    assert as_complex(m_r[0][0]) == pytest.approx(1j, abs=1e-12)
    assert as_complex(m_r[1][1]) == pytest.approx(-1j, abs=1e-12)  # e^{3 pi i/2}
    assert as_complex(m_r[2][2]) == pytest.approx(1j, abs=1e-12)
    assert as_complex(m_r[1][0]) == 0 and as_complex(m_r[2][0]) == 0


def test_perturbed_odd_integer_nu_succeeds_as_type_b(capsys):
    code, rec = run_json(capsys, "perturbed", "--nu", "1", "--n", "2")
    assert code == 0
    assert rec["payload"]["resonance_class"] == "B"
    assert as_complex(rec["payload"]["d_L2"]) == pytest.approx(1.0, abs=1e-12)


def test_perturbed_invalid_regime_exit_code(capsys):
    code, rec = run_json(capsys, "perturbed", "--nu", "-3", "--n", "3")
    assert code == 3
    assert rec["error"]["exit_code"] == 3
    assert "message" in rec["error"]


def test_confluence_csv_format(capsys):
    code, out = run_cli(capsys, "confluence", "--nu", "2", "--n-min", "1", "--n-max", "5", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 6
    for line in lines[1:]:
        cells = line.split(",")
        assert len(cells) == 10
        assert float(cells[8]) <= 1e-12 and float(cells[9]) <= 1e-12


def test_confluence_csv_roundtrip(capsys):
    code, out = run_cli(capsys, "confluence", "--nu", "0.5", "--n-min", "1", "--n-max", "4", "--format", "csv")
    assert code == 0
    import stokes_unfold as su

    rows = su.confluence_table(0.5, 1, 4)
    for line, row in zip(out.strip().split("\n")[1:], rows):
        cells = line.split(",")
        assert float(cells[1]) == row.sqrt_eps  # 17 significant digits round-trip
        assert complex(float(cells[2]), float(cells[3])) == row.d_L2


def test_confluence_json_payload(capsys):
    code, rec = run_json(capsys, "confluence", "--nu", "-1", "--n-min", "2", "--n-max", "4")
    assert code == 0
    for row in rec["payload"]["rows"]:
        assert as_complex(row["d_L2"]) == 0
        assert as_complex(row["d_R3"]) == 0


def test_confluence_gnuplot_artifacts(tmp_path, capsys):
    prefix = str(tmp_path / "table")
    code, _ = run_cli(
        capsys, "confluence", "--nu", "0.5", "--n-min", "1", "--n-max", "5",
        "--format", "csv", "--gnuplot", prefix,
    )
    assert code == 0
    csv_text = (tmp_path / "table.csv").read_text()
    assert csv_text.startswith(CSV_HEADER)
    script = (tmp_path / "table.gp").read_text()
    assert "logscale" in script and "table.csv" in script


def test_confluence_output_deterministic(capsys):
    _, out1 = run_cli(capsys, "confluence", "--nu", "0.5", "--n-min", "1", "--n-max", "20", "--format", "csv")
    _, out2 = run_cli(capsys, "confluence", "--nu", "0.5", "--n-min", "1", "--n-max", "20", "--format", "csv")
    assert out1 == out2


def test_oracle_guard_exit(capsys):
    code, rec = run_json(capsys, "oracle", "--nu", "0.5", "--n", "50", "--which", "L")
    assert code == 4
    assert rec["error"]["exit_code"] == 4


def test_oracle_origin(capsys):
    code, rec = run_json(capsys, "oracle", "--nu", "0", "--which", "origin")
    assert code == 0
    payload = rec["payload"]
    assert payload["log_detected"] is False
    assert payload["max_invariant_error"] <= 1e-6
    for v in payload["eigenvalues_numeric"]:
        assert as_complex(v) == pytest.approx(1.0, abs=1e-6)


def test_oracle_perturbed_run(capsys):
    code, rec = run_json(capsys, "oracle", "--nu", "0.5", "--n", "1", "--which", "R", "--tol", "1e-8")
    assert code == 0
    assert rec["payload"]["log_detected"] is True
    assert rec["payload"]["log_expected"] is True
    assert rec["payload"]["max_invariant_error"] <= 1e-6


def test_check_filter_and_determinism(capsys):
    code, out1 = run_cli(capsys, "check", "--filter", "formal_series", "--seed", "42")
    assert code == 0
    rec = json.loads(out1)
    names = {r["name"] for r in rec["payload"]["results"]}
    assert names == {"borel_partial_sums", "series_residual", "terminating_series"}
    assert all(r["passed"] for r in rec["payload"]["results"])
    code2, out2 = run_cli(capsys, "check", "--filter", "formal_series", "--seed", "42")
    assert out1 == out2


def test_check_reports_known_rate_defect(capsys):
    # the declared -1 rate window fails (measured exponent is near -2) and
    # the command signals it through exit code 5
    code, rec = run_json(capsys, "check", "--filter", "confluence_convergence")
    assert code == 5
    results = rec["payload"]["results"]
    assert len(results) == 1
    assert results[0]["passed"] is False
    assert "fitted exponent" in results[0]["detail"]


def test_threads_env_cap(monkeypatch, capsys):
    monkeypatch.setenv("STOKES_UNFOLD_THREADS", "2")
    _, out1 = run_cli(capsys, "confluence", "--nu", "2", "--n-min", "1", "--n-max", "80", "--format", "csv")
    monkeypatch.delenv("STOKES_UNFOLD_THREADS")
    _, out2 = run_cli(capsys, "confluence", "--nu", "2", "--n-min", "1", "--n-max", "80", "--format", "csv")
    assert out1 == out2


def test_threads_env_garbage_falls_back(monkeypatch):
    from stokes_unfold.confluence import thread_count

    monkeypatch.setenv("STOKES_UNFOLD_THREADS", "not-a-number")
    assert thread_count() >= 1


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run(
        [sys.executable, "-m", "stokes_unfold.cli", "invariants", "--nu", "0.5"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0
    rec = json.loads(proc.stdout)
    assert rec["command"] == "invariants"
