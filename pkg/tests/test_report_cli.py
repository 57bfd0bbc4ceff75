import csv
import io
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from qcoherence.cli import main, parse_range
from qcoherence.errors import BadRange
from qcoherence.report import Check, VerificationReport, at_least, equal, info, report_schema, worst
from qcoherence.verify import run_suite


def test_check_margins():
    assert equal("a", "x", 1.0, 1.0 + 1e-12, 1e-9).passed
    assert not equal("a", "x", 1.0, 1.1, 1e-9).passed
    g = at_least("b", "x", 0.5, 0.6, 1e-9)
    assert np.isclose(g.margin, -0.1) and not g.passed
    i = info("c", "x", 3.0, 1.0)
    assert i.passed and i.tolerance is None
    w = worst("d", "x", "le", [(0.1, 1.0), (0.9, 1.0)], 1e-9)
    assert np.isclose(w.lhs, 0.9) and w.passed and "worst of 2" in w.note


def test_report_roundtrip_and_schema():
    rep = run_suite("dilation", 3)
    doc = json.loads(rep.to_json())
    jsonschema.validate(doc, report_schema())
    back = VerificationReport.from_json(rep.to_json())
    assert back.to_json() == rep.to_json()
    assert all(isinstance(c, Check) for c in back.checks)
    timed = json.loads(rep.to_json(timing=True))
    jsonschema.validate(timed, report_schema())
    assert "wall_clock_seconds" in timed and "wall_clock_seconds" not in doc


def test_parse_range():
    assert parse_range("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert len(parse_range("0:1:0.1")) == 11
    for bad in ("0:1:0", "0:1:-1", "1:0:0.1", "a:b:c", "0:1"):
        with pytest.raises(BadRange):
            parse_range(bad)


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_measure_presets(capsys):
    code, out = run(["measure", "--preset", "plus"], capsys)
    assert code == 0 and np.isclose(json.loads(out.out)["C_re"], 1.0)
    code, out = run(["measure", "--preset", "maxcoh:4"], capsys)
    assert np.isclose(json.loads(out.out)["C_re"], 2.0)


def test_measure_state_file(tmp_path, capsys):
    path = tmp_path / "rho.json"
    path.write_text(json.dumps({"matrix": [[0.5, 0.25], [0.25, 0.5]]}))
    code, out = run(["measure", "--state", str(path), "--format", "table"], capsys)
    assert code == 0 and "0.188721875541" in out.out


def test_input_errors_exit_3(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"matrix": [[1.0, 0.0], [0.0, 1.0]]}))
    code, out = run(["measure", "--state", str(path)], capsys)
    assert code == 3 and "NotUnitTrace" in out.err
    code, out = run(["scan", "--target", "zyz-power", "--range", "0:1:0"], capsys)
    assert code == 3 and "BadRange" in out.err


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["measure", "--bogus"])
    assert exc.value.code == 2


def test_decohering_power_echoes_mode(capsys):
    code, out = run(["decohering-power", "--channel", "bit_flip:0.3"], capsys)
    doc = json.loads(out.out)
    assert doc["mode"] == "free"
    code, out = run(["decohering-power", "--channel", "bit_flip:0.3", "--mset", "canonical"], capsys)
    assert json.loads(out.out)["mode"] == "canonical" and abs(json.loads(out.out)["decohering_power"]) < 1e-9


def test_scan_phaseflip(capsys):
    code, out = run(["scan", "--target", "phaseflip-decohering", "--range", "0:1:0.1", "--mset", "canonical"],
                    capsys)
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert code == 0 and len(rows) == 11
    assert float(rows[5]["p"]) == 0.5 and np.isclose(float(rows[5]["decohering_power"]), 1.0)


def test_scan_adc_matches_closed_form(capsys):
    code, out = run(["scan", "--target", "adc-supcohering", "--range", "0:1:0.05"], capsys)
    rows = list(csv.DictReader(io.StringIO(out.out)))
    assert len(rows) == 21
    for r in rows:
        assert np.isclose(float(r["sup_cohering_power"]), float(r["closed_form"]), atol=1e-9)


def test_scan_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QCOHERENCE_OUTPUT_DIR", str(tmp_path))
    code, _ = run(["scan", "--target", "zyz-power", "--range", "0:3.14159:0.5", "--output", "z.csv"], capsys)
    first = (tmp_path / "z.csv").read_bytes()
    run(["scan", "--target", "zyz-power", "--range", "0:3.14159:0.5", "--output", "z.csv"], capsys)
    assert code == 0 and first == (tmp_path / "z.csv").read_bytes()


def test_verify_json_is_byte_identical(capsys):
    _, a = run(["verify", "--suite", "cohering", "--seed", "7", "--format", "json"], capsys)
    _, b = run(["verify", "--suite", "cohering", "--seed", "7", "--format", "json"], capsys)
    assert a.out == b.out
    jsonschema.validate(json.loads(a.out), report_schema())


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = VerificationReport("cohering", [equal("x", "y", 0.0, 1.0, 1e-9)], {"seed": 7})
    monkeypatch.setattr("qcoherence.cli.run_suite", lambda *a: failing)
    code, out = run(["verify", "--suite", "cohering"], capsys)
    assert code == 1 and "FAIL" in out.out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qcoherence.cli", "cohering-power", "--gate", "H"],
                          capture_output=True, text=True, check=True)
    assert np.isclose(json.loads(proc.stdout)["cohering_power"], 1.0)
