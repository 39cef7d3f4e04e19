import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from ewldyn import Werner, XState, concurrence_x, construct_initial, entropy
from ewldyn.audit import corpus_audit, run_audits
from ewldyn.cli import SWEEP_HEADER, TRAJECTORY_HEADER, fmt, main
from ewldyn.oracles import lindblad_reference
from ewldyn.solutions import PRINTED
from ewldyn.states import ReservoirParams

LN4 = math.log(4.0)


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


def test_simulate_decoupled_singlet(capsys):
    code, out, _ = run(["simulate", "--state", "ewl-phi", "--r", "1", "--alpha2", "0.5",
                        "--theta", "3.141592653589793", "--steps", "50"], capsys)
    assert code == 0
    head, data = table(out)
    assert tuple(head) == TRAJECTORY_HEADER
    np.testing.assert_allclose(data[:, head.index("concurrence")], 1.0, atol=1e-9)
    np.testing.assert_allclose(data[:, head.index("entropy")], 0.0, atol=1e-9)


def test_simulate_maximally_mixed(capsys):
    # I/4 is not stationary at zero temperature: only its sub-radiant quarter is.
    code, out, _ = run(["simulate", "--state", "werner", "--r", "0", "--steps", "20"], capsys)
    head, data = table(out)
    s = data[:, head.index("entropy")]
    assert s[0] == pytest.approx(LN4, abs=1e-12)
    np.testing.assert_allclose(data[:, head.index("concurrence")], 0.0, atol=1e-12)
    params = ReservoirParams.strong_coupling()
    ref = lindblad_reference(construct_initial(Werner(0.0)), params, data[:, 0])
    np.testing.assert_allclose(s, [entropy(XState.from_vector(v)) for v in ref], atol=1e-10)


def test_simulate_bell_psi_first_row(capsys):
    _, out, _ = run(["simulate", "--state", "bell-psi", "--alpha2", "0.05", "--steps", "3"], capsys)
    head, data = table(out)
    row = dict(zip(head, data[0]))
    assert row["a"] == pytest.approx(0.05) and row["d"] == pytest.approx(0.95)
    assert math.hypot(row["re_w"], row["im_w"]) == pytest.approx(0.2179449, abs=1e-7)


def test_simulate_round_trip(capsys):
    _, out, _ = run(["simulate", "--state", "bell-psi", "--alpha2", "0.05", "--steps", "200",
                     "--tmax", "60"], capsys)
    head, data = table(out)
    for row in data:
        r = dict(zip(head, row))
        x = XState(r["a"], r["b"], r["c"], r["d"], complex(r["re_w"], r["im_w"]),
                   complex(r["re_z"], r["im_z"]))
        assert concurrence_x(x) == pytest.approx(r["concurrence"], abs=1e-12)
        assert entropy(x) == pytest.approx(r["entropy"], abs=1e-12)


def test_simulate_raw_time_unit(capsys):
    _, out, _ = run(["simulate", "--state", "werner", "--r", "0.5", "--steps", "3", "--tmax", "100",
                     "--time-unit", "raw"], capsys)
    head, data = table(out)
    assert head[0] == "t"
    np.testing.assert_allclose(data[:, 0], [0.0, 0.5, 1.0])


def test_simulate_json(capsys):
    _, out, _ = run(["simulate", "--state", "werner", "--r", "0.5", "--steps", "3",
                     "--format", "json"], capsys)
    doc = json.loads(out)
    assert doc["columns"] == list(TRAJECTORY_HEADER) and len(doc["rows"]) == 3


def test_deterministic_files(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["simulate", "--state", "ewl-psi", "--r", "0.7", "--alpha2", "0.3",
                     "--theta", "1.1", "--steps", "100", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"state": "bell-psi", "alpha2": 0.05, "steps": 3}))
    _, out, _ = run(["simulate", "--config", str(cfg), "--alpha2", "0.2"], capsys)
    head, data = table(out)
    assert data.shape[0] == 3 and data[0, head.index("a")] == pytest.approx(0.2)


def test_raw_x_state(capsys):
    code, out, _ = run(["simulate", "--state", "raw-x", "--x", "0.4,0.3,0.2,0.1,0.1,0,0.05,0.05",
                        "--steps", "2"], capsys)
    assert code == 0
    head, data = table(out)
    np.testing.assert_allclose(data[0, 1:9], [0.4, 0.3, 0.2, 0.1, 0.1, 0, 0.05, 0.05], atol=1e-15)


@pytest.mark.parametrize("args", [
    ["simulate", "--r", "2"],
    ["simulate", "--steps", "1"],
    ["simulate", "--tmax", "-1"],
    ["simulate", "--state", "raw-x"],
    ["simulate", "--state", "raw-x", "--x", "1,2"],
    ["sweep", "--state", "werner", "--axis", "alpha2"],
    ["events", "--state", "bell-psi", "--alpha2", "0.05", "--steps", "5", "--tmax", "100"],
])
def test_config_errors_exit_2(args, capsys):
    code, _, err = run(args, capsys)
    assert code == 2 and err.startswith("error:")


def test_bad_config_file(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"colour": 1}')
    assert run(["simulate", "--config", str(cfg)], capsys)[0] == 2


def test_no_partial_file_on_error(tmp_path):
    out = tmp_path / "x.csv"
    assert main(["simulate", "--r", "2", "--out", str(out)]) == 2
    assert not out.exists() and list(tmp_path.iterdir()) == []


def test_sweep_psi_boundary(capsys):
    code, out, _ = run(["sweep", "--state", "ewl-psi", "--alpha2", "0.5", "--axis", "r",
                        "--values", "1,0.3333333333333333,0", "--steps", "3", "--tmax", "2"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == SWEEP_HEADER
    first = {(float(r[1]), float(r[2])): float(r[3]) for r in rows[1:]}
    assert first[(1.0, 0.0)] == pytest.approx(1.0, abs=1e-12)
    assert first[(1 / 3, 0.0)] == pytest.approx(0.0, abs=1e-12)
    assert [r[0] for r in rows[1:]] == ["r"] * 9


def test_events_reports(capsys):
    _, out, _ = run(["events", "--state", "bell-psi", "--alpha2", "0.05", "--tmax", "100"], capsys)
    doc = json.loads(out)
    assert doc["dark_periods"] and doc["revivals"] >= 1
    _, out, _ = run(["events", "--state", "bell-phi", "--alpha2", "0.5", "--theta", "0",
                     "--tmax", "100"], capsys)
    doc = json.loads(out)
    assert doc["dark_periods"] and all(a == b for a, b in doc["dark_periods"])
    _, out, _ = run(["events", "--state", "ewl-phi", "--theta-pi", "1", "--r", "0.6"], capsys)
    assert json.loads(out)["stationary_concurrence"] == pytest.approx(0.7, abs=1e-9)
    _, out, _ = run(["events", "--state", "ewl-psi", "--r", "0.2"], capsys)
    doc = json.loads(out)
    assert doc["stationary_concurrence"] == pytest.approx(0.2) and "r/4" in doc["notes"][0]


def test_json_keeps_full_precision():
    assert float(fmt(0.1 + 0.2)) == 0.1 + 0.2
    assert fmt(float("nan")) == "null" and fmt(-0.0) == "0"


def test_verify_default(capsys):
    code, out, _ = run(["verify"], capsys)
    assert code == 0
    assert out.count("applied") == 4 and "not applied" not in out
    assert "FAIL" not in out


def test_verify_printed_fails(capsys):
    code, out, _ = run(["verify", "--no-corrections"], capsys)
    assert code == 4
    line = next(x for x in out.splitlines() if "trace psi" in x)
    assert line.startswith("FAIL") and "deficit 0.25 at r=0" in line


def test_verify_transform_corpus(capsys):
    code, out, _ = run(["verify", "--transform-corpus"], capsys)
    assert code == 0 and out.count("corpus") == 8


def test_audit_api():
    params = ReservoirParams.strong_coupling()
    assert all(r.passed for r in run_audits(params, dual=False))
    assert not all(r.passed for r in run_audits(params, PRINTED, dual=False))
    assert all(r.passed for r in corpus_audit())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ewldyn", "simulate", "--r", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "r must lie in [0, 1]" in proc.stderr
