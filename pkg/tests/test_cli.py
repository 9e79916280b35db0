import csv
import json

import pytest

from ptwell.cli import main


@pytest.fixture
def specs(tmp_path):
    paths = {}
    for name, data in {
        "harmonic": {"v0": [[1, 2]], "w": [[1, 1]], "e0": 1},
        "shifted": {"v0": [[1, 2]], "w": [[1, 1]], "e0": 0.31},
        "double": {"v0": [[1, 0], [-2, 2], [1, 4]], "w": [[1, 1]], "e0": 0.5},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        paths[name] = str(p)
    return paths


def _read_csv(path):
    with open(path) as fh:
        rows = [r for r in fh if not r.startswith("#")]
    return list(csv.DictReader(rows))


def test_spectrum(specs, tmp_path):
    out = tmp_path / "s.csv"
    assert main(["spectrum", "--spec", specs["harmonic"], "--eps", "0", "--h", "0.1", "--window", "0.05", "0.65", "--out", str(out)]) == 0
    rows = _read_csv(out)
    assert [int(r["k"]) for r in rows] == [0, 1, 2]
    assert [float(r["E_bs_re"]) for r in rows] == pytest.approx([0.1, 0.3, 0.5], abs=1e-12)
    assert [float(r["E_shoot_re"]) for r in rows] == pytest.approx([0.1, 0.3, 0.5], abs=1e-6)


def test_certify(specs, tmp_path):
    out = tmp_path / "c.json"
    rc = main(["certify", "--spec", specs["shifted"], "--eps", "0.2", "--h", "0.1", "--rect", "0.05", "0.55", "-0.1", "0.1", "--out", str(out)])
    assert rc == 0
    d = json.loads(out.read_text())
    assert d["match"] is True and d["zero_count"] == 3
    assert d["real_zeros"] == pytest.approx([0.11, 0.31, 0.51], abs=1e-5)


def test_double_well_exit(specs, capsys):
    assert main(["spectrum", "--spec", specs["double"], "--h", "0.1"]) == 2
    assert "SingleWellViolation" in capsys.readouterr().err


def test_numerical_failure_exit(specs, capsys):
    # winding contour through the eigenvalue 0.1
    rc = main(["certify", "--spec", specs["harmonic"], "--h", "0.1", "--rect", "0.1", "0.2", "-0.05", "0.05"])
    assert rc == 3
    assert "ZeroOnBoundary" in capsys.readouterr().err


def test_action_and_determinism(specs, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["action", "--spec", specs["harmonic"], "--eps", "0.2", "--window", "0.8", "1.2", "--samples", "5", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = _read_csv(a)
    assert len(rows) == 5
    assert float(rows[2]["I_re"]) == pytest.approx(3.14159265358979 * 0.99, abs=1e-12)


def test_wkb_output(specs, tmp_path):
    out = tmp_path / "w.csv"
    assert main(["wkb", "--spec", specs["harmonic"], "--h", "0.1", "--order", "1", "--out", str(out)]) == 0
    text = out.read_text().splitlines()
    assert text[0].startswith("# residual_order N=0")
    rows = _read_csv(out)
    assert {"x", "a0_re", "a1_im", "phase_im", "log_abs_u"} <= set(rows[0])


def test_stokes_output(specs, tmp_path):
    out = tmp_path / "st.json"
    assert main(["stokes", "--spec", specs["harmonic"], "--energy", "1", "--out", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["connections"] == 1 and len(d["lines"]) == 6
    assert {"kind", "start", "dir", "points", "termination"} <= set(d["lines"][0])


def test_bad_h(specs, capsys):
    assert main(["spectrum", "--spec", specs["harmonic"], "--h", "-0.1"]) == 2
