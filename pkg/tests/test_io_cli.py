import json
import math
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypersqueeze import io as hio
from hypersqueeze.cli import ConfigError, main, parse_grid, parse_number
from hypersqueeze.coset import SqueezeParams
from hypersqueeze.fock import FockBasis, fidelity
from hypersqueeze.squeeze import squeezed_vacuum_closed_form


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_number():
    assert parse_number("0.25") == 0.25
    assert parse_number("pi/2") == pytest.approx(math.pi / 2)
    assert parse_number("-2*pi/3") == pytest.approx(-2 * math.pi / 3)
    for bad in ("__import__('os')", "pi**2", "x", "1/"):
        with pytest.raises(ConfigError):
            parse_number(bad)


def test_parse_grid():
    assert parse_grid("1.5") == [1.5]
    assert parse_grid("0,1,2") == [0, 1, 2]
    assert parse_grid("0:1:0.25") == pytest.approx([0, 0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ConfigError):
        parse_grid("0:1:0")


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_format_value_round_trips(x):
    assert float(hio.format_value(x)) == x


def test_state_csv_round_trip(tmp_path):
    p = SqueezeParams(0.7, 0.4, 1.1, 2.0)
    b = FockBasis(4, 8)
    state = squeezed_vacuum_closed_form(p, b).state
    path = tmp_path / "s.csv"
    hio.write_state_csv(state, path, {"rho": p.rho})
    back = hio.read_state_csv(path, b)
    assert np.array_equal(back.amplitudes, state.amplitudes)
    meta, _ = hio.read_csv_table(path)
    assert meta["rho"] == 0.7


def test_json_nan_becomes_null():
    text = hio.render_json([{"x": float("nan"), "z": 1 + 2j}])
    doc = json.loads(text)
    assert doc["rows"][0] == {"x": None, "z": [1.0, 2.0]}


def test_schema_line_required(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        hio.read_csv_table(path)


def test_algebra_passes_and_echoes_margin(tmp_path, capsys):
    out = tmp_path / "alg.csv"
    code, _, err = run(["algebra", "--cutoff", "4", "--margin", "2", "--out", str(out)], capsys)
    assert code == 0, err
    meta, rows = hio.read_csv_table(out)
    assert meta["margin"] == 2 and meta["cutoff"] == 4
    assert all(r["passed"] for r in rows)


def test_algebra_corruption_fails(capsys):
    code, _, err = run(["algebra", "--cutoff", "4", "--corrupt"], capsys)
    assert code == 1
    assert "FAILED" in err


def test_bad_margin_is_config_error(capsys):
    code, _, err = run(["algebra", "--margin", "1"], capsys)
    assert code == 2
    assert "margin" in err


def test_infeasible_cutoff_names_requirement(capsys):
    code, _, err = run(["vacuum", "--rho", "4", "--epsilon", "1e-12"], capsys)
    assert code == 2
    assert "N=" in err


def test_unknown_flag_exit_code(capsys):
    code, _, _ = run(["stats", "--bogus"], capsys)
    assert code == 2


def test_vacuum_all_routes(tmp_path, capsys):
    stem = tmp_path / "vac"
    code, _, err = run(["vacuum", "--rho", "0.6", "--chi", "0.3", "--theta", "1.0", "--phi", "0.5",
                        "--route", "all", "--out", str(stem)], capsys)
    assert code == 0, err
    _, fids = hio.read_csv_table(f"{stem}.fidelity.csv")
    assert min(r["fidelity"] for r in fids) >= 1 - 1e-7
    sidecar = json.loads((tmp_path / "vac.json").read_text())
    b = FockBasis(4, sidecar["cutoff"])
    numeric = hio.read_state_csv(f"{stem}.numeric.csv", b)
    closed = hio.read_state_csv(f"{stem}.closed.csv", b)
    assert fidelity(numeric, closed) >= 1 - 1e-7


def test_reruns_are_byte_identical(tmp_path, capsys):
    paths = [tmp_path / f"run{i}.csv" for i in range(2)]
    for path in paths:
        assert run(["sweep", "--count", "2", "--rho-max", "0.6", "--out", str(path)], capsys)[0] == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nrho = 2.0\nsmax = 3\n")
    out = tmp_path / "stats.csv"
    assert run(["stats", "--config", str(cfg), "--rho", "3.0", "--out", str(out)], capsys)[0] == 0
    meta, rows = hio.read_csv_table(out)
    assert meta["smax"] == 3
    assert rows[0]["rho"] == 3.0
    assert rows[0]["argmax_2S"] == 4
    assert "P(2S=3)" in rows[0] and "P(2S=4)" not in rows[0]


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("nonsense = 1\n")
    assert run(["stats", "--config", str(cfg)], capsys)[0] == 2


def test_stats_surface(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code, _, _ = run(["stats", "--rho", "2.0", "--chi", "0,pi/2", "--theta", "pi/2", "--out", str(out)], capsys)
    assert code == 0
    _, rows = hio.read_csv_table(out)
    assert [r["argmax_2S"] for r in rows] == [1, 1]
    assert rows[0]["J(n_a,n_d)"] == pytest.approx(0.0, abs=1e-12)
    assert rows[1]["J(n_a,n_d)"] == pytest.approx(1.0)


def test_entropy_rows(tmp_path, capsys):
    out = tmp_path / "ent.json"
    code, _, _ = run(["entropy", "--rho", "0:1:0.5", "--spectral", "--format", "json", "--out", str(out)],
                     capsys)
    assert code == 0
    rows = json.loads(out.read_text())["rows"]
    assert [r["rho"] for r in rows] == [0.0, 0.5, 1.0]
    assert rows[0]["entropy_so41"] == 0.0
    for r in rows:
        assert r["entropy_so41_spectral"] == pytest.approx(r["entropy_so41"], abs=1e-6)
        assert r["so41_ge_so21"]


def test_decompose_grid(capsys):
    code, out, _ = run(["decompose", "--rho", "0,1", "--chi", "0.5", "--theta", "pi", "--phi", "1"], capsys)
    assert code == 0
    assert out.startswith(f"# {hio.SCHEMA}")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "hypersqueeze", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "algebra" in res.stdout
