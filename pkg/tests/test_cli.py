import json
import math
from fractions import Fraction

import numpy as np
import pytest

from cli.config import RunConfig, load_config, merge_flags, parse_complex
from cli.main import COMMANDS, build_parser, run
from cli.report import to_jsonable
from core.errors import ConfigError, QuadratureFailure

DIVISOR = ["zeta", "divisor", "--case", "3", "--k", "1", "--l", "1", "--trS0", "1"]


def read_report(path):
    return json.loads(path.read_text())


def test_divisor_report(tmp_path):
    out = tmp_path / "div.json"
    assert run(DIVISOR + ["--out", str(out)]) == 0
    doc = read_report(out)
    assert doc["schema"] == 1 and "wall_time_s" in doc["header"]
    res = doc["body"]["results"]
    assert res["entries"][0] == {"location": -1, "residue": {"num": 2, "den": 3}}
    assert res["entries"][2] == {"location": -3, "residue": {"num": -1, "den": 3}}
    assert res["root_order"] == 3 and res["case_root_order"] == 6
    assert doc["body"]["command"] == "zeta divisor"
    assert doc["body"]["provenance"]["n_min"] == -6


def test_report_to_stdout(capsys):
    assert run(DIVISOR) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["body"]["results"]["entries"]) == 7


def test_bodies_are_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(DIVISOR + ["--out", str(a)]) == 0
    assert run(DIVISOR + ["--out", str(b)]) == 0
    assert read_report(a)["body"] == read_report(b)["body"]


def test_csv_report(tmp_path):
    out = tmp_path / "div.csv"
    assert run(DIVISOR + ["--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# ")
    assert "# command: zeta divisor" in lines
    data = [l for l in lines if not l.startswith("#")]
    assert len(data) == 2 and "case_root_order" in data[0].split(",")


def test_verify_identity(tmp_path):
    out = tmp_path / "v.json"
    assert run(["group", "verify-identity", "--d", "1", "--out", str(out)]) == 0
    res = read_report(out)["body"]["results"]
    assert res["residual"] == "0" and res["holds"] is True
    assert (res["k_inf"], res["l_inf"], res["index"], res["classes"]) == (1, 1, 2, 4)


def test_lattice_sum_below_one(tmp_path):
    out = tmp_path / "l.json"
    assert run(["lattice", "lsum", "--tau", "i", "--u", "0.5", "--v", "0", "--xmax", "0", "--out", str(out)]) == 0
    res = read_report(out)["body"]["results"]
    assert res["value"] == [0.0, 0.0] and res["points"] == 0


def test_geom_classify(capsys):
    assert run(["geom", "classify", "--matrix", "2,0,0,1/2"]) == 0
    res = json.loads(capsys.readouterr().out)["body"]["results"]
    assert res["kind"] == "loxodromic" and res["N"] == pytest.approx(4)


@pytest.mark.parametrize("argv", [
    ["zeta", "divisor", "--case", "4", "--k", "1"],
    ["group", "verify-identity", "--d", "2"],
    ["geom", "classify", "--matrix", "1,2,3"],
    ["zeta", "divisor", "--n-min", "0"],
])
def test_invalid_input_exit_code(argv, capsys):
    assert run(argv) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_budget_exit_code(monkeypatch):
    monkeypatch.delenv("KLEINIAN_MAX_ELEMENTS", raising=False)
    assert run(["group", "enumerate", "--height", "100"]) == 4


def test_numerical_failure_exit_code(monkeypatch):
    def boom(cfg, x):
        raise QuadratureFailure("no convergence")
    _, flags = COMMANDS[("zeta", "cusp-integral")]
    monkeypatch.setitem(COMMANDS, ("zeta", "cusp-integral"), (boom, flags))
    assert run(["zeta", "cusp-integral"]) == 3


def test_parser_knows_every_command():
    parser = build_parser()
    for area, leaf in COMMANDS:
        ns = parser.parse_args([area, leaf])
        assert (ns.area, ns.leaf) == (area, leaf)
    with pytest.raises(SystemExit):
        parser.parse_args(["zeta"])


def test_ini_config(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[bounds]\nn_min = -3\nheight = 2\n[group]\nd = 3\n[logging]\nlevel = debug\n")
    cfg = load_config(ini)
    assert (cfg.n_min, cfg.height, cfg.d, cfg.log_level) == (-3, 2, 3, "debug")
    cfg.validate()
    out = tmp_path / "div.json"
    assert run(["zeta", "divisor", "--case", "2", "--k", "1", "--config", str(ini), "--out", str(out)]) == 0
    assert len(read_report(out)["body"]["results"]["entries"]) == 4


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text("[network]\nport = 1\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    bad.write_text("[bounds]\nradius = 1\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    bad.write_text("[bounds]\nheight = tall\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.ini")
    with pytest.raises(ConfigError):
        RunConfig(rep=str(tmp_path / "none.json")).validate()
    with pytest.raises(ConfigError):
        RunConfig(kl_tol=2.0).validate()


def test_merge_flags():
    cfg = merge_flags(RunConfig(), {"d": 3, "case": 2, "k": None})
    assert cfg.d == 3 and cfg.extra == {"case": 2}


def test_parse_complex():
    assert parse_complex("i") == 1j
    assert parse_complex("exp(i*pi/3)") == pytest.approx(complex(0.5, math.sqrt(3) / 2))
    assert parse_complex("0.5+0.25*i") == pytest.approx(0.5 + 0.25j)
    with pytest.raises(ConfigError):
        parse_complex("1 +* 2")


def test_to_jsonable():
    obj = {"f": Fraction(2, 3), "z": 1 + 2j, "a": np.arange(2), "n": float("nan"), 3: np.bool_(True)}
    assert to_jsonable(obj) == {"f": {"num": 2, "den": 3}, "z": [1.0, 2.0], "a": [0, 1], "n": "nan", "3": True}


def test_csv_rows_split_complex_columns(tmp_path):
    out = tmp_path / "cusp.csv"
    assert run(["zeta", "cusp-integral", "--s", "2", "--t", str(math.pi), "--format", "csv", "--out", str(out)]) == 0
    data = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    header = data[0].split(",")
    assert {"s_re", "s_im", "value_re", "value_im", "quadrature_re", "difference"} <= set(header)
    assert len(data) == 2
