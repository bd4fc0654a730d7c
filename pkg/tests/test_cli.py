import io
import json
import subprocess
import sys

import pytest

from qradial import catalog, cli
from qradial.errors import IdenticallySingular
from qradial.parser import parse_scalar
from qradial.radial import RegularityCondition, pi, restrict_counit
from qradial.scalar import laurent, one, qpow

from conftest import q

CASIMIR = "(q^-1*K[2] + q*K[-2] - 2) * (q - q^-1)^-2 + E1*F1"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(argv, out, err)
    text = out.getvalue() or err.getvalue()
    return code, json.loads(text)


@pytest.fixture
def write(tmp_path):
    def _write(name, data):
        p = tmp_path / name
        p.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return str(p)
    return _write


def test_radial_counit_sl2(write):
    cfg = write("sl2.json", {
        "catalog": "sl2",
        "s": ["q^(1/2)*(1/a - a)/(1/q - q)"],
        "t": ["q^(1/2)*(1/b - b)/(1/q - q)"],
        "expr": CASIMIR,
    })
    code, doc = run(["radial", "--config", cfg, "--counit"])
    assert code == 0
    assert doc["schema"] == 1
    shifts = {tuple(s["mu"]): parse_scalar(s["matrix"][0][0]) for s in doc["operator"]["shifts"]}
    a, b = laurent({"a": 1}), laurent({"b": 1})
    u = qpow(1)
    ctx = catalog.context("sl2", s=[u * (1 / a - a) / (1 / q - q)], t=[u * (1 / b - b) / (1 / q - q)])
    op = restrict_counit(pi(ctx, catalog.casimir_sl2(ctx.alg)))
    assert shifts == {k: m[0][0] for k, m in op.terms.items()}
    z2 = qpow(0, [4])
    f = ((1 + z2 * q * q * a * b) * (1 + z2 * q * q / (a * b)) * (1 - z2 * q * q * a / b) * (1 - z2 * q * q * b / a)
         / ((1 - z2 * z2 * q * q) * (1 - z2 * z2 * q ** 4)))
    assert shifts[(2,)] * q * (q - 1 / q) ** 2 == f


def test_verify_sl3(write):
    cfg = write("sl3.json", {"catalog": "sl3"})
    code, doc = run(["verify", "--config", cfg, "--expr", "F1*F2"])
    assert (code, doc["match"]) == (0, True)
    code, doc = run(["verify", "--config", cfg, "--word", "2,1,1", "--shift", "2"])
    assert (code, doc["match"]) == (0, True)


def test_verify_mismatch(write, monkeypatch):
    cfg = write("sl3.json", {"catalog": "sl3"})
    monkeypatch.setattr(cli, "expand_to_uq", lambda ctx, d: ctx.alg.zero())
    code, doc = run(["verify", "--config", cfg, "--expr", "F1*F2"])
    assert (code, doc["match"]) == (5, False)


def test_malformed_json(write):
    cfg = write("bad.json", '{"catalog": sl3')
    assert run(["verify", "--config", cfg, "--expr", "F1"])[0] == 4


@pytest.mark.parametrize("data", [
    {"catalog": "e8"},
    {"catalog": "sl2", "colour": 1},
    {"cartan": [[2, 1], [1, 2]]},
    {"cartan": [[2, -1], [-1, 2]], "tau": [1, 1]},
    {"cartan": [[2, -1], [-1, 2]], "symmetrizer": [1, 2]},
    {"catalog": "sl2", "c": [1, 2]},
    {"catalog": "sl2", "c": "1"},
    {"X": []},
    [1, 2],
])
def test_invalid_configs(write, data):
    cfg = write("c.json", data)
    code, doc = run(["iwasawa", "--config", cfg, "--expr", "F1"])
    assert code == 4
    assert doc["error"] == "config"


def test_missing_config_and_expr(write):
    assert run(["radial"])[0] == 4
    cfg = write("sl2.json", {"catalog": "sl2"})
    assert run(["radial", "--config", cfg])[0] == 4
    assert run(["radial", "--config", cfg, "--word", "1", "--shift", "0,0"])[0] == 4
    assert run(["radial", "--config", cfg, "--word", "x"])[0] == 4


def test_parse_error_exit(write):
    cfg = write("sl2.json", {"catalog": "sl2"})
    code, doc = run(["iwasawa", "--config", cfg, "--expr", "E1 +"])
    assert code == 2
    assert doc["position"] == 4
    assert run(["iwasawa", "--config", cfg, "--expr", "E3"])[0] == 4


def test_singular_exit(write, monkeypatch):
    cfg = write("sl2.json", {"catalog": "sl2", "expr": "F1"})

    def boom(*args, **kwargs):
        raise IdenticallySingular((1,))

    monkeypatch.setattr(cli, "pi", boom)
    assert run(["radial", "--config", cfg])[0] == 3
    monkeypatch.setattr(cli, "pi_regularity_conditions",
                        lambda ctx, y: [RegularityCondition((1,), (0,), one() - 1)])
    code, doc = run(["regular", "--config", cfg])
    assert (code, doc["fatal"]) == (3, 1)


def test_regular(write):
    cfg = write("sl3.json", {"catalog": "sl3"})
    code, doc = run(["regular", "--config", cfg, "--word", "1,2"])
    assert code == 0 and doc["fatal"] == 0
    assert all("nonzero" in c for c in doc["conditions"])
    code, doc = run(["regular", "--config", cfg, "--expr", "E1*F1"])
    assert code == 0 and doc["conditions"]


def test_custom_config_and_reps(write):
    cfg = write("c.json", {"cartan": [[2]], "tau": [1], "c": ["-1"], "d": ["-1"], "s": ["s"], "t": ["t"],
                           "counit_offset": False})
    reps = write("r.json", {
        "left": {"dim": 2, "images": {"B1": [["s", "1"], ["0", "s"]]}},
        "right": {"dim": 2, "images": {"B1": [["t", "0"], ["1", "t"]]}},
    })
    code, doc = run(["radial", "--config", cfg, "--expr", CASIMIR, "--reps", reps, "--latex", "--parallel"])
    assert code == 0
    assert doc["reps"] == "custom"
    assert all(len(s["matrix"]) == 4 for s in doc["operator"]["shifts"])
    assert "latex" in doc["decomposition"]
    bad = write("bad.json", {"left": {"dim": 2, "images": {"B7": [[1]]}}, "right": {"dim": 1}})
    assert run(["radial", "--config", cfg, "--expr", "F1", "--reps", bad])[0] == 4
    short = write("short.json", {"left": {"dim": 1}, "right": {"dim": 1}})
    assert run(["radial", "--config", cfg, "--expr", "F1", "--reps", short])[0] == 4


def test_parallel_flag_same_document(write):
    cfg = write("sl3.json", {"catalog": "sl3", "expr": "E1*F1 + E2*E1*F2*F1"})
    assert run(["radial", "--config", cfg]) == run(["radial", "--config", cfg, "--parallel"])


def test_catalog_command():
    code, doc = run(["catalog"])
    assert code == 0
    assert [e["name"] for e in doc["entries"]] == list(catalog.ENTRIES)
    code, doc = run(["catalog", "--name", "sl3"])
    assert doc["entry"]["tau"] == [2, 1]
    assert run(["catalog", "--name", "g2"])[0] == 4


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qradial", "catalog", "--name", "sl2"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["entry"]["name"] == "sl2"
