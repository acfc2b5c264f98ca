import cmath
import csv
import json
import math

import pytest
import yaml

from dilatlab.cli import main
from dilatlab.config import build_potential, load_config, parse_config
from dilatlab.errors import ConfigError
from dilatlab.potentials import Gaussian, Rational, Sech2
from dilatlab.reporting import fmt


def _write(tmp_path, doc, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(doc, sort_keys=False))
    return p


def _read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# dilatlab ") and "config_sha256=" in lines[0]
    return list(csv.DictReader(lines[1:]))


BASE = {"potential": {"family": "zero"}, "grid": {"L": 20.0, "N": 200, "scheme": "FD2"}}


# -- config -------------------------------------------------------------------


def test_complex_pairs_and_families():
    V = build_potential({"family": "gaussian", "c": [1.0, -0.5], "amplitude": [-1, 0.3]})
    assert V == Gaussian(c=1 - 0.5j, amplitude=-1 + 0.3j)
    assert build_potential({"family": "rational", "c": 2, "s": 1.5}) == Rational(c=2.0, s=1.5)
    assert build_potential({"family": "poschl_teller"}) == Sech2(amplitude=-2.0)
    V = build_potential({"family": "tabulated", "x": [-2, -1, 0, 1, 2], "re": [0, -1, -2, -1, 0]})
    assert V.values(0.0, [0.0])[0] == -2
    with pytest.raises(ConfigError):
        build_potential({"family": "tabulated", "x": [-1, 0, 1], "re": [0, -1, 0]})


@pytest.mark.parametrize(
    "mutate,field",
    [
        (lambda d: d["grid"].pop("N"), "grid.N"),
        (lambda d: d["grid"].update(N="many"), "grid.N"),
        (lambda d: d["grid"].update(L=-1.0), "grid.L"),
        (lambda d: d["grid"].update(scheme="FD3"), "grid.scheme"),
        (lambda d: d.update(potential={"family": "hexagon"}), "potential.family"),
        (lambda d: d.update(potential={"family": "gaussian", "c": [1, 2, 3]}), "potential.c"),
        (lambda d: d.update(bounds={"theorems": ["Nope"]}), "bounds.theorems"),
        (lambda d: d.update(bounds={"kappa": 0.0}), "bounds.kappa"),
        (lambda d: d.update(bounds={"theorems": ["Resonance"]}), "bounds.phi"),
        (lambda d: d.update(tolerances={"tol_match": -1.0}), "tolerances.tol_match"),
        (lambda d: d.update(regions=["sectorU+:kappa=-1"]), "regions[0]"),
        (lambda d: d.update(angles={"start": 0, "stop": 1}), "angles.num"),
    ],
)
def test_config_errors_name_field(mutate, field):
    doc = json.loads(json.dumps(BASE))
    mutate(doc)
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert info.value.field == field


def test_angle_range_and_hash(tmp_path):
    doc = dict(BASE, angles={"start": 0.0, "stop": 0.3, "num": 4})
    cfg = load_config(_write(tmp_path, doc))
    assert cfg.angles == pytest.approx((0.0, 0.1, 0.2, 0.3))
    assert len(cfg.sha256) == 64


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, -2.5e-300, 1e22):
        assert float(fmt(v)) == v
    assert fmt(True) == "true" and fmt(None) == "" and fmt(math.nan) == "nan"


# -- subcommands ------------------------------------------------------------------


def test_missing_n_exits_2(tmp_path, capsys):
    doc = json.loads(json.dumps(BASE))
    del doc["grid"]["N"]
    code = main(["spectrum", "--config", str(_write(tmp_path, doc)), "--out", str(tmp_path)])
    assert code == 2
    assert "grid.N" in capsys.readouterr().err


def test_angle_outside_strip_exits_2(tmp_path):
    doc = dict(BASE, potential={"family": "gaussian", "c": 1.0}, angles=[0.0, 0.9])
    assert main(["spectrum", "--config", str(_write(tmp_path, doc)), "--out", str(tmp_path)]) == 2


def test_solver_failure_exits_3(tmp_path):
    doc = dict(BASE, potential={"family": "gaussian", "c": 1.0, "amplitude": -1.0},
               angles=[0.0, 0.2])
    code = main(["spectrum", "--config", str(_write(tmp_path, doc)), "--out", str(tmp_path),
                 "--tol-eig", "1e-300"])
    assert code == 3


def test_free_spectrum_fits_ray(tmp_path):
    doc = dict(BASE, angles=[0.3])
    out = tmp_path / "o"
    assert main(["spectrum", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 0
    rows = _read_csv(out / "spectrum_zero_0.csv")
    assert len(rows) == 200
    for r in rows:
        z = complex(float(r["lambda_re"]), float(r["lambda_im"]))
        assert abs(cmath.phase(z) + 0.6) < 1e-9
    cls = _read_csv(out / "classification_zero.csv")
    assert {r["class"] for r in cls} == {"continuum"}


def test_poschl_teller_isolated_row(tmp_path):
    doc = {"potential": {"family": "poschl_teller"}, "grid": {"L": 20.0, "N": 600, "scheme": "FD4"},
           "angles": [0.0, 0.2], "regions": ["neg_reals", "II"]}
    out = tmp_path / "o"
    assert main(["spectrum", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 0
    rows = [r for r in _read_csv(out / "classification_poschl_teller.csv") if r["class"] == "isolated"]
    assert len(rows) == 1
    assert float(rows[0]["lambda_re"]) == pytest.approx(-1.0, abs=1e-4)
    rep = json.loads((out / "classification_poschl_teller.json").read_text())
    assert rep["meta"]["config_sha256"]
    assert rep["regions"]["neg_reals"]["count"] == 1
    assert rep["regions"]["II"]["count"] == 0


def test_verify_poschl_teller_and_determinism(tmp_path):
    doc = {"potential": {"family": "poschl_teller"}, "grid": {"L": 20.0, "N": 1000, "scheme": "FD4"},
           "angles": [0.0, 0.3], "bounds": {"gamma": 1.5, "theorems": ["rLT"]}}
    cfg = _write(tmp_path, doc)
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        assert main(["verify", "--config", str(cfg), "--out", str(out), "--seedless"]) == 0
    a, b = ((o / "bounds.csv").read_bytes() for o in outs)
    assert a == b
    row = _read_csv(outs[0] / "bounds.csv")[0]
    assert row["satisfied"] == "true"
    assert float(row["ratio"]) == pytest.approx(1.0, abs=5e-3)


def test_verify_zero_potential_all_theorems(tmp_path):
    doc = {"potential": {"family": "zero"}, "grid": {"L": 10.0, "N": 80},
           "angles": [0.0, 0.3], "bounds": {"gamma": 1.5, "theorems": "all", "phi": 0.5}}
    out = tmp_path / "o"
    assert main(["verify", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 0
    rows = _read_csv(out / "bounds.csv")
    assert len(rows) == 18 and all(r["satisfied"] == "true" for r in rows)


def test_verify_violation_exits_4(tmp_path):
    # a deliberately tiny user constant makes the right-hand side too small
    doc = {"potential": {"family": "gaussian", "c": 1.0, "amplitude": -1.2},
           "grid": {"L": 15.0, "N": 300}, "angles": [0.0, 0.2],
           "bounds": {"gamma": 1.5, "L_policy": "user", "L_value": 1e-4, "theorems": ["rLT"]}}
    out = tmp_path / "o"
    assert main(["verify", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 4
    rep = json.loads((out / "bounds.json").read_text())
    assert rep["reports"][0]["satisfied"] is False


def test_norms_csv(tmp_path):
    doc = {"potentials": [{"family": "gaussian", "c": [1.0, 1.0], "name": "g"},
                          {"family": "rational", "c": 1.0, "s": 1.0, "name": "r"}],
           "grid": {"L": 10.0, "N": 50},
           "norms": {"p": [2.0], "phi": [0.0, 0.2, math.pi / 8]}}
    out = tmp_path / "o"
    assert main(["norms", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 0
    rows = _read_csv(out / "norms.csv")
    g = [r for r in rows if r["name"] == "g"]
    assert g[0]["norm"] == fmt((math.pi / 2) ** 0.25) or float(g[0]["norm"]) == pytest.approx(
        (math.pi / 2) ** 0.25, rel=1e-10)
    assert float(g[0]["closed_form"]) == pytest.approx(float(g[0]["norm"]), rel=1e-9)
    assert g[2]["status"] == "NonIntegrable"
    r = [row for row in rows if row["name"] == "r"]
    assert [row["direction"] for row in r] == ["0", "1", "1"]


def test_scan_csv(tmp_path):
    doc = {"potential": {"family": "rational", "c": 1.0, "s": 2.0, "amplitude": -1.0},
           "grid": {"L": 10.0, "N": 50},
           "bounds": {"gamma": 1.5, "theorems": ["FLLS", "FLLSprime", "Resonance", "rLT"],
                      "phi": 0.6},
           "scan": {"kappa": [0.5, 1.0, 2.0], "phi": [0.4, 0.6]}}
    out = tmp_path / "o"
    assert main(["scan", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 0
    rows = _read_csv(out / "scan.csv")
    flls = [float(r["rhs"]) for r in rows if r["theorem_id"] == "FLLS"]
    prime = [float(r["rhs"]) for r in rows if r["theorem_id"] == "FLLSprime"]
    assert flls == sorted(flls, reverse=True) and prime == sorted(prime)
    assert len([r for r in rows if r["theorem_id"] == "Resonance"]) == 2


def test_trajectory_outputs(tmp_path):
    doc = {"potential": {"family": "gaussian", "c": 1.0, "amplitude": -1.2},
           "grid": {"L": 15.0, "N": 300}, "angles": [0.0, 0.1, 0.2]}
    out = tmp_path / "o"
    assert main(["trajectory", "--config", str(_write(tmp_path, doc)), "--out", str(out)]) == 0
    summary = json.loads((out / "trajectory_gaussian.json").read_text())
    bound = [p for p in summary["off_ray_paths"] if p["start"][0] < -0.1]
    assert len(bound) == 1 and bound[0]["stationary"]


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    text = capsys.readouterr().out
    for cmd in ("spectrum", "trajectory", "verify", "norms", "scan"):
        assert cmd in text
