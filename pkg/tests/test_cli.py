import csv
import io
import json
import math
import subprocess
import sys

import pytest
import yaml

from lgi_nes.cli import main
from lgi_nes.cli.config import DEFAULT_PARAMS, parse_config, resolve
from lgi_nes.cli.figures import RECIPES, evaluate_checks
from lgi_nes.cli.svg import dataset_svg
from lgi_nes.cli.sweep import SCHEMA_LINE, run_sweep, to_csv, to_json
from lgi_nes.cli.validate import run_validation
from lgi_nes.errors import ConfigError
from lgi_nes.liouvillian import Generator, build_block_generator

SMALL = {
    "task": "mlgi",
    "params": {"temp1": 0.3},
    "axes": [{"name": "temp2", "min": 0.3, "max": 1.0, "points": 3},
             {"name": "lam", "values": [0.5, 0.9]}],
    "options": {"grid_points": 64},
}


def _write(tmp_path, doc):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(doc))
    return str(path)


def _rows(text):
    lines = text.splitlines()
    assert lines[0] == SCHEMA_LINE
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


# ----- configuration -----

@pytest.mark.parametrize("doc,path", [
    ({"params": {"bogus": 1}}, "params.bogus"),
    ({"params": {"lam": "big"}}, "params.lam"),
    ({"axes": [{"name": "nope", "values": [1]}]}, "axes[0].name"),
    ({"axes": [{"name": "lam", "min": 0.1, "max": 0.5}]}, "axes[0].points"),
    ({"axes": [{"name": "lam", "values": [0.1]}] * 2}, "axes"),
    ({"axes": [{"name": "lam", "values": [0.1]}, {"name": "temp", "values": [1]},
               {"name": "mu", "values": [0]}]}, "axes"),
    ({"options": {"grid_points": 1}}, "options.grid_points"),
    ({"options": {"speed": 1}}, "options.speed"),
    ({"output": {"format": "xml"}}, "output.format"),
    ({"task": "dance"}, "task"),
])
def test_config_errors_name_the_field(doc, path):
    with pytest.raises(ConfigError) as info:
        parse_config(doc)
    assert info.value.path == path
    assert str(info.value).startswith(path)


def test_preflight_rejects_coupling_above_bound():
    with pytest.raises(ConfigError, match=r"lam=1\.2.*sqrt"):
        parse_config({"axes": [{"name": "lam", "values": [0.5, 1.2]}]})


def test_boundary_coupling_is_accepted():
    cfg = parse_config({"params": {"lam": 1.0}})
    assert cfg.params["lam"] == 1.0


def test_resolve_derived_coordinates():
    base = dict(DEFAULT_PARAMS, lam=0.8)
    p = resolve({**base, "temp_mean": 1.0, "temp_diff": 0.4, "mu_mean": 0.5, "mu_diff": -1.0})
    assert (p["temp1"], p["temp2"], p["mu1"], p["mu2"]) == pytest.approx((0.8, 1.2, 1.0, 0.0))
    p = resolve({**base, "omega_bar": 1.5, "theta": -math.pi / 4})
    assert p["omega1"] - p["omega2"] == pytest.approx(-0.8)
    assert p["omega1"] + p["omega2"] == pytest.approx(3.0)
    p = resolve({**base, "theta": -math.pi / 2})
    assert p["omega1"] == p["omega2"] == 1.0


def test_log_axis():
    cfg = parse_config({"axes": [{"name": "coupling", "min": 1e-3, "max": 1e-1, "points": 3, "scale": "log"}]})
    assert cfg.axes[0].values == pytest.approx((1e-3, 1e-2, 1e-1))


# ----- sweeps and serialization -----

def test_csv_schema_and_row_order():
    ds = run_sweep(parse_config(SMALL))
    rows = _rows(to_csv(ds))
    assert len(rows) == 6
    assert list(rows[0])[:2] == ["statistics", "omega1"]
    assert [float(r["temp2"]) for r in rows] == pytest.approx([0.3, 0.3, 0.65, 0.65, 1.0, 1.0])
    assert [float(r["lam"]) for r in rows] == [0.5, 0.9] * 3
    assert all(r["error"] == "" and r["positivity_ok"] == "true" for r in rows)
    assert ds.grid("mlgi").shape == (3, 2)
    doc = json.loads(to_json(ds))
    assert doc["schema"] == "lgi-nes schema v1" and len(doc["rows"]) == 6


def test_serial_and_parallel_are_bit_identical():
    cfg = parse_config(SMALL)
    serial = to_csv(run_sweep(cfg, threads=1))
    assert to_csv(run_sweep(cfg, threads=1)) == serial
    assert to_csv(run_sweep(cfg, threads=2)) == serial


def test_row_errors_are_recorded(monkeypatch):
    from lgi_nes.cli import sweep
    from lgi_nes.errors import NonUniqueSteadyState

    real = sweep._point_rows

    def flaky(task, p, options):
        if p["lam"] > 0.8:
            raise NonUniqueSteadyState("forced")
        return real(task, p, options)

    monkeypatch.setattr(sweep, "_point_rows", flaky)
    ds = run_sweep(parse_config({"task": "thermo", "axes": [{"name": "lam", "values": [0.5, 0.9]}]}))
    assert ds.rows[0]["error"] == ""
    assert ds.rows[1]["error"] == "NonUniqueSteadyState: forced" and ds.rows[1]["current2"] == ""
    assert ds.rows[1]["lam"] == 0.9


def test_svg_outputs():
    ds = run_sweep(parse_config(SMALL))
    svg = dataset_svg(ds, "mlgi")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    one = run_sweep(parse_config({"task": "steady", "axes": [{"name": "temp", "min": 0.2, "max": 2, "points": 5}]}))
    assert "<polyline" in dataset_svg(one, "pop23") or "<path" in dataset_svg(one, "pop23")


# ----- command line -----

def test_cli_tasks(tmp_path, capsys):
    assert main(["steady", "--set", "lam=0.8", "--set", "temp1=0.5"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert float(rows[0]["lam"]) == 0.8
    out = tmp_path / "t.json"
    assert main(["thermo", "--set", "temp2=1.5", "--format", "json", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["task"] == "thermo"
    assert main(["lgi", "--t-points", "11", "--t-max", "3"]) == 0
    assert len(_rows(capsys.readouterr().out)) == 11
    assert main(["mlgi", "--grid-points", "64", "--secular"]) == 0
    assert _rows(capsys.readouterr().out)[0]["secular"] == "true"


def test_cli_sweep_from_config(tmp_path, capsys):
    assert main(["sweep", "--config", _write(tmp_path, SMALL), "--grid-points", "32"]) == 0
    assert len(_rows(capsys.readouterr().out)) == 6


@pytest.mark.parametrize("argv", [
    ["thermo", "--set", "lam=1.2"],
    ["steady", "--set", "lam"],
    ["steady", "--set", "wobble=1"],
    ["steady", "--config", "/nonexistent.yaml"],
    ["sweep"],
    ["figure", "fig99"],
])
def test_cli_config_errors_exit_1(argv, capsys):
    assert main(argv) == 1
    assert "config error" in capsys.readouterr().err


def test_cli_lambda_bound_message(capsys):
    main(["thermo", "--set", "lam=1.2"])
    assert "sqrt" in capsys.readouterr().err


def test_cli_runtime_error_exit_3(monkeypatch, capsys):
    from lgi_nes.cli import sweep
    from lgi_nes.errors import SingularCoherenceBlock

    def fail(*args):
        raise SingularCoherenceBlock("forced")

    monkeypatch.setattr(sweep, "_point_rows", fail)
    assert main(["steady"]) == 3
    assert "SingularCoherenceBlock: forced" in capsys.readouterr().err


def test_degenerate_point_is_flagged_not_fatal(capsys):
    assert main(["steady", "--set", "lam=0"]) == 0
    row = _rows(capsys.readouterr().out)[0]
    assert float(row["theta"]) == pytest.approx(-math.pi / 2) and float(row["omega_gap"]) == 0


def test_figure_list(capsys):
    assert main(["figure", "--list"]) == 0
    names = [line.split("\t")[0] for line in capsys.readouterr().out.splitlines()]
    assert names == list(RECIPES)
    assert {f"fig{n}{p}" for n in range(3, 14) for p in "ab"} <= set(names)


def test_figure_recipe_exit_code(tmp_path, capsys):
    out = tmp_path / "fig.svg"
    assert main(["figure", "fig10a", "--format", "svg", "--out", str(out)]) == 0
    assert out.read_text().startswith("<svg")
    assert "FAIL" not in capsys.readouterr().err


def test_caption_parameters():
    (_, p), = RECIPES["fig3a"].config().points()
    assert p["temp2"] == 1.5 and (p["lam"], p["omega1"], p["omega2"], p["coupling"], p["temp1"]) == (1.0, 1.0, 1.0, 0.005, 1.5)


@pytest.mark.parametrize("name", list(RECIPES))
def test_figure_shapes(name):
    rec = RECIPES[name]
    ds = run_sweep(rec.config())
    assert all(r["error"] == "" for r in ds.rows)
    failed = [d for d, ok in evaluate_checks(rec, ds) if not ok]
    assert not failed


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "lgi_nes.cli.main", "figure", "--list"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "fig5a" in proc.stdout


# ----- validation suite -----

def test_validate_passes(capsys):
    assert main(["validate", "--samples", "20", "--no-perturbative"]) == 0
    assert capsys.readouterr().out.rstrip().endswith("all checks passed")


def test_validate_catches_corrupted_entry():
    def broken(model, secular=False, with_full=False):
        M = build_block_generator(model).M.copy()
        M[4, 0] *= 1.01
        return Generator(M)

    report = run_validation(block_builder=broken, samples=10, perturbative=False)
    assert not report.passed
    check = report["generator_vs_operator_dissipators"]
    assert not check.passed and "M[23,11]" in check.where
    assert "validation FAILED" in report.format()
