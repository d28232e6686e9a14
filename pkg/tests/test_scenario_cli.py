"""Scenario files and the command-line front end."""

import json

import numpy as np
import pytest

from twogap.cli import main
from twogap.errors import ParseError, ValidationError
from twogap.scenario import (
    SCHEMA_VERSION,
    bundled_names,
    bundled_scenario,
    load_scenario,
)

GOOD = {
    "schema_version": 1,
    "name": "roundtrip",
    "domain": {"alpha": 2.0, "beta": 3.0},
    "boundary": {"w": 0.8, "theta": 0.1, "phi": 0.0, "psi": 0.25},
    "packets": {
        "f": [{"lo": -0.5, "hi": 0.0, "value": [1.0, 0.0]}],
        "g": [
            {"lo": -2.0, "hi": -1.5, "value": [0.5, 0.5], "freq": 1},
            {"lo": -1.5, "hi": -1.0, "value": [0.0, -1.0]},
        ],
    },
    "time_grid": {"start": 0.0, "stop": 2.0, "num": 5},
    "lambda_grid": [-1.0, 0.0, 1.0],
    "tolerances": {"eps": 1e-12, "tol": 1e-8},
}


def write(tmp_path, payload, name="sc.json"):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return p


def test_load_good_scenario(tmp_path):
    sc = load_scenario(write(tmp_path, GOOD))
    assert sc.name == "roundtrip"
    assert sc.domain.alpha == 2.0
    assert sc.bm.w == 0.8
    assert set(sc.packets) == {"f", "g"}
    assert sc.packet("g").n_cells == 2
    assert np.allclose(sc.time_grid, np.linspace(0.0, 2.0, 5))
    assert np.allclose(sc.lambda_grid, [-1.0, 0.0, 1.0])
    assert sc.eps == 1e-12
    with pytest.raises(ParseError):
        sc.packet("missing")


def test_bundled_inventory():
    names = bundled_names()
    assert "example_5_9" in names
    assert "w_zero_boundstates" in names
    for name in names:
        sc = bundled_scenario(name)
        assert sc.name == name
    with pytest.raises(ParseError):
        bundled_scenario("no_such_scenario")


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("schema_version"),
        lambda d: d.update(schema_version=99),
        lambda d: d.update(name=7),
        lambda d: d.update(domain=[2.0, 3.0]),
        lambda d: d["domain"].pop("beta"),
        lambda d: d["boundary"].update(w=True),
        lambda d: d.update(packets={"f": []}),
        lambda d: d["packets"].update(f=[{"lo": 0, "hi": 1, "value": [1]}]),
        lambda d: d["packets"].update(f=[{"lo": 0, "hi": 1, "value": [1, 0], "freq": 0.5}]),
        lambda d: d.update(time_grid={"start": 0.0, "stop": 1.0, "num": 0}),
        lambda d: d.update(time_grid="dense"),
        lambda d: d.update(tolerances=[1e-9]),
    ],
)
def test_parse_errors(tmp_path, mutate):
    payload = json.loads(json.dumps(GOOD))
    mutate(payload)
    with pytest.raises(ParseError):
        load_scenario(write(tmp_path, payload))


def test_validation_separate_from_parse(tmp_path):
    payload = json.loads(json.dumps(GOOD))
    payload["domain"]["alpha"] = 0.5  # structurally fine, physically not
    with pytest.raises(ValidationError):
        load_scenario(write(tmp_path, payload))


def test_invalid_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{ not json")
    with pytest.raises(ParseError):
        load_scenario(p)
    with pytest.raises(ParseError):
        load_scenario(tmp_path / "absent.json")


def test_extras_preserved(tmp_path):
    payload = json.loads(json.dumps(GOOD))
    payload["comb"] = {"w_sequence": [0.5, 0.1], "window_width": 0.1}
    sc = load_scenario(write(tmp_path, payload))
    assert sc.extras["comb"]["window_width"] == 0.1
    assert "domain" not in sc.extras


def test_schema_version_constant():
    assert SCHEMA_VERSION == 1


# ----------------------------------------------------------------------
# CLI end to end
# ----------------------------------------------------------------------


def test_cli_eigen_outputs(tmp_path):
    out = tmp_path / "run"
    rc = main(["eigen", "--scenario", "example_5_9", "--out", str(out)])
    assert rc == 0
    text = (out / "eigen.csv").read_text()
    header = text.splitlines()[0]
    assert header == "lambda,a_re,a_im,c_re,c_im,residual"
    assert len(text.splitlines()) > 2


def test_cli_density_and_smatrix(tmp_path):
    out = tmp_path / "run"
    assert main(["density", "--scenario", "example_5_9", "--out", str(out)]) == 0
    assert (out / "density.csv").exists()
    assert (out / "density_coeffs.csv").exists()
    assert main(["smatrix", "--scenario", "example_5_9", "--out", str(out)]) == 0
    rows = (out / "smatrix.csv").read_text().splitlines()
    assert rows[0] == "lambda,re,im,route_spread"
    # unimodularity visible straight from the file
    for row in rows[1:4]:
        _, re_s, im_s, _ = row.split(",")
        assert abs(complex(float(re_s), float(im_s))) == pytest.approx(1.0, abs=1e-10)


def test_cli_evolve_writes_norms(tmp_path):
    out = tmp_path / "run"
    assert main(["evolve", "--scenario", "example_5_9", "--out", str(out)]) == 0
    norms = (out / "evolve_norms.csv").read_text().splitlines()
    assert norms[0] == "t,norm2,truncation"
    vals = [float(r.split(",")[1]) for r in norms[1:]]
    assert np.allclose(vals, vals[0], atol=1e-9)
    assert (out / "evolve_000.csv").exists()


def test_cli_evolve_decoupled(tmp_path):
    out = tmp_path / "run"
    assert main(["evolve", "--scenario", "w_zero_boundstates", "--out", str(out)]) == 0
    assert (out / "evolve_norms.csv").exists()


def test_cli_scatter_and_semigroup(tmp_path):
    out = tmp_path / "run"
    assert main(["scatter", "--scenario", "example_5_9", "--out", str(out)]) == 0
    assert (out / "scatter.csv").exists()
    assert (out / "scatter_smatrix.csv").exists()
    assert main(["semigroup", "--scenario", "example_5_9", "--out", str(out)]) == 0
    rows = (out / "semigroup_norms.csv").read_text().splitlines()
    vals = [float(r.split(",")[1]) for r in rows[1:]]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_cli_kernels_and_degenerate(tmp_path):
    out = tmp_path / "run"
    assert main(["kernels", "--scenario", "example_5_9", "--out", str(out)]) == 0
    assert (out / "kernels.csv").exists()
    assert main(["degenerate", "--scenario", "two_points", "--out", str(out)]) == 0
    assert (out / "degenerate.csv").exists()


def test_cli_verify_passes(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(["verify", "--scenario", "example_5_9", "--out", str(out)])
    captured = capsys.readouterr().out
    assert rc == 0
    assert "FAIL" not in captured
    assert (out / "verify.csv").exists()


def test_cli_exit_codes(tmp_path):
    # unknown scenario name -> 2
    assert main(["eigen", "--scenario", "missing_name", "--out", str(tmp_path)]) == 2
    # structurally broken file -> 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["eigen", "--scenario", str(bad), "--out", str(tmp_path)]) == 2
    # scenario without a domain cannot run the coupled commands -> 2
    assert main(["eigen", "--scenario", "two_points", "--out", str(tmp_path)]) == 2


def test_cli_outputs_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    for out in (out1, out2):
        assert main(["evolve", "--scenario", "example_5_8", "--out", str(out)]) == 0
    for name in ("evolve_norms.csv", "evolve_000.csv"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_cli_eps_override(tmp_path):
    out = tmp_path / "run"
    rc = main(
        ["evolve", "--scenario", "example_5_9", "--out", str(out), "--eps", "1e-6"]
    )
    assert rc == 0
    rows = (out / "evolve_norms.csv").read_text().splitlines()
    truncs = [float(r.split(",")[2]) for r in rows[1:]]
    assert max(truncs) > 1e-9  # cruder series cutoff is visible in the budget
