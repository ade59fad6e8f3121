import json
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from vortexlab import _kernels_py, io, kernels
from vortexlab.cli import DEFAULTS, ENSEMBLE_COLUMNS, main
from vortexlab.dynamics import CSV_COLUMNS
from vortexlab.fields import WeightedField

from conftest import grid, solved


def run(tmp_path, command, cfg=None, *flags):
    tmp_path.mkdir(parents=True, exist_ok=True)
    args = [command, "--out", str(tmp_path / command)]
    if cfg is not None:
        path = tmp_path / f"{command}.json"
        path.write_text(json.dumps({"schema_version": 1, **cfg}))
        args += ["--config", str(path)]
    code = main(args + list(flags))
    out = tmp_path / command
    report = json.loads((out / "report.json").read_text()) if (out / "report.json").exists() else None
    return code, report, out


# --- file formats ----------------------------------------------------------

def test_field_round_trip(tmp_path):
    g = grid(0.04)
    rng = np.random.default_rng(0)
    v = np.where(g.active, rng.normal(size=g.z.shape) + 1j * rng.normal(size=g.z.shape), 0)
    f = WeightedField(g, Fraction(5, 2), v, "g0")
    io.write_field(tmp_path / "f", f, note="x")
    back = io.read_field(tmp_path / "f.json")
    assert back.weight == Fraction(5, 2) and back.metric_tag == "g0"
    assert np.array_equal(back.values, f.values) and back.grid.h == g.h
    raw = np.fromfile(tmp_path / "f.bin", dtype="<c16").reshape(g.n, g.n)
    assert np.all(np.isnan(raw[~g.active])) and np.array_equal(raw[g.active], v[g.active])
    assert json.loads((tmp_path / "f.json").read_text())["note"] == "x"


def test_format_errors(tmp_path):
    g = grid(0.04)
    io.write_real(tmp_path / "u", np.zeros(g.z.shape), g, "u")
    with pytest.raises(io.FormatError):
        io.read_field(tmp_path / "u.json")
    (tmp_path / "u.bin").write_bytes(b"\0" * 64)
    with pytest.raises(io.FormatError):
        io.read_real(tmp_path / "u.json")
    head = json.loads((tmp_path / "u.json").read_text())
    head["format_version"] = 99
    (tmp_path / "u.json").write_text(json.dumps(head))
    with pytest.raises(io.FormatError):
        io.read_real(tmp_path / "u.json")
    with pytest.raises(io.FormatError):
        io.read_manifest(tmp_path / "missing")


def test_manifest_round_trip(tmp_path):
    d = solved(Fraction(3, 2), 0.04)
    io.write_manifest(tmp_path, d, {"config": {"a": 1}})
    e = io.read_manifest(tmp_path)
    assert e.ell == d.ell and e.k == d.k and e.grid.group.branch_signs == d.grid.group.branch_signs
    for a, b in ((e.A.values, d.A.values), (e.theta.values, d.theta.values), (e.u, d.u)):
        assert np.array_equal(np.where(d.grid.active, a, 0), np.where(d.grid.active, b, 0))
    z = np.array([0.1 + 0.2j, -0.3j])
    assert np.array_equal(e.thermostat()(z, np.array([0.3, 1.0])), d.thermostat()(z, np.array([0.3, 1.0])))


def test_csv_round_trip_is_exact(tmp_path):
    x = np.random.default_rng(1).normal(size=(5, 3))
    io.write_csv(tmp_path / "t.csv", ("a", "b", "c"), x)
    header, rows = io.read_csv(tmp_path / "t.csv")
    assert header == ["a", "b", "c"] and np.array_equal(np.array(rows, dtype=float), x)


def test_json_cleaning():
    out = io._clean({"a": np.float64(np.nan), "b": Fraction(2), "c": np.arange(2), "d": np.bool_(True)})
    assert out == {"a": None, "b": "2", "c": [0, 1], "d": True}


# --- configuration ---------------------------------------------------------

@pytest.mark.parametrize("cfg", [
    {"bogus": 1}, {"grid": {"h": 0.5}}, {"grid": {"h": 0.05}}, {"grid": {"spacing": 0.02}}, {"ell": "abc"}, {"ell": "-1/2"},
    {"orbits": {"T": 1.0, "dt": 0.003}}, {"orbits": {"dt": 0.02}}, {"surface": {"root_order": 3}},
    {"surface": {"branch_signs": [1, 1, 2, 1]}}, {"datum": "torus"}, {"seed": -1},
    {"higgs": {"coefficients": [1, 2]}},
])
def test_config_errors_exit_2(tmp_path, cfg):
    code, _, _ = run(tmp_path, "solve", {"grid": {"h": 0.04}, **cfg} if "grid" not in cfg else cfg)
    assert code == 2


def test_config_schema_and_flags(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"grid": {"h": 0.04}}))
    assert main(["bounds", "--config", str(p), "--out", str(tmp_path / "b")]) == 2
    p.write_text("{not json")
    assert main(["bounds", "--config", str(p), "--out", str(tmp_path / "b")]) == 2
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 2
    assert main(["bounds", "--out", str(tmp_path / "b"), "--ell", "x/y"]) == 2
    assert set(DEFAULTS) >= {"schema_version", "surface", "grid", "orbits", "seed", "out"}


# --- commands --------------------------------------------------------------

def test_grid_rejects_coarse_spacing():
    from vortexlab.grid import Grid
    with pytest.raises(ValueError):
        Grid(0.05)


@pytest.mark.parametrize("weight,dim", [("3", 5), ("2", 3), ("3/2", 2)])
def test_basis_dimensions(tmp_path, weight, dim):
    code, rep, out = run(tmp_path, "basis", {"weight": weight})
    assert code == 0 and rep["kernel_dim"] == dim and rep["gap"] >= 10
    assert len(list(out.glob("basis_*.json"))) == dim
    f = io.read_field(out / "basis_0.json")
    assert f.weight == Fraction(weight)


def test_solve_zero_coefficients_gives_flat_metric(tmp_path):
    code, rep, out = run(tmp_path, "solve", {"grid": {"h": 0.04}, "higgs": {"amplitude": None, "coefficients": [0, 0, 0, 0]}})
    assert code == 0
    d = io.read_manifest(out)
    assert np.abs(d.u[d.grid.active]).max() <= 1e-12
    assert (out / "convergence.csv").exists()


def test_solve_unit_vector_and_rescaling(tmp_path):
    alphas = []
    for scale in (1, 2):
        cfg = {"grid": {"h": 0.04}, "higgs": {"amplitude": None, "coefficients": [scale, 0, 0, 0]}}
        code, rep, out = run(tmp_path / str(scale), "solve", cfg)
        assert code == 0 and rep["pde_residual_sup"] <= 1e-10
        header, rows = io.read_csv(out / "convergence.csv")
        assert header == ["iteration", "residual_sup", "step_norm"] and len(rows) == rep["newton_iterations"]
        d = io.read_manifest(out)
        g = d.grid
        alphas.append(np.abs(d.A.values[g.interior]) ** 2 * np.exp(2 * (1 + float(d.ell)) * d.u[g.interior]))
    assert np.allclose(alphas[1], 4 * alphas[0], rtol=1e-10, atol=1e-14)


def test_numerical_failure_exit_3(tmp_path, capsys):
    code, _, _ = run(tmp_path, "solve", {"grid": {"h": 0.04}, "solver": {"tol": 1e-300}})
    assert code == 3 and "[solve]" in capsys.readouterr().err


def test_assertion_failure_exit_1(tmp_path, capsys):
    code, rep, _ = run(tmp_path, "riccati", {"checks": {"riccati_tol": 1e-30}})
    assert code == 1 and rep["passed"] is False
    assert "FAIL" in capsys.readouterr().out


def test_riccati_and_bounds_commands(tmp_path):
    code, rep, out = run(tmp_path, "riccati")
    assert code == 0 and max(r[4] for r in rep["rows"]) < 1e-8
    code, rep, out = run(tmp_path, "bounds")
    header, rows = io.read_csv(out / "bounds_table.csv")
    assert code == 0 and header == ["c", "lower", "upper", "product", "difference"]
    assert [float(x) for x in rows[0][:3]] == [0.0, 1.0, 1.0]


def test_riccati_search_mode_reports_only(tmp_path):
    code, rep, _ = run(tmp_path, "riccati", {"riccati": {"search": 3}})
    assert code == 0 and rep["search"]["trials"] == 3 and isinstance(rep["search"]["candidates"], list)


def verify_hyperbolic(tmp_path, seed=4):
    cfg = {"datum": "hyperbolic", "grid": {"h": 0.04}, "orbits": {"count": 3, "T": 20.0, "pad": 20.0}}
    return run(tmp_path, "verify", cfg, "--seed", str(seed))


def test_verify_hyperbolic(tmp_path):
    code, rep, out = verify_hyperbolic(tmp_path)
    assert code == 0 and rep["passed"] and rep["alternative"] == 1
    assert abs(rep["summary"]["mu_fit"] - 2) < 0.05
    for name in ("hopf_slopes.svg", "kappa_p.svg", "log_norms.svg"):
        assert (out / name).read_text().startswith("<svg")
    header, rows = io.read_csv(out / "orbit_000.csv")
    assert tuple(header) == CSV_COLUMNS and len(rows) == int(round(60 / 0.01)) + 1
    header, rows = io.read_csv(out / "ensemble.csv")
    assert tuple(header) == ENSEMBLE_COLUMNS and len(rows) == 3


def test_verify_is_deterministic(tmp_path):
    _, a, oa = verify_hyperbolic(tmp_path / "a", seed=7)
    _, b, ob = verify_hyperbolic(tmp_path / "b", seed=7)
    for r in (a, b):
        r.pop("seconds")
        r["config"].pop("out")
    assert a == b
    assert (oa / "ensemble.csv").read_bytes() == (ob / "ensemble.csv").read_bytes()
    assert (oa / "orbit_002.csv").read_bytes() == (ob / "orbit_002.csv").read_bytes()
    _, _, oc = verify_hyperbolic(tmp_path / "c", seed=8)
    assert (oc / "orbit_000.csv").read_bytes() != (oa / "orbit_000.csv").read_bytes()


def test_verify_from_manifest(tmp_path):
    code, _, out = run(tmp_path, "solve", {"grid": {"h": 0.04}, "ell": "2"})
    assert code == 0
    cfg = {"manifest": str(out / "manifest.json"), "ell": "2", "orbits": {"count": 2, "T": 20.0, "pad": 20.0}}
    code, rep, _ = run(tmp_path, "verify", cfg)
    assert code == 0 and rep["alternative"] == 1 and rep["summary"]["min_r_u"] > 0


def test_gauge_command(tmp_path):
    code, rep, _ = run(tmp_path, "gauge", {"grid": {"h": 0.04}, "gauge": {"points": 300}, "checks": {"gauge_tol": 5e-3}})
    assert code == 0 and rep["max_lambda_change"] < 5e-3 and rep["max_abs_w"] > 0.01


# --- compiled kernels ------------------------------------------------------

cython = pytest.importorskip("vortexlab._kernels")


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    env = dict(os.environ, VORTEXLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from vortexlab import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_compiled_kernels_match_fallback():
    rng = np.random.default_rng(0)
    D = rng.normal(size=(3, 3, 12, 12)) + 1j * rng.normal(size=(3, 3, 12, 12))
    x, y = rng.uniform(0.1, 0.9, 50), rng.uniform(0.1, 0.9, 50)
    for a, b in zip(cython.hermite5(D, 0.0, 0.0, 0.1, x, y), _kernels_py.hermite5(D, 0.0, 0.0, 0.1, x, y)):
        assert np.allclose(a, b, rtol=1e-13, atol=1e-13)
    mats = rng.normal(size=(201, 2, 2))
    for d in (1, -1):
        assert np.allclose(cython.riccati_angle(mats, 0.01, 0.3, d), _kernels_py.riccati_angle(mats, 0.01, 0.3, d),
                           rtol=1e-12, atol=1e-12)
    pa, la = cython.cocycle_rk4(mats, 0.01, 7)
    pb, lb = _kernels_py.cocycle_rk4(mats, 0.01, 7)
    assert np.allclose(pa, pb, rtol=1e-12, atol=1e-12) and np.allclose(la, lb, rtol=1e-12, atol=1e-12)
