from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import bisect

from vortexlab.fields import WeightedField, zero_field
from vortexlab.vortex import (SolverFailure, ThermostatField, VortexData, curvature_of, gauge_transform,
                              generalized_kappa_p, hyperbolic_datum, invariant_phase, orbit_quantities, pde_residual,
                              predicted_kappa_p, sample_points, solve_conformal_factor, unitary_gauge_datum,
                              vortex_residuals)

from conftest import basis, cached, grid, solved


def scalar_root(alpha0, ell):
    """Independent oracle: constant solution of -1 + e^{2u} - l e^{-2lu} alpha0 = 0."""
    f = lambda u: -1 + np.exp(2 * u) - ell * np.exp(-2 * ell * u) * alpha0  # noqa: E731
    return bisect(f, -5, 5, xtol=1e-15, rtol=1e-15, maxiter=500)


def test_zero_alpha_gives_hyperbolic_metric():
    g = grid(0.04)
    log = []
    u = solve_conformal_factor(g, np.zeros(g.z.shape), Fraction(3, 2), tol=1e-12, log=log)
    assert np.nanmax(np.abs(u[g.active])) < 1e-12
    assert log[-1][1] < 1e-12


@pytest.mark.parametrize("alpha0,ell", [(0.3, Fraction(3, 2)), (1.0, Fraction(2)), (0.05, Fraction(1, 2))])
def test_constant_alpha_matches_scalar_root(alpha0, ell):
    g = grid(0.04)
    u = solve_conformal_factor(g, np.full(g.z.shape, alpha0), ell, tol=1e-13)
    u0 = scalar_root(alpha0, float(ell))
    assert np.abs(u[g.active] - u0).max() < 1e-10


def test_solver_log_monotone_and_residual():
    g = grid(0.02)
    A = basis(Fraction(5, 2)).fields(g)[0]
    alpha = np.where(g.active, np.abs(A.values) ** 2 / np.nanmax(np.abs(A.values) ** 2), 0.0)
    log = []
    u = solve_conformal_factor(g, alpha, Fraction(3, 2), tol=1e-12, log=log)
    res = [r for _, r, _ in log]
    tail = res[-5:]
    assert all(b <= a for a, b in zip(tail, tail[1:]))
    assert np.nanmax(np.abs(pde_residual(g, u, alpha, Fraction(3, 2)))) < 1e-12


def test_solver_rejects_bad_input_and_reports_failure():
    g = grid(0.04)
    with pytest.raises(ValueError):
        solve_conformal_factor(g, -np.ones(g.z.shape), 1)
    with pytest.raises(SolverFailure) as e:
        solve_conformal_factor(g, np.full(g.z.shape, 0.5), 1, max_iter=1)
    assert e.value.log


def test_curvature_closed_forms():
    g = grid(0.04)
    assert np.nanmax(np.abs(curvature_of(g, np.zeros(g.z.shape))[g.interior] + 1)) < 1e-12
    c = 0.3
    assert np.nanmax(np.abs(curvature_of(g, np.full(g.z.shape, c))[g.interior] + np.exp(-2 * c))) < 1e-12


@pytest.mark.parametrize("ell", [Fraction(1, 2), Fraction(3, 2), Fraction(2), Fraction(3)])
def test_solved_data_curvature(ell):
    d = solved(ell, 0.02)
    g = d.grid
    K = curvature_of(g, d.u)
    A2 = np.abs(d.A.values) ** 2  # |A|_g^2 = e^{-2(1+l)u} |A|_{g0}^2
    res = (K + 1 - float(ell) * A2)[g.interior]
    assert np.abs(res).max() < 10 * 1e-12 * np.exp(-2 * np.nanmin(d.u[g.interior]))
    assert np.nanmax(K[g.interior]) < 0
    # bound on the fibre derivative of a
    z, phi = sample_points(g, 3000, seed=9)
    q = orbit_quantities(d, z, phi)
    assert np.max(np.abs(np.sqrt(float(ell)) * q["Va"] / (1 + float(ell)))) < 1


def test_hyperbolic_datum_residuals_vanish():
    d = hyperbolic_datum(grid(0.04), 2)
    curv, hol = vortex_residuals(d)
    assert np.abs(curv).max() < 1e-10 and np.abs(hol).max() < 1e-12
    th = d.thermostat()
    z, phi = sample_points(d.grid, 10, seed=1)
    assert np.all(th(z, phi) == 0)


def test_residuals_detect_non_solutions_and_converge():
    ell = Fraction(3, 2)
    errs = []
    for h in (0.04, 0.02):
        d = solved(ell, h)
        curv, hol = vortex_residuals(d, seed=4)
        errs.append((np.abs(curv).max(), np.abs(hol).max()))
    assert errs[1][0] < errs[0][0] / 3.5 and errs[1][1] < errs[0][1] / 3.5
    d = solved(ell, 0.02)
    bad = VortexData(ell, WeightedField(d.grid, d.A.weight, d.A.values, "g"), d.theta, d.u + 0.1)
    curv, _ = vortex_residuals(bad, seed=4)
    assert np.abs(curv).max() > 0.01


def test_lambda_is_a_for_untwisted_data():
    d = solved(Fraction(2), 0.04)
    z, phi = sample_points(d.grid, 100, seed=2)
    assert np.array_equal(d.thermostat()(z, phi), d.A.at(z, phi).imag)
    th = ThermostatField.constant(0.7)
    assert np.all(th(z, phi) == 0.7)
    with pytest.raises(ValueError):
        ThermostatField(d.metric)


def test_vortex_data_validation():
    d = solved(Fraction(2), 0.04)
    g = d.grid
    with pytest.raises(ValueError):
        VortexData(Fraction(2), zero_field(g, 2, "g"), d.theta, d.u)
    with pytest.raises(ValueError):
        VortexData(Fraction(2), d.A, zero_field(g, 1, "g0"), d.u)


def _invariant(h, scale):
    g = grid(h)
    w = np.full(g.z.shape, np.nan)
    w[g.active] = invariant_phase(basis(3), scale)(g.z[g.active])[0]
    return w


def test_gauge_transform_trivial_cases():
    d = solved(Fraction(2), 0.04)
    g = d.grid
    z, phi = sample_points(g, 200, seed=3)
    lam = d.thermostat()(z, phi)
    e0 = gauge_transform(d, np.zeros(g.z.shape))
    assert np.abs(e0.thermostat()(z, phi) - lam).max() < 1e-15
    c = 0.4
    ec = gauge_transform(d, np.full(g.z.shape, c))
    assert np.allclose(ec.A.values[g.active], np.exp(-c) * d.A.values[g.active], rtol=1e-15)
    assert np.array_equal(ec.theta.values[g.active], d.theta.values[g.active])
    assert np.abs(ec.thermostat()(z, phi) - lam).max() < 1e-14


def test_lambda_gauge_invariance_second_order():
    errs = []
    for h in (0.04, 0.02):
        d = solved(Fraction(2), h)
        e = gauge_transform(d, _invariant(h, 0.3))
        z, phi = sample_points(d.grid, 1000, seed=6)
        errs.append(np.abs(e.thermostat()(z, phi) - d.thermostat()(z, phi)).max())
    assert errs[1] < errs[0] / 3.5


def _unitary(ell, h, k, scale=1.0):
    return cached(("unitary", ell, h, k, scale),
                  lambda: unitary_gauge_datum(solved(ell, h), invariant_phase(basis(1 + ell), scale), k))


def test_generalized_kappa_p_special_cases():
    ell = Fraction(2)
    d = solved(ell, 0.02)
    z, phi = sample_points(d.grid, 1000, seed=8)
    for k in (ell, ell + 1, Fraction(7)):  # theta = 0: any k
        dk = VortexData(ell, d.A, d.theta, d.u, None, k)
        assert np.abs(generalized_kappa_p(dk, z, phi) + 1).max() < 1e-2
        assert np.array_equal(predicted_kappa_p(dk, z, phi), -np.ones(z.size))
    e = _unitary(ell, 0.02, ell)  # k = l with theta != 0
    assert np.abs(generalized_kappa_p(e, z, phi) + 1).max() < 2e-2


def test_generalized_kappa_p_second_order_and_negative():
    ell = Fraction(2)
    errs = []
    for h in (0.04, 0.02):
        e = _unitary(ell, h, ell + 1)
        z, phi = sample_points(e.grid, 1000, seed=8)
        curv, hol = vortex_residuals(e, z, phi)
        kp = generalized_kappa_p(e, z, phi)
        errs.append((np.abs(kp - predicted_kappa_p(e, z, phi)).max(), np.abs(curv).max(), np.abs(hol).max()))
    assert all(b < a / 3.5 for a, b in zip(*errs))
    q = orbit_quantities(e, z, phi)
    assert np.abs(q["Theta"]).max() < np.sqrt(float(ell)) and np.max(np.abs(q["A"]) ** 2) <= 1 / float(ell)
    assert kp.max() < 0
