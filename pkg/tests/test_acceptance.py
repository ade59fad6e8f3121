"""One test per acceptance criterion; each records a PASS/FAIL line shown in the session summary."""
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.optimize import bisect

from vortexlab.analysis import analyse_orbit, ensemble_summary
from vortexlab.cocycle import (GeneratorSeries, comparison_solution, conjugate_generator, conjugation_matrices,
                               evolve_cocycle, hopf_limit, hopf_series, lyapunov_exponents, quadratic_form_check,
                               riccati_integrate, riccati_residual, splitting_products, verify_domination)
from vortexlab.dynamics import orbit_ensemble, random_starts
from vortexlab.fields import Metric, WeightedField
from vortexlab.grid import Grid
from vortexlab.holomorphic import holomorphic_projection
from vortexlab.fields import Metric, WeightedField
from vortexlab.vortex import (curvature_of, gauge_transform, higgs_from_basis, hyperbolic_datum, invariant_phase,
                              orbit_quantities, predicted_kappa_p, sample_points, solve_conformal_factor, solve_vortex,
                              unitary_gauge_datum, vortex_residuals)

from conftest import basis, cached, grid, record_criterion, solved
from test_fields import commutator_errors, wiggly

ELLS = (Fraction(1, 2), Fraction(3, 2), Fraction(2), Fraction(3))
T, PAD, DT, COUNT = 50.0, 20.0, 0.01, 20


def ensemble(ell, h):
    """Solved theta = 0 data, 20 orbits on [-20, 70] and their per-orbit analyses (uncached grid and basis)."""
    def make():
        t0 = time.perf_counter()
        g = Grid(h)
        d = solve_vortex(higgs_from_basis(holomorphic_projection(1 + ell), g, 0.5, seed=1))
        traces = orbit_ensemble(random_starts(g.group, COUNT, seed=0), -PAD, T + PAD, DT, d.thermostat())
        records = [analyse_orbit(tr, ell, T, i) for i, tr in enumerate(traces)]
        return d, records, ensemble_summary(records), time.perf_counter() - t0
    return cached(("acceptance", ell, h), make)


def test_criterion_1_geodesic_baseline():
    t0 = time.perf_counter()
    d = hyperbolic_datum(Grid(0.02), 1)
    traces = orbit_ensemble(random_starts(d.grid.group, 5, seed=0), -PAD, T + PAD, DT, d.thermostat())
    gens = [GeneratorSeries.from_trace(tr) for tr in traces]
    hp = [hopf_limit(g, 0.0, tol=1e-8, schedule=(5.0, 10.0, 20.0)) for g in gens]
    err_r = max(max(abs(p.r_u - 1), abs(p.r_s + 1)) for p in hp)
    chis = [lyapunov_exponents(g.window(0.0, T)) for g in gens]
    err_chi = max(max(abs(c[0] - 1), abs(c[1] + 1)) for c in chis)
    fit = verify_domination([splitting_products(g, 0.0, T) for g in gens])
    secs = time.perf_counter() - t0
    ok = err_r < 1e-6 and err_chi < 1e-3 and fit.passed and abs(fit.mu - 2) < 0.05 and secs <= 60
    record_criterion(1, "geodesic baseline", ok, f"|r-+1| {err_r:.1e} at R=20, |chi-+1| {err_chi:.1e}, "
                     f"mu {fit.mu:.4f}, {secs:.1f}s")
    assert ok


@pytest.mark.slow
def test_criterion_2_kappa_p_identity():
    t0 = time.perf_counter()
    parts, ok = [], True
    for ell in ELLS:
        e1 = ensemble(ell, 0.02)[2]["max_kappa_p_err"]
        e2 = ensemble(ell, 0.01)[2]["max_kappa_p_err"]
        ratio = e1 / e2
        ok &= ratio >= 3.5
        parts.append(f"l={ell}: {e1:.2e} -> {e2:.2e} (x{ratio:.1f}, C={e2 / 0.01**2:.2f})")
    secs = time.perf_counter() - t0
    ok &= secs <= 600
    record_criterion(2, "kappa_p = -1 at O(h^2)", ok, "; ".join(parts) + f"; {secs:.0f}s")
    assert ok


def test_criterion_3_comparison_sandwich():
    slack = min(ensemble(ell, h)[2]["min_sandwich_slack"] for ell in ELLS for h in (0.02, 0.01))
    err = 0.0
    R = 30.0
    for c in (0.0, 0.5, 1.5):
        n = int(round(R / 0.005))
        gen = GeneratorSeries.from_coefficients(-np.ones(2 * n + 1), np.full(2 * n + 1, c), 0.0025, -R)
        r = riccati_integrate(gen, 0.0).r
        err = max(err, np.abs(r - comparison_solution(c, R, gen.times)).max())
    ok = slack >= -1e-4 and err < 1e-8
    record_criterion(3, "comparison sandwich", ok, f"min slack {slack:.2e}, closed-form gap {err:.1e}")
    assert ok


def test_criterion_4_anosov_alternatives():
    s2 = ensemble(Fraction(2), 0.01)[2]
    s12 = ensemble(Fraction(1, 2), 0.01)[2]
    bound = max(ensemble(ell, h)[2]["max_va_bound"] for ell in ELLS for h in (0.02, 0.01))
    ok1 = s2["min_r_u"] > 0 and s2["max_r_s"] < 0
    ok2 = s12["min_cond2_u"] > 0 and s12["max_cond2_s"] < 0
    ok = ok1 and ok2 and bound < 1
    record_criterion(4, "Anosov alternatives", ok,
                     f"l=2 min r_u {s2['min_r_u']:.3f} max r_s {s2['max_r_s']:.3f}; l=1/2 cond2 margins "
                     f"{s12['min_cond2_u']:.3f} / {s12['max_cond2_s']:.3f}; sup sqrt(l)|Va|/(1+l) {bound:.3f}")
    assert ok


def test_criterion_5_negative_curvature():
    worst = -np.inf
    for ell in ELLS:
        for h in (0.02, 0.01):
            d, _, s, _ = ensemble(ell, h)
            K = curvature_of(d.grid, d.u)
            worst = max(worst, np.nanmax(K[d.grid.interior]), s["max_Kg"])
    ok = worst < 0
    record_criterion(5, "negative curvature", ok, f"sup K_g = {worst:.4f} (margin {-worst:.4f})")
    assert ok


def test_criterion_6_pde_solver():
    g = grid(0.02)
    errs = []
    for a0, ell in ((0.3, Fraction(3, 2)), (1.0, Fraction(2)), (0.05, Fraction(1, 2))):
        l = float(ell)
        root = bisect(lambda u: -1 + np.exp(2 * u) - l * np.exp(-2 * l * u) * a0, -5, 5, xtol=1e-15, rtol=1e-15)
        u = solve_conformal_factor(g, np.full(g.z.shape, a0), ell, tol=1e-12)
        errs.append(np.abs(u[g.active] - root).max())
    u0 = solve_conformal_factor(g, np.zeros(g.z.shape), Fraction(3, 2), tol=1e-12)
    zero = np.abs(u0[g.active]).max()
    ok = max(errs) < 1e-10 and zero <= 1e-12
    record_criterion(6, "PDE solver", ok, f"constant-alpha errors {', '.join(f'{e:.1e}' for e in errs)}; "
                     f"alpha=0 sup|u| {zero:.1e}")
    assert ok


def test_criterion_7_kernel_dimensions():
    t0 = time.perf_counter()
    g = Grid(0.02)
    parts, ok = [], True
    for w, dim in ((Fraction(3), 5), (Fraction(2), 3), (Fraction(3, 2), 2)):
        b = holomorphic_projection(w)
        fields = b.fields(g)
        ok &= b.kernel_dim == dim and len(fields) == dim and b.gap >= 10
        parts.append(f"K^{w}: {b.kernel_dim} (gap {b.gap:.1e})")
    secs = time.perf_counter() - t0
    ok &= secs <= 300
    record_criterion(7, "holomorphic kernel dimensions", ok, ", ".join(parts) + f"; {secs:.1f}s")
    assert ok


def _conjugation_error(gen, sol, p, Fp):
    a = sol.psi * np.exp(sol.logscale)[:, None, None]
    c = evolve_cocycle(conjugate_generator(gen, p, Fp))
    b = c.psi * np.exp(c.logscale)[:, None, None]
    pred = conjugation_matrices(-p[::2]) @ a @ conjugation_matrices(p[:1])[0]
    return float((np.abs(b - pred).max(axis=(1, 2)) / np.abs(pred).max(axis=(1, 2))).max())


def test_criterion_8_structural_identities():
    ell = Fraction(3, 2)
    d = solved(ell, 0.02)
    traces = orbit_ensemble(random_starts(d.grid.group, 10, seed=9), -PAD, 20.0 + PAD, 0.005, d.thermostat())
    # determinant identity and conjugation equivariance on [0, 10]; the identity holds for any
    # differentiable gauge, so a smooth p is used. The sampled orbit p jumps slightly at side
    # crossings (automorphy defect of the grid data); its figure is reported, not asserted.
    det_err = eq_err = eq_orbit = 0.0
    for tr in traces[:5]:
        gen = GeneratorSeries.from_trace(tr).window(0.0, 10.0)
        sol = evolve_cocycle(gen)
        st = gen.sample_times
        det_err = max(det_err, abs(np.expm1(sol.log_det()[-1] - simpson(gen.Vlambda, x=st))))
        s = tr.samples
        sl = slice(int(round(PAD / tr.dt)), int(round((10.0 + PAD) / tr.dt)) + 1)
        Fp_orbit = (s["kappa_p"] - s["kappa"] - s["p"] * (s["p"] - s["Vlambda"]))[sl]
        for p, Fp in ((0.4 + 0.3 * np.sin(1.7 * st), 0.51 * np.cos(1.7 * st)), (s["p"][sl], Fp_orbit)):
            err = _conjugation_error(gen, sol, p, Fp)
            if Fp is Fp_orbit:
                eq_orbit = max(eq_orbit, err)
            else:
                eq_err = max(eq_err, err)
    # frame commutators and gauge invariance at h = 0.04, 0.02
    comm, gauge = [], []
    for h in (0.04, 0.02):
        g = grid(h)
        F = WeightedField(g, 2, np.where(g.active, wiggly(g.z), np.nan))
        z, phi = sample_points(g, 200, seed=3)
        comm.append(commutator_errors(F, Metric(g), z, phi)[2])
        dh = solved(Fraction(2), h)
        w = np.full(g.z.shape, np.nan)
        w[g.active] = invariant_phase(basis(3), 0.3)(g.z[g.active])[0]
        z, phi = sample_points(g, 1000, seed=6)
        gauge.append(np.abs(gauge_transform(dh, w).thermostat()(z, phi) - dh.thermostat()(z, phi)).max())
    # Hopf slope residuals and the quadratic form on 10 orbits, T = 20
    res, qmin = 0.0, np.inf
    for k, tr in enumerate(traces):
        gen = GeneratorSeries.from_trace(tr)
        _, ru, rs = hopf_series(gen, 0.0, 20.0)
        for r in (ru, rs):
            res = max(res, np.abs(riccati_residual(gen.window(0.0, 20.0), r)).max())
        q = quadratic_form_check(gen, 0.0, 20.0, seed=k)
        qmin = min(qmin, q.min_ratio if q.passed else -np.inf)
    ok = (det_err < 1e-6 and eq_err < 1e-6 and comm[1] < comm[0] / 3.5 and gauge[1] < gauge[0] / 3.5
          and res < 1e-5 and qmin > 0)
    record_criterion(8, "structural identities", ok,
                     f"det {det_err:.1e}, conjugation {eq_err:.1e} (orbit gauge {eq_orbit:.1e}), commutator x{comm[0] / comm[1]:.1f}, "
                     f"gauge x{gauge[0] / gauge[1]:.1f}, Riccati residual {res:.1e}, min Qdot/|v|^2 {qmin:.3f}")
    assert ok


def test_criterion_9_generalized_equations():
    ell = Fraction(2)
    errs, resid = [], []
    for h in (0.04, 0.02):
        e = unitary_gauge_datum(solved(ell, h), invariant_phase(basis(1 + ell), 1.0), ell + 1)
        z, phi = sample_points(e.grid, 2000, seed=8)
        q = orbit_quantities(e, z, phi)
        A2, sup_theta = float(np.max(np.abs(q["A"]) ** 2)), float(np.abs(q["Theta"]).max())
        assert A2 <= 1 / float(ell)  # input constraint
        curv, hol = vortex_residuals(e, z, phi)
        resid.append(max(np.abs(curv).max(), np.abs(hol).max()))
        traces = orbit_ensemble(random_starts(e.grid.group, 10, seed=2), -PAD, 20.0 + PAD, DT, e.thermostat())
        errs.append(max(np.abs(tr.samples["kappa_p"] - predicted_kappa_p(e, tr.z, tr.phi)).max() for tr in traces))
    summary = ensemble_summary([analyse_orbit(tr, ell, 20.0, i) for i, tr in enumerate(traces)])
    ok = (errs[1] < errs[0] / 3.5 and resid[1] < resid[0] / 3.5 and sup_theta < np.sqrt(float(ell))
          and summary["domination"] and summary["mu_fit"] > 0)
    record_criterion(9, "generalized equations", ok,
                     f"kappa_p error {errs[0]:.2e} -> {errs[1]:.2e}, residuals {resid[0]:.1e} -> {resid[1]:.1e}, "
                     f"sup|Theta| {sup_theta:.3f} < sqrt(l), max|A|^2 {A2:.3f}, mu {summary['mu_fit']:.3f}")
    assert ok
