"""Per-orbit pipeline shared by the command line and the acceptance tests."""
from __future__ import annotations

import numpy as np

from .cocycle import (GeneratorSeries, anosov_conditions, comparison_bounds, hopf_limit, hopf_series,
                      lyapunov_exponents, riccati_residual, splitting_products, verify_domination)


def analyse_orbit(trace, ell, T: float, orbit_id: int = 0, burn: float = 10.0) -> dict:
    """Hopf slopes, comparison bounds and splitting diagnostics on ``[0, T]``.

    ``trace`` must cover ``[-R, T + R]`` with some ``R >= 20`` and carry orbit samples.
    """
    s = trace.samples
    gen = GeneratorSeries.from_trace(trace)
    times, ru, rs = hopf_series(gen, 0.0, T)
    sl = slice(gen.index(0.0), gen.index(T) + 1, 2)
    p, kp, Vl, Va = s["p"][sl], s["kappa_p"][sl], s["Vlambda"][sl], s["Va"][sl]
    ell = float(ell)
    c = float(np.max(np.abs((1 - ell) / (1 + ell) * s["Va"])))
    lo, hi = comparison_bounds(c)
    hu, hs = ru - p, rs - p
    cond = anosov_conditions(ru, rs, p, kp, Vl)
    chi_hi, chi_lo, mean_vl = lyapunov_exponents(gen.window(0.0, T), burn=burn)
    t_, prod = splitting_products(gen, 0.0, T)
    fit = verify_domination([(t_, prod)])
    hp = hopf_limit(gen, 0.0)
    res_u = riccati_residual(gen.window(0.0, T), ru)
    res_s = riccati_residual(gen.window(0.0, T), rs)
    return {
        "orbit": orbit_id,
        "r_u": {"min": float(ru.min()), "max": float(ru.max()), "at0": hp.r_u, "R": hp.R_u},
        "r_s": {"min": float(rs.min()), "max": float(rs.max()), "at0": hp.r_s, "R": hp.R_s},
        "h_u": {"min": float(hu.min()), "max": float(hu.max())},
        "h_s": {"min": float(hs.min()), "max": float(hs.max())},
        "c": c, "bounds": [lo, hi],
        "sandwich_slack": float(min(hu.min() - lo, hi - hu.max())),
        "kappa_p": {"min": float(kp.min()), "max": float(kp.max()), "max_abs_err": float(np.abs(kp + 1).max())},
        "Kg_max": float(np.nanmax(s["Kg"])),
        "va_bound": float(np.max(np.abs(np.sqrt(ell) * Va / (1 + ell)))) if ell > 0 else 0.0,
        "riccati_residual": float(max(np.abs(res_u).max(), np.abs(res_s).max())),
        "conditions": cond,
        "mu_fit": fit.mu, "C_fit": fit.C, "domination": fit.passed,
        "chi_plus": chi_hi, "chi_minus": chi_lo, "mean_Vlambda": mean_vl,
        "_products": (t_, prod),
        "_series": (times, ru, rs),
    }


def ensemble_summary(records: list[dict]) -> dict:
    fit = verify_domination([r["_products"] for r in records])
    cond = [r["conditions"] for r in records]
    return {
        "orbits": len(records),
        "min_r_u": min(c["min_r_u"] for c in cond),
        "max_r_s": max(c["max_r_s"] for c in cond),
        "condition1": all(c["condition1"] for c in cond),
        "condition2": all(c["condition2"] for c in cond),
        "min_cond2_u": min(c["min_cond2_u"] for c in cond),
        "max_cond2_s": max(c["max_cond2_s"] for c in cond),
        "max_kappa_p_err": max(r["kappa_p"]["max_abs_err"] for r in records),
        "min_sandwich_slack": min(r["sandwich_slack"] for r in records),
        "max_Kg": max(r["Kg_max"] for r in records),
        "max_va_bound": max(r["va_bound"] for r in records),
        "mu_fit": fit.mu, "C_fit": fit.C, "domination": fit.passed,
        "min_chi_plus": min(r["chi_plus"] for r in records),
        "max_chi_minus": max(r["chi_minus"] for r in records),
    }


def public(record: dict) -> dict:
    return {k: v for k, v in record.items() if not k.startswith("_")}
