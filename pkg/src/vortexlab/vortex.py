"""Vortex data in the gauge ``f = 0``: conformal-factor solver, residuals and orbit quantities.

A datum consists of a Higgs field ``A`` of weight ``1 + l``, a weight-one field ``T`` encoding
the 1-form ``theta`` (``theta = Im(T e^{i phi})``), a conformal factor ``u`` with
``g = e^{2u} g0`` and a real gauge function ``f``.  Field amplitudes refer to ``g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .fields import Metric, WeightedField, as_fraction, dbar_residual_at, gradient, one_form_field, zero_field
from .grid import Grid
from .hyperbolic import PhasePoint, wrap_to_domain


class SolverFailure(RuntimeError):
    def __init__(self, msg, log=None):
        super().__init__(msg)
        self.log = log or []


@dataclass(frozen=True, eq=False)
class VortexData:
    """``k`` is the coupling in ``dbar A = k theta^{0,1} A`` (``l`` for the magnetic case)."""

    ell: Fraction
    A: WeightedField
    theta: WeightedField
    u: np.ndarray
    f: np.ndarray | None = None
    k: Fraction | None = None
    metric: Metric = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ell", as_fraction(self.ell))
        if self.k is None:
            object.__setattr__(self, "k", self.ell)
        if self.A.weight != 1 + self.ell:
            raise ValueError("Higgs field must have weight 1 + l")
        if self.theta.weight != 1:
            raise ValueError("theta must be a weight-one field")
        g = self.A.grid
        object.__setattr__(self, "metric", Metric(g, self.u))
        if self.A.metric_tag != self.metric.tag or self.theta.metric_tag != self.metric.tag:
            raise ValueError("field amplitudes must refer to the solved metric")

    @property
    def grid(self) -> Grid:
        return self.A.grid

    @property
    def flat_gauge(self) -> bool:
        return self.f is None or not np.any(self.f[self.grid.active])

    def thermostat(self) -> "ThermostatField":
        return ThermostatField(self.metric, self)


# ---------------------------------------------------------------------------
# conformal factor

def solve_conformal_factor(grid: Grid, alpha: np.ndarray, ell, tol: float = 1e-12,
                           max_iter: int = 200, log: list | None = None) -> np.ndarray:
    """Damped Newton for ``Delta_0 u = -1 + e^{2u} - l e^{-2 l u} alpha`` on grid nodes.

    Rows of interior nodes carry the five-point equation; margin rows carry the
    automorphic interpolation constraint, so ``u`` is periodic on the quotient.
    """
    ell = float(as_fraction(ell))
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha[grid.interior] < 0):
        raise ValueError("alpha must be nonnegative")
    log = [] if log is None else log
    n = grid.n_active
    idx = grid._index
    inter = grid.interior
    ia = idx[inter]
    s0 = grid.sigma0[inter]
    scale = np.exp(-2 * s0) / grid.h**2
    al = alpha[inter]

    # five-point Laplacian rows (interior nodes only), columns in active numbering
    J, I = np.nonzero(inter)
    rows, cols, vals = [], [], []
    for dj, di, c in ((0, 0, -4.0), (0, 1, 1.0), (0, -1, 1.0), (1, 0, 1.0), (-1, 0, 1.0)):
        rows.append(np.arange(ia.size))
        cols.append(idx[J + dj, I + di])
        vals.append(np.full(ia.size, c) * scale)
    L = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(ia.size, n))
    # ghost constraint rows, real weight-0 interpolation
    G = grid.ghost_operator(0.0).real
    E = sp.csr_matrix((np.ones(grid._ghost_active.size), (np.arange(grid._ghost_active.size), grid._ghost_active)),
                      shape=(grid._ghost_active.size, n))
    Cg = (E - G).tocsr()

    def residual(v):
        ui = v[ia]
        return L @ v - (-1.0 + np.exp(2 * ui) - ell * np.exp(-2 * ell * ui) * al), Cg @ v

    v = np.zeros(n)
    Pi = sp.csr_matrix((np.ones(ia.size), (np.arange(ia.size), ia)), shape=(ia.size, n))
    best_step, stale = np.inf, 0
    for it in range(max_iter):
        r_int, r_gh = residual(v)
        res = max(np.abs(r_int).max(), np.abs(r_gh).max() if r_gh.size else 0.0)
        if res < tol:
            log.append((it, float(res), 0.0))
            u = np.full(grid.z.shape, np.nan)
            u[grid.active] = v
            return u
        ui = v[ia]
        d = 2 * np.exp(2 * ui) + 2 * ell**2 * np.exp(-2 * ell * ui) * al
        Jint = L - sp.diags(d) @ Pi
        Jac = sp.vstack([Jint, Cg]).tocsc()
        perm = np.concatenate([ia, grid._ghost_active])
        # reorder rows so the matrix is square in active numbering
        order = np.empty(n, dtype=np.int64)
        order[perm] = np.arange(n)
        Jac = Jac[order, :]
        rhs = -np.concatenate([r_int, r_gh])[order]
        try:
            step = spla.splu(Jac).solve(rhs)
        except RuntimeError as exc:  # singular factorisation
            raise SolverFailure(f"Newton linear solve failed at iteration {it}: {exc}", log) from exc
        t = 1.0
        for _ in range(30):
            ri, rg = residual(v + t * step)
            new = max(np.abs(ri).max(), np.abs(rg).max() if rg.size else 0.0)
            if new <= (1 - 0.5 * t) * res or new < tol:
                break
            t *= 0.5
        v = v + t * step
        sn = float(np.abs(t * step).max())
        log.append((it, float(res), sn))
        if not np.all(np.isfinite(v)):
            raise SolverFailure("non-finite Newton iterate", log)
        if sn <= 1e-15 * max(1.0, float(np.abs(v).max())):
            raise SolverFailure(f"residual {res:.3e} stuck above tol {tol:g} at round-off (iterate no longer moves)", log)
        if sn < best_step:
            best_step, stale = sn, 0
        else:
            stale += 1
            if stale >= 20:
                raise SolverFailure("Newton stagnation: step norm not decreasing over 20 iterations", log)
    raise SolverFailure(f"no convergence in {max_iter} iterations (residual {res:.3e})", log)


def pde_residual(grid: Grid, u: np.ndarray, alpha: np.ndarray, ell) -> np.ndarray:
    """``Delta_0 u + 1 - e^{2u} + l e^{-2lu} alpha`` on interior nodes (NaN elsewhere)."""
    ell = float(as_fraction(ell))
    lap = np.exp(-2 * grid.sigma0) * grid.laplacian(u)
    r = lap + 1 - np.exp(2 * u) + ell * np.exp(-2 * ell * u) * alpha
    return np.where(grid.interior, r, np.nan)


def curvature_of(grid: Grid, u: np.ndarray) -> np.ndarray:
    """Gauss curvature of ``e^{2u} g0`` on interior nodes."""
    lap = np.exp(-2 * grid.sigma0) * grid.laplacian(u)
    return np.where(grid.interior, np.exp(-2 * u) * (-1.0 - lap), np.nan)


# ---------------------------------------------------------------------------
# data construction

def higgs_from_basis(basis, grid: Grid, amplitude: float = 0.5, seed: int = 0,
                     coeffs=None) -> WeightedField:
    """Random combination of holomorphic basis fields (``g0`` amplitudes).

    Scaled so that ``max l |A|^2_{g0}`` over grid nodes equals ``amplitude``;
    ``amplitude=None`` keeps the combination as given.
    """
    ell = as_fraction(basis.weight) - 1
    fields = basis.fields(grid)
    if coeffs is None:
        rng = np.random.default_rng(seed)
        coeffs = rng.normal(size=len(fields)) + 1j * rng.normal(size=len(fields))
    if len(coeffs) != len(fields):
        raise ValueError(f"expected {len(fields)} coefficients, got {len(coeffs)}")
    v = sum(c * F.values for c, F in zip(coeffs, fields))
    if amplitude is None:
        return WeightedField(grid, basis.weight, v, "g0")
    peak = float(ell) * np.nanmax(np.abs(v[grid.active]) ** 2)
    if amplitude == 0 or peak == 0:
        return WeightedField(grid, basis.weight, v * 0, "g0")
    return WeightedField(grid, basis.weight, v * np.sqrt(amplitude / peak), "g0")


def solve_vortex(A0: WeightedField, ell=None, tol: float = 1e-12, log: list | None = None) -> VortexData:
    """Solve for the metric given a holomorphic ``g0``-amplitude ``A0``; returns ``theta = 0`` data."""
    grid = A0.grid
    ell = as_fraction(ell if ell is not None else A0.weight - 1)
    alpha = np.abs(A0.values) ** 2
    u = solve_conformal_factor(grid, np.where(grid.active, alpha, 0.0), ell, tol=tol, log=log)
    metric = Metric(grid, u)
    return VortexData(ell, A0.retagged(metric), zero_field(grid, 1, metric.tag), u)


def hyperbolic_datum(grid: Grid, ell=1) -> VortexData:
    u = np.where(grid.active, 0.0, np.nan)
    return VortexData(as_fraction(ell), zero_field(grid, 1 + as_fraction(ell), "g"), zero_field(grid, 1, "g"), u)


def unitary_gauge_datum(d: VortexData, phase, k) -> VortexData:
    """Synthetic solution with ``theta != 0`` from a ``theta = 0`` datum.

    Multiplying ``A`` by ``e^{-i phase}`` and taking ``theta = -(1/k) * d(phase)`` solves
    ``dbar A = k theta^{0,1} A`` with ``delta theta = 0``, so the curvature equation is kept.
    ``phase`` is an invariant function: a node array (differentiated by centred
    differences) or a callable ``z -> (phase, phase_x, phase_y)``.
    """
    grid = d.grid
    k = as_fraction(k)
    if callable(phase):
        px, py = (np.full(grid.z.shape, np.nan) for _ in range(2))
        vals = np.full(grid.z.shape, np.nan)
        vals[grid.active], px[grid.active], py[grid.active] = (np.real(t) for t in phase(grid.z[grid.active]))
        phase = vals
    else:
        px, py = gradient(grid, np.where(grid.active, phase, np.nan))
    one = one_form_field(grid, d.metric, py / float(k), -px / float(k))
    A = WeightedField(grid, d.A.weight, d.A.values * np.exp(-1j * phase), d.A.metric_tag)
    return VortexData(d.ell, A, one, d.u, d.f, k)


def invariant_phase(basis, scale: float = 1.0, i: int = 0, j: int = 1):
    """``z -> (phase, phase_x, phase_y)`` for ``phase = scale * Re(b_i conj(b_j))``.

    The product of two basis amplitudes of equal weight is invariant under the group.
    """
    def phase(z):
        b1, x1, y1 = basis.amplitude_derivatives(z, i)
        b2, x2, y2 = basis.amplitude_derivatives(z, j)
        return (scale * np.real(b1 * np.conj(b2)), scale * np.real(x1 * np.conj(b2) + b1 * np.conj(x2)),
                scale * np.real(y1 * np.conj(b2) + b1 * np.conj(y2)))
    return phase


def gauge_transform(d: VortexData, w: np.ndarray) -> VortexData:
    """``(A, theta, f) -> (e^{-w} A, theta - dw / l, f + w)``; ``lambda`` is unchanged."""
    grid = d.grid
    w = np.where(grid.active, w, np.nan)
    wx, wy = gradient(grid, w)
    dw = one_form_field(grid, d.metric, wx, wy)
    theta = WeightedField(grid, 1, np.where(grid.active, d.theta.values - dw.values / float(d.ell), np.nan), d.metric.tag)
    A = WeightedField(grid, d.A.weight, d.A.values * np.exp(-w), d.A.metric_tag)
    f = w if d.f is None else d.f + w
    return VortexData(d.ell, A, theta, d.u, f, d.k)


# ---------------------------------------------------------------------------
# pointwise quantities at chart points (already wrapped into the active region)

class ThermostatField:
    """``lambda = e^f a - V theta - (1/l) H f`` for vortex data, or a synthetic function.

    ``synthetic(z, phi)`` may supply ``lambda`` directly (used with the hyperbolic metric).
    """

    def __init__(self, metric: Metric, datum: VortexData | None = None, synthetic=None):
        if (datum is None) == (synthetic is None):
            raise ValueError("give exactly one of datum or synthetic")
        self.metric = metric
        self.datum = datum
        self.synthetic = synthetic

    @classmethod
    def constant(cls, c: float, metric: Metric | None = None) -> "ThermostatField":
        metric = metric or Metric(None)
        return cls(metric, synthetic=lambda z, phi: np.full(np.shape(z), float(c)))

    @property
    def group(self):
        if self.datum is not None:
            return self.datum.grid.group
        return getattr(self.metric.grid, "group", None)

    def components(self, z, phi) -> dict:
        d = self.datum
        B = d.A.at(z, phi)
        Vtheta = d.theta.at(z, phi).real
        out = {"a": B.imag, "Vtheta": Vtheta, "Hf": np.zeros(np.shape(z)), "ef": np.ones(np.shape(z))}
        if not d.flat_gauge:
            f, fx, fy = d.grid.interpolate(d.f, z)
            s = self.metric.conformal(z)[0]
            phi = np.asarray(phi, dtype=float)
            out["Hf"] = np.exp(-s) * (-np.sin(phi) * fx.real + np.cos(phi) * fy.real)
            out["ef"] = np.exp(f.real)
        return out

    def __call__(self, z, phi):
        if self.synthetic is not None:
            return self.synthetic(z, phi)
        c = self.components(z, phi)
        return c["ef"] * c["a"] - c["Vtheta"] - c["Hf"] / float(self.datum.ell)

    def at(self, p: PhasePoint) -> float:
        q, _ = wrap_to_domain(self.group, p)
        return float(self(np.array([q.z]), np.array([q.phi]))[0])


def orbit_quantities(d: VortexData, z, phi) -> dict:
    """``lambda, V lambda, H lambda, K, kappa, p, Fp, kappa_p`` at chart points (gauge ``f = 0``).

    ``p = theta + V a / (1 + l)`` and ``kappa_p = kappa + Fp + p (p - V lambda)``.
    """
    if not d.flat_gauge:
        raise ValueError("orbit quantities are implemented in the gauge f = 0")
    m = d.metric
    w = float(d.A.weight)
    B, XB, HB = d.A.frame(m, z, phi)
    T, XT, HT = d.theta.frame(m, z, phi)
    a = B.imag
    lam = a - T.real
    Vlam = w * B.real + T.imag
    Hlam = HB.imag - HT.real
    K = m.curvature(z)
    kappa = K - Hlam + lam**2
    p = T.imag + B.real
    Fp = XB.real - w * lam * a + XT.imag + lam * T.real
    kappa_p = kappa + Fp + p * (p - Vlam)
    return {"lambda": lam, "Vlambda": Vlam, "Hlambda": Hlam, "Kg": K, "kappa": kappa, "p": p,
            "Fp": Fp, "kappa_p": kappa_p, "Va": w * B.real, "Theta": 1j * np.conj(T), "A": B}


def generalized_kappa_p(d: VortexData, z, phi) -> np.ndarray:
    """``kappa_p`` from frame derivatives; for data solving the ``k`` equations this is
    ``-1 + (k - l) Re(Theta A)`` (see :func:`predicted_kappa_p`)."""
    return orbit_quantities(d, z, phi)["kappa_p"]


def predicted_kappa_p(d: VortexData, z, phi) -> np.ndarray:
    q = orbit_quantities(d, z, phi)
    return -1.0 + float(d.k - d.ell) * np.real(q["Theta"] * q["A"])


def sample_points(grid: Grid, count: int, seed: int = 0, inset: float = 0.0):
    """Random chart points in the octagon (at least ``inset`` inside each side) and fibre angles."""
    rng = np.random.default_rng(seed)
    dom = grid.group.domain
    out = np.empty(0, dtype=complex)
    while out.size < count:
        z = rng.uniform(-0.85, 0.85, 4 * count) + 1j * rng.uniform(-0.85, 0.85, 4 * count)
        out = np.concatenate([out, z[dom.contains(z) & (dom.side_excess(z).max(axis=0) <= -inset)]])
    phi = rng.uniform(0, 4 * np.pi, count)
    return out[:count], phi


def vortex_residuals(d: VortexData, z=None, phi=None, count: int = 2000, seed: int = 0):
    """Residuals of the curvature and holomorphicity equations at phase samples.

    ``curv = K + 1 + X theta + H V theta - l |A|^2`` and ``hol`` is the weighted dbar
    residual divided by ``1 + l``.  Default samples are random (off-node) points.
    """
    if z is None:
        z, phi = sample_points(d.grid, count, seed)
    m = d.metric
    B = d.A.at(z, phi)
    T, XT, HT = d.theta.frame(m, z, phi)
    curv = m.curvature(z) + 1 + XT.imag + HT.real - float(d.ell) * np.abs(B) ** 2
    hol = dbar_residual_at(d.A, d.theta, d.ell, m, z, phi, k=d.k) / (1 + float(d.ell))
    return curv, hol
