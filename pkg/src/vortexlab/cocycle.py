"""Linearised flow along orbits: cocycle, gauge conjugation, Riccati/Hopf slopes, splitting tests.

A generator series stores the matrices ``B(t)`` of ``dPsi/dt + B Psi = 0`` on a uniform grid
of half steps: RK4 step ``k`` uses samples ``2k, 2k+1, 2k+2``.  For orbit data
``B = [[0, -1], [kappa, -V lambda]]`` acting on ``(y, y')``; slopes ``r = y'/y`` satisfy
``r' + r^2 - r V lambda + kappa = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels

HOPF_SCHEDULE = (5.0, 10.0, 20.0, 40.0, 80.0)


class HopfConvergenceError(RuntimeError):
    def __init__(self, msg, gaps):
        super().__init__(msg)
        self.gaps = list(gaps)


@dataclass(frozen=True, eq=False)
class GeneratorSeries:
    """``mats[i]`` is ``B`` at time ``t0 + i * dt``; ``dt`` is half the integration step."""

    mats: np.ndarray
    dt: float
    t0: float = 0.0
    breaks: np.ndarray | None = None  # coefficients may jump between samples i - 1 and i

    def __post_init__(self):
        m = np.array(self.mats, dtype=float)
        if m.ndim != 3 or m.shape[1:] != (2, 2) or m.shape[0] % 2 == 0:
            raise ValueError("need an odd number of 2x2 samples")
        m.setflags(write=False)
        object.__setattr__(self, "mats", m)
        b = np.zeros(m.shape[0], dtype=bool) if self.breaks is None else np.array(self.breaks, dtype=bool)
        object.__setattr__(self, "breaks", b)

    @classmethod
    def from_coefficients(cls, kappa, Vlambda, dt: float, t0: float = 0.0, breaks=None) -> "GeneratorSeries":
        kappa = np.asarray(kappa, dtype=float)
        m = np.zeros(kappa.shape + (2, 2))
        m[:, 0, 1] = -1.0
        m[:, 1, 0] = kappa
        m[:, 1, 1] = -np.asarray(Vlambda, dtype=float) * np.ones_like(kappa)
        return cls(m, dt, t0, breaks)

    @classmethod
    def from_trace(cls, trace) -> "GeneratorSeries":
        s = trace.samples
        return cls.from_coefficients(s["kappa"], s["Vlambda"], trace.dt, float(trace.times[0]), trace.wrapped)

    @property
    def kappa(self) -> np.ndarray:
        return self.mats[:, 1, 0]

    @property
    def Vlambda(self) -> np.ndarray:
        return -self.mats[:, 1, 1] - self.mats[:, 0, 0]

    @property
    def step(self) -> float:
        return 2 * self.dt

    @property
    def times(self) -> np.ndarray:
        """Times of the full integration steps."""
        return self.t0 + self.step * np.arange((self.mats.shape[0] + 1) // 2)

    @property
    def sample_times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.mats.shape[0])

    @property
    def t_end(self) -> float:
        return self.t0 + self.dt * (self.mats.shape[0] - 1)

    def index(self, t: float) -> int:
        """Sample index of a full-step time ``t``."""
        i = (t - self.t0) / self.dt
        k = int(round(i))
        if abs(i - k) > 1e-6 or k % 2 or not 0 <= k < self.mats.shape[0]:
            raise ValueError(f"time {t} is not a full step of the series")
        return k

    def window(self, t0: float, t1: float) -> "GeneratorSeries":
        i, j = self.index(t0), self.index(t1) + 1
        return GeneratorSeries(self.mats[i:j], self.dt, t0, self.breaks[i:j])

    def scaled(self, s: float) -> "GeneratorSeries":
        return GeneratorSeries(self.mats * s, self.dt, self.t0, self.breaks)

    def rhs(self) -> np.ndarray:
        """``-B``: the matrix of ``dPsi/dt = M Psi``."""
        return -self.mats


# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CocycleSolution:
    """``Psi(t) = psi[k] * exp(logscale[k])`` at full steps; ``w[k]`` follows ``w' = lambda y``.

    ``logdet`` is accumulated from the per-segment matrices, so it stays accurate after
    ``psi`` has become numerically rank one.
    """

    times: np.ndarray
    psi: np.ndarray
    logscale: np.ndarray
    logdet: np.ndarray
    w: np.ndarray | None = None

    def matrix(self, k: int) -> np.ndarray:
        return self.psi[k] * np.exp(self.logscale[k])

    def log_det(self) -> np.ndarray:
        return self.logdet


def evolve_cocycle(gen: GeneratorSeries, lam=None, renorm_time: float = 10.0) -> CocycleSolution:
    """RK4 for ``dPsi/dt = -B Psi`` with ``Psi(0) = I``; optional ``w`` component from ``lam`` samples.

    Integrates segments of ``renorm_time`` from the identity and chains them, renormalising the
    product (log scale kept) at each segment end.
    """
    mats = gen.rhs()
    K = (mats.shape[0] - 1) // 2
    every = int(max(1, min(K, round(renorm_time / gen.step))))
    psi = np.empty((K + 1, 2, 2))
    logs = np.empty(K + 1)
    logdet = np.empty(K + 1)
    P, L, LD = np.eye(2), 0.0, 0.0
    psi[0], logs[0], logdet[0] = P, 0.0, 0.0
    k = 0
    while k < K:
        n = min(every, K - k)
        seg, sl = kernels.cocycle_rk4(mats[2 * k:2 * (k + n) + 1], gen.step, 0)
        psi[k + 1:k + n + 1] = seg[1:] @ P
        logs[k + 1:k + n + 1] = L + sl[1:]
        with np.errstate(divide="ignore"):  # -inf once a segment is numerically rank one
            logdet[k + 1:k + n + 1] = LD + np.log(np.abs(np.linalg.det(seg[1:]))) + 2 * sl[1:]
        k += n
        nrm = np.abs(psi[k]).max()
        P, L, LD = psi[k] / nrm, logs[k] + np.log(nrm), logdet[k]
        psi[k], logs[k] = P, L
    w = None
    if lam is not None:
        lam = np.asarray(lam, dtype=float)[::2]
        y = psi[:, 0, :]  # first row: y of both fundamental solutions (scaled)
        w = np.zeros((psi.shape[0], 2))
        for k in range(psi.shape[0] - 1):
            # w in units of exp(logscale), trapezoid rule over the step
            shrink = np.exp(logs[k] - logs[k + 1])
            w[k + 1] = w[k] * shrink + 0.5 * gen.step * (lam[k] * y[k] * shrink + lam[k + 1] * y[k + 1])
    return CocycleSolution(gen.times, psi, logs, logdet, w)


def conjugation_matrices(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    P = np.zeros(p.shape + (2, 2))
    P[:, 0, 0] = P[:, 1, 1] = 1.0
    P[:, 1, 0] = p
    return P


def conjugate_generator(gen: GeneratorSeries, p, Fp=None) -> GeneratorSeries:
    """``P^{-1} B P + P^{-1} dP/dt`` with ``P = [[1, 0], [p, 1]]``.

    ``Fp`` (derivative along the orbit) defaults to second-order differences of ``p``.
    """
    p = np.asarray(p, dtype=float)
    if Fp is None:
        Fp = np.gradient(p, gen.dt, edge_order=2)
    P = conjugation_matrices(p)
    Pinv = conjugation_matrices(-p)
    dP = np.zeros_like(P)
    dP[:, 1, 0] = Fp
    return GeneratorSeries(Pinv @ gen.mats @ P + Pinv @ dP, gen.dt, gen.t0, gen.breaks)


def gauge_coefficients(gen: GeneratorSeries, p, Fp=None):
    """``(kappa_p, V lambda - p)``: the lower row of the conjugated generator."""
    c = conjugate_generator(gen, p, Fp)
    return c.mats[:, 1, 0], -c.mats[:, 1, 1]


# ---------------------------------------------------------------------------
# Riccati in projective form

@dataclass(frozen=True, eq=False)
class RiccatiSolution:
    times: np.ndarray
    angle: np.ndarray

    @property
    def r(self) -> np.ndarray:
        c = np.cos(self.angle)
        with np.errstate(divide="ignore"):
            return np.where(np.abs(c) < 1e-300, np.inf, np.sin(self.angle) / c)


def riccati_integrate(gen: GeneratorSeries, r0=np.inf, direction: int = 1) -> RiccatiSolution:
    """Line field of the cocycle through the initial slope ``r0`` (``inf`` allowed).

    ``direction=1`` starts at the first sample, ``-1`` at the last one.
    """
    psi0 = np.pi / 2 if np.isinf(r0) else float(np.arctan(r0))
    ang = kernels.riccati_angle(gen.rhs(), gen.step, psi0, 1 if direction > 0 else -1)
    return RiccatiSolution(gen.times, ang)


def riccati_residual(gen: GeneratorSeries, r: np.ndarray) -> np.ndarray:
    """``r' + r^2 - r V lambda + kappa`` at full steps (generalised to any ``B``).

    ``r'`` from fourth-order centred differences; steps whose stencil straddles a
    coefficient jump (``gen.breaks``) are dropped.
    """
    M = gen.rhs()[::2]
    rhs = M[:, 1, 0] + (M[:, 1, 1] - M[:, 0, 0]) * r - M[:, 0, 1] * r**2
    K = r.size
    dr = np.full(K, np.nan)
    dr[2:-2] = (r[:-4] - 8 * r[1:-3] + 8 * r[3:-1] - r[4:]) / (12 * gen.step)
    keep = np.ones(K, dtype=bool)
    keep[:2] = keep[-2:] = False
    for j in np.flatnonzero(gen.breaks):  # jump between samples j - 1 and j
        keep[max(0, (j - 1) // 2 - 2):min(K, j // 2 + 3)] = False
    return (dr - rhs)[keep]


@dataclass(frozen=True)
class HopfPair:
    r_u: float
    r_s: float
    R_u: float
    R_s: float
    gaps_u: tuple = field(default=())
    gaps_s: tuple = field(default=())


def _hopf_value(gen: GeneratorSeries, t: float, R: float, unstable: bool) -> float:
    if unstable:
        sub = gen.window(t - R, t)
        return float(riccati_integrate(sub, np.inf, 1).r[-1])
    sub = gen.window(t, t + R)
    return float(riccati_integrate(sub, np.inf, -1).r[0])


def hopf_limit(gen: GeneratorSeries, t: float = 0.0, tol: float = 1e-8, schedule=HOPF_SCHEDULE) -> HopfPair:
    """Hopf slopes at time ``t``: push the slope ``inf`` from ``t - R`` (resp. ``t + R``) to ``t``.

    ``R`` runs through ``schedule`` (truncated to what the series covers) until successive
    values differ by less than ``tol``.
    """
    out = {}
    for unstable in (True, False):
        avail = (t - gen.t0) if unstable else (gen.t_end - t)
        Rs = [R for R in schedule if R <= avail + 1e-9]
        vals, gaps = [], []
        for R in Rs:
            vals.append(_hopf_value(gen, t, R, unstable))
            if len(vals) > 1:
                gaps.append(abs(vals[-1] - vals[-2]))
                if gaps[-1] < tol:
                    break
        name = "u" if unstable else "s"
        if not gaps or gaps[-1] >= tol:
            raise HopfConvergenceError(f"Hopf slope r_{name} not converged (gaps {gaps})", gaps)
        out[name] = (vals[-1], Rs[len(vals) - 1], tuple(gaps))
    return HopfPair(out["u"][0], out["s"][0], out["u"][1], out["s"][1], out["u"][2], out["s"][2])


def hopf_series(gen: GeneratorSeries, t0: float, t1: float):
    """Hopf slopes on ``[t0, t1]`` from one pass each: ``r_u`` started at the beginning of the
    series, ``r_s`` at its end.  Returns ``(times, r_u, r_s)``."""
    ru = riccati_integrate(gen, np.inf, 1).r
    rs = riccati_integrate(gen, np.inf, -1).r
    i0, i1 = gen.index(t0) // 2, gen.index(t1) // 2
    return gen.times[i0:i1 + 1], ru[i0:i1 + 1], rs[i0:i1 + 1]


# ---------------------------------------------------------------------------
# closed forms for the constant-coefficient comparison equation

def comparison_bounds(c: float) -> tuple[float, float]:
    if c < 0:
        raise ValueError("c must be nonnegative")
    s = np.sqrt(c * c + 4.0)
    return (-c + s) / 2.0, (c + s) / 2.0


def comparison_solution(c: float, R: float, t):
    """Solution of ``h' = 1 + c h - h^2`` with ``h(-R) = 0``."""
    s = np.sqrt(c * c + 4.0)
    cp, cm = (c + s) / 2.0, (c - s) / 2.0
    E = 1.0 / (cp - cm)
    e = np.exp((-R - np.asarray(t, dtype=float)) / E)
    return (1.0 - e) / (-cm + cp * e)


# ---------------------------------------------------------------------------
# splitting diagnostics

def anosov_conditions(r_u, r_s, p, kappa_p, Vlambda) -> dict:
    """Margins of the two sufficient alternatives for hyperbolicity along an orbit.

    (1) ``r_u > 0 > r_s``; (2) ``V lambda - p - kappa_p / (r - p)`` positive for ``r_u``,
    negative for ``r_s``.
    """
    r_u, r_s, p, kp, Vl = (np.asarray(x, dtype=float) for x in (r_u, r_s, p, kappa_p, Vlambda))
    m_u = Vl - p - kp / (r_u - p)
    m_s = Vl - p - kp / (r_s - p)
    c1 = float(min(r_u.min(), -r_s.max()))
    c2 = float(min(m_u.min(), -m_s.max()))
    return {"min_r_u": float(r_u.min()), "max_r_s": float(r_s.max()), "condition1": c1 > 0, "margin1": c1,
            "min_cond2_u": float(m_u.min()), "max_cond2_s": float(m_s.max()), "condition2": c2 > 0, "margin2": c2,
            "max_kappa_p": float(kp.max())}


def _log_growth(gen: GeneratorSeries, angle: np.ndarray) -> np.ndarray:
    """``log(|Psi_t e| / |e|)`` along an invariant line with angle series ``angle`` (trapezoid)."""
    M = gen.rhs()[::2]
    c, s = np.cos(angle), np.sin(angle)
    rate = M[:, 0, 0] * c * c + (M[:, 0, 1] + M[:, 1, 0]) * s * c + M[:, 1, 1] * s * s
    return np.concatenate([[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * gen.step)])


def splitting_products(gen: GeneratorSeries, t0: float, t1: float) -> tuple[np.ndarray, np.ndarray]:
    """``t`` and ``|Psi_t|E^s(x)| * |Psi_{-t}|E^u(phi_t x)|`` for ``x`` at time ``t0``, ``t <= t1 - t0``."""
    au = riccati_integrate(gen, np.inf, 1).angle
    as_ = riccati_integrate(gen, np.inf, -1).angle
    i0, i1 = gen.index(t0) // 2, gen.index(t1) // 2
    sub = gen.window(t0, t1)
    gs = _log_growth(sub, as_[i0:i1 + 1])
    gu = _log_growth(sub, au[i0:i1 + 1])
    return sub.times - t0, gs - gu


@dataclass(frozen=True)
class DominationFit:
    C: float
    mu: float
    passed: bool


def verify_domination(products) -> DominationFit:
    """Fit ``log product = log C - mu t`` over all orbits; ``C`` is raised to bound every sample."""
    ts = np.concatenate([t[1:] for t, _ in products])
    ls = np.concatenate([l[1:] for _, l in products])
    A = np.column_stack([np.ones_like(ts), -ts])
    (logC, mu), *_ = np.linalg.lstsq(A, ls, rcond=None)
    C = float(np.exp(np.max(ls + mu * ts)))
    ok = bool(mu > 0 and np.all(ls <= np.log(C) - mu * ts + 1e-12))
    return DominationFit(C, float(mu), ok)


def lyapunov_exponents(gen: GeneratorSeries, burn: float = 10.0, segment: float = 1.0) -> tuple[float, float, float]:
    """QR-renormalised exponents over ``[t0 + burn, t_end]``; also returns ``(1/T) int V lambda``.

    The first ``burn`` time units only align the orthonormal frame.
    """
    nseg = int(round(segment / gen.step))
    mats = gen.rhs()
    K = (mats.shape[0] - 1) // 2
    Q = np.eye(2)
    acc = np.zeros(2)
    t_used = 0.0
    k = 0
    while k < K:
        n = min(nseg, K - k)
        Phi, ls = kernels.cocycle_rk4(mats[2 * k:2 * (k + n) + 1], gen.step, 0)
        Q, R = np.linalg.qr(Phi[-1] @ Q)
        if gen.t0 + k * gen.step >= gen.t0 + burn - 1e-9:
            acc += np.log(np.abs(np.diag(R))) + ls[-1]
            t_used += n * gen.step
        sgn = np.sign(np.diag(R))
        Q = Q * sgn
        k += n
    if t_used <= 0:
        raise ValueError("series shorter than the burn-in")
    chi = acc / t_used
    Vl = gen.Vlambda
    i0 = 2 * int(round(burn / gen.step))
    seg = Vl[i0:]
    mean_vl = float(np.sum(0.5 * (seg[1:] + seg[:-1])) * gen.dt / t_used)
    hi, lo = float(chi.max()), float(chi.min())
    return hi, lo, mean_vl


# ---------------------------------------------------------------------------
# quadratic form along the trace-free gauge

@dataclass(frozen=True, eq=False)
class QuadraticCheck:
    min_ratio: float
    max_mismatch: float
    passed: bool


def quadratic_form_check(gen: GeneratorSeries, t0: float, t1: float, n_solutions: int = 4, seed: int = 0,
                         tol: float = 1e-8) -> QuadraticCheck:
    """Monotonicity of ``Q(a, b) = 2ab - (h_u + h_s) a^2`` along the trace-free gauge.

    With ``p = V lambda / 2`` the conjugated system splits off a scalar factor and leaves
    ``a' = b, b' = -kappa_p a``; ``h_u, h_s`` are its Hopf slopes.  Checks
    ``dQ/dt >= -tol (a^2 + b^2)`` from differences of ``Q`` and agreement with
    ``(b - h_u a)^2 + (b - h_s a)^2``.
    """
    p = 0.5 * gen.Vlambda
    kp, _ = gauge_coefficients(gen, p)
    sl = GeneratorSeries.from_coefficients(kp, 0.0 * kp, gen.dt, gen.t0)
    times, hu, hs = hopf_series(sl, t0, t1)
    sub = sl.window(t0, t1)
    rng = np.random.default_rng(seed)
    psi, logs = kernels.cocycle_rk4(sub.rhs(), sub.step, 0)
    worst, mismatch = np.inf, 0.0
    for _ in range(n_solutions):
        v = rng.normal(size=2)
        a, b = psi[:, 0, :] @ v, psi[:, 1, :] @ v
        Q = 2 * a * b - (hu + hs) * a * a
        dQ = np.gradient(Q, sub.step, edge_order=2)[2:-2]
        form = ((b - hu * a) ** 2 + (b - hs * a) ** 2)[2:-2]
        nrm = (a * a + b * b)[2:-2]
        worst = min(worst, float(np.min(dQ / nrm)))
        mismatch = max(mismatch, float(np.max(np.abs(dQ - form) / nrm)))
    return QuadraticCheck(worst, mismatch, worst > -tol)
