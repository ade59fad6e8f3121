"""Thermostat flow ``X + lambda V`` in the disk chart and sampled orbit quantities."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import Metric
from .hyperbolic import FuchsianGroup, PhasePoint
from .vortex import ThermostatField, orbit_quantities

QUANTITIES = ("lambda", "Vlambda", "Hlambda", "Kg", "kappa", "p", "kappa_p")
CSV_COLUMNS = ("t", "Re z", "Im z", "phi") + QUANTITIES


class FlowError(RuntimeError):
    """Non-finite state during integration; ``step`` is the failing step index."""

    def __init__(self, msg, step=None):
        super().__init__(msg)
        self.step = step


@dataclass(frozen=True, eq=False)
class OrbitTrace:
    """Uniformly spaced samples of one orbit; ``samples`` maps quantity names to arrays."""

    times: np.ndarray
    z: np.ndarray
    phi: np.ndarray
    samples: dict = field(default_factory=dict)
    wrapped: np.ndarray | None = None  # sample i was produced by a deck transformation

    def __post_init__(self):
        if self.wrapped is None:
            object.__setattr__(self, "wrapped", np.zeros(self.times.shape, dtype=bool))
        for arr in (self.times, self.z, self.phi, self.wrapped, *self.samples.values()):
            arr.setflags(write=False)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def __len__(self) -> int:
        return self.times.size

    def window(self, t0: float, t1: float) -> "OrbitTrace":
        i0 = int(round((t0 - self.times[0]) / self.dt))
        i1 = int(round((t1 - self.times[0]) / self.dt)) + 1
        if i0 < 0 or i1 > len(self):
            raise ValueError("window outside the sampled interval")
        sl = slice(i0, i1)
        return OrbitTrace(self.times[sl].copy(), self.z[sl].copy(), self.phi[sl].copy(),
                          {k: v[sl].copy() for k, v in self.samples.items()}, self.wrapped[sl].copy())

    def to_rows(self):
        cols = [self.times, self.z.real, self.z.imag, self.phi] + [self.samples.get(q, np.full(len(self), np.nan)) for q in QUANTITIES]
        return np.column_stack(cols)


# ---------------------------------------------------------------------------

def _rhs(metric: Metric, thermostat: ThermostatField, z, phi):
    s, sx, sy = metric.conformal(z)
    es = np.exp(-s)
    c, sn = np.cos(phi), np.sin(phi)
    return es * (c + 1j * sn), es * (-sx * sn + sy * c) + thermostat(z, phi)


def integrate_ensemble(z0, phi0, T: float, dt: float, thermostat: ThermostatField,
                       group: FuchsianGroup | None = None, max_word: int = 6, wrap: bool = True):
    """Fixed-step RK4 for many starts at once; returns ``(times, Z, PHI, WRAPPED)``, each ``(M, N)``
    apart from ``times``.

    ``T < 0`` integrates backward.  States are wrapped into the octagon after every step;
    the fibre angle picks up the frame rotation and is never reduced.  ``wrap=False``
    follows the lifted orbit in the disk instead (synthetic thermostats only).
    """
    if not 0 < dt <= 1e-2 + 1e-15:
        raise ValueError("dt must lie in (0, 1e-2]")
    group = group or thermostat.group or FuchsianGroup()
    metric = thermostat.metric
    nsteps = int(round(abs(T) / dt))
    if abs(nsteps * dt - abs(T)) > 1e-9 * max(1.0, abs(T)):
        raise ValueError("T must be a multiple of dt")
    h = np.sign(T) * dt if T != 0 else dt
    z = np.array(np.atleast_1d(z0), dtype=complex)
    phi = np.array(np.atleast_1d(phi0), dtype=float)
    if wrap:
        z, a, b = group.wrap_many(z, max_word)
        phi = phi + _rotation(a, b, np.atleast_1d(z0))
    Z = np.empty((z.size, nsteps + 1), dtype=complex)
    P = np.empty((z.size, nsteps + 1))
    Wr = np.zeros((z.size, nsteps + 1), dtype=bool)
    Z[:, 0], P[:, 0] = z, phi
    for n in range(nsteps):
        k1z, k1p = _rhs(metric, thermostat, z, phi)
        k2z, k2p = _rhs(metric, thermostat, z + 0.5 * h * k1z, phi + 0.5 * h * k1p)
        k3z, k3p = _rhs(metric, thermostat, z + 0.5 * h * k2z, phi + 0.5 * h * k2p)
        k4z, k4p = _rhs(metric, thermostat, z + h * k3z, phi + h * k3p)
        zn = z + h * (k1z + 2 * k2z + 2 * k3z + k4z) / 6
        phi = phi + h * (k1p + 2 * k2p + 2 * k3p + k4p) / 6
        if not (np.all(np.isfinite(zn)) and np.all(np.isfinite(phi))):
            raise FlowError(f"non-finite state at step {n}", step=n)
        if wrap:
            z, a, b = group.wrap_many(zn, max_word)
            phi = phi + _rotation(a, b, zn)
            Wr[:, n + 1] = b != 0
        else:
            z = zn
        Z[:, n + 1], P[:, n + 1] = z, phi
    times = h * np.arange(nsteps + 1)
    return times, Z, P, Wr


def _rotation(a, b, z):
    return -2.0 * (np.angle(np.conj(a)) + np.angle(1.0 + np.conj(b) * z / np.conj(a)))


def integrate_flow(start: PhasePoint, T: float, dt: float, thermostat: ThermostatField, datum=None,
                   wrap: bool = True) -> OrbitTrace:
    """One orbit from ``start``; samples include orbit quantities when ``datum`` is given."""
    times, Z, P, Wr = integrate_ensemble([start.z], [start.phi], T, dt, thermostat, wrap=wrap)
    trace = OrbitTrace(times, Z[0], P[0], wrapped=Wr[0])
    return sample_orbit(trace, thermostat, datum)


def sample_orbit(trace: OrbitTrace, thermostat: ThermostatField, datum=None) -> OrbitTrace:
    """Attach ``lambda, V lambda, H lambda, K, kappa, p, kappa_p`` to the states of ``trace``."""
    if datum is None:
        datum = thermostat.datum
    if datum is not None:
        q = orbit_quantities(datum, trace.z, trace.phi)
        s = {k: np.asarray(q[k], dtype=float) for k in QUANTITIES}
        s["Va"] = np.asarray(q["Va"], dtype=float)
    else:
        s = synthetic_quantities(thermostat, trace.z, trace.phi)
    return OrbitTrace(trace.times, trace.z, trace.phi, s, trace.wrapped)


def synthetic_quantities(thermostat: ThermostatField, z, phi) -> dict:
    """Quantities for a synthetic ``lambda`` on the hyperbolic background (``p = 0``).

    ``thermostat.derivatives(z, phi)`` may give ``(V lambda, H lambda)``; zero otherwise.
    """
    if not thermostat.metric.is_hyperbolic:
        raise ValueError("synthetic thermostats are supported on the hyperbolic metric only")
    lam = np.asarray(thermostat(z, phi), dtype=float)
    der = getattr(thermostat, "derivatives", None)
    Vl, Hl = der(z, phi) if der is not None else (np.zeros_like(lam), np.zeros_like(lam))
    K = -np.ones_like(lam)
    kappa = K - Hl + lam**2
    return {"lambda": lam, "Vlambda": Vl, "Hlambda": Hl, "Kg": K, "kappa": kappa,
            "p": np.zeros_like(lam), "kappa_p": kappa.copy(), "Va": np.zeros_like(lam)}


def orbit_ensemble(starts, t_min: float, t_max: float, dt: float, thermostat: ThermostatField, datum=None):
    """Orbits sampled on ``[t_min, t_max]`` with ``t = 0`` at ``starts`` (list of PhasePoints)."""
    z0 = np.array([p.z for p in starts], dtype=complex)
    p0 = np.array([p.phi for p in starts], dtype=float)
    parts = []
    if t_min < 0:
        tb, Zb, Pb, Wb = integrate_ensemble(z0, p0, t_min, dt, thermostat)
        # a wrap while integrating backward separates sample i from i - 1 in reversed order
        Wb = np.concatenate([Wb[:, 1:], np.zeros((z0.size, 1), dtype=bool)], axis=1)
        parts.append((tb[::-1][:-1], Zb[:, ::-1][:, :-1], Pb[:, ::-1][:, :-1], Wb[:, ::-1][:, :-1]))
    parts.append(integrate_ensemble(z0, p0, max(t_max, 0.0), dt, thermostat))
    times, Z, P, Wr = (np.concatenate([p[j] for p in parts], axis=-1) for j in range(4))
    out = []
    for m in range(z0.size):
        tr = OrbitTrace(times.copy(), Z[m].copy(), P[m].copy(), wrapped=Wr[m].copy())
        out.append(sample_orbit(tr, thermostat, datum))
    return out


def random_starts(group: FuchsianGroup, count: int, seed: int = 0, radius: float = 0.6, fibre: float = 2 * np.pi):
    """Uniform-ish random starting points in the octagon with random directions."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if group.domain.contains(np.array([z]))[0]:
            out.append(PhasePoint(z, float(rng.uniform(0, fibre))))
    return out


# ---------------------------------------------------------------------------
# synthetic providers given as functions of time

@dataclass(frozen=True, eq=False)
class SyntheticOrbit:
    """Orbit quantities prescribed as functions of ``t`` (no base curve)."""

    lam: object
    Vlambda: object
    kappa: object
    p: object = None
    kappa_p: object = None

    def trace(self, times: np.ndarray) -> OrbitTrace:
        t = np.asarray(times, dtype=float)
        ev = lambda f: np.asarray(f(t), dtype=float) * np.ones_like(t) if f is not None else np.zeros_like(t)  # noqa: E731
        p = ev(self.p)
        kappa = ev(self.kappa)
        Vl = ev(self.Vlambda)
        if self.kappa_p is None:
            kp = kappa + np.gradient(p, t, edge_order=2) + p * (p - Vl)
        else:
            kp = ev(self.kappa_p)
        s = {"lambda": ev(self.lam), "Vlambda": Vl, "Hlambda": np.full_like(t, np.nan), "Kg": np.full_like(t, np.nan),
             "kappa": kappa, "p": p, "kappa_p": kp, "Va": np.zeros_like(t)}
        nan = np.full_like(t, np.nan)
        return OrbitTrace(t.copy(), nan.astype(complex), nan.copy(), s)

    def consistency_defect(self, times: np.ndarray) -> float:
        """Max of ``|p(t) - p(t0) - int (kappa_p - kappa - p (p - V lambda))|`` (trapezoid rule)."""
        tr = self.trace(times)
        s = tr.samples
        integrand = s["kappa_p"] - s["kappa"] - s["p"] * (s["p"] - s["Vlambda"])
        t = tr.times
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(t))])
        return float(np.abs(s["p"] - s["p"][0] - cum).max())
