"""Weighted fields on roots of the unit tangent bundle and their frame derivatives.

A field of weight ``w = m/n`` is stored as an amplitude ``b(z)`` on grid nodes; as a
function on the root bundle it is ``B(z, phi) = b(z) exp(i w phi)``, where ``phi`` is the
angle of the unit vector in the conformal chart of the metric ``exp(2 sigma)|dz|^2`` the
amplitude refers to.  Consequently ``VB = i w B`` exactly and ``|B|_g = |b|``.

Frame in the chart (``V = d/dphi``)::

    X = e^{-sigma} (cos phi dx + sin phi dy + (-sigma_x sin phi + sigma_y cos phi) d/dphi)
    H = e^{-sigma} (-sin phi dx + cos phi dy + (-sigma_x cos phi - sigma_y sin phi) d/dphi)
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .grid import Grid
from .hyperbolic import PhasePoint, conformal_factor, conformal_factor_gradient, wrap_to_domain


class Metric:
    """Conformal metric ``exp(2u) g0`` with ``u`` a grid field (``None`` for ``g0`` itself)."""

    def __init__(self, grid: Grid, u: np.ndarray | None = None, tag: str | None = None):
        self.grid = grid
        self.u = None if u is None else np.asarray(u, dtype=float)
        self.tag = tag or ("g0" if u is None else "g")
        if self.u is not None:
            lap = grid.laplacian(self.u)
            lap0 = np.where(grid.interior, np.exp(-2 * grid.sigma0) * lap, np.nan)
            self._lap0 = grid.fill(lap0, 0.0).real  # hyperbolic Laplacian, weight 0
            self._u_int = grid.interpolant(self.u)
            self._lap_int = grid.interpolant(self._lap0)

    @property
    def is_hyperbolic(self) -> bool:
        return self.u is None

    def conformal(self, z):
        """``(sigma, sigma_x, sigma_y)`` at chart points ``z`` (no wrapping)."""
        s0 = conformal_factor(z)
        s0x, s0y = conformal_factor_gradient(z)
        if self.u is None:
            return s0, s0x, s0y
        u, ux, uy = self._u_int(z)
        return s0 + u.real, s0x + ux.real, s0y + uy.real

    def u_at(self, z):
        if self.u is None:
            return np.zeros(np.shape(z))
        return self._u_int(z)[0].real

    def curvature(self, z):
        """Gauss curvature ``exp(-2u)(-1 - Delta_0 u)``."""
        if self.u is None:
            return -np.ones(np.shape(z))
        u = self._u_int(z)[0].real
        lap0 = self._lap_int(z)[0].real
        return np.exp(-2 * u) * (-1.0 - lap0)


def as_fraction(w) -> Fraction:
    return w if isinstance(w, Fraction) else Fraction(w).limit_denominator(1000)


@dataclass(frozen=True, eq=False)
class WeightedField:
    """Amplitude array of a section of ``K^w`` relative to the metric tagged ``metric_tag``."""

    grid: Grid
    weight: Fraction
    values: np.ndarray
    metric_tag: str = "g0"

    def __post_init__(self):
        object.__setattr__(self, "weight", as_fraction(self.weight))
        v = np.asarray(self.values, dtype=complex)
        if v.shape != self.grid.z.shape:
            raise ValueError("amplitude array does not match the grid")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def w(self) -> float:
        return float(self.weight)

    @classmethod
    def from_function(cls, grid: Grid, weight, amplitude, metric_tag="g0") -> "WeightedField":
        """Sample ``amplitude(z)`` on interior nodes and fill the margin automorphically."""
        v = np.full(grid.z.shape, np.nan, dtype=complex)
        v[grid.interior] = amplitude(grid.z[grid.interior])
        return cls(grid, weight, grid.fill(v, float(as_fraction(weight))), metric_tag)

    @classmethod
    def from_values(cls, grid: Grid, weight, values, metric_tag="g0") -> "WeightedField":
        """Like :meth:`from_function` but from a full node array (only interior is read)."""
        return cls(grid, weight, grid.fill(values, float(as_fraction(weight))), metric_tag)

    def scaled(self, c) -> "WeightedField":
        return WeightedField(self.grid, self.weight, self.values * c, self.metric_tag)

    def __add__(self, other: "WeightedField") -> "WeightedField":
        if other.weight != self.weight or other.metric_tag != self.metric_tag:
            raise ValueError("incompatible fields")
        return WeightedField(self.grid, self.weight, self.values + other.values, self.metric_tag)

    def retagged(self, metric: Metric) -> "WeightedField":
        """Amplitude relative to ``metric`` given one relative to ``g0`` (``b e^{-w u}``)."""
        if self.metric_tag == metric.tag:
            return self
        if self.metric_tag != "g0":
            raise ValueError("can only retag from g0")
        u = 0.0 if metric.u is None else metric.u
        return WeightedField(self.grid, self.weight, self.values * np.exp(-self.w * u), metric.tag)

    # vectorised evaluation on chart points (z inside the active region)
    @cached_property
    def interpolant(self):
        return self.grid.interpolant(self.values)

    def amplitude(self, z):
        return self.interpolant(z)

    def at(self, z, phi):
        return self.amplitude(z)[0] * np.exp(1j * self.w * np.asarray(phi))

    def frame(self, metric: Metric, z, phi):
        """``(B, XB, HB)`` at chart points."""
        if metric.tag != self.metric_tag:
            raise ValueError(f"field refers to metric {self.metric_tag!r}, got {metric.tag!r}")
        b, bx, by = self.amplitude(z)
        s, sx, sy = metric.conformal(z)
        phi = np.asarray(phi, dtype=float)
        c, sn = np.cos(phi), np.sin(phi)
        e = np.exp(1j * self.w * phi)
        iw = 1j * self.w
        es = np.exp(-s)
        XB = es * (c * bx + sn * by + iw * (-sx * sn + sy * c) * b) * e
        HB = es * (-sn * bx + c * by + iw * (-sx * c - sy * sn) * b) * e
        return b * e, XB, HB


def zero_field(grid: Grid, weight, metric_tag="g0") -> WeightedField:
    v = np.where(grid.active, 0.0, np.nan).astype(complex)
    return WeightedField(grid, weight, v, metric_tag)


@dataclass(frozen=True)
class RealPair:
    """``a = Im B`` and ``Va = w Re B`` of a weighted field value."""

    a: float
    va: float

    @classmethod
    def from_value(cls, B, weight) -> "RealPair":
        w = float(weight)
        return cls(float(np.imag(B)), float(w * np.real(B)))

    def reconstruct(self, weight) -> complex:
        return complex(self.va / float(weight), self.a)


# ---------------------------------------------------------------------------
# operations on phase points (with wrapping)

def evaluate(f: WeightedField, p: PhasePoint) -> complex:
    q, _ = wrap_to_domain(f.grid.group, p)
    return complex(f.at(np.array([q.z]), np.array([q.phi]))[0])


def vertical_derivative(f: WeightedField, p: PhasePoint) -> complex:
    return 1j * f.w * evaluate(f, p)


def horizontal_derivatives(f: WeightedField, p: PhasePoint, metric: Metric | None = None) -> tuple[complex, complex]:
    metric = metric or Metric(f.grid)
    q, _ = wrap_to_domain(f.grid.group, p)
    _, XB, HB = f.frame(metric, np.array([q.z]), np.array([q.phi]))
    return complex(XB[0]), complex(HB[0])


def dbar_residual_at(A: WeightedField, theta: WeightedField | None, ell, metric: Metric, z, phi, k=None):
    """``X Va - (1+l) H a - k theta Va + k (1+l) a V theta`` at chart points.

    ``k`` defaults to ``ell``; ``theta`` is the weight-one field with ``theta = Im T``.
    """
    ell = float(ell)
    k = ell if k is None else float(k)
    w = A.w
    B, XB, HB = A.frame(metric, z, phi)
    res = w * XB.real - (1 + ell) * HB.imag
    if theta is not None:
        T = theta.at(z, phi)
        a, va = B.imag, w * B.real
        res = res - k * T.imag * va + k * (1 + ell) * a * T.real
    return res


def dbar_residual(A: WeightedField, theta: WeightedField | None, ell, p: PhasePoint, metric: Metric | None = None, k=None) -> float:
    metric = metric or Metric(A.grid)
    q, _ = wrap_to_domain(A.grid.group, p)
    return float(dbar_residual_at(A, theta, ell, metric, np.array([q.z]), np.array([q.phi]), k)[0])


def one_form_field(grid: Grid, metric: Metric, bx: np.ndarray, by: np.ndarray) -> WeightedField:
    """Weight-one field of a real 1-form ``bx dx + by dy`` given on nodes (``theta = Im T``)."""
    s = grid.sigma0 + (0.0 if metric.u is None else metric.u)
    v = np.exp(-s) * (by + 1j * bx)
    return WeightedField.from_values(grid, 1, np.where(grid.interior, v, np.nan), metric.tag)


def gradient(grid: Grid, f: np.ndarray):
    """Centred differences of a node array; values are valid on interior nodes."""
    fx = np.full(f.shape, np.nan)
    fy = np.full(f.shape, np.nan)
    fx[:, 1:-1] = (f[:, 2:] - f[:, :-2]) / (2 * grid.h)
    fy[1:-1, :] = (f[2:, :] - f[:-2, :]) / (2 * grid.h)
    return fx, fy
