"""Holomorphic sections of ``K^w`` on the Bolza surface by numerical kernel extraction.

Trial space: holomorphic polynomials ``q(z) = sum_k c_k (z / r_v)^k`` in the disk, so
``dbar`` of the weighted amplitude ``q e^{-w sigma0}`` vanishes identically.  The remaining
condition is automorphy, ``q(g z) j(g, z)^{-2w} = q(z)`` for the side pairings ``g``; by the
identity theorem it suffices to impose it on the paired sides.  The defect map, measured
in the metric amplitude norm and with the trial space orthonormalised on the boundary,
has a numerical kernel separated from the rest of the spectrum by many decades.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import WeightedField, as_fraction
from .grid import Grid
from .hyperbolic import VERTEX_RADIUS, FuchsianGroup, automorphy_factor, mobius_apply

DEFAULT_DEGREE = 120
KERNEL_TOL = 1e-8
MIN_GAP = 10.0


class ResolutionTooCoarse(RuntimeError):
    def __init__(self, msg, singular_values=None):
        super().__init__(msg)
        self.singular_values = singular_values


@dataclass
class HolomorphicBasis:
    """Orthonormal kernel basis; ``coeffs[:, k]`` are the monomial coefficients of ``q_k``."""

    weight: object
    coeffs: np.ndarray
    singular_values: np.ndarray
    kernel_dim: int
    group: FuchsianGroup = field(repr=False)

    @property
    def gap(self) -> float:
        s = self.singular_values
        return float(s[self.kernel_dim] / max(s[self.kernel_dim - 1], 1e-300))

    def q(self, z, k: int | None = None):
        """Holomorphic coefficient(s) ``q_k(z)`` in the disk coordinate."""
        z = np.asarray(z, dtype=complex)
        P = _monomials(z.ravel(), self.coeffs.shape[0])
        vals = P @ self.coeffs
        if k is not None:
            return vals[:, k].reshape(z.shape)
        return vals.reshape(z.shape + (self.kernel_dim,))

    def amplitude(self, z, k: int):
        """Amplitude relative to ``g0``: ``q_k(z) exp(-w sigma0(z))``."""
        z = np.asarray(z, dtype=complex)
        w = float(as_fraction(self.weight))
        return self.q(z, k) * ((1.0 - np.abs(z) ** 2) / 2.0) ** w

    def amplitude_derivatives(self, z, k: int):
        """``(b, b_x, b_y)`` of the ``g0`` amplitude, exact."""
        z = np.asarray(z, dtype=complex)
        w = float(as_fraction(self.weight))
        c = self.coeffs[:, k]
        n = np.arange(c.size)
        q = _monomials(z.ravel(), c.size) @ c
        dq = (_monomials(z.ravel(), c.size)[:, :-1] @ (c[1:] * n[1:])) / VERTEX_RADIUS
        z1 = z.ravel()
        m = (1.0 - np.abs(z1) ** 2) / 2.0
        b = q * m**w
        bz = dq * m**w - 0.5 * w * q * np.conj(z1) * m ** (w - 1)
        bzb = -0.5 * w * q * z1 * m ** (w - 1)
        return b.reshape(z.shape), (bz + bzb).reshape(z.shape), (1j * (bz - bzb)).reshape(z.shape)

    def defect(self, coeffs: np.ndarray, per_side: int = 64) -> float:
        """Sup of the automorphy defect (in metric units) over the paired sides."""
        D = _defect_matrix(self.group, float(as_fraction(self.weight)), coeffs.shape[0], per_side)[0]
        return float(np.abs(D @ coeffs).max())

    def fields(self, grid: Grid) -> list[WeightedField]:
        out = []
        for k in range(self.kernel_dim):
            v = np.full(grid.z.shape, np.nan, dtype=complex)
            v[grid.active] = self.amplitude(grid.z[grid.active], k)
            out.append(WeightedField(grid, as_fraction(self.weight), v, "g0"))
        return out


def _monomials(z, degree):
    return (z[:, None] / VERTEX_RADIUS) ** np.arange(degree)


def _defect_matrix(group: FuchsianGroup, w: float, degree: int, per_side: int):
    two_w = 2 * w
    if abs(two_w - round(two_w)) > 1e-12:
        raise ValueError("weights must be half-integers on the Bolza surface (roots of order 1 or 2)")
    p = int(round(two_w))
    dom = group.domain
    rows, norms = [], []
    for k, g in enumerate(group.generators):
        z = dom.side_points((k + 4) % 8, per_side)  # mapped onto side k by g
        gz = mobius_apply(g, z)
        jw = automorphy_factor(g, z) ** (-p)
        metric = ((1.0 - np.abs(z) ** 2) / 2.0) ** w
        Pz = _monomials(z, degree)
        rows.append((_monomials(gz, degree) * jw[:, None] - Pz) * metric[:, None])
        norms.append(Pz * metric[:, None])
    return np.vstack(rows), np.vstack(norms)


def holomorphic_projection(weight, seed_count: int = 64, group: FuchsianGroup | None = None,
                           degree: int = DEFAULT_DEGREE, kernel_tol: float = KERNEL_TOL) -> HolomorphicBasis:
    """Kernel of the automorphy defect on holomorphic polynomials of degree < ``degree``.

    ``seed_count`` collocation points are placed on each side.  Raises
    :class:`ResolutionTooCoarse` unless singular values below ``kernel_tol`` are
    separated from the rest by a factor of at least ten.
    """
    group = group or FuchsianGroup()
    w = float(as_fraction(weight))
    if not w > 1:
        raise ValueError("weight must exceed 1 so that the cokernel vanishes")
    if 8 * seed_count < degree:
        raise ValueError("too few collocation points for the requested degree")
    D, N = _defect_matrix(group, w, degree, seed_count)
    Q, R = np.linalg.qr(N)
    Dr = np.linalg.solve(R.T, D.T).T
    _, s, Vh = np.linalg.svd(Dr)
    order = np.argsort(s)
    s = s[order]
    V = Vh.conj().T[:, order]
    dim = int(np.sum(s < kernel_tol))
    if dim == 0 or dim == s.size or s[dim] / max(s[dim - 1], 1e-300) < MIN_GAP:
        raise ResolutionTooCoarse(
            f"no spectral gap (dim below tol = {dim}); increase the polynomial degree "
            f"or the collocation count", s[:12])
    C = np.linalg.solve(R, V[:, :dim])
    C = _orthonormalise(C, w)
    return HolomorphicBasis(as_fraction(weight), C, s, dim, group)


def _orthonormalise(C: np.ndarray, w: float, radial: int = 48, angular: int = 24) -> np.ndarray:
    """Orthonormalise coefficient vectors in L^2(octagon, g0) of the metric amplitude."""
    z, area = octagon_quadrature(radial, angular)
    amp = _monomials(z, C.shape[0]) @ C * (((1 - np.abs(z) ** 2) / 2.0) ** w)[:, None]
    G = (amp.conj() * area[:, None]).T @ amp
    L = np.linalg.cholesky(G)
    return C @ np.linalg.inv(L).conj().T


def octagon_quadrature(radial: int = 48, angular: int = 24):
    """Nodes and hyperbolic weights on the octagon.

    Polar Gauss-Legendre: in angle on each of the eight vertex-to-vertex sectors (where the
    boundary is a single smooth arc), in radius up to the boundary along each ray.
    """
    from .hyperbolic import FundamentalDomain

    dom = FundamentalDomain()
    xa, wa = np.polynomial.legendre.leggauss(angular)
    step = np.pi / 4
    th = np.concatenate([np.pi / 8 + step * (k - 1) + 0.5 * (xa + 1) * step for k in range(8)])
    wth = np.tile(0.5 * wa * step, 8)
    # boundary radius along each ray by bisection
    lo, hi = np.zeros(th.size), np.full(th.size, VERTEX_RADIUS)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        inside = dom.contains(mid * np.exp(1j * th), tol=0.0)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    rb = 0.5 * (lo + hi)
    x, wx = np.polynomial.legendre.leggauss(radial)
    r = 0.5 * (x[:, None] + 1) * rb[None, :]
    wr = 0.5 * wx[:, None] * rb[None, :] * wth[None, :]
    z = (r * np.exp(1j * th)[None, :]).ravel()
    area = (wr * r).ravel() * (2.0 / (1 - np.abs(z) ** 2)) ** 2
    return z, area
