"""Cartesian node lattice over the octagon with an automorphically filled margin."""
from __future__ import annotations

from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.spatial import cKDTree

from . import kernels
from .hyperbolic import VERTEX_RADIUS, FuchsianGroup


class StencilError(RuntimeError):
    """An interpolation stencil touched a node outside the active region."""


def _d1(v: np.ndarray, axis: int) -> np.ndarray:
    """``h f'`` by fourth-order centred differences; NaN within two nodes of the edge."""
    return _stencil(v, axis, (1.0, -8.0, 0.0, 8.0, -1.0))


def _d2(v: np.ndarray, axis: int) -> np.ndarray:
    """``h^2 f''`` by fourth-order centred differences."""
    return _stencil(v, axis, (-1.0, 16.0, -30.0, 16.0, -1.0))


def _stencil(v, axis, coef):
    out = np.full(v.shape, np.nan, dtype=v.dtype)
    n = v.shape[axis]
    sl = lambda a, b: tuple(slice(a, b) if k == axis else slice(None) for k in range(v.ndim))  # noqa: E731
    acc = np.zeros_like(v[sl(2, n - 2)])
    for k, c in enumerate(coef):
        if c:
            acc = acc + c * v[sl(k, n - 4 + k)]
    out[sl(2, n - 2)] = acc / 12.0
    return out


class Interpolant:
    """C2 tensor quintic Hermite interpolant of a node array.

    Node data ``h^(p+q) d^p_x d^q_y f`` (``p, q <= 2``) come from fourth-order centred
    differences; for smooth data values are fourth-order and first derivatives at least
    third-order accurate, and both are continuous across cells.
    """

    def __init__(self, grid: "Grid", values: np.ndarray):
        self.grid = grid
        F = np.where(grid.active, np.asarray(values, dtype=complex), np.nan)
        dx = (F, _d1(F, 1), _d2(F, 1))
        D = np.empty((3, 3) + F.shape, dtype=complex)
        for p in range(3):
            D[p, 0] = dx[p]
            D[p, 1] = _d1(dx[p], 0)
            D[p, 2] = _d2(dx[p], 0)
        self.D = np.ascontiguousarray(D)

    def __call__(self, zs):
        g = self.grid
        zs = np.asarray(zs, dtype=complex)
        shape = zs.shape
        v, vx, vy = kernels.hermite5(self.D, g.x0, g.y0, g.h, zs.real.ravel(), zs.imag.ravel())
        if np.isnan(v).any() or np.isnan(vx).any() or np.isnan(vy).any():
            raise StencilError("interpolation stencil left the active region")
        return v.reshape(shape), vx.reshape(shape), vy.reshape(shape)


class Grid:
    """Nodes ``(x0 + i h, y0 + j h)``; arrays are indexed ``[j, i]`` (row-major in ``y``).

    ``interior`` flags nodes in the closed octagon, ``active`` additionally the nodes
    within ``margin`` cells of it.  Values on margin ("ghost") nodes are never free:
    they equal the interpolated value at the wrapped point times the automorphy phase.
    """

    def __init__(self, h: float, group: FuchsianGroup | None = None, margin: int = 5):
        if not h > 0:
            raise ValueError("grid spacing must be positive")
        self.h = float(h)
        self.group = group or FuchsianGroup()
        self.margin = int(margin)
        half = VERTEX_RADIUS + (self.margin + 3) * self.h
        self.n = int(np.ceil(2 * half / self.h)) + 1
        self.x0 = self.y0 = -0.5 * (self.n - 1) * self.h
        ax = self.x0 + self.h * np.arange(self.n)
        X, Y = np.meshgrid(ax, ax)
        self.z = X + 1j * Y
        dom = self.group.domain
        self.interior = dom.contains(self.z)
        bnd = dom.boundary_points(600)
        tree = cKDTree(np.column_stack([bnd.real, bnd.imag]))
        dist, _ = tree.query(np.column_stack([self.z.real.ravel(), self.z.imag.ravel()]))
        near = dist.reshape(self.z.shape) <= self.margin * self.h * (1 + 1e-9)
        self.active = (self.interior | near) & (np.abs(self.z) < 1 - 1e-9)
        self.ghost = self.active & ~self.interior
        self._check_vertex_cover()
        self._index = -np.ones(self.z.shape, dtype=np.int64)
        self._index[self.active] = np.arange(int(self.active.sum()))
        self._build_ghosts()

    # ------------------------------------------------------------------
    @property
    def n_active(self) -> int:
        return int(self.active.sum())

    def layout(self) -> dict:
        return {"h": self.h, "n": self.n, "x0": self.x0, "y0": self.y0, "margin": self.margin,
                "branch_signs": list(self.group.branch_signs)}

    def stencil(self, zs):
        """Flat node indices ``(P, 16)`` and weights ``(P, 16)`` of the bicubic stencil."""
        zs = np.asarray(zs, dtype=complex).ravel()
        sx = (zs.real - self.x0) / self.h
        sy = (zs.imag - self.y0) / self.h
        i0 = np.floor(sx).astype(np.int64)
        j0 = np.floor(sy).astype(np.int64)
        wx, _ = kernels.lagrange_weights(sx - i0)
        wy, _ = kernels.lagrange_weights(sy - j0)
        idx = np.empty((zs.size, 16), dtype=np.int64)
        wts = np.empty((zs.size, 16))
        for b in range(4):
            for a in range(4):
                idx[:, 4 * b + a] = (j0 - 1 + b) * self.n + (i0 - 1 + a)
                wts[:, 4 * b + a] = wx[a] * wy[b]
        return idx, wts

    def _check_vertex_cover(self):
        # interpolating at a point reads node data 3 nodes out, which near the vertices can leave the disk
        v = self.group.domain.vertices
        t = np.linspace(0, 1, 41)[:, None] * 3 * self.h
        pts = np.concatenate([v * (1 - 1e-9), v - t * v / np.abs(v),
                              v + t * (v * np.exp(0.3j) - v), v + t * (v * np.exp(-0.3j) - v)], axis=None)
        pts = pts[self.group.domain.contains(pts)]
        i0 = np.floor((pts.real - self.x0) / self.h).astype(int)
        j0 = np.floor((pts.imag - self.y0) / self.h).astype(int)
        for i, j in zip(i0, j0):
            if not self.active[j - 2:j + 4, i - 2:i + 4].all():
                raise ValueError(f"grid spacing {self.h} too coarse: interpolation stencils at the octagon "
                                 "vertices leave the disk")

    def _build_ghosts(self):
        gz = self.z[self.ghost]
        wz, a, b = self.group.wrap_many(gz)
        rot = -2.0 * (np.angle(np.conj(a)) + np.angle(1.0 + np.conj(b) * gz / np.conj(a)))
        idx, wts = self.stencil(wz)
        act_flat = self._index.ravel()
        cols = act_flat[idx]
        if np.any(cols < 0):
            raise StencilError("ghost stencil leaves the active region; increase the margin")
        self.ghost_rotation = rot
        self.ghost_wrapped = wz
        ng = gz.size
        rows = np.repeat(np.arange(ng), 16)
        self._ghost_W = sp.csr_matrix((wts.ravel(), (rows, cols.ravel())), shape=(ng, self.n_active))
        self._ghost_active = self._index[self.ghost]
        self._fill_cache: dict[float, object] = {}

    def ghost_operator(self, weight: float) -> sp.csr_matrix:
        """Sparse map from active values to the right-hand side of the ghost relations."""
        phase = np.exp(1j * weight * self.ghost_rotation)
        return sp.diags(phase) @ self._ghost_W

    def fill(self, values: np.ndarray, weight: float = 0.0) -> np.ndarray:
        """Return a copy of ``values`` with ghost nodes filled automorphically for ``weight``.

        Solves ``v_g = e^{i w rot} (W v)_g`` for the ghost values given interior ones.
        """
        v = np.array(values, dtype=complex, copy=True)
        key = float(weight)
        if key not in self._fill_cache:
            G = self.ghost_operator(weight).tocsc()
            Gg = G[:, self._ghost_active]
            interior_active = self._index[self.interior]
            Gi = G[:, interior_active]
            lu = spla.splu((sp.identity(Gg.shape[0], format="csc") - Gg).tocsc())
            self._fill_cache[key] = (lu, Gi)
        lu, Gi = self._fill_cache[key]
        rhs = Gi @ v[self.interior]
        v[self.ghost] = lu.solve(rhs)
        v[~self.active] = np.nan
        return v

    # ------------------------------------------------------------------
    def interpolant(self, values: np.ndarray) -> Interpolant:
        return Interpolant(self, values)

    def interpolate(self, values: np.ndarray, zs):
        """Value and ``(d/dx, d/dy)`` at ``zs`` (no wrapping); builds a throwaway interpolant."""
        return Interpolant(self, values)(zs)

    def laplacian(self, values: np.ndarray) -> np.ndarray:
        """Five-point Euclidean Laplacian; NaN where a neighbour is inactive."""
        v = np.where(self.active, values, np.nan)
        out = np.full(v.shape, np.nan, dtype=v.dtype)
        out[1:-1, 1:-1] = (v[1:-1, 2:] + v[1:-1, :-2] + v[2:, 1:-1] + v[:-2, 1:-1] - 4 * v[1:-1, 1:-1]) / self.h**2
        return out

    @cached_property
    def sigma0(self) -> np.ndarray:
        s = np.full(self.z.shape, np.nan)
        s[self.active] = np.log(2.0 / (1.0 - np.abs(self.z[self.active]) ** 2))
        return s

    @cached_property
    def cell_area(self) -> np.ndarray:
        """Hyperbolic area weights of interior nodes (zero elsewhere)."""
        w = np.zeros(self.z.shape)
        w[self.interior] = np.exp(2 * self.sigma0[self.interior]) * self.h**2
        return w
