"""Poincare disk geometry, the Bolza Fuchsian group and fundamental-domain wrapping.

The disk carries the curvature -1 metric ``4|dz|^2 / (1 - |z|^2)^2``.  Isometries
are stored as SU(1,1) matrices ``[[a, b], [conj(b), conj(a)]]``; the sign of the
matrix is meaningful, it selects the lift of the deck action to the square root
of the unit tangent bundle (see :func:`frame_rotation`).

Orientation convention: ``J`` is counter-clockwise rotation in the disk chart.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DEGENERATE_TOL = 1e-14


class DegenerateTransformError(ValueError):
    pass


class WrapFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class DiskIsometry:
    """Mobius map ``z -> (a z + b) / (conj(b) z + conj(a))`` with ``|a|^2 - |b|^2 = 1``."""

    a: complex
    b: complex

    def __post_init__(self):
        det = abs(self.a) ** 2 - abs(self.b) ** 2
        if not np.isfinite(det) or abs(det - 1.0) > 1e-9 * max(1.0, abs(self.a) ** 2):
            raise ValueError(f"not a unit-determinant disk isometry (det={det})")

    @classmethod
    def identity(cls) -> "DiskIsometry":
        return cls(1.0 + 0j, 0j)

    @classmethod
    def rotation(cls, theta: float) -> "DiskIsometry":
        return cls(np.exp(0.5j * theta), 0j)

    @classmethod
    def translation(cls, distance: float, direction: float) -> "DiskIsometry":
        """Hyperbolic translation moving 0 a distance ``distance`` along angle ``direction``."""
        return cls(complex(np.cosh(distance / 2)), np.sinh(distance / 2) * np.exp(1j * direction))

    @property
    def matrix(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [np.conj(b), np.conj(a)]])

    def __matmul__(self, other: "DiskIsometry") -> "DiskIsometry":
        # composition self o other
        a = self.a * other.a + self.b * np.conj(other.b)
        b = self.a * other.b + self.b * np.conj(other.a)
        return DiskIsometry._unchecked(a, b)

    @classmethod
    def _unchecked(cls, a, b) -> "DiskIsometry":
        obj = object.__new__(cls)
        object.__setattr__(obj, "a", complex(a))
        object.__setattr__(obj, "b", complex(b))
        return obj

    def inverse(self) -> "DiskIsometry":
        return DiskIsometry._unchecked(np.conj(self.a), -self.b)

    def negated(self) -> "DiskIsometry":
        return DiskIsometry._unchecked(-self.a, -self.b)

    def to_reals(self) -> list[float]:
        return [self.a.real, self.a.imag, self.b.real, self.b.imag]


def mobius_apply(g: DiskIsometry, z):
    den = np.conj(g.b) * z + np.conj(g.a)
    if np.any(np.abs(den) < DEGENERATE_TOL):
        raise DegenerateTransformError("denominator vanishes")
    return (g.a * z + g.b) / den


def automorphy_factor(g: DiskIsometry, z):
    """``j(g, z) = conj(b) z + conj(a)``; ``g'(z) = j^-2`` and ``j(gh, z) = j(g, hz) j(h, z)``."""
    return np.conj(g.b) * z + np.conj(g.a)


def frame_rotation(g: DiskIsometry, z):
    """Rotation angle of tangent directions under ``g`` at ``z``: ``-2 arg j(g, z)``.

    The branch is continuous in ``z`` over the whole disk (``|b z / a| < 1``) and is a
    genuine cocycle modulo ``4 pi``, so it transports the continuous fibre angle on the
    double cover.  ``-g`` gives the same map with rotation shifted by ``2 pi``.
    """
    ac = np.conj(g.a)
    return -2.0 * (np.angle(ac) + np.angle(1.0 + np.conj(g.b) * z / ac))


def conformal_factor(z):
    """``sigma0 = log(2 / (1 - |z|^2))`` so that ``g0 = exp(2 sigma0) |dz|^2``."""
    return np.log(2.0 / (1.0 - np.abs(z) ** 2))


def conformal_factor_gradient(z):
    """``(d sigma0/dx, d sigma0/dy)``."""
    s = 2.0 / (1.0 - np.abs(z) ** 2)
    return s * np.real(z), s * np.imag(z)


def hyperbolic_distance(z1, z2):
    num = np.abs(z1 - z2)
    den = np.abs(1.0 - np.conj(z1) * z2)
    return 2.0 * np.arctanh(np.minimum(num / den, 1.0))


# ---------------------------------------------------------------------------
# Bolza surface

_COTH8 = 1.0 + np.sqrt(2.0)  # cot(pi/8)
MID_DISTANCE = float(np.arccosh(_COTH8))  # centre to side midpoint
VERTEX_RADIUS = 2.0 ** -0.25  # Euclidean radius of the octagon vertices
RELATOR = (0, 5, 2, 7, 4, 1, 6, 3)


@dataclass(frozen=True)
class FundamentalDomain:
    """Regular hyperbolic octagon with interior angles pi/4 centred at 0.

    Side ``i`` has its midpoint on the ray of angle ``i pi/4`` and vertices
    ``vertices[i-1 mod 8]``, ``vertices[i]`` (vertex ``k`` at angle ``pi/8 + k pi/4``).
    """

    tol: float = 1e-12
    vertices: np.ndarray = field(init=False, repr=False)
    centers: np.ndarray = field(init=False, repr=False)
    radius: float = field(init=False)

    def __post_init__(self):
        k = np.arange(8)
        object.__setattr__(self, "vertices", VERTEX_RADIUS * np.exp(1j * (np.pi / 8 + k * np.pi / 4)))
        m = np.tanh(MID_DISTANCE / 2)
        object.__setattr__(self, "centers", (1 + m * m) / (2 * m) * np.exp(1j * k * np.pi / 4))
        object.__setattr__(self, "radius", float((1 - m * m) / (2 * m)))

    def side_excess(self, z) -> np.ndarray:
        """Signed violation per side, shape ``(8,) + shape(z)``; positive means beyond that side."""
        z = np.asarray(z)
        return self.radius - np.abs(z[None, ...] - self.centers.reshape((8,) + (1,) * z.ndim))

    def contains(self, z, tol: float | None = None):
        tol = self.tol if tol is None else tol
        z = np.asarray(z)
        return np.all(self.side_excess(z) <= tol, axis=0) & (np.abs(z) < 1.0)

    def side_points(self, i: int, count: int, endpoints: bool = False) -> np.ndarray:
        """Points along the geodesic side ``i`` (midpoint rule unless ``endpoints``)."""
        c = self.centers[i]
        v1, v2 = self.vertices[(i - 1) % 8], self.vertices[i]
        a1 = np.angle(v1 - c)
        da = np.angle(np.exp(1j * (np.angle(v2 - c) - a1)))
        s = np.linspace(0.0, 1.0, count) if endpoints else (np.arange(count) + 0.5) / count
        return c + self.radius * np.exp(1j * (a1 + da * s))

    def boundary_points(self, per_side: int) -> np.ndarray:
        return np.concatenate([self.side_points(i, per_side, endpoints=True) for i in range(8)])


@dataclass(frozen=True)
class FuchsianGroup:
    """Side pairings of the Bolza octagon lifted to SU(1,1).

    ``generators[i]`` translates along the ray of side ``i`` and maps side ``i+4``
    onto side ``i``; ``generators[i+4]`` is its inverse.  ``branch_signs[i]``
    (``i < 4``) multiplies the lift of the pair ``(i, i+4)``; the 16 choices are
    the lifts of the surface group to SU(1,1), i.e. the square roots of the unit
    tangent bundle.
    """

    branch_signs: tuple[int, int, int, int] = (1, 1, 1, 1)
    domain: FundamentalDomain = field(default_factory=FundamentalDomain)
    generators: tuple[DiskIsometry, ...] = field(init=False, repr=False)

    def __post_init__(self):
        signs = tuple(int(s) for s in self.branch_signs)
        if len(signs) != 4 or any(s not in (1, -1) for s in signs):
            raise ValueError("branch_signs must be four entries of +-1")
        object.__setattr__(self, "branch_signs", signs)
        gens = []
        for i in range(4):
            g = DiskIsometry.translation(2 * MID_DISTANCE, i * np.pi / 4)
            gens.append(g if signs[i] > 0 else g.negated())
        gens += [g.inverse() for g in gens]
        object.__setattr__(self, "generators", tuple(gens))

    @property
    def pairing(self) -> dict[int, tuple[int, bool]]:
        """side -> (generator index, inverse flag) of the map carrying the side into the domain."""
        return {i: ((i + 4) % 8, i >= 4) for i in range(8)}

    def relator_product(self) -> DiskIsometry:
        P = DiskIsometry.identity()
        for k in RELATOR:
            P = P @ self.generators[k]
        return P

    def to_json(self) -> dict:
        return {
            "generators": [g.to_reals() for g in self.generators],
            "vertices": [[v.real, v.imag] for v in self.domain.vertices],
            "branch_signs": list(self.branch_signs),
            "relator": list(RELATOR),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def wrap(self, z, max_word: int = 6):
        """Move ``z`` into the closed domain; returns ``(z', word_isometry)``.

        Greedy: repeatedly apply the pairing generator of the most violated side.
        """
        dom = self.domain
        gamma = DiskIsometry.identity()
        w = complex(z)
        for _ in range(max_word + 1):
            exc = dom.side_excess(w)
            i = int(np.argmax(exc))
            if exc[i] <= dom.tol:
                return w, gamma
            g = self.generators[(i + 4) % 8]
            w = complex(mobius_apply(g, w))
            gamma = g @ gamma
        raise WrapFailure(f"no word of length <= {max_word} brings {z} into the domain")

    def wrap_many(self, z: np.ndarray, max_word: int = 6):
        """Vectorised :meth:`wrap`; returns wrapped points and the accumulated ``(a, b)`` arrays."""
        dom = self.domain
        z = np.array(z, dtype=complex, copy=True)
        a = np.ones_like(z)
        b = np.zeros_like(z)
        ga = np.array([g.a for g in self.generators])
        gb = np.array([g.b for g in self.generators])
        for _ in range(max_word + 1):
            exc = dom.side_excess(z)
            i = np.argmax(exc, axis=0)
            out = np.take_along_axis(exc, i[None], axis=0)[0] > dom.tol
            if not out.any():
                return z, a, b
            k = (i[out] + 4) % 8
            na, nb = ga[k], gb[k]
            zo = z[out]
            z[out] = (na * zo + nb) / (np.conj(nb) * zo + np.conj(na))
            ao, bo = a[out], b[out]
            a[out] = na * ao + nb * np.conj(bo)
            b[out] = na * bo + nb * np.conj(ao)
        raise WrapFailure(f"{int(out.sum())} points could not be wrapped with words <= {max_word}")


@dataclass(frozen=True)
class PhasePoint:
    """Point of the (root of the) unit tangent bundle: disk point and unreduced fibre angle."""

    z: complex
    phi: float


def wrap_to_domain(group: FuchsianGroup, p: PhasePoint, max_word: int = 6) -> tuple[PhasePoint, DiskIsometry]:
    if not abs(p.z) < 1:
        raise ValueError("point outside the open disk")
    w, gamma = group.wrap(p.z, max_word)
    return PhasePoint(w, p.phi + float(frame_rotation(gamma, p.z))), gamma


def words(group: FuchsianGroup, length: int) -> list[DiskIsometry]:
    """All reduced words in the generators of length <= ``length`` (identity included)."""
    out = [(DiskIsometry.identity(), None)]
    frontier = out[:]
    for _ in range(length):
        nxt = []
        for g, last in frontier:
            for k, h in enumerate(group.generators):
                if last is not None and k == (last + 4) % 8:
                    continue
                nxt.append((h @ g, k))
        out += nxt
        frontier = nxt
    return [g for g, _ in out]


def sample_isometries(group: FuchsianGroup, seq: Sequence[int]) -> DiskIsometry:
    g = DiskIsometry.identity()
    for k in seq:
        g = group.generators[k] @ g
    return g
