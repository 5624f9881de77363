"""Points on the unit sphere and spherical-triangle element computation.

A triangle is described by its six elements: sides ``a, b, c`` (arc lengths
of the great-circle edges, each in [0, pi]) and opposite angles ``alpha,
beta, gamma`` (dihedral angles, each in [0, pi]), together with the
spherical excess ``sigma = alpha + beta + gamma - pi`` (Girard: equals the
area on the unit sphere) and the perimeter ``tau = a + b + c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDual, DegenerateTriangle

# Pairs closer (or more antipodal) than this are rejected as degenerate.
# Far above double-precision noise, far below any statistically relevant event.
DEGENERACY_TOL = 1e-9

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class UnitVec3:
    """A point on the unit sphere (direction cosines)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(n - 1.0) > _NORM_TOL:
            raise ValueError(f"not a unit vector (norm {n!r})")

    @classmethod
    def from_vector(cls, v) -> "UnitVec3":
        """Normalize an arbitrary 3-vector onto the sphere."""
        v = np.asarray(v, dtype=float)
        n = float(np.linalg.norm(v))
        if n < _NORM_TOL:
            raise ValueError("cannot normalize a (near-)zero vector")
        return cls(float(v[0] / n), float(v[1] / n), float(v[2] / n))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class TriangleMetrics:
    """The six elements of a spherical triangle plus excess and perimeter."""

    a: float
    b: float
    c: float
    alpha: float
    beta: float
    gamma: float
    sigma: float
    tau: float

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def angles(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


@dataclass
class RngStream:
    """Deterministic random stream identified by (seed, stream_id).

    Identical (seed, stream_id) reproduces an identical sample sequence;
    distinct stream ids give statistically independent streams, so workers
    may each own one. A single stream must not be shared concurrently.
    """

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seq = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.default_rng(seq)

    @property
    def generator(self) -> np.random.Generator:
        return self._gen


def arc_length(u, v):
    """Great-circle distance between unit vectors (arrays broadcast on ...,3).

    Uses atan2(|u x v|, u . v) rather than acos of the dot product, which
    keeps full precision for nearly coincident and nearly antipodal pairs.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    cross = np.cross(u, v)
    s = np.linalg.norm(cross, axis=-1)
    d = np.einsum("...i,...i->...", u, v)
    return np.arctan2(s, d)


def _angle_between(p, q):
    """Angle in [0, pi] between vectors p and q (arrays broadcast on ...,3)."""
    s = np.linalg.norm(np.cross(p, q), axis=-1)
    d = np.einsum("...i,...i->...", p, q)
    return np.arctan2(s, d)


def triangle_elements(A, B, C):
    """Sides and angles for vertex arrays of shape (..., 3).

    Returns (a, b, c, alpha, beta, gamma). Vertices must be unit vectors;
    no degeneracy checking is done here (see metrics_from_vertices for the
    checked scalar interface).
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    a = arc_length(B, C)
    b = arc_length(A, C)
    c = arc_length(A, B)
    # The angle at a vertex equals the angle between the edge-plane normals.
    nAB = np.cross(A, B)
    nAC = np.cross(A, C)
    nBC = np.cross(B, C)
    alpha = _angle_between(nAB, nAC)
    beta = _angle_between(np.cross(B, A), nBC)
    gamma = _angle_between(np.cross(C, A), np.cross(C, B))
    return a, b, c, alpha, beta, gamma


def _metrics_from_elements(a, b, c, alpha, beta, gamma) -> TriangleMetrics:
    sigma = alpha + beta + gamma - math.pi
    tau = a + b + c
    return TriangleMetrics(
        float(a), float(b), float(c),
        float(alpha), float(beta), float(gamma),
        float(sigma), float(tau),
    )


def metrics_from_vertices(A: UnitVec3, B: UnitVec3, C: UnitVec3) -> TriangleMetrics:
    """All six elements of the triangle with the given vertices.

    Raises DegenerateTriangle if any two vertices coincide or are antipodal
    within DEGENERACY_TOL (the angle at such a vertex is undefined).
    """
    va, vb, vc = A.as_array(), B.as_array(), C.as_array()
    for u, v in ((va, vb), (va, vc), (vb, vc)):
        if np.linalg.norm(np.cross(u, v)) < DEGENERACY_TOL:
            raise DegenerateTriangle(
                "two vertices coincide or are antipodal within tolerance"
            )
    a, b, c, alpha, beta, gamma = triangle_elements(va, vb, vc)
    return _metrics_from_elements(a, b, c, alpha, beta, gamma)


def dual_vertices(Ap, Bp, Cp):
    """Vertices of the dual triangle with poles Ap, Bp, Cp (arrays ...,3).

    A = Bp x Cp / |Bp x Cp| and cyclically; raises DegenerateDual when a
    cross product is shorter than DEGENERACY_TOL (parallel poles).
    """
    Ap = np.asarray(Ap, dtype=float)
    Bp = np.asarray(Bp, dtype=float)
    Cp = np.asarray(Cp, dtype=float)
    crosses = (np.cross(Bp, Cp), np.cross(Ap, Cp), np.cross(Ap, Bp))
    out = []
    for w in crosses:
        n = np.linalg.norm(w, axis=-1, keepdims=True)
        if np.any(n < DEGENERACY_TOL):
            raise DegenerateDual("pole pair parallel or antiparallel within tolerance")
        out.append(w / n)
    return tuple(out)


def dual_metrics_from_poles(Ap: UnitVec3, Bp: UnitVec3, Cp: UnitVec3) -> TriangleMetrics:
    """Metrics of the dual triangle whose great-circle sides have these poles."""
    A, B, C = dual_vertices(Ap.as_array(), Bp.as_array(), Cp.as_array())
    a, b, c, alpha, beta, gamma = triangle_elements(A, B, C)
    return _metrics_from_elements(a, b, c, alpha, beta, gamma)


def sample_uniform_point(rng: RngStream) -> UnitVec3:
    """One point uniform on the sphere (normalized Gaussian triple)."""
    g = rng.generator
    v = g.standard_normal(3)
    n = np.linalg.norm(v)
    while n < _NORM_TOL:  # pragma: no cover - probability ~ 0
        v = g.standard_normal(3)
        n = np.linalg.norm(v)
    return UnitVec3(float(v[0] / n), float(v[1] / n), float(v[2] / n))


def sample_uniform_points(rng: RngStream, n: int) -> np.ndarray:
    """(n, 3) array of independent uniform points on the sphere."""
    v = rng.generator.standard_normal((n, 3))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    np.maximum(norms, _NORM_TOL, out=norms)
    return v / norms


def lhuilier_excess(a, b, c):
    """Spherical excess from the three sides alone (L'Huilier).

    tan(sigma/4) = sqrt(tan(s/2) tan((s-a)/2) tan((s-b)/2) tan((s-c)/2)),
    s = (a+b+c)/2. Independent of the angle-based (Girard) route, so it
    serves as an oracle for it.
    """
    s = 0.5 * (a + b + c)
    t = (
        np.tan(0.5 * s)
        * np.tan(0.5 * (s - a))
        * np.tan(0.5 * (s - b))
        * np.tan(0.5 * (s - c))
    )
    return 4.0 * np.arctan(np.sqrt(np.maximum(t, 0.0)))
