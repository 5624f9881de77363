"""Simulation oracle: triangle samplers, empirical CDFs, region tests.

Everything here is deliberately independent of the analytic formulas in
``distributions`` (the samplers construct triangles and measure them with
the vector geometry of ``sphere``), so agreement between the two modules
is evidence for both.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import sphere
from .distributions import ConditionalKind, kernel_params
from .sphere import RngStream

TWO_PI = 2.0 * math.pi


class BatchKind(enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"
    PRIMAL_GIVEN_SIDE = "primal_given_side"
    DUAL_GIVEN_ANGLE = "dual_given_angle"


@dataclass(frozen=True)
class SampleBatch:
    """(sigma, tau) samples plus the coordinate pair used by region tests.

    For PRIMAL_GIVEN_SIDE the coordinates are (theta, rho) = (alpha, b);
    for DUAL_GIVEN_ANGLE they are (rho, theta) = (c, beta); for the
    unconditional kinds they are not defined (None).
    """

    kind: BatchKind
    kappa: float | None
    sigma: np.ndarray
    tau: np.ndarray
    coord_u: np.ndarray | None
    coord_v: np.ndarray | None
    seed: int
    stream_id: int

    @property
    def n(self) -> int:
        return len(self.sigma)

    def summary_row(
        self,
        ks_area: float | None = None,
        ks_perimeter: float | None = None,
    ) -> list[str]:
        return [
            self.kind.value,
            "" if self.kappa is None else f"{self.kappa:.17g}",
            str(self.n),
            str(self.seed),
            f"{float(np.mean(self.sigma)):.17g}",
            f"{float(np.mean(self.tau)):.17g}",
            "" if ks_area is None else f"{ks_area:.17g}",
            "" if ks_perimeter is None else f"{ks_perimeter:.17g}",
        ]


SUMMARY_HEADER = ["kind", "kappa", "n", "seed", "mean_sigma", "mean_tau", "ks_area", "ks_perimeter"]


def summary_csv(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_HEADER)
    writer.writerows(rows)
    return buf.getvalue()


class EmpiricalCdf:
    """Right-continuous empirical CDF x -> rank/n over a sample."""

    def __init__(self, samples):
        self.sorted = np.sort(np.asarray(samples, dtype=float))
        self.n = len(self.sorted)

    def __call__(self, x):
        return np.searchsorted(self.sorted, x, side="right") / self.n


def _dual_triangle_elements(rho, theta, kappa):
    """Vectorized triangle elements for the fixed-angle construction.

    A = (1,0,0), B = (cos rho, sin rho, 0); C is the intersection (in the
    upper hemisphere) of the great circle through A at angle kappa to the
    equator with the one through B at angle theta.
    """
    n = len(rho)
    sr, cr = np.sin(rho), np.cos(rho)
    st, ct = np.sin(theta), np.cos(theta)
    A = np.zeros((n, 3))
    A[:, 0] = 1.0
    B = np.stack([cr, sr, np.zeros(n)], axis=1)
    V = np.tile([0.0, -math.sin(kappa), math.cos(kappa)], (n, 1))
    W = np.stack([sr * st, -cr * st, -ct], axis=1)
    C = np.cross(V, W)
    C /= np.maximum(np.linalg.norm(C, axis=1, keepdims=True), 1e-300)
    return sphere.triangle_elements(A, B, C)


def sample_batch(
    kind: BatchKind, kappa: float | None, n: int, rng: RngStream
) -> SampleBatch:
    """Draw n triangles of the given kind and record (sigma, tau).

    PRIMAL: three independent uniform vertices. DUAL: three independent
    uniform great-circle poles, vertices by normalized cross products.
    PRIMAL_GIVEN_SIDE: A = (1,0,0), B at arc kappa on the equator, C
    uniform. DUAL_GIVEN_ANGLE: fixed angle alpha = kappa, (rho, theta)
    drawn from the dual area element (rho uniform, cos theta uniform).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if kind in (BatchKind.PRIMAL_GIVEN_SIDE, BatchKind.DUAL_GIVEN_ANGLE):
        if kappa is None or not 0.0 < kappa < math.pi:
            raise ValueError("conditional kinds need kappa in (0, pi)")
    else:
        kappa = None
    gen = rng.generator
    coord_u = coord_v = None

    if kind is BatchKind.PRIMAL:
        pts = sphere.sample_uniform_points(rng, 3 * n).reshape(n, 3, 3)
        a, b, c, al, be, ga = sphere.triangle_elements(pts[:, 0], pts[:, 1], pts[:, 2])
    elif kind is BatchKind.DUAL:
        pts = sphere.sample_uniform_points(rng, 3 * n).reshape(n, 3, 3)
        A, B, C = sphere.dual_vertices(pts[:, 0], pts[:, 1], pts[:, 2])
        a, b, c, al, be, ga = sphere.triangle_elements(A, B, C)
    elif kind is BatchKind.PRIMAL_GIVEN_SIDE:
        A = np.zeros((n, 3))
        A[:, 0] = 1.0
        B = np.tile([math.cos(kappa), math.sin(kappa), 0.0], (n, 1))
        C = sphere.sample_uniform_points(rng, n)
        a, b, c, al, be, ga = sphere.triangle_elements(A, B, C)
        coord_u, coord_v = al, b  # (theta, rho) of the fixed-side system
    else:
        rho = gen.uniform(0.0, math.pi, n)
        theta = np.arccos(1.0 - 2.0 * gen.uniform(0.0, 1.0, n))  # sin-weighted
        a, b, c, al, be, ga = _dual_triangle_elements(rho, theta, kappa)
        coord_u, coord_v = c, be  # (rho, theta) of the fixed-angle system

    sigma = al + be + ga - math.pi
    tau = a + b + c
    return SampleBatch(
        kind, kappa, sigma, tau, coord_u, coord_v, rng.seed, rng.stream_id
    )


def ks_distance(emp: EmpiricalCdf, analytic: Callable[[np.ndarray], np.ndarray]) -> float:
    """Sup-norm distance between an empirical CDF and an analytic one."""
    F = np.asarray(analytic(emp.sorted), dtype=float)
    i = np.arange(1, emp.n + 1)
    d_plus = np.max(i / emp.n - F)
    d_minus = np.max(F - (i - 1) / emp.n)
    return float(max(d_plus, d_minus))


# Region kinds -> (batch kind, statistic attribute).
_REGION_SETUP = {
    ConditionalKind.AREA_GIVEN_SIDE: (BatchKind.PRIMAL_GIVEN_SIDE, "sigma"),
    ConditionalKind.PERIMETER_GIVEN_SIDE: (BatchKind.PRIMAL_GIVEN_SIDE, "tau"),
    ConditionalKind.PERIMETER_GIVEN_ANGLE: (BatchKind.DUAL_GIVEN_ANGLE, "tau"),
    ConditionalKind.AREA_GIVEN_ANGLE: (BatchKind.DUAL_GIVEN_ANGLE, "sigma"),
    ConditionalKind.PERIMETER_BISECTOR: (BatchKind.DUAL_GIVEN_ANGLE, "tau"),
}

_GUARD = 1e-9


def region_coverage(
    kind: ConditionalKind,
    kappa: float,
    limit: float,
    n: int,
    rng: RngStream,
) -> int:
    """Count of samples violating the region characterization of a law.

    Samples the matching conditional batch and checks that the points
    with statistic <= limit fall on the admissible side of the boundary
    curve (within a guard band of 1e-9), and the others on the opposite
    side. Returns the number of violations (0 when the curve formula and
    the sampler agree).
    """
    if kind not in _REGION_SETUP:
        raise ValueError(f"no region characterization for {kind}")
    batch_kind, stat_name = _REGION_SETUP[kind]
    batch = sample_batch(batch_kind, kappa, n, rng)
    stat = getattr(batch, stat_name)
    inside = stat <= limit

    if kind is ConditionalKind.PERIMETER_BISECTOR:
        # Per-sample bisector decomposition of the sampled triangles.
        al = np.full(n, kappa)
        be = batch.coord_v  # beta
        ga = batch.sigma + math.pi - al - be
        cos_t = (np.cos(be) - np.cos(ga)) / (2.0 * math.cos(kappa / 2))
        theta = np.arccos(np.clip(cos_t, -1.0, 1.0))
        sin_t = np.maximum(np.sin(theta), 1e-300)
        cos_r = -(np.cos(be) + np.cos(ga)) / (2.0 * math.sin(kappa / 2) * sin_t)
        rho = np.arccos(np.clip(cos_r, -1.0, 1.0))
        params = kernel_params(kind, limit, kappa)
        thres = params.rho_thres
        lower = params.f_limit(rho)
        upper = math.pi - lower
        in_band = (
            (rho >= thres - _GUARD)
            & (theta >= lower - _GUARD)
            & (theta <= upper + _GUARD)
        )
        out_band = (rho <= thres + _GUARD) | (theta <= lower + _GUARD) | (theta >= upper - _GUARD)
        return int(np.sum(inside & ~in_band) + np.sum(~inside & ~out_band))

    params = kernel_params(kind, limit, kappa)
    # Which batch coordinate is the curve argument and which is bounded:
    # fixed-side area law bounds rho = f(theta); fixed-side perimeter law
    # bounds theta = f(rho); fixed-angle perimeter law bounds
    # theta = f(rho); fixed-angle area law bounds rho = f(theta).
    if kind in (ConditionalKind.AREA_GIVEN_SIDE, ConditionalKind.PERIMETER_GIVEN_ANGLE):
        xcoord, ycoord = batch.coord_u, batch.coord_v
    else:
        xcoord, ycoord = batch.coord_v, batch.coord_u
    curve = params.f_limit(xcoord)
    above = ycoord > curve + _GUARD
    below = ycoord < curve - _GUARD
    return int(np.sum(inside & above) + np.sum(~inside & below))
