"""Trigonometric identities of the spherical triangle as executable residuals.

Every identity is evaluated in cleared-denominator (product) form, so the
residuals stay meaningful near the poles of the original quotient forms
instead of blowing up through catastrophic cancellation. A residual is
|LHS - RHS| of the cleared form: ~1e-15 for a consistent triangle, large
for inconsistent metrics (which is the point - they double as consistency
detectors).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateTriangle, OutOfDomain
from .sphere import TriangleMetrics


@dataclass(frozen=True)
class IdentityResiduals:
    """Absolute residuals of the six triangle identities.

    area_halfangle      sin(alpha - sigma/2) = cot(b/2) cot(c/2) sin(sigma/2)
    perimeter_cosine    sin(b) sin(c) cos(alpha) = sin(tau-c) sin(b)
                        + [cos(tau-c) - cos(c)] cos(b)
    perimeter_halfangle sin(tau/2 - c) = tan(alpha/2) tan(beta/2) sin(tau/2)
    area_cosine         -sin(alpha) sin(beta) cos(c) = sin(sigma-alpha) sin(beta)
                        + [cos(sigma-alpha) - cos(alpha)] cos(beta)
    eriksson_area       tan(sigma/2) (1 + cos a + cos b + cos c)
                        = sin a sin b sin gamma
    eriksson_perimeter  tan(tau/2) (cos alpha + cos beta + cos gamma - 1)
                        = sin alpha sin beta sin c
    """

    area_halfangle: float
    perimeter_cosine: float
    perimeter_halfangle: float
    area_cosine: float
    eriksson_area: float
    eriksson_perimeter: float

    def as_tuple(self) -> tuple[float, ...]:
        return (
            self.area_halfangle,
            self.perimeter_cosine,
            self.perimeter_halfangle,
            self.area_cosine,
            self.eriksson_area,
            self.eriksson_perimeter,
        )

    def max(self) -> float:
        return max(self.as_tuple())


@dataclass(frozen=True)
class CevianDecomposition:
    """Length rho and foot angle theta of a cevian great circle.

    rho_thres is the smallest admissible rho in the angle-bisector case
    (where sin theta = 1); None for the median case.
    """

    rho: float
    theta: float
    rho_thres: float | None = None


class SolvedFormKind(enum.Enum):
    ANGLE_PSI = "angle_psi"
    SIDE_ETA = "side_eta"


def identity_residuals(m: TriangleMetrics) -> IdentityResiduals:
    """Residuals of all six identities for one triangle."""
    a, b, c = m.a, m.b, m.c
    al, be, ga = m.alpha, m.beta, m.gamma
    sig, tau = m.sigma, m.tau

    r1 = abs(
        math.sin(al - sig / 2) * math.sin(b / 2) * math.sin(c / 2)
        - math.cos(b / 2) * math.cos(c / 2) * math.sin(sig / 2)
    )
    r2 = abs(
        math.sin(b) * math.sin(c) * math.cos(al)
        - math.sin(tau - c) * math.sin(b)
        - (math.cos(tau - c) - math.cos(c)) * math.cos(b)
    )
    r3 = abs(
        math.sin(tau / 2 - c) * math.cos(al / 2) * math.cos(be / 2)
        - math.sin(al / 2) * math.sin(be / 2) * math.sin(tau / 2)
    )
    r4 = abs(
        -math.sin(al) * math.sin(be) * math.cos(c)
        - math.sin(sig - al) * math.sin(be)
        - (math.cos(sig - al) - math.cos(al)) * math.cos(be)
    )
    r5 = abs(
        math.sin(sig / 2) * (1 + math.cos(a) + math.cos(b) + math.cos(c))
        - math.cos(sig / 2) * math.sin(a) * math.sin(b) * math.sin(ga)
    )
    r6 = abs(
        math.sin(tau / 2) * (math.cos(al) + math.cos(be) + math.cos(ga) - 1)
        - math.cos(tau / 2) * math.sin(al) * math.sin(be) * math.sin(c)
    )
    return IdentityResiduals(r1, r2, r3, r4, r5, r6)


def _clamp(x: float) -> float:
    return max(-1.0, min(1.0, x))


def median_decompose(m: TriangleMetrics) -> CevianDecomposition:
    """Median from C to the midpoint P of side c.

    rho is the arc P-C, theta the angle at P between PB and PC:

        cos(rho)   = (cos a + cos b) / (2 cos(c/2))
        cos(theta) = (cos a - cos b) / (2 sin(c/2) sin(rho))

    and they tie to the excess by
    tan(sigma/2) = sin(c/2) sin(rho) sin(theta) / (cos(c/2) + cos(rho)).
    """
    if m.c >= math.pi - 1e-12 or m.c <= 1e-12:
        raise DegenerateTriangle("midpoint of side c undefined")
    cos_rho = _clamp((math.cos(m.a) + math.cos(m.b)) / (2.0 * math.cos(m.c / 2)))
    rho = math.acos(cos_rho)
    sin_rho = math.sin(rho)
    if sin_rho < 1e-12:
        raise DegenerateTriangle("median degenerate (rho at 0 or pi)")
    cos_theta = (math.cos(m.a) - math.cos(m.b)) / (2.0 * math.sin(m.c / 2) * sin_rho)
    # sin(theta) from the excess relation, for quadrant-safe recovery.
    sin_theta = (
        math.tan(m.sigma / 2)
        * (math.cos(m.c / 2) + cos_rho)
        / (math.sin(m.c / 2) * sin_rho)
    )
    theta = math.atan2(sin_theta, cos_theta)
    return CevianDecomposition(rho, theta)


def bisector_decompose(m: TriangleMetrics) -> CevianDecomposition:
    """Bisector of angle alpha, met at the far intersection with side BC's circle.

    theta first, then rho (each lies in (0, pi), so acos is unambiguous):

        cos(theta) = (cos beta - cos gamma) / (2 cos(alpha/2))
        cos(rho)   = -(cos beta + cos gamma) / (2 sin(alpha/2) sin(theta))

    tied to the perimeter by
    tan(tau/2) = -cos(alpha/2) sin(rho) sin(theta) / (sin(alpha/2) + cos(rho) sin(theta)),
    with threshold cos(rho_thres) = -(cos(tau/2) + sin(alpha/2))
                                    / (1 + cos(tau/2) sin(alpha/2)).
    """
    if m.alpha <= 1e-12 or m.alpha >= math.pi - 1e-12:
        raise DegenerateTriangle("bisector of a degenerate angle")
    theta = math.acos(_clamp((math.cos(m.beta) - math.cos(m.gamma)) / (2.0 * math.cos(m.alpha / 2))))
    sin_theta = math.sin(theta)
    if sin_theta < 1e-12:
        raise DegenerateTriangle("bisector degenerate (theta at 0 or pi)")
    rho = math.acos(_clamp(
        -(math.cos(m.beta) + math.cos(m.gamma)) / (2.0 * math.sin(m.alpha / 2) * sin_theta)
    ))
    return CevianDecomposition(rho, theta, bisector_threshold(m.tau, m.alpha))


def bisector_threshold(tau: float, alpha: float) -> float:
    """Smallest admissible cevian length in the bisector construction.

    cos(rho_thres) = -(cos(tau/2) + sin(alpha/2)) / (1 + cos(tau/2) sin(alpha/2)),
    evaluated through d = 1 + cos(tau/2) and e = 1 - sin(alpha/2) so that the
    near-degenerate corner (tau near 2 pi, alpha near pi) keeps full precision:
    the quotient becomes (e - d) / (e + d - d e).
    """
    d = 2.0 * math.cos(tau / 4) ** 2
    sa = math.sin(alpha / 2)
    e = math.cos(alpha / 2) ** 2 / (1.0 + sa)
    den = e + d - d * e
    if den <= 0.0:
        return math.pi
    return math.acos(_clamp((e - d) / den))


def median_relation_residual(m: TriangleMetrics, dec: CevianDecomposition) -> float:
    """Cleared-form residual of the median/excess relation."""
    return abs(
        math.sin(m.sigma / 2) * (math.cos(m.c / 2) + math.cos(dec.rho))
        - math.cos(m.sigma / 2) * math.sin(m.c / 2) * math.sin(dec.rho) * math.sin(dec.theta)
    )


def bisector_relation_residual(m: TriangleMetrics, dec: CevianDecomposition) -> float:
    """Cleared-form residual of the bisector/perimeter relation."""
    return abs(
        math.sin(m.tau / 2) * (math.sin(m.alpha / 2) + math.cos(dec.rho) * math.sin(dec.theta))
        + math.cos(m.tau / 2) * math.cos(m.alpha / 2) * math.sin(dec.rho) * math.sin(dec.theta)
    )


def solved_forms(kind: SolvedFormKind, x: float, tau_or_sigma: float, kappa: float) -> float:
    """Closed forms for the second angle/side on an iso-perimeter/area curve.

    ANGLE_PSI: given alpha = x, perimeter tau and fixed side c = kappa,
    returns cos(psi) for the angle beta = psi with that perimeter:

        y = tan(x/2) sin(tau/2) / sin(tau/2 - kappa),  cos psi = (y^2-1)/(y^2+1)

    SIDE_ETA: given c = x, area sigma and fixed angle alpha = kappa,
    returns cos(eta) for the side b = eta with that area:

        w = cot(x/2) sin(sigma/2) / sin(kappa - sigma/2),  cos eta = (1-w^2)/(1+w^2)
    """
    if kind is SolvedFormKind.ANGLE_PSI:
        tau = tau_or_sigma
        den = math.sin(tau / 2 - kappa)
        if abs(den) < 1e-300:
            raise OutOfDomain("sin(tau/2 - kappa) vanishes")
        y = math.tan(x / 2) * math.sin(tau / 2) / den
        y2 = y * y
        out = 1.0 - 2.0 / (y2 + 1.0) if math.isfinite(y2) else 1.0
    else:
        sigma = tau_or_sigma
        den = math.sin(kappa - sigma / 2)
        if abs(den) < 1e-300:
            raise OutOfDomain("sin(kappa - sigma/2) vanishes")
        t = math.tan(x / 2)
        if abs(t) < 1e-300:
            raise OutOfDomain("cot(x/2) diverges")
        w = math.sin(sigma / 2) / (t * den)
        w2 = w * w
        out = 2.0 / (w2 + 1.0) - 1.0 if math.isfinite(w2) else -1.0
    if not math.isfinite(out) or abs(out) > 1.0 + 1e-12:
        raise OutOfDomain(f"solved form outside [-1, 1]: {out!r}")
    return out
