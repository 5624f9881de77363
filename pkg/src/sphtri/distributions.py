"""Analytic area/perimeter distributions of random spherical triangles.

The area sigma of a triangle with independent uniform vertices has a
closed-form density; the perimeter tau has a one-dimensional
elliptic-integral density. Both are also available through exact double
integrals over a (coordinate, fixed-element) pair, and conditionally on a
fixed side or fixed angle through several independent routes. The
redundant routes exist on purpose: agreement between them (and with the
Monte Carlo oracle in ``montecarlo``) is the defense against
transcription errors in the long formulas.

Sign convention: the area-density closed form is sometimes quoted with
the opposite overall sign, which makes it negative; this module fixes the
sign so the density is nonnegative and integrates to 1, and the test
suite pins both properties.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .coords import angle_jacobian, side_jacobian
from .identities import bisector_threshold
from .quadrature import QuadratureSpec, ellip_E, ellip_K, integrate

TWO_PI = 2.0 * math.pi


class DensityKind(enum.Enum):
    AREA_PRIMAL = "area_primal"
    AREA_DUAL = "area_dual"
    PERIMETER_PRIMAL = "perimeter_primal"
    PERIMETER_DUAL = "perimeter_dual"


class ConditionalKind(enum.Enum):
    AREA_GIVEN_SIDE = "area_given_side"
    PERIMETER_GIVEN_ANGLE = "perimeter_given_angle"
    PERIMETER_GIVEN_SIDE = "perimeter_given_side"
    AREA_GIVEN_ANGLE = "area_given_angle"
    AREA_MEDIAN = "area_median"
    PERIMETER_BISECTOR = "perimeter_bisector"
    PERIMETER_ANGLE_COORDS = "perimeter_angle_coords"
    AREA_SIDE_COORDS = "area_side_coords"


class EllipticReduction(enum.Enum):
    """The two inner integrals with known elliptic-integral evaluations."""

    PERIMETER_GIVEN_SIDE = "perimeter_given_side"
    AREA_GIVEN_ANGLE = "area_given_angle"


class CurveKind(enum.Enum):
    AREA_PDF = "area_pdf"
    AREA_CDF = "area_cdf"
    PERIMETER_PDF = "perimeter_pdf"
    PERIMETER_CDF = "perimeter_cdf"
    CONDITIONAL = "conditional"


@dataclass(frozen=True)
class DensityCurve:
    """A sampled (x, value) table of a density or CDF."""

    xs: tuple[float, ...]
    values: tuple[float, ...]
    kind: CurveKind

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        if xs.size != len(self.values):
            raise ValueError("xs and values must have equal length")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        if xs.size and (xs[0] < -1e-12 or xs[-1] > TWO_PI + 1e-12):
            raise ValueError("xs must lie within [0, 2*pi]")
        if any(v < -1e-12 for v in self.values):
            raise ValueError("curve values must be nonnegative")

    def to_csv(self, stream) -> None:
        """Write `x,value` rows at full round-trip precision (17 digits)."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["x", "value"])
        for x, v in zip(self.xs, self.values):
            writer.writerow([f"{x:.17g}", f"{v:.17g}"])

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


@dataclass(frozen=True)
class KernelParams:
    """Region-boundary machinery for one conditional law.

    ``f_limit`` maps the varying coordinate to the boundary curve of the
    region {statistic <= x}; ``g`` is its derivative with respect to the
    statistic (None where not used). For the bisector case the admissible
    band is f_limit(rho) <= theta <= pi - f_limit(rho) with
    rho >= rho_thres.
    """

    omega: float
    f_limit: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray] | None = None
    rho_thres: float | None = None


# ---------------------------------------------------------------------------
# Series-stabilized pieces for the removable 0/0 at sigma = pi.


def _cos_rem_over_d4(d: float) -> float:
    """(cos d - 1 + d^2/2) / d^4, exact through the cancellation at d = 0."""
    if abs(d) < 0.5:
        total = 0.0
        term = 1.0 / 24.0
        k = 2
        while abs(term) > 1e-20:
            total += term
            term *= -d * d / ((2 * k + 1) * (2 * k + 2))
            k += 1
        return total
    return ((math.cos(d) - 1.0) + 0.5 * d * d) / d ** 4


def _sin_rem_over_d4(d: float) -> float:
    """(sin d - d + d^3/6) / d^4, exact through the cancellation at d = 0."""
    if abs(d) < 0.5:
        total = 0.0
        term = d / 120.0
        k = 2
        while abs(term) > 1e-20:
            total += term
            term *= -d * d / ((2 * k + 2) * (2 * k + 3))
            k += 1
        return total
    return ((math.sin(d) - d) + d ** 3 / 6.0) / d ** 4


def _sinc_half(d: float) -> float:
    """sin(d/2) / (d/2) with the limit 1 at d = 0."""
    if d == 0.0:
        return 1.0
    return math.sin(d / 2) / (d / 2)


def area_density(sigma: float) -> float:
    """Closed-form density of the spherical excess at sigma in [0, 2*pi].

    The raw closed form is a 0/0 at sigma = pi (numerator and
    cos^4(sigma/2) both vanish to fourth order). Writing sigma = pi + d
    and subtracting the cancelling Taylor pieces of cos and sin exactly
    leaves

        N/d^4 = -1/2 - (d^2 - 2*pi*d - 6) C(d) + 6 (d - pi) S(d)

    with C(d) = (cos d - 1 + d^2/2)/d^4 and S(d) = (sin d - d + d^3/6)/d^4,
    so the density N/(16 pi cos^4(sigma/2)) evaluates stably everywhere,
    including exactly 1/(4 pi) at sigma = pi.
    """
    if not 0.0 <= sigma <= TWO_PI:
        raise ValueError("sigma must lie in [0, 2*pi]")
    d = sigma - math.pi
    n_ratio = (
        -0.5
        - (d * d - TWO_PI * d - 6.0) * _cos_rem_over_d4(d)
        + 6.0 * (d - math.pi) * _sin_rem_over_d4(d)
    )
    den_ratio = math.pi * _sinc_half(d) ** 4  # 16 pi sin^4(d/2) / d^4
    return -n_ratio / den_ratio


def crofton_kernel(y: float) -> float:
    """Elementary one-integral reduction of the area law.

    Equals 4 tan(y/2)/cos^2(y/2) * Integral_{y/2}^{pi/2} (pi - z) cos^2 z dz
    in closed form; 1 + d/dy of it is 2*pi times the area density. The
    prefactor pole and the vanishing integral cancel at y = pi, where the
    value is 2*pi/3; the implementation factors (y - pi)^3 out of both so
    the whole range evaluates stably.
    """
    if not 0.0 < y < TWO_PI:
        raise ValueError("y must lie in (0, 2*pi)")
    d = y - math.pi
    # G(y) = closed-form integral; G = A/16 - (pi/8)(d - sin d) with
    # A = 2(1 - cos d) + d^2 - 2 d sin d; both vanish to third order.
    if abs(d) < 0.7:
        a_ratio = 0.0  # A / d^3
        term = d / 4.0
        k = 2
        while abs(term) > 1e-20:
            a_ratio += term
            # A = sum_{k>=2} (-1)^k (2k-2) d^(2k) / (2k)! ; ratio of terms:
            term *= -d * d * (2 * k) / ((2 * k - 2) * (2 * k + 1) * (2 * k + 2))
            k += 1
        s_ratio = 0.0  # (d - sin d) / d^3
        term = 1.0 / 6.0
        k = 1
        while abs(term) > 1e-20:
            s_ratio += term
            term *= -d * d / ((2 * k + 2) * (2 * k + 3))
            k += 1
        g_ratio = a_ratio / 16.0 - (math.pi / 8.0) * s_ratio
    else:
        a = 2.0 * (1.0 - math.cos(d)) + d * d - 2.0 * d * math.sin(d)
        g_ratio = (a / 16.0 - (math.pi / 8.0) * (d - math.sin(d))) / d ** 3
    # 4 tan(y/2)/cos^2(y/2) * G = -32 sin(y/2) * (G/d^3) / (sin(d/2)/(d/2))^3
    q = _sinc_half(d)
    return -32.0 * math.sin(y / 2) * g_ratio / q ** 3


def _area_cdf_bracket(x: float, omega: np.ndarray) -> np.ndarray:
    """The arctan branch term of the conditional area law, vectorized in omega."""
    w = np.hypot(1.0, omega)
    if x < math.pi:
        return (math.pi - np.arctan(w * math.tan(x / 2))) / w
    if x > math.pi:
        return -np.arctan(w * math.tan(x / 2)) / w
    return (math.pi / 2) / w


def area_cdf(sigma: float, tol: float = 1e-12) -> float:
    """P{area <= sigma} by the single-integral reduction over the fixed side."""
    if not 0.0 <= sigma <= TWO_PI:
        raise ValueError("sigma must lie in [0, 2*pi]")
    if sigma <= 0.0:
        return 0.0
    if sigma >= TWO_PI:
        return 1.0

    def integrand(kappa):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            omega = np.tan(kappa / 2) / math.sin(sigma / 2)
            bracket = _area_cdf_bracket(sigma, omega)
        return (sigma / 2 + np.nan_to_num(bracket)) * np.sin(kappa)

    res = integrate(integrand, 0.0, math.pi, QuadratureSpec(abs_tol=tol, rel_tol=tol))
    return min(1.0, max(0.0, res.value / TWO_PI))


def perimeter_density(tau: float, tol: float = 1e-12) -> float:
    """Density of the perimeter at tau in (0, 2*pi).

    One-dimensional integral with complete elliptic integrals in the
    numerator and an inverse-square-root zero of the radicand at the
    right endpoint t = tau/2 (the radicand cos^2(t/2) - cos^2((tau-t)/2)
    equals sin(tau/2 - t) sin(tau/2), which the substitution removes).
    Diverges logarithmically as tau approaches 2*pi.
    """
    if not 0.0 < tau < TWO_PI:
        raise ValueError("tau must lie strictly inside (0, 2*pi)")
    s_half = math.sin(tau / 2)

    def integrand(t):
        z = np.sin(t / 2)
        num = ellip_E(z) - np.cos((tau - t) / 2) ** 2 * ellip_K(z)
        rad = np.sin(tau / 2 - t) * s_half
        return num / np.sqrt(rad) * np.sin(t)

    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_right=True)
    res = integrate(integrand, 0.0, tau / 2, spec)
    return res.value / (4.0 * math.pi)


def perimeter_cdf(tau: float, tol: float = 1e-9) -> float:
    """P{perimeter <= tau}, by quadrature of the perimeter density."""
    if not 0.0 <= tau <= TWO_PI:
        raise ValueError("tau must lie in [0, 2*pi]")
    if tau <= 0.0:
        return 0.0
    if tau >= TWO_PI:
        return 1.0

    def density(t):
        return np.array([perimeter_density(float(x), tol=tol / 100) for x in np.atleast_1d(t)])

    res = integrate(density, 0.0, tau, QuadratureSpec(abs_tol=tol, rel_tol=tol))
    return min(1.0, max(0.0, res.value))


@lru_cache(maxsize=4)
def perimeter_cdf_grid(steps: int = 256, tol: float = 1e-8) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Cumulative perimeter CDF on a grid suitable for interpolation.

    The grid is refined geometrically toward 2*pi, where the density
    diverges and a uniform grid would make interpolation overshoot. The
    result is cached; interpolate with np.interp for bulk evaluation
    (million-sample KS tests and the like).
    """
    xs = np.concatenate([
        np.linspace(0.0, TWO_PI - 0.1, max(steps - 25, 8)),
        TWO_PI - 0.1 * 0.5 ** np.arange(1, 25),
        [TWO_PI],
    ])

    def density(t):
        return np.array(
            [perimeter_density(min(max(float(v), 1e-12), TWO_PI - 1e-9), tol=tol / 10)
             for v in np.atleast_1d(t)]
        )

    vals = [0.0]
    for i in range(1, len(xs)):
        spec = QuadratureSpec(abs_tol=tol, rel_tol=tol,
                              singular_right=(i == len(xs) - 1))
        vals.append(vals[-1] + integrate(density, float(xs[i - 1]), float(xs[i]), spec).value)
    vals = np.clip(np.array(vals), 0.0, 1.0)
    return tuple(float(x) for x in xs), tuple(float(v) for v in vals)


# ---------------------------------------------------------------------------
# Radicands shared by the double integrals and their elliptic reductions.
# Both are the factored (product-of-sines) form of
#   sin^2(kappa) sin^2(r) - [cos(kappa) cos(r) - cos(x - kappa - r)]^2,
# which is algebraically identical but free of the cancellation that the
# difference-of-squares form suffers near its endpoint zeros.


def radicand_perimeter(x: float, kappa: float, rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    return (
        4.0
        * np.sin(x / 2 - rho)
        * math.sin(x / 2 - kappa)
        * math.sin(x / 2)
        * np.sin(rho + kappa - x / 2)
    )


def radicand_area_dual(x: float, kappa: float, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return (
        4.0
        * np.sin(theta - x / 2)
        * math.sin(kappa - x / 2)
        * math.sin(x / 2)
        * np.sin(theta + kappa - x / 2)
    )


def _perimeter_inner(x: float, kappa: float, tol: float):
    """Inner rho-integral of the primal-perimeter double integral."""
    def f(rho):
        rad = np.maximum(radicand_perimeter(x, kappa, rho), 0.0)
        return np.sin(x - kappa - rho) * math.sin(kappa) * np.sin(rho) / np.sqrt(rad)

    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_left=True, singular_right=True)
    return integrate(f, x / 2 - kappa, x / 2, spec).value


def _area_dual_inner(x: float, kappa: float, tol: float):
    """Inner theta-integral of the dual-area double integral (sign included)."""
    def f(theta):
        rad = np.maximum(radicand_area_dual(x, kappa, theta), 0.0)
        return np.sin(x - kappa - theta) * math.sin(kappa) * np.sin(theta) / np.sqrt(rad)

    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_left=True, singular_right=True)
    return -integrate(f, x / 2, math.pi - (kappa - x / 2), spec).value


def elliptic_reduction_gap(kind: EllipticReduction, x: float, kappa: float) -> float:
    """|quadrature - elliptic closed form| for the two reducible inner integrals.

    PERIMETER_GIVEN_SIDE (requires 0 < kappa < x/2 < pi):
        Integral_{x/2-kappa}^{x/2} sin(x-kappa-rho) sin(kappa) sin(rho)
            / sqrt(radicand) d rho
      = [E(sin(kappa/2)) - cos^2((x-kappa)/2) K(sin(kappa/2))]
            / sqrt(sin(x/2) sin(x/2 - kappa)) * sin(kappa)

    AREA_GIVEN_ANGLE (requires 0 < x/2 < kappa < pi): the mirrored
    theta-integral against E(cos(kappa/2)), K(cos(kappa/2)).

    No symbolic proof of these evaluations is known; driving the gap
    below tolerance on a grid is the numerical settlement.
    """
    if kind is EllipticReduction.PERIMETER_GIVEN_SIDE:
        if not 0.0 < kappa < x / 2 < math.pi:
            raise ValueError("requires 0 < kappa < x/2 < pi")
        lhs = _perimeter_inner(x, kappa, tol=1e-11)
        z = math.sin(kappa / 2)
        rhs = (
            (ellip_E(z) - math.cos((x - kappa) / 2) ** 2 * ellip_K(z))
            / math.sqrt(math.sin(x / 2) * math.sin(x / 2 - kappa))
            * math.sin(kappa)
        )
    else:
        if not 0.0 < x / 2 < kappa < math.pi:
            raise ValueError("requires 0 < x/2 < kappa < pi")
        lhs = _area_dual_inner(x, kappa, tol=1e-11)
        z = math.cos(kappa / 2)
        rhs = (
            (ellip_E(z) - math.sin((x - kappa) / 2) ** 2 * ellip_K(z))
            / math.sqrt(math.sin(x / 2) * math.sin(kappa - x / 2))
            * math.sin(kappa)
        )
    return abs(lhs - rhs)


def _smooth_density_inner(x: float, kappa: float, perimeter: bool, tol: float):
    """Inner integral of the regular (arctan-form) double integrals.

    The sin(kappa) density weight of the fixed element is folded in here,
    so the outer integral is unweighted.
    """
    ck = math.cos(kappa)
    sk = math.sin(kappa)
    if perimeter:
        lo, hi = 0.0, x / 2

        def f(rho):
            d = (1.0 - ck) * math.sin(x / 2) ** 2 + (1.0 + ck) * np.sin(x / 2 - rho) ** 2
            num = (1.0 - ck) * (1.0 + ck) * np.sin(x / 2 - rho) * math.sin(x / 2) * np.sin(rho)
            return sk * num / d ** 2
    else:
        lo, hi = x / 2, math.pi

        def f(theta):
            d = (1.0 - ck) * np.sin(theta - x / 2) ** 2 + (1.0 + ck) * math.sin(x / 2) ** 2
            num = (1.0 - ck) * (1.0 + ck) * np.sin(theta - x / 2) * math.sin(x / 2) * np.sin(theta)
            return sk * num / d ** 2

    return integrate(f, lo, hi, QuadratureSpec(abs_tol=tol, rel_tol=tol)).value


def density_via_double_integral(kind: DensityKind, x: float, tol: float = 1e-9) -> float:
    """The unconditional density by nested quadrature of its exact double integral.

    The outer variable is the fixed element (side or angle), weighted by
    its own density sin(kappa)/2; the inner integral is the conditional
    density for that fixed element. Slower than the closed/1-D forms by
    construction; exists to cross-check them.
    """
    if not 0.0 < x < TWO_PI:
        raise ValueError("x must lie strictly inside (0, 2*pi)")
    inner_tol = tol / 10.0

    # The inner integral of the two square-root kinds itself diverges like
    # an inverse square root as kappa approaches x/2 (visible in the
    # elliptic evaluation, whose denominator carries sqrt(sin|x/2 - kappa|)),
    # so the outer integral needs the endpoint substitution there too.
    if kind is DensityKind.AREA_PRIMAL:
        lo, hi = 0.0, math.pi
        inner = lambda k: _smooth_density_inner(x, k, perimeter=False, tol=inner_tol)
        scale = 1.0 / (2.0 * math.pi)
        outer_spec = QuadratureSpec(abs_tol=tol, rel_tol=tol)
    elif kind is DensityKind.PERIMETER_DUAL:
        lo, hi = 0.0, math.pi
        inner = lambda k: _smooth_density_inner(x, k, perimeter=True, tol=inner_tol)
        scale = 1.0 / (2.0 * math.pi)
        outer_spec = QuadratureSpec(abs_tol=tol, rel_tol=tol)
    elif kind is DensityKind.PERIMETER_PRIMAL:
        lo, hi = 0.0, x / 2
        inner = lambda k: _perimeter_inner(x, k, tol=inner_tol)
        scale = 1.0 / (4.0 * math.pi)
        outer_spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_right=True)
    else:  # AREA_DUAL
        lo, hi = x / 2, math.pi
        inner = lambda k: _area_dual_inner(x, k, tol=inner_tol)
        scale = 1.0 / (4.0 * math.pi)
        outer_spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_left=True)

    def outer(kappas):
        return np.array([inner(float(k)) for k in np.atleast_1d(kappas)])

    res = integrate(outer, lo, hi, outer_spec)
    return scale * res.value


# ---------------------------------------------------------------------------
# Region boundary curves (shared with the Monte Carlo scatter tests).


def kernel_params(kind: ConditionalKind, x: float, kappa: float) -> KernelParams:
    """Boundary curve, statistic-derivative and threshold for a region law."""
    sx = math.sin(x / 2)
    if kind is ConditionalKind.AREA_GIVEN_SIDE:
        omega = math.tan(kappa / 2) / sx if sx > 0 else math.inf
        tk = math.tan(kappa / 2)

        def f_limit(theta):
            theta = np.asarray(theta, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                t = math.sin(x / 2) / (tk * np.sin(theta - x / 2))
                curve = 2.0 * np.arctan(t)
            return np.where(theta < x / 2, math.pi, np.nan_to_num(curve, nan=math.pi))

        def g(theta):
            theta = np.asarray(theta, dtype=float)
            den = tk * tk * np.sin(theta - x / 2) ** 2 + sx * sx
            return np.where(theta < x / 2, 0.0, tk * np.sin(theta) / den)

        return KernelParams(omega, f_limit, g)

    if kind is ConditionalKind.PERIMETER_GIVEN_ANGLE:
        ck = 1.0 / math.tan(kappa / 2)
        omega = ck / sx if sx > 0 else math.inf

        def f_limit(rho):
            rho = np.asarray(rho, dtype=float)
            curve = 2.0 * np.arctan(ck * np.sin(x / 2 - rho) / sx)
            return np.where(rho > x / 2, 0.0, curve)

        def g(rho):
            rho = np.asarray(rho, dtype=float)
            tk = math.tan(kappa / 2)
            den = tk * tk * sx * sx + np.sin(x / 2 - rho) ** 2
            return np.where(rho > x / 2, 0.0, tk * np.sin(rho) / den)

        return KernelParams(omega, f_limit, g)

    if kind is ConditionalKind.PERIMETER_GIVEN_SIDE:
        sk = math.sin(kappa)
        A = math.sin(x - kappa) / sk
        B = (math.cos(x - kappa) - math.cos(kappa)) / sk

        def f_limit(rho):
            rho = np.asarray(rho, dtype=float)
            if kappa > x / 2:
                return np.zeros_like(rho)
            with np.errstate(divide="ignore", invalid="ignore"):
                mid = np.arccos(np.clip(A + B / np.tan(rho), -1.0, 1.0))
            return np.where(rho < x / 2 - kappa, math.pi, np.where(rho > x / 2, 0.0, mid))

        def g(rho):
            rho = np.asarray(rho, dtype=float)
            if kappa > x / 2:
                return np.zeros_like(rho)
            rad = np.maximum(radicand_perimeter(x, kappa, rho), 0.0)
            inside = (rho >= x / 2 - kappa) & (rho <= x / 2)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.sin(x - kappa - rho) / np.sqrt(rad)
            return np.where(inside, val, 0.0)

        return KernelParams(0.0, f_limit, g)

    if kind is ConditionalKind.AREA_GIVEN_ANGLE:
        sk = math.sin(kappa)
        A = math.sin(x - kappa) / sk
        B = (math.cos(x - kappa) - math.cos(kappa)) / sk
        hi = math.pi - (kappa - x / 2)

        def f_limit(theta):
            theta = np.asarray(theta, dtype=float)
            if kappa < x / 2:
                return np.full_like(theta, math.pi)
            with np.errstate(divide="ignore", invalid="ignore"):
                mid = math.pi - np.arccos(np.clip(A + B / np.tan(theta), -1.0, 1.0))
            return np.where(theta < x / 2, math.pi, np.where(theta > hi, 0.0, mid))

        def g(theta):
            theta = np.asarray(theta, dtype=float)
            if kappa < x / 2:
                return np.zeros_like(theta)
            rad = np.maximum(radicand_area_dual(x, kappa, theta), 0.0)
            inside = (theta >= x / 2) & (theta <= hi)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = -np.sin(x - kappa - theta) / np.sqrt(rad)
            return np.where(inside, val, 0.0)

        return KernelParams(0.0, f_limit, g)

    if kind is ConditionalKind.PERIMETER_BISECTOR:
        thres = bisector_threshold(x, kappa)
        cx = math.cos(x / 2)
        skh = math.sin(kappa / 2)
        ckh = math.cos(kappa / 2)

        def f_limit(rho):
            rho = np.asarray(rho, dtype=float)
            den = sx * np.cos(rho) + cx * ckh * np.sin(rho)
            with np.errstate(divide="ignore", invalid="ignore"):
                r = -sx * skh / den
            return np.arcsin(np.clip(r, -1.0, 1.0))

        return KernelParams(0.0, f_limit, None, thres)

    raise ValueError(f"no region kernel for {kind}")


# ---------------------------------------------------------------------------
# Conditional CDFs.


def _arctan_band(x_half: float, w: np.ndarray) -> np.ndarray:
    """Integral_0^{x_half} dt / (1 + (w^2-1) sin^2 t), for x_half in [0, pi]."""
    t = np.tan(x_half)
    if x_half < math.pi / 2:
        return np.arctan(w * t) / w
    if x_half > math.pi / 2:
        return (math.pi + np.arctan(w * t)) / w
    return (math.pi / 2) / w


def _cond_area_given_side(x: float, kappa: float) -> float:
    with np.errstate(divide="ignore", over="ignore"):
        omega = math.tan(kappa / 2) / math.sin(x / 2)
    bracket = float(_area_cdf_bracket(x, np.asarray(omega)))
    if not math.isfinite(bracket):
        bracket = 0.0
    return (x + 2.0 * bracket) / TWO_PI


def _cond_perimeter_given_angle(x: float, kappa: float) -> float:
    with np.errstate(divide="ignore", over="ignore"):
        omega = 1.0 / (math.tan(kappa / 2) * math.sin(x / 2))
    w = float(np.hypot(1.0, omega))
    if not math.isfinite(w):
        return x / TWO_PI if x < TWO_PI else 1.0
    band = float(_arctan_band(x / 2, np.asarray(w)))
    return (x - 2.0 * band) / TWO_PI


def _cond_perimeter_given_side(x: float, kappa: float, tol: float) -> float:
    if kappa > x / 2:  # perimeter >= 2c
        return 0.0
    lo = x / 2 - kappa
    base = math.pi * (1.0 - math.cos(lo))
    sk = math.sin(kappa)
    A = math.sin(x - kappa) / sk
    B = (math.cos(x - kappa) - math.cos(kappa)) / sk

    def f(rho):
        with np.errstate(divide="ignore", invalid="ignore"):
            val = np.arccos(np.clip(A + B / np.tan(rho), -1.0, 1.0))
        return val * np.sin(rho)

    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_left=True, singular_right=True)
    inner = integrate(f, lo, x / 2, spec).value
    return (base + inner) / TWO_PI


def _cond_area_given_angle(x: float, kappa: float, tol: float) -> float:
    if kappa < x / 2:  # area <= 2*alpha always
        return 1.0
    hi = math.pi - (kappa - x / 2)
    base = math.pi * (1.0 - math.cos(x / 2))
    sk = math.sin(kappa)
    A = math.sin(x - kappa) / sk
    B = (math.cos(x - kappa) - math.cos(kappa)) / sk

    def f(theta):
        with np.errstate(divide="ignore", invalid="ignore"):
            val = math.pi - np.arccos(np.clip(A + B / np.tan(theta), -1.0, 1.0))
        return val * np.sin(theta)

    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_left=True, singular_right=True)
    inner = integrate(f, x / 2, hi, spec).value
    return (base + inner) / TWO_PI


def median_region_cos(x: float, kappa: float, theta) -> np.ndarray:
    """cos of the median-construction boundary curve, continuous across x = pi.

    Multiplying the two sign branches of the raw arccos argument through
    by cos^2(x/2) merges them into one expression (the branch sign always
    pairs with |cos(x/2)|), removing both the branch switch and the
    csc^2(theta) blowups at the ends of the theta range.
    """
    theta = np.asarray(theta, dtype=float)
    s2 = math.sin(x / 2) ** 2
    c2 = math.cos(x / 2)
    kh = kappa / 2
    st = np.sin(theta)
    root = np.sqrt(c2 * c2 * st * st + s2)
    num = math.cos(kh) * s2 - math.sin(kh) ** 2 * st * c2 * root
    den = math.sin(kh) ** 2 * st * st * c2 * c2 + s2
    return -num / den


def _cond_area_median(x: float, kappa: float, tol: float) -> float:
    if x <= 0.0:
        return 0.0
    if x >= TWO_PI:
        return 1.0

    def f(theta):
        return 1.0 - median_region_cos(x, kappa, theta)

    res = integrate(f, 0.0, math.pi, QuadratureSpec(abs_tol=tol, rel_tol=tol))
    return res.value / TWO_PI


def _cond_perimeter_bisector(x: float, kappa: float, tol: float) -> float:
    thres = bisector_threshold(x, kappa)
    sx = math.sin(x / 2)
    cx = math.cos(x / 2)
    ckh = math.cos(kappa / 2)
    skh = math.sin(kappa / 2)

    def f(rho):
        den = sx * np.cos(rho) + cx * ckh * np.sin(rho)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = sx * skh / den
        return np.sqrt(np.maximum(0.0, 1.0 - r * r))

    spec = QuadratureSpec(abs_tol=tol, rel_tol=tol, singular_left=True)
    res = integrate(f, thres, math.pi, spec)
    return res.value / math.pi


def _cond_2d(x: float, kappa: float, tol: float, perimeter: bool) -> float:
    """The two-angle / two-side routes, by nested Jacobian-weighted quadrature."""
    if perimeter:
        if kappa >= x / 2:
            return 0.0
        scale = math.sin(x / 2) / math.sin(x / 2 - kappa)

        def limit(u):  # boundary psi = f(phi)
            y = math.tan(u / 2) * scale
            y2 = y * y
            c = 1.0 - 2.0 / (y2 + 1.0) if math.isfinite(y2) else 1.0
            return math.acos(max(-1.0, min(1.0, c)))

        jac = angle_jacobian
    else:
        if kappa < x / 2:
            return 1.0
        if kappa == x / 2:
            return 1.0  # boundary of the admissible wedge; f == pi there
        scale = math.sin(x / 2) / math.sin(kappa - x / 2)

        def limit(u):  # boundary eta = f(xi)
            t = math.tan(u / 2)
            if abs(t) < 1e-300:
                return math.pi
            w = scale / t
            w2 = w * w
            c = 2.0 / (w2 + 1.0) - 1.0 if math.isfinite(w2) else -1.0
            return math.acos(max(-1.0, min(1.0, c)))

        jac = side_jacobian

    inner_spec = QuadratureSpec(abs_tol=tol / 10.0, rel_tol=tol / 10.0)

    def inner(u: float) -> float:
        hi = limit(u)
        if hi <= 0.0:
            return 0.0
        return integrate(lambda v: jac(u, v, kappa), 0.0, hi, inner_spec).value

    def outer(us):
        return np.array([inner(float(u)) for u in np.atleast_1d(us)])

    res = integrate(outer, 0.0, math.pi, QuadratureSpec(abs_tol=tol, rel_tol=tol))
    return res.value / TWO_PI


def conditional_cdf(
    kind: ConditionalKind, x: float, kappa: float, tol: float = 1e-9
) -> float:
    """P{statistic <= x | fixed element = kappa} for each analytic route.

    AREA_GIVEN_SIDE / AREA_MEDIAN / PERIMETER_ANGLE_COORDS condition on
    the side c; PERIMETER_GIVEN_ANGLE / PERIMETER_BISECTOR /
    AREA_SIDE_COORDS / AREA_GIVEN_ANGLE on the angle alpha;
    PERIMETER_GIVEN_SIDE on c. Routes sharing a conditioning variable
    agree; that redundancy is asserted by the test suite.
    """
    if not 0.0 <= x <= TWO_PI:
        raise ValueError("x must lie in [0, 2*pi]")
    if not 0.0 <= kappa <= math.pi:
        raise ValueError("kappa must lie in [0, pi]")
    if x <= 0.0:
        return 0.0
    if x >= TWO_PI:
        return 1.0

    if kind is ConditionalKind.AREA_GIVEN_SIDE:
        val = _cond_area_given_side(x, kappa)
    elif kind is ConditionalKind.PERIMETER_GIVEN_ANGLE:
        val = _cond_perimeter_given_angle(x, kappa)
    elif kind is ConditionalKind.PERIMETER_GIVEN_SIDE:
        val = _cond_perimeter_given_side(x, kappa, tol)
    elif kind is ConditionalKind.AREA_GIVEN_ANGLE:
        val = _cond_area_given_angle(x, kappa, tol)
    elif kind is ConditionalKind.AREA_MEDIAN:
        val = _cond_area_median(x, kappa, tol)
    elif kind is ConditionalKind.PERIMETER_BISECTOR:
        val = _cond_perimeter_bisector(x, kappa, tol)
    elif kind is ConditionalKind.PERIMETER_ANGLE_COORDS:
        val = _cond_2d(x, kappa, tol, perimeter=True)
    else:
        val = _cond_2d(x, kappa, tol, perimeter=False)
    return min(1.0, max(0.0, val))


# ---------------------------------------------------------------------------
# Curve tabulation.


def tabulate(kind: CurveKind, xs: Sequence[float], **kwargs) -> DensityCurve:
    """Evaluate a density/CDF on a grid; conditional curves need kind+kappa."""
    xs = [float(x) for x in xs]
    if kind is CurveKind.AREA_PDF:
        vals = [area_density(x) for x in xs]
    elif kind is CurveKind.AREA_CDF:
        vals = [area_cdf(x) for x in xs]
    elif kind is CurveKind.PERIMETER_PDF:
        cap = TWO_PI - 1e-6  # the density diverges at 2*pi; never sample it
        vals = [perimeter_density(min(max(x, 1e-12), cap)) for x in xs]
    elif kind is CurveKind.PERIMETER_CDF:
        vals = [perimeter_cdf(x) for x in xs]
    else:
        ckind = kwargs["conditional_kind"]
        kappa = kwargs["kappa"]
        tol = kwargs.get("tol", 1e-9)
        vals = [conditional_cdf(ckind, x, kappa, tol) for x in xs]
    return DensityCurve(tuple(xs), tuple(vals), kind)
