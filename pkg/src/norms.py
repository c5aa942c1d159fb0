"""
Norms of the highest-weight monomials b^gamma.

Sup norms are maxima of y^a z^b over the quarter circle
Theta = {(y, z): y, z >= 0, y^2 + z^2 = 1}; L2 norms are exact moments for the
normalized surface measure of the sphere. 0^0 = 1 everywhere.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize_scalar
from scipy.special import gammaln, xlogy

from src.errors import RatioBoundViolated
from src.spherical_spectrum import SphereFamily, SpectrumIndex, validate_index
from src.utils import JsonReportMixin

NormKind = Literal["sup", "l2"]

ORACLE_TOLERANCE = 1e-9
MC_CHUNK = 1_000_000

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MonomialExponents:
    """y^a z^b; (0, 0) is the constant 1."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise ValueError(f"Exponents must be non-negative, got ({self.a},{self.b})")

    def is_constant(self) -> bool:
        return self.a == 0 and self.b == 0

    def times_power(self, h: "MonomialExponents", m: int) -> "MonomialExponents":
        """Exponents of h^m * self."""
        return MonomialExponents(self.a + m * h.a, self.b + m * h.b)


def monomial_sup_squared(a: int, b: int) -> Fraction:
    """Exact (sup y^a z^b)^2 = a^a b^b / (a+b)^(a+b)."""
    if a == 0 and b == 0:
        return Fraction(1)
    return Fraction(a**a * b**b, (a + b) ** (a + b))


def log_monomial_sup(a: int, b: int) -> float:
    return 0.5 * float(xlogy(a, a) + xlogy(b, b) - xlogy(a + b, a + b))


def monomial_sup(a: int, b: int) -> float:
    """Closed form sqrt(a^a b^b / (a+b)^(a+b))."""
    return math.exp(log_monomial_sup(a, b))


def _log_monomial_on_theta(a: int, b: int, theta: np.ndarray) -> np.ndarray:
    return xlogy(a, np.cos(theta)) + xlogy(b, np.sin(theta))


def monomial_sup_oracle(a: int, b: int, grid_size: int = 10_000) -> float:
    """
    Numerical maximum of y^a z^b on Theta.

    Dense sweep of the angle (y, z) = (cos t, sin t), t in [0, pi/2], then a
    bounded 1-D maximization on the bracket around the best grid point.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    theta = np.linspace(0.0, math.pi / 2, grid_size)
    values = _log_monomial_on_theta(a, b, theta)
    best = int(np.argmax(values))
    lo = theta[max(best - 1, 0)]
    hi = theta[min(best + 1, grid_size - 1)]

    def negative(t: float) -> float:
        return -float(_log_monomial_on_theta(a, b, np.array([t]))[0])

    refined = minimize_scalar(
        negative, bounds=(lo, hi), method="bounded", options={"xatol": 1e-14}
    )
    best_log = max(float(values[best]), -float(refined.fun))
    return math.exp(best_log)


def l2_monomial_norm_sq(fam: SphereFamily, gamma: SpectrumIndex) -> Fraction:
    """
    Exact squared L2 norm of b^gamma for the normalized sphere measure.

    OddA:  E |z_1|^(2 g1) |z_(n+1)|^(2 g2) = n! g1! g2! / (n + g1 + g2)!
    B/D :  E |x_1 + i x_2|^(2 g) on S^(m-1) = g! / (m/2)_g, m = 2n+1 or 2n
    """
    gamma = validate_index(fam, gamma)
    if fam.family == "OddA":
        g1, g2 = gamma
        n = fam.n
        return Fraction(
            math.factorial(n) * math.factorial(g1) * math.factorial(g2),
            math.factorial(n + g1 + g2),
        )
    (g,) = gamma
    m = fam.sphere_dimension + 1
    # (m/2)_g = prod (m + 2i) / 2^g
    rising = math.prod(m + 2 * i for i in range(g))
    return Fraction(math.factorial(g) * 2**g, rising)


def log_l2_norm_sq(fam: SphereFamily, gamma: SpectrumIndex) -> float:
    gamma = validate_index(fam, gamma)
    if fam.family == "OddA":
        g1, g2 = gamma
        n = fam.n
        return float(
            gammaln(n + 1) + gammaln(g1 + 1) + gammaln(g2 + 1) - gammaln(n + g1 + g2 + 1)
        )
    (g,) = gamma
    half_m = (fam.sphere_dimension + 1) / 2
    return float(gammaln(g + 1) + gammaln(half_m) - gammaln(half_m + g))


def log_hwv_norm(fam: SphereFamily, gamma: SpectrumIndex, kind: NormKind = "sup") -> float:
    gamma = validate_index(fam, gamma)
    if kind == "sup":
        if fam.family != "OddA":
            return 0.0
        return log_monomial_sup(*gamma)
    if kind == "l2":
        return 0.5 * log_l2_norm_sq(fam, gamma)
    raise ValueError(f"Unknown norm kind {kind}")


def hwv_norm(fam: SphereFamily, gamma: SpectrumIndex, kind: NormKind = "sup") -> float:
    """Norm of the highest-weight vector b^gamma; B/D sup norms are exactly 1."""
    return math.exp(log_hwv_norm(fam, gamma, kind))


def hwv_norm_ratio(
    fam: SphereFamily,
    gamma: SpectrumIndex,
    target: SpectrumIndex,
    kind: NormKind = "sup",
) -> float:
    """||b^gamma|| / ||b^target||, computed in log space."""
    return math.exp(log_hwv_norm(fam, gamma, kind) - log_hwv_norm(fam, target, kind))


def _sample_integrand(
    fam: SphereFamily, gamma: SpectrumIndex, size: int, rng: np.random.Generator
) -> np.ndarray:
    if fam.family == "OddA":
        dim = fam.n + 1
        z = rng.standard_normal((size, dim)) + 1j * rng.standard_normal((size, dim))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        g1, g2 = gamma
        return np.abs(z[:, 0]) ** (2 * g1) * np.abs(z[:, -1]) ** (2 * g2)
    m = fam.sphere_dimension + 1
    x = rng.standard_normal((size, m))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    (g,) = gamma
    return (x[:, 0] ** 2 + x[:, 1] ** 2) ** g


def monte_carlo_l2_norm_sq(
    fam: SphereFamily, gamma: SpectrumIndex, samples: int, seed: int
) -> Tuple[float, float]:
    """Monte Carlo estimate of l2_monomial_norm_sq: (mean, standard error)."""
    gamma = validate_index(fam, gamma)
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        size = min(remaining, MC_CHUNK)
        values = _sample_integrand(fam, gamma, size, rng)
        total += float(values.sum())
        total_sq += float((values**2).sum())
        remaining -= size
    mean = total / samples
    variance = max(total_sq / samples - mean**2, 0.0)
    return mean, math.sqrt(variance / samples)


class RatioBoundReport(JsonReportMixin, BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    f: Tuple[int, int]
    h: Tuple[int, int]
    m_max: int
    ratios: List[float]
    max_ratio: float
    bound: float
    holds: bool


def _bound_squared(f: MonomialExponents, h: MonomialExponents) -> Optional[Fraction]:
    """(1/|h(x0)|)^2 with x0 a maximizer of f; None when h(x0) = 0."""
    # a constant f is maximized everywhere: take the maximizer of h
    a, b = (h.a, h.b) if f.is_constant() else (f.a, f.b)
    if (h.a and a == 0) or (h.b and b == 0):
        return None
    return Fraction((a + b) ** (h.a + h.b), a**h.a * b**h.b)


def ratio_bound_check(
    f: MonomialExponents, h: MonomialExponents, m_max: int
) -> RatioBoundReport:
    """Checks ||h^m f|| / ||h^(m+1) f|| <= 1/|h(x0)| for m = 0..m_max."""
    if h.is_constant():
        raise ValueError("h must be non-constant")
    bound_sq = _bound_squared(f, h)
    ratios_sq = []
    for m in range(m_max + 1):
        lower = f.times_power(h, m)
        upper = f.times_power(h, m + 1)
        ratios_sq.append(
            monomial_sup_squared(lower.a, lower.b) / monomial_sup_squared(upper.a, upper.b)
        )
    max_sq = max(ratios_sq)
    holds = bound_sq is None or max_sq <= bound_sq
    report = RatioBoundReport(
        f=(f.a, f.b),
        h=(h.a, h.b),
        m_max=m_max,
        ratios=[math.sqrt(r) for r in ratios_sq],
        max_ratio=math.sqrt(max_sq),
        bound=math.inf if bound_sq is None else math.sqrt(bound_sq),
        holds=holds,
    )
    if not holds:
        raise RatioBoundViolated(
            f"max ratio {report.max_ratio} exceeds bound {report.bound} for f={f}, h={h}"
        )
    logger.debug(f"Ratio bound f={f} h={h}: max {report.max_ratio:.6f} <= {report.bound:.6f}")
    return report
