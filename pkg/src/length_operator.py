"""
Spectral side of the length operator L: e_(gamma,i) -> l(gamma) e_(gamma,i).

The multiplicity of eigenvalue k is the shell sum S_k = sum_{l(gamma)=k} N_gamma.
For k >= 2 it is a polynomial in k, recovered exactly by interpolation; the
root index (length 1) is carried as a separate constant correction at k = 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src import config
from src.errors import CertificateIncomplete, InsufficientData, NotPolynomial
from src.growth_graph import build_graph, find_root, length_function
from src.norms import NormKind
from src.spherical_spectrum import (
    SphereFamily,
    canonical_length,
    isotypic_dimension,
    shell_indices,
)
from src.tensor_branching import bounded_leap_sweep
from src.utils import JsonReportMixin, log_execution_time

logger = logging.getLogger(__name__)

FIRST_GENERIC_SHELL = 2
DEGREE_MARGIN = 2
HELD_OUT_SHELLS = 5


def shell_multiplicity(fam: SphereFamily, k: int) -> int:
    """Exact S_k; the k = 1 shell includes the root."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(isotypic_dimension(fam, gamma) for gamma in shell_indices(fam, k))


def generic_shell_multiplicity(fam: SphereFamily, k: int) -> int:
    """S_k without the root contribution."""
    return sum(
        isotypic_dimension(fam, gamma)
        for gamma in shell_indices(fam, k, include_root=False)
    )


def root_correction(fam: SphereFamily) -> int:
    """N of the root index; it is merged into the eigenvalue-1 eigenspace."""
    return isotypic_dimension(fam, fam.root_index)


def expected_sphere_dimension(fam: SphereFamily) -> int:
    return fam.sphere_dimension


def shell_degree_bound(fam: SphereFamily) -> int:
    n = fam.n
    base = {"OddA": 2 * n, "EvenB": 2 * n - 1, "OddD": 2 * n - 2}[fam.family]
    return base + DEGREE_MARGIN


@dataclass(frozen=True)
class ShellPolynomial:
    """Polynomial in k with exact coefficients, lowest degree first."""

    coefficients: Tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, k: int) -> Fraction:
        total = Fraction(0)
        for c in reversed(self.coefficients):
            total = total * k + c
        return total

    def coefficient_strings(self) -> List[str]:
        return [str(c) for c in self.coefficients]

    def as_floats(self) -> List[float]:
        return [float(c) for c in self.coefficients]

    def __str__(self) -> str:
        terms = []
        for power in range(self.degree, -1, -1):
            c = self.coefficients[power]
            if c == 0:
                continue
            monomial = "" if power == 0 else ("k" if power == 1 else f"k^{power}")
            magnitude = abs(c)
            if magnitude != 1 or not monomial:
                monomial = f"{magnitude}{'*' if monomial else ''}{monomial}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, monomial))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        return text + "".join(f" {s} {m}" for s, m in terms[1:])


def _newton_coefficients(xs: Sequence[int], ys: Sequence[int]) -> List[Fraction]:
    table = [Fraction(y) for y in ys]
    for level in range(1, len(xs)):
        for i in range(len(xs) - 1, level - 1, -1):
            table[i] = (table[i] - table[i - 1]) / (xs[i] - xs[i - level])
    return table


def interpolate(xs: Sequence[int], ys: Sequence[int]) -> ShellPolynomial:
    """Exact interpolating polynomial through (xs, ys) by divided differences."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("interpolate needs matching, non-empty samples")
    newton = _newton_coefficients(xs, ys)
    # expand the Newton form into the monomial basis
    coefficients = [Fraction(0)]
    for i in range(len(xs) - 1, -1, -1):
        shifted = [Fraction(0)] + coefficients
        for j, c in enumerate(coefficients):
            shifted[j] -= c * xs[i]
        shifted[0] += newton[i]
        coefficients = shifted
    while len(coefficients) > 1 and coefficients[-1] == 0:
        coefficients.pop()
    return ShellPolynomial(tuple(coefficients))


def shell_polynomial(fam: SphereFamily) -> Tuple[ShellPolynomial, List[int]]:
    """
    Interpolates the generic shells k = 2 .. bound+2 and validates the result
    on the next HELD_OUT_SHELLS shells. Returns the polynomial and the
    validated shells.
    """
    bound = shell_degree_bound(fam)
    xs = list(range(FIRST_GENERIC_SHELL, FIRST_GENERIC_SHELL + bound + 1))
    ys = [generic_shell_multiplicity(fam, k) for k in xs]
    poly = interpolate(xs, ys)

    held_out = list(range(xs[-1] + 1, xs[-1] + 1 + HELD_OUT_SHELLS))
    for k in held_out:
        actual = generic_shell_multiplicity(fam, k)
        if poly(k) != actual:
            raise NotPolynomial(
                f"{fam}: interpolated shell polynomial gives {poly(k)} at k={k}, "
                f"expected {actual}"
            )
    logger.debug(f"{fam}: shell polynomial of degree {poly.degree}: {poly}")
    return poly, held_out


def exact_summability(fam: SphereFamily) -> int:
    """Degree of the shell polynomial plus one."""
    poly, _ = shell_polynomial(fam)
    return poly.degree + 1


def eigenvalue_counting(fam: SphereFamily, K: int) -> int:
    """Number of eigenvalues of L (with multiplicity) that are <= K."""
    return sum(shell_multiplicity(fam, k) for k in range(1, K + 1))


class ZetaEstimate(JsonReportMixin, BaseModel):
    model_config = ConfigDict(ser_json_inf_nan="constants")

    schema_version: int = config.SCHEMA_VERSION
    family: str
    n: int
    p: float
    cutoff: int
    partial_sum: float
    tail_upper_bound: float = Field(ge=0)
    converged: bool
    seed: Optional[int] = None


def _tail_bound(poly: ShellPolynomial, p: float, cutoff: int) -> float:
    """Integral test: sum_j |c_j| K^(j+1-p) / (p-j-1); inf unless p > deg + 1."""
    if p <= poly.degree + 1:
        return math.inf
    log_k = math.log(cutoff)
    return math.fsum(
        abs(float(c)) * math.exp((j + 1 - p) * log_k) / (p - j - 1)
        for j, c in enumerate(poly.coefficients)
        if c != 0
    )


def _shell_terms(poly: ShellPolynomial, p: float, ks: np.ndarray) -> np.ndarray:
    # P(k) k^-p = k^(d-p) * Q(1/k), Q has the coefficients of P reversed
    u = 1.0 / ks
    q = np.polyval(np.array(poly.as_floats()), u)
    return q * np.exp((poly.degree - p) * np.log(ks))


def zeta_partial_sum(fam: SphereFamily, p: float, cutoff: int) -> ZetaEstimate:
    """Tr(L^-p) truncated at eigenvalue cutoff, with a certified tail bound."""
    if p <= 0:
        raise ValueError("p must be positive")
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    poly, _ = shell_polynomial(fam)
    head = float(shell_multiplicity(fam, 1))
    ks = np.arange(FIRST_GENERIC_SHELL, cutoff + 1, dtype=np.float64)
    partial = math.fsum([head, *_shell_terms(poly, p, ks).tolist()])
    tail = _tail_bound(poly, p, cutoff)
    return ZetaEstimate(
        family=fam.label,
        n=fam.n,
        p=p,
        cutoff=cutoff,
        partial_sum=partial,
        tail_upper_bound=tail,
        converged=math.isfinite(tail),
    )


@log_execution_time
def fit_summability(
    fam: SphereFamily, cutoff: int, window: Optional[Tuple[int, int]] = None
) -> float:
    """Least-squares slope of log S_k against log k on the window, plus one."""
    if cutoff < 50:
        raise InsufficientData("fit_summability needs cutoff >= 50")
    lo, hi = window if window is not None else (cutoff // 2, cutoff)
    if lo < cutoff / 2 or hi > cutoff or hi - lo < 2:
        raise InsufficientData(
            f"window ({lo},{hi}) must lie in [{cutoff / 2}, {cutoff}] with >= 3 shells"
        )
    ks = np.arange(lo, hi + 1)
    shells = np.array(
        [float(shell_multiplicity(fam, int(k))) for k in ks], dtype=np.float64
    )
    slope, _ = np.polyfit(np.log(ks), np.log(shells), 1)
    return float(slope) + 1.0


class SpectralOptions(BaseModel):
    c: Optional[float] = Field(default=None, gt=0)
    norm_kind: NormKind = "sup"
    graph_cutoff: int = Field(default=12, ge=2)
    leap_cutoff: int = Field(default=6, ge=0)


class DimensionCertificate(JsonReportMixin, BaseModel):
    schema_version: int = config.SCHEMA_VERSION
    family: str
    n: int
    sphere_dimension: int
    dimension: int
    degree: int
    shell_polynomial: List[str]
    root_correction: int
    root: Optional[Tuple[int, ...]]
    root_found: bool
    c: float
    norm: str
    max_leap: int
    validated_shells: List[int]
    seed: Optional[int] = None


@log_execution_time
def spectral_dimension(
    fam: SphereFamily, options: Optional[SpectralOptions] = None
) -> DimensionCertificate:
    """
    Exact spectral dimension with its supporting checks: the growth graph has
    the expected root and length function, the leap bound holds, and the shell
    polynomial reproduces held-out shells.
    """
    options = options or SpectralOptions()
    failed: List[str] = []

    try:
        poly, validated = shell_polynomial(fam)
    except NotPolynomial as exc:
        raise CertificateIncomplete(str(exc), ["shell_polynomial"]) from exc

    graph = build_graph(
        fam, c=options.c, cutoff=options.graph_cutoff, norm_kind=options.norm_kind
    )
    root = find_root(graph)
    if root != fam.root_index:
        failed.append("root")
    else:
        lengths = length_function(graph, root)
        if any(lengths[v] != canonical_length(fam, v) for v in graph.vertices):
            failed.append("length_function")

    leap = bounded_leap_sweep(fam, options.leap_cutoff)
    if leap.max_shift > 1:
        failed.append("bounded_leap")

    if failed:
        logger.error(f"{fam}: certificate checks failed: {failed}")
        raise CertificateIncomplete(f"{fam}: failed checks {failed}", failed)

    certificate = DimensionCertificate(
        family=fam.label,
        n=fam.n,
        sphere_dimension=expected_sphere_dimension(fam),
        dimension=poly.degree + 1,
        degree=poly.degree,
        shell_polynomial=poly.coefficient_strings(),
        root_correction=root_correction(fam),
        root=root,
        root_found=True,
        c=graph.c,
        norm=options.norm_kind,
        max_leap=leap.max_shift,
        validated_shells=validated,
    )
    logger.info(f"{fam}: spectral dimension {certificate.dimension}")
    return certificate
