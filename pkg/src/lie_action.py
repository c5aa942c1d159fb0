"""
Chevalley generators acting on the coordinate algebra of the sphere.

A generator acts as a derivation: D(p) = sum_c D(v_c) * dp/dv_c, with D(v_c)
read off the defining representation. Coordinates:

    OddA  : z1..z_{n+1} (last row of g in SU(n+1)) and conjugates w1..w_{n+1}
    EvenB : y_k = x_{2k-1} + i x_{2k}, yb_k = conj(y_k), x0 = x_{2n+1}
    OddD  : y_k, yb_k as above

In the Witt coordinates every Cartan generator acts diagonally, so y1 is a
highest-weight vector. The numerical oracle differentiates p(g exp(tX)) along
real one-parameter subgroups and recombines them into the complex direction X.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Dict, List, Literal, Mapping, Optional, Sequence, Tuple

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict
from scipy.linalg import expm

from src.errors import ConventionUnset
from src.spherical_spectrum import SphereFamily, SpectrumIndex, validate_index
from src.utils import JsonReportMixin

logger = logging.getLogger(__name__)

GeneratorType = Literal["E", "F", "H"]
ExponentRule = Literal["weight", "doubled"]
# (source variable, target variable, coefficient): D(source) += coefficient * target
Rule = Tuple[str, str, Fraction]

FD_STEP = 1e-5


class Convention(BaseModel):
    """How generators act on the conjugate variables w_l of the OddA family.

    D(w_l) = conjugate_sign * sum_m w_m X[l][m] when conjugate_transpose is
    set, otherwise conjugate_sign * sum_m w_m X[m][l].
    """

    model_config = ConfigDict(frozen=True)

    name: str = "custom"
    conjugate_sign: Optional[Literal[-1, 1]] = None
    conjugate_transpose: Optional[bool] = None

    @classmethod
    def numeric(cls) -> "Convention":
        """Matches differentiation of conj(z_l) along g exp(tX)."""
        return cls(name="numeric", conjugate_sign=-1, conjugate_transpose=True)

    @classmethod
    def unsigned(cls) -> "Convention":
        """Gives H_n(w_{n+1}) = -w_{n+1}."""
        return cls(name="unsigned", conjugate_sign=1, conjugate_transpose=True)

    def is_complete(self) -> bool:
        return self.conjugate_sign is not None and self.conjugate_transpose is not None


def _rational(value: object) -> sympy.Rational:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.Rational(value)  # type: ignore[arg-type]


@lru_cache(maxsize=None)
def variable_names(fam: SphereFamily) -> Tuple[str, ...]:
    n = fam.n
    if fam.family == "OddA":
        return tuple(f"z{i}" for i in range(1, n + 2)) + tuple(
            f"w{i}" for i in range(1, n + 2)
        )
    names = tuple(f"y{k}" for k in range(1, n + 1)) + tuple(
        f"yb{k}" for k in range(1, n + 1)
    )
    return names + ("x0",) if fam.family == "EvenB" else names


@lru_cache(maxsize=None)
def variables(fam: SphereFamily) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(name) for name in variable_names(fam))


@dataclass(frozen=True, eq=False)
class CoordinatePolynomial:
    """Polynomial in the coordinate variables of one family, exact over QQ."""

    fam: SphereFamily
    poly: sympy.Poly

    @classmethod
    def from_expr(cls, fam: SphereFamily, expr: object) -> "CoordinatePolynomial":
        return cls(fam, sympy.Poly(expr, *variables(fam), domain=sympy.QQ))

    @classmethod
    def constant(cls, fam: SphereFamily, value: object = 1) -> "CoordinatePolynomial":
        return cls.from_expr(fam, _rational(value))

    @classmethod
    def variable(cls, fam: SphereFamily, name: str) -> "CoordinatePolynomial":
        return cls.from_expr(fam, variables(fam)[variable_names(fam).index(name)])

    @classmethod
    def monomial(
        cls, fam: SphereFamily, exponents: Mapping[str, int]
    ) -> "CoordinatePolynomial":
        expr = sympy.Integer(1)
        for name, power in exponents.items():
            expr *= variables(fam)[variable_names(fam).index(name)] ** power
        return cls.from_expr(fam, expr)

    def _check(self, other: "CoordinatePolynomial") -> None:
        if other.fam != self.fam:
            raise ValueError(f"Polynomials of {self.fam} and {other.fam} do not mix")

    def __add__(self, other: "CoordinatePolynomial") -> "CoordinatePolynomial":
        self._check(other)
        return CoordinatePolynomial(self.fam, self.poly + other.poly)

    def __sub__(self, other: "CoordinatePolynomial") -> "CoordinatePolynomial":
        self._check(other)
        return CoordinatePolynomial(self.fam, self.poly - other.poly)

    def __mul__(self, other: "CoordinatePolynomial") -> "CoordinatePolynomial":
        self._check(other)
        return CoordinatePolynomial(self.fam, self.poly * other.poly)

    def scale(self, factor: object) -> "CoordinatePolynomial":
        return CoordinatePolynomial(self.fam, self.poly * _rational(factor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoordinatePolynomial):
            return NotImplemented
        return self.fam == other.fam and (self.poly - other.poly).is_zero

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_zero(self) -> bool:
        return bool(self.poly.is_zero)

    def terms(self) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """Nonzero terms in sympy's lexicographic order; empty for zero."""
        if self.is_zero:
            return []
        return [
            (tuple(monom), Fraction(int(coeff.p), int(coeff.q)))
            for monom, coeff in self.poly.terms()
        ]

    def total_degree(self) -> int:
        return 0 if self.is_zero else int(self.poly.total_degree())

    def diff(self, name: str) -> "CoordinatePolynomial":
        symbol = variables(self.fam)[variable_names(self.fam).index(name)]
        return CoordinatePolynomial(self.fam, self.poly.diff(symbol))

    def evaluate(self, values: Sequence[complex]) -> complex:
        """Value at a point given in variable_names order."""
        func = sympy.lambdify(variables(self.fam), self.poly.as_expr(), modules="numpy")
        return complex(func(*values))

    def __str__(self) -> str:
        return str(self.poly.as_expr())


@dataclass(frozen=True)
class ChevalleyGenerator:
    """E_i, F_i or H_i with its action on the unconjugated variables."""

    kind: GeneratorType
    index: int
    fam: SphereFamily
    rules: Tuple[Rule, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.index <= self.fam.n:
            raise ValueError(f"{self.kind}_{self.index} outside rank {self.fam.n}")

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"

    def matrix(self) -> np.ndarray:
        """Matrix M with D(u_c) = sum_d u_d M[d, c] on the defining block."""
        names = _defining_block(self.fam)
        m = np.zeros((len(names), len(names)), dtype=np.complex128)
        for source, target, coeff in self.rules:
            m[names.index(target), names.index(source)] += float(coeff)
        return m


def _defining_block(fam: SphereFamily) -> Tuple[str, ...]:
    names = variable_names(fam)
    return names[: fam.n + 1] if fam.family == "OddA" else names


def _unitary_rules(n: int, kind: GeneratorType, i: int) -> Tuple[Rule, ...]:
    # D(z_l) = sum_m z_m X[m][l] for matrix units of gl(n+1)
    one = Fraction(1)
    if kind == "E":
        return ((f"z{i + 1}", f"z{i}", one),)
    if kind == "F":
        return ((f"z{i}", f"z{i + 1}", one),)
    return ((f"z{i}", f"z{i}", one), (f"z{i + 1}", f"z{i + 1}", -one))


def _cartan(k: int, factor: int = 1) -> List[Rule]:
    return [(f"y{k}", f"y{k}", Fraction(factor)), (f"yb{k}", f"yb{k}", Fraction(-factor))]


def _orthogonal_rules(fam: SphereFamily, kind: GeneratorType, i: int) -> Tuple[Rule, ...]:
    n = fam.n
    one = Fraction(1)
    if i < n:
        j = i + 1
        if kind == "E":
            return ((f"y{j}", f"y{i}", one), (f"yb{i}", f"yb{j}", -one))
        if kind == "F":
            return ((f"y{i}", f"y{j}", one), (f"yb{j}", f"yb{i}", -one))
        return tuple(_cartan(i) + _cartan(j, -1))
    if fam.family == "EvenB":
        # short simple root e_n
        if kind == "E":
            return (("x0", f"y{n}", one), (f"yb{n}", "x0", Fraction(-2)))
        if kind == "F":
            return ((f"y{n}", "x0", Fraction(2)), ("x0", f"yb{n}", -one))
        return tuple(_cartan(n, 2))
    # D: simple root e_{n-1} + e_n
    m = n - 1
    if kind == "E":
        return ((f"yb{n}", f"y{m}", one), (f"yb{m}", f"y{n}", -one))
    if kind == "F":
        return ((f"y{m}", f"yb{n}", one), (f"y{n}", f"yb{m}", -one))
    return tuple(_cartan(m) + _cartan(n))


def chevalley_generator(
    fam: SphereFamily, kind: GeneratorType, index: int
) -> ChevalleyGenerator:
    if not 1 <= index <= fam.n:
        raise ValueError(f"{kind}_{index} outside rank {fam.n}")
    if fam.family == "OddA":
        rules = _unitary_rules(fam.n, kind, index)
    else:
        rules = _orthogonal_rules(fam, kind, index)
    return ChevalleyGenerator(kind, index, fam, rules)


def chevalley_generators(fam: SphereFamily) -> List[ChevalleyGenerator]:
    """E_1..E_n, F_1..F_n, H_1..H_n."""
    return [
        chevalley_generator(fam, kind, i)
        for kind in ("E", "F", "H")
        for i in range(1, fam.n + 1)
    ]


def variable_images(
    gen: ChevalleyGenerator, convention: Optional[Convention] = None
) -> Dict[str, CoordinatePolynomial]:
    """D(v) for every coordinate variable v."""
    fam = gen.fam
    images = {name: CoordinatePolynomial.constant(fam, 0) for name in variable_names(fam)}
    for source, target, coeff in gen.rules:
        term = CoordinatePolynomial.variable(fam, target).scale(coeff)
        images[source] = images[source] + term
    if fam.family != "OddA":
        return images

    convention = convention or Convention.numeric()
    if not convention.is_complete():
        raise ConventionUnset(
            f"Convention '{convention.name}' must set conjugate_sign and "
            "conjugate_transpose for the OddA family"
        )
    matrix = gen.matrix().real
    sign = int(convention.conjugate_sign or 0)
    size = fam.n + 1
    for k in range(size):
        for m in range(size):
            entry = matrix[k, m] if convention.conjugate_transpose else matrix[m, k]
            if entry:
                coeff = Fraction(sign * int(entry))
                term = CoordinatePolynomial.variable(fam, f"w{m + 1}").scale(coeff)
                images[f"w{k + 1}"] = images[f"w{k + 1}"] + term
    return images


def act(
    gen: ChevalleyGenerator,
    p: CoordinatePolynomial,
    convention: Optional[Convention] = None,
) -> CoordinatePolynomial:
    """Derivation extending the action on the coordinate variables."""
    if gen.fam != p.fam:
        raise ValueError(f"Generator of {gen.fam} applied to a polynomial of {p.fam}")
    result = CoordinatePolynomial.constant(p.fam, 0)
    for name, image in variable_images(gen, convention).items():
        if image.is_zero:
            continue
        result = result + image * p.diff(name)
    return result


def hwv_monomial(
    fam: SphereFamily, gamma: SpectrumIndex, exponent_rule: ExponentRule = "weight"
) -> CoordinatePolynomial:
    """
    b^gamma: y^g1 z^g2 for OddA (y = z1, z = w_{n+1});
    y1^gamma for OddD; y1^gamma (weight rule) or y1^(2 gamma) (doubled rule) for EvenB.
    """
    gamma = validate_index(fam, gamma)
    if fam.family == "OddA":
        return CoordinatePolynomial.monomial(
            fam, {"z1": gamma[0], f"w{fam.n + 1}": gamma[1]}
        )
    power = 2 * gamma[0] if fam.family == "EvenB" and exponent_rule == "doubled" else gamma[0]
    return CoordinatePolynomial.monomial(fam, {"y1": power})


def eigenvalue_of(
    gen: ChevalleyGenerator, p: CoordinatePolynomial, convention: Optional[Convention] = None
) -> Optional[Fraction]:
    """c with gen(p) = c p, or None when p is not an eigenvector."""
    image = act(gen, p, convention)
    if p.is_zero:
        return None
    if image.is_zero:
        return Fraction(0)
    monom, lead = p.terms()[0]
    image_coeff = dict(image.terms()).get(monom, Fraction(0))
    ratio = image_coeff / lead
    return ratio if image == p.scale(ratio) else None


class HwvReport(JsonReportMixin, BaseModel):
    family: str
    n: int
    gamma: Tuple[int, ...]
    monomial: str
    convention: str
    exponent_rule: str
    e_annihilation: List[bool]
    h_eigenvalues: List[Optional[str]]

    @property
    def annihilated(self) -> bool:
        return all(self.e_annihilation)


def hwv_check_symbolic(
    fam: SphereFamily,
    gamma: SpectrumIndex,
    convention: Optional[Convention] = None,
    exponent_rule: ExponentRule = "weight",
) -> HwvReport:
    """Whether every E_i kills b^gamma, and the H_i eigenvalues on it."""
    convention = convention or Convention.numeric()
    b = hwv_monomial(fam, gamma, exponent_rule)
    annihilation = []
    eigenvalues = []
    for i in range(1, fam.n + 1):
        raising = chevalley_generator(fam, "E", i)
        annihilation.append(act(raising, b, convention).is_zero)
        value = eigenvalue_of(chevalley_generator(fam, "H", i), b, convention)
        eigenvalues.append(None if value is None else str(value))
    return HwvReport(
        family=fam.label,
        n=fam.n,
        gamma=tuple(gamma),
        monomial=str(b),
        convention=convention.name,
        exponent_rule=exponent_rule,
        e_annihilation=annihilation,
        h_eigenvalues=eigenvalues,
    )


def sample_group_element(fam: SphereFamily, rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(n+1) or SO(m) element from the QR factorization of a Gaussian."""
    if fam.family == "OddA":
        size = fam.n + 1
        gauss = (
            rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
        ) / np.sqrt(2)
        q, r = np.linalg.qr(gauss)
        diagonal = np.diag(r)
        q = q * (diagonal / np.abs(diagonal))
        return q / np.linalg.det(q) ** (1.0 / size)

    size = fam.sphere_dimension + 1
    q, r = np.linalg.qr(rng.standard_normal((size, size)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


@lru_cache(maxsize=None)
def _witt_change(fam: SphereFamily) -> np.ndarray:
    """P with (Witt coordinates) = x @ P."""
    size = fam.sphere_dimension + 1
    n = fam.n
    p = np.zeros((size, size), dtype=np.complex128)
    for k in range(n):
        p[2 * k, k] = 1.0
        p[2 * k + 1, k] = 1j
        p[2 * k, n + k] = 1.0
        p[2 * k + 1, n + k] = -1j
    if fam.family == "EvenB":
        p[2 * n, 2 * n] = 1.0
    return p


def coordinates_at(fam: SphereFamily, g: np.ndarray) -> np.ndarray:
    """Coordinate variables evaluated at g, in variable_names order."""
    if fam.family == "OddA":
        z = g[-1, :]
        return np.concatenate([z, np.conj(z)])
    return g[0, :] @ _witt_change(fam)


def _ambient_direction(gen: ChevalleyGenerator) -> Tuple[np.ndarray, np.ndarray]:
    """Real Lie-algebra directions A, B with X = A + iB for the generator."""
    m = gen.matrix()
    if gen.fam.family == "OddA":
        return (m - m.conj().T) / 2, (m + m.conj().T) / 2j
    p = _witt_change(gen.fam)
    x = p @ m @ np.linalg.inv(p)
    return x.real.copy(), x.imag.copy()


def _finite_difference(
    fam: SphereFamily, func: Callable[..., Any], g: np.ndarray, direction: np.ndarray
) -> complex:
    forward = coordinates_at(fam, g @ expm(FD_STEP * direction))
    backward = coordinates_at(fam, g @ expm(-FD_STEP * direction))
    return (complex(func(*forward)) - complex(func(*backward))) / (2 * FD_STEP)


def numeric_derivative(
    fam: SphereFamily, p: CoordinatePolynomial, gen: ChevalleyGenerator, g: np.ndarray
) -> complex:
    """d/dt p(g exp(tX)) at t = 0, complexified along X = A + iB."""
    func = sympy.lambdify(variables(fam), p.poly.as_expr(), modules="numpy")
    real_part, imag_part = _ambient_direction(gen)
    return _finite_difference(fam, func, g, real_part) + 1j * _finite_difference(
        fam, func, g, imag_part
    )


def _sample_elements(fam: SphereFamily, samples: int, seed: int) -> List[np.ndarray]:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    children = np.random.SeedSequence(seed).spawn(samples)
    return [sample_group_element(fam, np.random.default_rng(child)) for child in children]


def directional_derivative_oracle(
    fam: SphereFamily,
    p: CoordinatePolynomial,
    gen: ChevalleyGenerator,
    samples: int,
    seed: int,
) -> float:
    """Largest |numeric derivative of p along gen| over random group elements."""
    return max(
        abs(numeric_derivative(fam, p, gen, g)) for g in _sample_elements(fam, samples, seed)
    )


def oracle_agreement(
    fam: SphereFamily,
    p: CoordinatePolynomial,
    gen: ChevalleyGenerator,
    samples: int,
    seed: int,
    convention: Optional[Convention] = None,
) -> float:
    """Largest |act(gen, p)(g) - numeric derivative at g| over random elements."""
    image = act(gen, p, convention)
    func = sympy.lambdify(variables(fam), image.poly.as_expr(), modules="numpy")
    worst = 0.0
    for g in _sample_elements(fam, samples, seed):
        symbolic = complex(func(*coordinates_at(fam, g)))
        worst = max(worst, abs(symbolic - numeric_derivative(fam, p, gen, g)))
    return worst
