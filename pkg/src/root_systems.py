"""
Root data for the classical types A_n, B_n, D_n and the Weyl dimension formula.

Weights live in the standard e-basis with exact rational coordinates. Type A_n
weights carry n+1 coordinates (the U(n+1) reading); adding a constant to every
coordinate gives an equivalent SU(n+1) weight and leaves the dimension unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, List, Literal, Tuple

from src.errors import NonIntegerResult, NotDominant, UnsupportedRank

RootKind = Literal["A", "B", "D"]
IntVector = Tuple[int, ...]

MIN_RANK = {"A": 1, "B": 1, "D": 2}


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # floats only enter through user input such as 0.5
        return Fraction(value).limit_denominator(2)
    return Fraction(value)  # type: ignore[arg-type]


@dataclass(frozen=True, order=True)
class Weight:
    """Weight in e-coordinates; immutable and hashable."""

    coords: Tuple[Fraction, ...]

    @classmethod
    def of(cls, *values: object) -> "Weight":
        return cls(tuple(_as_fraction(v) for v in values))

    @classmethod
    def zero(cls, length: int) -> "Weight":
        return cls((Fraction(0),) * length)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, index: int) -> Fraction:
        return self.coords[index]

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def shifted(self, t: object) -> "Weight":
        """Adds the same constant to every coordinate."""
        delta = _as_fraction(t)
        return Weight(tuple(a + delta for a in self.coords))

    def equivalent(self, other: "Weight") -> bool:
        """Family-A relation: coordinates differ by one common constant."""
        if len(self) != len(other):
            return False
        diffs = {a - b for a, b in zip(self.coords, other.coords)}
        return len(diffs) <= 1

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_half_integral(self) -> bool:
        return all(c.denominator == 2 for c in self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def positive_roots(kind: RootKind, rank: int) -> List[IntVector]:
    """
    Positive roots in the standard e-basis.

    A: e_i - e_j (i<j) in n+1 coordinates; B: e_i +- e_j and e_i;
    D: e_i +- e_j.
    """
    if kind not in MIN_RANK:
        raise UnsupportedRank(f"Unknown root system kind: {kind}")
    if rank < MIN_RANK[kind]:
        raise UnsupportedRank(f"{kind}_{rank} is not supported (rank too small)")

    size = rank + 1 if kind == "A" else rank
    roots: List[IntVector] = []
    for i in range(size):
        for j in range(i + 1, size):
            minus = [0] * size
            minus[i], minus[j] = 1, -1
            roots.append(tuple(minus))
            if kind != "A":
                plus = [0] * size
                plus[i], plus[j] = 1, 1
                roots.append(tuple(plus))
    if kind == "B":
        for i in range(size):
            short = [0] * size
            short[i] = 1
            roots.append(tuple(short))
    return roots


@dataclass(frozen=True)
class RootSystem:
    kind: RootKind
    rank: int
    positive_roots: Tuple[IntVector, ...] = field(init=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "positive_roots", tuple(positive_roots(self.kind, self.rank))
        )

    @property
    def ambient_dimension(self) -> int:
        return self.rank + 1 if self.kind == "A" else self.rank

    @cached_property
    def weyl_vector(self) -> Tuple[Fraction, ...]:
        total = [0] * self.ambient_dimension
        for root in self.positive_roots:
            for i, c in enumerate(root):
                total[i] += c
        return tuple(Fraction(t, 2) for t in total)

    @cached_property
    def _supports(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        # nonzero entries only; roots have at most two
        return tuple(
            tuple((i, c) for i, c in enumerate(root) if c)
            for root in self.positive_roots
        )

    @cached_property
    def _two_rho(self) -> IntVector:
        return tuple(int(2 * r) for r in self.weyl_vector)

    @cached_property
    def _rho_denominator(self) -> int:
        return math.prod(
            sum(c * self._two_rho[i] for i, c in support) for support in self._supports
        )

    def simple_roots(self) -> List[IntVector]:
        size = self.ambient_dimension
        roots: List[IntVector] = []
        chain = size - 1 if self.kind == "A" else self.rank - 1
        for i in range(chain):
            v = [0] * size
            v[i], v[i + 1] = 1, -1
            roots.append(tuple(v))
        if self.kind == "B":
            v = [0] * size
            v[-1] = 1
            roots.append(tuple(v))
        elif self.kind == "D":
            v = [0] * size
            v[-2], v[-1] = 1, 1
            roots.append(tuple(v))
        return roots

    def defining_weights(self) -> List[Weight]:
        """Weights of the defining representation, highest first."""
        size = self.ambient_dimension
        weights = []
        for i in range(size):
            v = [0] * size
            v[i] = 1
            weights.append(Weight.of(*v))
        if self.kind == "A":
            return weights
        negatives = [Weight(tuple(-c for c in w.coords)) for w in reversed(weights)]
        middle = [Weight.zero(size)] if self.kind == "B" else []
        return weights + middle + negatives

    def defining_dimension(self) -> int:
        return len(self.defining_weights())

    def weyl_group_order(self) -> int:
        n = self.rank
        if self.kind == "A":
            return math.factorial(n + 1)
        if self.kind == "B":
            return 2**n * math.factorial(n)
        return 2 ** (n - 1) * math.factorial(n)

    def is_dominant(self, weight: Weight) -> bool:
        """Dominance plus integrality for this root system."""
        if len(weight) != self.ambient_dimension:
            return False
        c = weight.coords
        # D only orders the first n-1 entries; the last one is signed
        ordered = len(c) - 2 if self.kind == "D" else len(c) - 1
        if any(c[i] < c[i + 1] for i in range(ordered)):
            return False
        if self.kind == "A":
            return weight.is_integral()
        if not (weight.is_integral() or weight.is_half_integral()):
            return False
        if self.kind == "B":
            return c[-1] >= 0
        return c[-2] >= abs(c[-1])

    def require_dominant(self, weight: Weight) -> None:
        if not self.is_dominant(weight):
            raise NotDominant(f"{weight} is not dominant for {self.kind}_{self.rank}")

    def weyl_dimension(self, weight: Weight) -> int:
        """prod <lambda+rho, alpha> / <rho, alpha> over positive roots, exactly."""
        self.require_dominant(weight)
        two_shift = [
            int(2 * (lam + r)) for lam, r in zip(weight.coords, self.weyl_vector)
        ]
        numerator = math.prod(
            sum(c * two_shift[i] for i, c in support) for support in self._supports
        )
        quotient, remainder = divmod(numerator, self._rho_denominator)
        if remainder:
            raise NonIntegerResult(
                f"Weyl product for {weight} in {self.kind}_{self.rank} is not integral"
            )
        return quotient


@lru_cache(maxsize=None)
def root_system(kind: RootKind, rank: int) -> RootSystem:
    """Shared immutable instance per (kind, rank)."""
    return RootSystem(kind, rank)


def weyl_dimension(system: RootSystem, weight: Weight) -> int:
    return system.weyl_dimension(weight)


def spherical_dimension_a(n: int, a: int, b: int) -> int:
    """Closed form for dim of (a,0,...,0,-b) in A_n."""
    top = (a + b + n) * math.comb(a + n - 1, n - 1) * math.comb(b + n - 1, n - 1)
    return top // n


def harmonic_dimension(sphere_dim: int, k: int) -> int:
    """Dimension of degree-k spherical harmonics on S^sphere_dim."""
    full = math.comb(sphere_dim + k, k)
    lower = math.comb(sphere_dim + k - 2, k - 2) if k >= 2 else 0
    return full - lower


def dominant_weights(system: RootSystem, max_entry: int) -> Iterable[Weight]:
    """Integral dominant weights with entries in 0..max_entry (D allows a signed last entry)."""
    size = system.ambient_dimension

    def descend(prefix: List[int], upper: int) -> Iterable[List[int]]:
        if len(prefix) == size:
            yield prefix
            return
        for value in range(upper, -1, -1):
            yield from descend(prefix + [value], value)

    for coords in descend([], max_entry):
        yield Weight.of(*coords)
        if system.kind == "D" and coords[-1] > 0:
            yield Weight.of(*(coords[:-1] + [-coords[-1]]))
