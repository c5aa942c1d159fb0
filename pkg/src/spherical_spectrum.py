"""
Spherical spectra of the three sphere families.

    OddA  : SU(n+1)/SU(n)   = S^(2n+1), index (g1, g2)  <-> (g1, 0, ..., 0, -g2)
    EvenB : SO(2n+1)/SO(2n) = S^(2n),   index (g,)      <-> (g, 0, ..., 0)
    OddD  : SO(2n)/SO(2n-1) = S^(2n-1), index (g,)      <-> (g, 0, ..., 0)

The spectrum index is the primary key; weights are derived on demand.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Literal, Tuple

from src import config
from src.errors import CutoffTooLarge, NotDominant, RankMismatch, UnsupportedRank
from src.root_systems import RootKind, RootSystem, Weight, root_system

FamilyName = Literal["OddA", "EvenB", "OddD"]
BranchingPair = Literal["A>A", "B>D", "D>B"]
SpectrumIndex = Tuple[int, ...]

_GROUP_KIND = {"OddA": "A", "EvenB": "B", "OddD": "D"}
_LABELS = {"OddA": "odd-a", "EvenB": "even-b", "OddD": "odd-d"}
_BRANCHING = {"OddA": "A>A", "EvenB": "B>D", "OddD": "D>B"}


@dataclass(frozen=True, order=True)
class SphereFamily:
    family: FamilyName
    n: int

    def __post_init__(self) -> None:
        if self.family not in _GROUP_KIND:
            raise UnsupportedRank(f"Unknown family {self.family}")
        minimum = config.FAMILY_MIN_N[self.family]
        if self.n < minimum:
            raise UnsupportedRank(f"{self.family} requires n >= {minimum}, got {self.n}")

    @classmethod
    def parse(cls, name: str, n: int) -> "SphereFamily":
        return cls(config.normalize_family(name), n)  # type: ignore[arg-type]

    @property
    def sphere_dimension(self) -> int:
        if self.family == "OddA":
            return 2 * self.n + 1
        if self.family == "EvenB":
            return 2 * self.n
        return 2 * self.n - 1

    @property
    def group_kind(self) -> RootKind:
        return _GROUP_KIND[self.family]  # type: ignore[return-value]

    @property
    def root_system(self) -> RootSystem:
        return root_system(self.group_kind, self.n)

    @property
    def arity(self) -> int:
        return 2 if self.family == "OddA" else 1

    @property
    def root_index(self) -> SpectrumIndex:
        return (0,) * self.arity

    @property
    def label(self) -> str:
        return _LABELS[self.family]

    @property
    def branching_pair(self) -> BranchingPair:
        return _BRANCHING[self.family]  # type: ignore[return-value]

    def __str__(self) -> str:
        return f"{self.label} n={self.n} (S^{self.sphere_dimension})"


def validate_index(fam: SphereFamily, gamma: SpectrumIndex) -> SpectrumIndex:
    gamma = tuple(int(g) for g in gamma)
    if len(gamma) != fam.arity or any(g < 0 for g in gamma):
        raise ValueError(f"{gamma} is not a spectrum index of {fam}")
    return gamma


def spherical_multiplicity(fam: SphereFamily, weight: Weight) -> int:
    """I_lambda: 1 iff the trivial subgroup representation occurs in lambda."""
    fam.root_system.require_dominant(weight)
    c = weight.coords
    if fam.family == "OddA":
        middle_zero = all(x == 0 for x in c[1:-1])
        return int(middle_zero and c[0] >= 0 >= c[-1])
    if not weight.is_integral():
        return 0
    return int(all(x == 0 for x in c[1:]) and c[0] >= 0)


def spherical_class_multiplicity(fam: SphereFamily, weight: Weight) -> int:
    """Class-level reading for OddA: some shift of lambda is spherical."""
    if fam.family != "OddA":
        return spherical_multiplicity(fam, weight)
    fam.root_system.require_dominant(weight)
    if fam.n == 1:
        return 1
    return int(len(set(weight.coords[1:-1])) == 1)


def _chain_holds(chain: List) -> bool:
    return all(a >= b for a, b in zip(chain, chain[1:]))


def interlacing_branching_oracle(
    pair: BranchingPair, big: Weight, small: Weight
) -> int:
    """
    One-step branching multiplicity from the classical interlacing patterns.

    A>A : l1 >= m1 >= l2 >= ... >= m_n >= l_{n+1}
    B>D : l1 >= m1 >= ... >= m_{n-1} >= l_n >= |m_n|
    D>B : l1 >= m1 >= ... >= m_{n-1} >= |l_n|
    """
    lam, mu = list(big.coords), list(small.coords)
    expected = {"A>A": len(lam) - 1, "B>D": len(lam), "D>B": len(lam) - 1}
    if pair not in expected:
        raise ValueError(f"Unknown branching pair {pair}")
    if len(mu) != expected[pair] or len(mu) < 1:
        raise RankMismatch(
            f"{pair}: big weight of length {len(lam)} needs small weight of length "
            f"{expected[pair]}, got {len(mu)}"
        )
    # entries must differ by integers
    if any((a - b).denominator != 1 for a, b in zip(lam, mu)):
        return 0

    if pair == "A>A":
        chain = [x for pair_ in zip(lam, mu) for x in pair_] + [lam[-1]]
        return int(_chain_holds(chain))
    if pair == "B>D":
        head = [x for pair_ in zip(lam[:-1], mu[:-1]) for x in pair_]
        return int(_chain_holds(head + [lam[-1], abs(mu[-1])]))
    head = [x for pair_ in zip(lam[:-1], mu) for x in pair_]
    return int(_chain_holds(head + [abs(lam[-1])]))


def index_to_weight(fam: SphereFamily, gamma: SpectrumIndex) -> Weight:
    gamma = validate_index(fam, gamma)
    size = fam.root_system.ambient_dimension
    coords = [0] * size
    coords[0] = gamma[0]
    if fam.family == "OddA":
        coords[-1] -= gamma[1]
    return Weight.of(*coords)


def index_from_weight(fam: SphereFamily, weight: Weight) -> SpectrumIndex:
    """Inverse of index_to_weight on spherical weights."""
    if spherical_multiplicity(fam, weight) != 1:
        raise NotDominant(f"{weight} is not in the spherical spectrum of {fam}")
    if fam.family == "OddA":
        return (int(weight[0]), int(-weight[-1]))
    return (int(weight[0]),)


@lru_cache(maxsize=200_000)
def isotypic_dimension(fam: SphereFamily, gamma: SpectrumIndex) -> int:
    """N_gamma: Weyl dimension of the isotypic component W_gamma."""
    return fam.root_system.weyl_dimension(index_to_weight(fam, gamma))


def canonical_length(fam: SphereFamily, gamma: SpectrumIndex) -> int:
    """Length function of the default growth graph; the root has length 1."""
    gamma = validate_index(fam, gamma)
    return max(max(gamma), 1)


def shell_indices(
    fam: SphereFamily, k: int, include_root: bool = True
) -> Iterator[SpectrumIndex]:
    """Indices of canonical length k in lexicographic order."""
    if k < 1:
        return
    if include_root and k == 1:
        yield fam.root_index
    if fam.family != "OddA":
        yield (k,)
        return
    for a in range(k):
        yield (a, k)
    for b in range(k + 1):
        yield (k, b)


def spectrum_size(fam: SphereFamily, cutoff: int) -> int:
    return (cutoff + 1) ** fam.arity


def enumerate_spectrum(
    fam: SphereFamily, cutoff: int
) -> List[Tuple[SpectrumIndex, int]]:
    """All indices with length <= cutoff, lexicographically, with exact N_gamma."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if spectrum_size(fam, cutoff) > config.MAX_SPECTRUM_ENTRIES:
        raise CutoffTooLarge(
            f"{spectrum_size(fam, cutoff)} entries exceed the limit of "
            f"{config.MAX_SPECTRUM_ENTRIES}"
        )
    axes = [range(cutoff + 1)] * fam.arity
    return [
        (gamma, isotypic_dimension(fam, gamma)) for gamma in itertools.product(*axes)
    ]


def supported_families(max_n: int) -> Iterator[SphereFamily]:
    """Every (family, n) with n <= max_n, families in OddA, EvenB, OddD order."""
    for name in ("OddA", "EvenB", "OddD"):
        for n in range(config.FAMILY_MIN_N[name], max_n + 1):
            yield SphereFamily(name, n)  # type: ignore[arg-type]
