"""
Defining representation tensored with an irreducible lambda.

`fundamental_tensor` applies the closed rules for A, B and D;
`brauer_klimyk_oracle` recomputes the same decomposition by reflecting
lambda + rho + nu into the dominant chamber with sign tracking. The bounded
leap check projects the result onto the spherical spectrum.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from pydantic import BaseModel

from src import config
from src.errors import CertificateIncomplete, RankLimit
from src.root_systems import RootKind, RootSystem, Weight, root_system
from src.spherical_spectrum import (
    SphereFamily,
    SpectrumIndex,
    index_from_weight,
    index_to_weight,
    spherical_multiplicity,
)
from src.utils import JsonReportMixin

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightMultiset:
    """(weight, multiplicity) pairs, highest weight first."""

    entries: Tuple[Tuple[Weight, int], ...]

    @classmethod
    def from_counts(cls, counts: Dict[Weight, int]) -> "WeightMultiset":
        kept = [(w, m) for w, m in counts.items() if m != 0]
        if any(m < 0 for _, m in kept):
            raise ValueError(f"Negative multiplicity in {kept}")
        return cls(tuple(sorted(kept, key=lambda e: e[0], reverse=True)))

    def __iter__(self) -> Iterator[Tuple[Weight, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def weights(self) -> List[Weight]:
        return [w for w, _ in self.entries]

    def multiplicity(self, weight: Weight) -> int:
        return dict(self.entries).get(weight, 0)

    def total_dimension(self, system: RootSystem) -> int:
        return sum(m * system.weyl_dimension(w) for w, m in self.entries)

    def dimension_conserved(self, system: RootSystem, lam: Weight) -> bool:
        """Sum of mult * dim equals dim(defining) * dim(lambda)."""
        expected = system.defining_dimension() * system.weyl_dimension(lam)
        return self.total_dimension(system) == expected

    def __str__(self) -> str:
        parts = [f"{w}" if m == 1 else f"{m}x{w}" for w, m in self.entries]
        return "{" + ", ".join(parts) + "}"


def _unit(size: int, i: int, sign: int = 1) -> Weight:
    coords = [0] * size
    coords[i] = sign
    return Weight.of(*coords)


def fundamental_tensor(kind: RootKind, rank: int, lam: Weight) -> WeightMultiset:
    """
    Closed rules for defining (x) lambda:

    A: lambda + e_i whenever dominant.
    B: lambda +- e_i whenever dominant, plus lambda itself when lambda_n != 0.
    D: lambda +- e_i whenever dominant.
    """
    system = root_system(kind, rank)
    system.require_dominant(lam)
    size = system.ambient_dimension
    signs = (1,) if kind == "A" else (1, -1)

    counts: Counter = Counter()
    for i in range(size):
        for sign in signs:
            candidate = lam + _unit(size, i, sign)
            if system.is_dominant(candidate):
                counts[candidate] += 1
    if kind == "B" and lam[-1] != 0:
        counts[lam] += 1
    return WeightMultiset.from_counts(counts)


def _permutation_sign(values: Sequence[Fraction]) -> int:
    """Sign of the permutation sorting distinct values into descending order."""
    inversions = sum(
        1 for i, j in itertools.combinations(range(len(values)), 2) if values[i] < values[j]
    )
    return -1 if inversions % 2 else 1


def _dominant_reflection(
    kind: RootKind, mu: Sequence[Fraction]
) -> Optional[Tuple[Tuple[Fraction, ...], int]]:
    """
    Weyl-group image of mu in the strictly dominant chamber and the sign of
    the element used; None when mu lies on a wall.
    """
    if kind == "A":
        if len(set(mu)) != len(mu):
            return None
        return tuple(sorted(mu, reverse=True)), _permutation_sign(mu)

    absolute = [abs(x) for x in mu]
    if len(set(absolute)) != len(absolute):
        return None
    flips = sum(1 for x in mu if x < 0)
    ordered = sorted(absolute, reverse=True)
    parity = _permutation_sign(absolute)

    if kind == "B":
        if 0 in absolute:
            return None
        return tuple(ordered), parity * (-1 if flips % 2 else 1)
    # D: only even numbers of sign changes
    if flips % 2:
        ordered[-1] = -ordered[-1]
    return tuple(ordered), parity


def brauer_klimyk_oracle(kind: RootKind, rank: int, lam: Weight) -> WeightMultiset:
    """Decomposition of defining (x) lambda by dominant reflection."""
    if rank > config.BRAUER_KLIMYK_MAX_RANK:
        raise RankLimit(
            f"Brauer-Klimyk oracle supports rank <= {config.BRAUER_KLIMYK_MAX_RANK}"
        )
    system = root_system(kind, rank)
    system.require_dominant(lam)
    rho = system.weyl_vector

    counts: Counter = Counter()
    for nu in system.defining_weights():
        shifted = [a + r + b for a, r, b in zip(lam.coords, rho, nu.coords)]
        reflected = _dominant_reflection(kind, shifted)
        if reflected is None:
            continue
        point, sign = reflected
        counts[Weight(tuple(p - r for p, r in zip(point, rho)))] += sign
    return WeightMultiset.from_counts(counts)


class LeapReport(JsonReportMixin, BaseModel):
    family: str
    n: int
    gamma: Tuple[int, ...]
    reachable: List[Tuple[int, ...]]
    max_shift: int
    one_sided_violations: List[Tuple[int, ...]]


def bounded_leap_check(
    fam: SphereFamily, gamma: SpectrumIndex, warn_one_sided: bool = True
) -> LeapReport:
    """
    Spherical components of defining (x) W_gamma and their coordinate shifts.

    Components below gamma are logged at WARNING unless warn_one_sided is off;
    sweeps turn it off and warn once with a summary.
    """
    lam = index_to_weight(fam, gamma)
    tensor = fundamental_tensor(fam.group_kind, fam.n, lam)
    reachable = sorted(
        index_from_weight(fam, w)
        for w, _ in tensor
        if spherical_multiplicity(fam, w) == 1
    )
    gamma = tuple(gamma)
    max_shift = max(
        (abs(b - g) for beta in reachable for b, g in zip(beta, gamma)), default=0
    )
    below = [beta for beta in reachable if any(b < g for b, g in zip(beta, gamma))]
    report = LeapReport(
        family=fam.label,
        n=fam.n,
        gamma=gamma,
        reachable=reachable,
        max_shift=max_shift,
        one_sided_violations=below if fam.family == "OddA" else [],
    )
    if report.one_sided_violations and warn_one_sided:
        logger.warning(
            f"{fam} gamma={gamma}: components below gamma {report.one_sided_violations}"
        )
    if max_shift > 1:
        raise CertificateIncomplete(
            f"{fam} gamma={gamma}: leap {max_shift} exceeds 1", ["bounded_leap"]
        )
    return report


class LeapSweepReport(JsonReportMixin, BaseModel):
    family: str
    n: int
    max_gamma: int
    checked: int
    max_shift: int
    one_sided_violations: int
    example_one_sided: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None


def bounded_leap_sweep(fam: SphereFamily, max_gamma: int) -> LeapSweepReport:
    """Runs bounded_leap_check on every index with coordinates <= max_gamma."""
    max_shift = 0
    checked = 0
    one_sided = 0
    example = None
    for gamma in itertools.product(range(max_gamma + 1), repeat=fam.arity):
        report = bounded_leap_check(fam, gamma, warn_one_sided=False)
        checked += 1
        max_shift = max(max_shift, report.max_shift)
        if report.one_sided_violations:
            one_sided += 1
            if example is None:
                example = (gamma, report.one_sided_violations[0])
    if one_sided:
        logger.warning(
            f"{fam}: {one_sided} indices reach a spherical component below themselves "
            f"(first: {example[0] if example else None} -> "
            f"{example[1] if example else None}); only the two-sided leap bound holds"
        )
    return LeapSweepReport(
        family=fam.label,
        n=fam.n,
        max_gamma=max_gamma,
        checked=checked,
        max_shift=max_shift,
        one_sided_violations=one_sided,
        example_one_sided=example,
    )
