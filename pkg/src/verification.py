"""
Verification suites behind `verify <target>`.

Every suite follows the same template: collect the instances to check, check
each one, then assemble a SuiteReport. Failures never pass silently; they are
logged through the alert mixin and reflected in the report.
"""

import itertools
import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src import config
from src.errors import CertificateIncomplete, SpecDimError
from src.growth_graph import (
    build_graph,
    compare_norm_kinds,
    dirac_growth_check,
    find_root,
    length_function,
)
from src.lie_action import (
    Convention,
    CoordinatePolynomial,
    chevalley_generator,
    chevalley_generators,
    hwv_check_symbolic,
    hwv_monomial,
    oracle_agreement,
    variable_names,
)
from src.norms import (
    ORACLE_TOLERANCE,
    MonomialExponents,
    l2_monomial_norm_sq,
    monomial_sup,
    monomial_sup_oracle,
    monomial_sup_squared,
    monte_carlo_l2_norm_sq,
    ratio_bound_check,
)
from src.root_systems import RootKind, Weight, dominant_weights, root_system
from src.spherical_spectrum import (
    SphereFamily,
    SpectrumIndex,
    interlacing_branching_oracle,
    spherical_multiplicity,
)
from src.tensor_branching import (
    brauer_klimyk_oracle,
    bounded_leap_sweep,
    fundamental_tensor,
)
from src.utils import JsonReportMixin, log_execution_time

logger = logging.getLogger(__name__)

ORACLE_AGREEMENT_TOLERANCE = 1e-6
_KIND_TO_FAMILY = {"A": "OddA", "B": "EvenB", "D": "OddD"}


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


class SuiteReport(JsonReportMixin, BaseModel):
    schema_version: int = config.SCHEMA_VERSION
    suite: str
    seed: int
    passed: bool
    checks: List[CheckResult]
    notes: List[str] = Field(default_factory=list)


class FailureAlertMixin:
    """Reports failed checks on the log."""

    def send_alert(self, message: str) -> None:
        logger.error(f"[Verification] {message}")


class VerificationSuite(FailureAlertMixin, ABC):
    name = "suite"

    def __init__(self, seed: int = config.DEFAULT_SEED) -> None:
        self.seed = seed
        self.notes: List[str] = []

    @log_execution_time
    def run(self) -> SuiteReport:
        """Template method: collect, check, summarize."""
        logger.info(f"--- Verification '{self.name}' started ---")
        try:
            results = [self.check(instance) for instance in self.collect()]
        except SpecDimError as exc:
            self.send_alert(f"'{self.name}' aborted: {exc}")
            raise
        report = SuiteReport(
            suite=self.name,
            seed=self.seed,
            passed=all(r.passed for r in results),
            checks=results,
            notes=self.notes,
        )
        failed = [r.name for r in results if not r.passed]
        if failed:
            self.send_alert(f"'{self.name}' failed checks: {failed}")
        else:
            logger.info(f"--- Verification '{self.name}' passed ({len(results)} checks) ---")
        return report

    @abstractmethod
    def collect(self) -> Iterable[Any]:
        """Instances to check."""

    @abstractmethod
    def check(self, instance: Any) -> CheckResult:
        """Checks one instance."""


class HwvSuite(VerificationSuite):
    """E_i annihilation of b^gamma plus symbolic-versus-numeric agreement."""

    name = "hwv"

    def __init__(
        self,
        fam: SphereFamily,
        gamma: Optional[SpectrumIndex] = None,
        max_gamma: int = 5,
        samples: int = 5,
        random_monomials: int = 10,
        seed: int = config.DEFAULT_SEED,
    ) -> None:
        super().__init__(seed)
        self.fam = fam
        self.gamma = gamma
        self.max_gamma = max_gamma
        self.samples = samples
        self.random_monomials = random_monomials

    def collect(self) -> Iterable[Tuple[str, Any]]:
        if self.gamma is not None:
            indices: Iterable[SpectrumIndex] = [tuple(self.gamma)]
        else:
            indices = itertools.product(range(self.max_gamma + 1), repeat=self.fam.arity)
        for gamma in indices:
            yield ("annihilation", gamma)
        yield ("oracle_hwv", self.gamma or (1,) * self.fam.arity)
        rng = np.random.default_rng(self.seed)
        names = variable_names(self.fam)
        generators = chevalley_generators(self.fam)
        for _ in range(self.random_monomials):
            degree = int(rng.integers(1, 5))
            exponents: Dict[str, int] = {}
            for position in rng.integers(0, len(names), size=degree):
                exponents[names[position]] = exponents.get(names[position], 0) + 1
            gen = generators[int(rng.integers(0, len(generators)))]
            yield ("oracle_random", (exponents, gen))

    def check(self, instance: Tuple[str, Any]) -> CheckResult:
        kind, payload = instance
        if kind == "annihilation":
            numeric = hwv_check_symbolic(self.fam, payload, Convention.numeric())
            detail: Dict[str, Any] = {
                "gamma": list(payload),
                "monomial": numeric.monomial,
                "h_eigenvalues": numeric.h_eigenvalues,
            }
            if self.fam.family == "OddA":
                unsigned = hwv_check_symbolic(self.fam, payload, Convention.unsigned())
                detail["h_eigenvalues_unsigned_convention"] = unsigned.h_eigenvalues
                if unsigned.h_eigenvalues != numeric.h_eigenvalues and not self.notes:
                    self.notes.append(
                        "H eigenvalues on the conjugate coordinate depend on the "
                        "convention; the numeric convention matches the oracle"
                    )
            if self.fam.family == "EvenB":
                doubled = hwv_check_symbolic(self.fam, payload, exponent_rule="doubled")
                detail["h_eigenvalues_doubled_exponent"] = doubled.h_eigenvalues
                return CheckResult(
                    name=f"annihilation {payload}",
                    passed=numeric.annihilated and doubled.annihilated,
                    detail=detail,
                )
            return CheckResult(
                name=f"annihilation {payload}", passed=numeric.annihilated, detail=detail
            )

        if kind == "oracle_hwv":
            b = hwv_monomial(self.fam, payload)
            worst = max(
                oracle_agreement(
                    self.fam, b, chevalley_generator(self.fam, "E", i), self.samples, self.seed
                )
                for i in range(1, self.fam.n + 1)
            )
            return CheckResult(
                name=f"oracle E_i on b^{payload}",
                passed=worst < ORACLE_AGREEMENT_TOLERANCE,
                detail={"max_error": worst},
            )

        exponents, gen = payload
        p = CoordinatePolynomial.monomial(self.fam, exponents)
        worst = oracle_agreement(self.fam, p, gen, self.samples, self.seed)
        return CheckResult(
            name=f"oracle {gen.name} on {p}",
            passed=worst < ORACLE_AGREEMENT_TOLERANCE,
            detail={"max_error": worst},
        )


def _family_for(kind: RootKind, rank: int) -> SphereFamily:
    return SphereFamily(_KIND_TO_FAMILY[kind], rank)  # type: ignore[arg-type]


def _branching_weights(kind: RootKind, rank: int, max_entry: int) -> List[Weight]:
    system = root_system(kind, rank)
    weights = list(dominant_weights(system, max_entry))
    if kind == "A":
        # representatives with a negative last entry
        weights += [w.shifted(-max_entry) for w in weights]
    else:
        weights += [
            w.shifted(Fraction(1, 2)) for w in weights if all(c >= 0 for c in w.coords)
        ]
    return weights


class BranchingSuite(VerificationSuite):
    """Tensor rules versus Brauer-Klimyk, dimension conservation, I_lambda versus interlacing."""

    name = "branching"

    def __init__(
        self,
        max_entry: int = 3,
        max_rank: int = 4,
        random_weights: int = 200,
        seed: int = config.DEFAULT_SEED,
    ) -> None:
        super().__init__(seed)
        self.max_entry = max_entry
        self.max_rank = max_rank
        self.random_weights = random_weights

    def collect(self) -> Iterable[Tuple[str, RootKind, int]]:
        for kind in ("A", "B", "D"):
            first = 2 if kind == "D" else 1
            for rank in range(first, self.max_rank + 1):
                yield ("exhaustive", kind, rank)  # type: ignore[misc]
        yield ("random_conservation", "A", 0)

    def _exhaustive(self, kind: RootKind, rank: int) -> CheckResult:
        system = root_system(kind, rank)
        fam = _family_for(kind, rank)
        mismatches: List[str] = []
        checked = 0
        for lam in _branching_weights(kind, rank, self.max_entry):
            checked += 1
            rules = fundamental_tensor(kind, rank, lam)
            if rules != brauer_klimyk_oracle(kind, rank, lam):
                mismatches.append(f"tensor {lam}")
            if not rules.dimension_conserved(system, lam):
                mismatches.append(f"dimension {lam}")
            trivial = Weight.zero(rank - 1 if kind == "D" else rank)
            if spherical_multiplicity(fam, lam) != interlacing_branching_oracle(
                fam.branching_pair, lam, trivial
            ):
                mismatches.append(f"spherical {lam}")
        return CheckResult(
            name=f"{kind}_{rank} exhaustive (entries <= {self.max_entry})",
            passed=not mismatches,
            detail={"checked": checked, "mismatches": mismatches[:10]},
        )

    def _random_conservation(self) -> CheckResult:
        rng = np.random.default_rng(self.seed)
        failures: List[str] = []
        for _ in range(self.random_weights):
            kind: RootKind = ("A", "B", "D")[int(rng.integers(0, 3))]  # type: ignore[assignment]
            rank = int(rng.integers(2, 6))
            size = rank + 1 if kind == "A" else rank
            coords = sorted((int(x) for x in rng.integers(0, 6, size=size)), reverse=True)
            lam = Weight.of(*coords)
            system = root_system(kind, rank)
            if not fundamental_tensor(kind, rank, lam).dimension_conserved(system, lam):
                failures.append(f"{kind}_{rank} {lam}")
        return CheckResult(
            name=f"dimension conservation on {self.random_weights} random weights",
            passed=not failures,
            detail={"failures": failures[:10]},
        )

    def check(self, instance: Tuple[str, RootKind, int]) -> CheckResult:
        kind_of_check, kind, rank = instance
        if kind_of_check == "exhaustive":
            return self._exhaustive(kind, rank)
        return self._random_conservation()


class LeapSuite(VerificationSuite):
    """Two-sided bounded leap over every index with coordinates <= max_gamma."""

    name = "leap"

    def __init__(
        self, fam: SphereFamily, max_gamma: int = 20, seed: int = config.DEFAULT_SEED
    ) -> None:
        super().__init__(seed)
        self.fam = fam
        self.max_gamma = max_gamma

    def collect(self) -> Iterable[SphereFamily]:
        return [self.fam]

    def check(self, instance: SphereFamily) -> CheckResult:
        sweep = bounded_leap_sweep(instance, self.max_gamma)
        if sweep.one_sided_violations:
            self.notes.append(
                f"{sweep.one_sided_violations} indices reach a spherical component "
                "below themselves; only |shift| <= 1 is asserted"
            )
        return CheckResult(
            name=f"bounded leap {instance}",
            passed=sweep.max_shift <= 1,
            detail=sweep.model_dump(mode="json"),
        )


def _ratio_sq(lower: Tuple[int, int], upper: Tuple[int, int]) -> Fraction:
    """(sup lower / sup upper)^2, exactly."""
    return monomial_sup_squared(*lower) / monomial_sup_squared(*upper)


class NormsSuite(VerificationSuite):
    """Sup-norm ratio lemma, oracles, ratio bounds and the sup versus l2 graphs."""

    name = "norms"

    def __init__(
        self,
        max_gamma: int = 20,
        oracle_max: int = 20,
        samples: int = 200_000,
        graph_cutoff: int = 20,
        fam: Optional[SphereFamily] = None,
        seed: int = config.DEFAULT_SEED,
    ) -> None:
        super().__init__(seed)
        self.max_gamma = max_gamma
        self.oracle_max = oracle_max
        self.samples = samples
        self.fam = fam or SphereFamily("OddA", 1)
        self.graph_cutoff = graph_cutoff

    def collect(self) -> Iterable[str]:
        return [
            "diagonal",
            "off_diagonal",
            "sup_oracle",
            "l2_monte_carlo",
            "ratio_bound",
            "norm_kinds",
        ]

    def check(self, instance: str) -> CheckResult:
        return getattr(self, f"_check_{instance}")()

    def _check_diagonal(self) -> CheckResult:
        # sup(a,a) / sup(a+1,a+1) = 2 exactly
        failures = [
            a
            for a in range(self.max_gamma + 1)
            if _ratio_sq((a, a), (a + 1, a + 1)) != Fraction(4)
        ]
        return CheckResult(
            name=f"diagonal ratio exactly 2 (gamma <= {self.max_gamma})",
            passed=not failures,
            detail={"failures": failures[:10]},
        )

    def _check_off_diagonal(self) -> CheckResult:
        failures = []
        for a in range(self.max_gamma + 1):
            for b in range(a + 1):
                # y-step on g1 >= g2 and, by symmetry, z-step on g1 <= g2
                if _ratio_sq((a, b), (a + 1, b)) > 2:
                    failures.append((a, b))
        return CheckResult(
            name=f"off-diagonal ratio <= sqrt(2) (gamma <= {self.max_gamma})",
            passed=not failures,
            detail={"failures": failures[:10]},
        )

    def _check_sup_oracle(self) -> CheckResult:
        worst = 0.0
        for a in range(self.oracle_max + 1):
            for b in range(self.oracle_max + 1):
                worst = max(worst, abs(monomial_sup(a, b) - monomial_sup_oracle(a, b)))
        return CheckResult(
            name=f"closed-form sup norm vs grid search (a, b <= {self.oracle_max})",
            passed=worst <= ORACLE_TOLERANCE,
            detail={"max_error": worst},
        )

    def _check_l2_monte_carlo(self) -> CheckResult:
        gammas = [(0,) * self.fam.arity, (1,) * self.fam.arity, (2,) + (0,) * (self.fam.arity - 1)]
        worst_z = 0.0
        for gamma in gammas:
            exact = float(l2_monomial_norm_sq(self.fam, gamma))
            mean, stderr = monte_carlo_l2_norm_sq(self.fam, gamma, self.samples, self.seed)
            if stderr > 0:
                worst_z = max(worst_z, abs(mean - exact) / stderr)
            elif abs(mean - exact) > 1e-12:
                worst_z = float("inf")
        return CheckResult(
            name=f"L2 closed form vs Monte Carlo ({self.fam})",
            passed=worst_z < 5.0,
            detail={"max_standard_errors": worst_z, "samples": self.samples},
        )

    def _check_ratio_bound(self) -> CheckResult:
        pairs = [((1, 0), (1, 1)), ((2, 1), (1, 1)), ((1, 1), (1, 0)), ((0, 0), (1, 1))]
        reports = []
        for f, h in pairs:
            try:
                report = ratio_bound_check(MonomialExponents(*f), MonomialExponents(*h), 30)
                reports.append(report.model_dump(mode="json"))
            except SpecDimError as exc:
                return CheckResult(
                    name="ratio bound", passed=False, detail={"error": str(exc)}
                )
        return CheckResult(
            name="ratio bound ||h^m f|| / ||h^(m+1) f||",
            passed=True,
            detail={"reports": reports},
        )

    def _check_norm_kinds(self) -> CheckResult:
        comparison = compare_norm_kinds(self.fam, self.graph_cutoff)
        if comparison.l2_only:
            self.notes.append(
                f"{len(comparison.l2_only)} edges of the l2 graph of {self.fam} "
                "are absent from the sup graph; root and lengths are compared instead"
            )
        detail = comparison.model_dump(mode="json")
        detail["sup_only"] = detail["sup_only"][:10]
        detail["l2_only"] = detail["l2_only"][:10]
        return CheckResult(
            name=f"sup and l2 growth graphs ({self.fam}, cutoff {self.graph_cutoff})",
            passed=comparison.sup_edges_contained and comparison.same_lengths,
            detail=detail,
        )


class DiracSuite(VerificationSuite):
    """Lipschitz growth of sample Dirac sequences against the length function."""

    name = "dirac"

    def __init__(
        self,
        fam: SphereFamily,
        cutoff: int = 50,
        window: int = 10,
        seed: int = config.DEFAULT_SEED,
    ) -> None:
        super().__init__(seed)
        self.fam = fam
        self.cutoff = cutoff
        self.window = window
        self.graph = build_graph(fam, cutoff=cutoff)
        root = find_root(self.graph)
        if root is None:
            raise CertificateIncomplete(f"{fam}: no root at the default c", ["root"])
        self.root = root
        self.lengths = length_function(self.graph, root)

    def collect(self) -> Iterable[Tuple[str, bool]]:
        return [("length", True), ("coordinate_sum", True), ("square", False)]

    def _sequence(self, label: str) -> Dict[SpectrumIndex, float]:
        if label == "length":
            return {v: float(self.lengths[v]) for v in self.graph.vertices}
        if label == "coordinate_sum":
            return {v: float(sum(v)) for v in self.graph.vertices}
        return {v: float(sum(v)) ** 2 for v in self.graph.vertices}

    def check(self, instance: Tuple[str, bool]) -> CheckResult:
        label, should_hold = instance
        window = None if should_hold else self.window
        report = dirac_growth_check(self.graph, self.root, self._sequence(label), window)
        detail = report.model_dump(mode="json")
        detail["violations"] = detail["violations"][:10]
        detail["violation_count"] = len(report.violations)
        name = f"d = {label}" + ("" if should_hold else " (negative control)")
        return CheckResult(name=name, passed=report.holds == should_hold, detail=detail)
