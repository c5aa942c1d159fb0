from fractions import Fraction

import numpy as np
import pytest

from src.errors import ConventionUnset
from src.lie_action import (
    ChevalleyGenerator,
    Convention,
    CoordinatePolynomial,
    act,
    chevalley_generator,
    chevalley_generators,
    coordinates_at,
    directional_derivative_oracle,
    eigenvalue_of,
    hwv_check_symbolic,
    hwv_monomial,
    oracle_agreement,
    sample_group_element,
    variable_names,
)
from src.spherical_spectrum import SphereFamily

FAMILIES = [
    SphereFamily("OddA", 1),
    SphereFamily("OddA", 2),
    SphereFamily("EvenB", 1),
    SphereFamily("EvenB", 2),
    SphereFamily("OddD", 2),
    SphereFamily("OddD", 3),
]


@pytest.fixture
def odd_a1():
    return SphereFamily("OddA", 1)


def test_variable_names():
    assert variable_names(SphereFamily("OddA", 1)) == ("z1", "z2", "w1", "w2")
    assert variable_names(SphereFamily("EvenB", 2)) == ("y1", "y2", "yb1", "yb2", "x0")
    assert variable_names(SphereFamily("OddD", 2)) == ("y1", "y2", "yb1", "yb2")


def test_polynomial_arithmetic(odd_a1):
    z1 = CoordinatePolynomial.variable(odd_a1, "z1")
    w2 = CoordinatePolynomial.variable(odd_a1, "w2")

    product = z1 * w2 + z1.scale(Fraction(1, 2))

    assert product.total_degree() == 2
    assert product.diff("w2") == z1
    assert (product - product).is_zero
    assert product.evaluate([2, 0, 0, 3]) == pytest.approx(7.0)
    assert CoordinatePolynomial.monomial(odd_a1, {"z1": 2, "w2": 1}).terms() == [
        ((2, 0, 0, 1), Fraction(1))
    ]


def test_polynomials_of_different_families_do_not_mix(odd_a1):
    other = CoordinatePolynomial.constant(SphereFamily("OddA", 2))

    with pytest.raises(ValueError):
        CoordinatePolynomial.constant(odd_a1) + other


def test_generator_index_range(odd_a1):
    with pytest.raises(ValueError):
        chevalley_generator(odd_a1, "E", 2)
    with pytest.raises(ValueError):
        ChevalleyGenerator("H", 0, odd_a1, ())


def test_raising_operator_on_coordinates(odd_a1):
    e1 = chevalley_generator(odd_a1, "E", 1)
    z1 = CoordinatePolynomial.variable(odd_a1, "z1")
    z2 = CoordinatePolynomial.variable(odd_a1, "z2")
    w2 = CoordinatePolynomial.variable(odd_a1, "w2")

    assert act(e1, z2) == z1
    assert act(e1, z1).is_zero
    assert act(e1, CoordinatePolynomial.variable(odd_a1, "w1")) == w2.scale(-1)


def test_incomplete_convention_rejected(odd_a1):
    h1 = chevalley_generator(odd_a1, "H", 1)
    p = CoordinatePolynomial.variable(odd_a1, "w1")

    with pytest.raises(ConventionUnset):
        act(h1, p, Convention(conjugate_sign=1))


def test_convention_does_not_matter_for_orthogonal_families():
    fam = SphereFamily("OddD", 2)
    gen = chevalley_generator(fam, "F", 1)
    p = hwv_monomial(fam, (2,))

    assert act(gen, p, Convention()) == act(gen, p, Convention.numeric())


@pytest.mark.parametrize(
    "convention, expected",
    [(Convention.numeric(), ["2", "1"]), (Convention.unsigned(), ["2", "-1"])],
)
def test_hwv_eigenvalues_depend_on_convention(convention, expected):
    report = hwv_check_symbolic(SphereFamily("OddA", 2), (2, 1), convention)

    assert report.annihilated
    assert report.h_eigenvalues == expected
    assert report.monomial == "w3*z1**2"


@pytest.mark.parametrize(
    "family, n, gamma, expected",
    [
        ("EvenB", 1, (3,), ["6"]),
        ("EvenB", 2, (3,), ["3", "0"]),
        ("OddD", 2, (3,), ["3", "3"]),
        ("OddD", 3, (2,), ["2", "0", "0"]),
    ],
)
def test_hwv_orthogonal_families(family, n, gamma, expected):
    report = hwv_check_symbolic(SphereFamily(family, n), gamma)

    assert report.annihilated
    assert report.h_eigenvalues == expected


def test_doubled_exponent_rule():
    fam = SphereFamily("EvenB", 2)

    assert str(hwv_monomial(fam, (2,), "doubled")) == "y1**4"
    assert hwv_check_symbolic(fam, (2,), exponent_rule="doubled").h_eigenvalues == ["4", "0"]


def test_eigenvalue_of_non_eigenvector(odd_a1):
    e1 = chevalley_generator(odd_a1, "H", 1)
    p = CoordinatePolynomial.variable(odd_a1, "z1") + CoordinatePolynomial.variable(
        odd_a1, "z2"
    )

    assert eigenvalue_of(e1, p) is None
    assert eigenvalue_of(e1, CoordinatePolynomial.constant(odd_a1, 3)) == 0


@pytest.mark.parametrize("fam", FAMILIES, ids=str)
def test_commutator_of_raising_and_lowering_is_cartan(fam):
    for i in range(1, fam.n + 1):
        e = chevalley_generator(fam, "E", i)
        f = chevalley_generator(fam, "F", i)
        h = chevalley_generator(fam, "H", i)
        for name in variable_names(fam):
            v = CoordinatePolynomial.variable(fam, name)
            bracket = act(e, act(f, v)) - act(f, act(e, v))
            assert bracket == act(h, v), f"{fam} [E{i},F{i}] on {name}"


def test_chevalley_generators_order():
    names = [g.name for g in chevalley_generators(SphereFamily("OddD", 2))]

    assert names == ["E1", "E2", "F1", "F2", "H1", "H2"]


@pytest.mark.parametrize("fam", FAMILIES, ids=str)
def test_sampled_elements_are_special(fam):
    g = sample_group_element(fam, np.random.default_rng(5))

    assert np.allclose(g @ g.conj().T, np.eye(len(g)), atol=1e-10)
    assert np.linalg.det(g) == pytest.approx(1.0)


def test_coordinates_lie_on_sphere():
    fam = SphereFamily("EvenB", 2)
    g = sample_group_element(fam, np.random.default_rng(1))
    y1, y2, yb1, yb2, x0 = coordinates_at(fam, g)

    assert abs(y1) ** 2 + abs(y2) ** 2 + x0.real**2 == pytest.approx(1.0)
    assert yb1 == pytest.approx(np.conj(y1))
    assert yb2 == pytest.approx(np.conj(y2))


@pytest.mark.parametrize("fam", FAMILIES, ids=str)
def test_highest_weight_vector_is_killed_numerically(fam):
    b = hwv_monomial(fam, (1,) * fam.arity)
    for i in range(1, fam.n + 1):
        e = chevalley_generator(fam, "E", i)
        assert directional_derivative_oracle(fam, b, e, samples=3, seed=11) < 1e-6


@pytest.mark.parametrize("fam", FAMILIES, ids=str)
def test_symbolic_action_matches_oracle(fam):
    names = variable_names(fam)
    p = CoordinatePolynomial.monomial(fam, {names[0]: 1, names[-1]: 2})
    for gen in chevalley_generators(fam):
        assert oracle_agreement(fam, p, gen, samples=2, seed=3) < 1e-6, gen.name


def test_unsigned_convention_disagrees_with_oracle():
    fam = SphereFamily("OddA", 2)
    h2 = chevalley_generator(fam, "H", 2)
    p = CoordinatePolynomial.variable(fam, "w3")

    assert oracle_agreement(fam, p, h2, samples=5, seed=3, convention=Convention.unsigned()) > 0.1


RANKS_UP_TO_THREE = (
    [SphereFamily("OddA", n) for n in range(1, 4)]
    + [SphereFamily("EvenB", n) for n in range(1, 4)]
    + [SphereFamily("OddD", n) for n in range(2, 4)]
)


def _random_monomial(fam, rng, max_degree=4):
    names = variable_names(fam)
    exponents = {}
    for position in rng.integers(0, len(names), size=int(rng.integers(0, max_degree + 1))):
        exponents[names[position]] = exponents.get(names[position], 0) + 1
    return CoordinatePolynomial.monomial(fam, exponents)


def _random_case(seed):
    rng = np.random.default_rng(seed)
    fam = RANKS_UP_TO_THREE[seed % len(RANKS_UP_TO_THREE)]
    generators = chevalley_generators(fam)
    gen = generators[int(rng.integers(0, len(generators)))]
    return fam, gen, rng


@pytest.mark.parametrize("seed", range(100))
def test_action_is_a_derivation(seed):
    fam, gen, rng = _random_case(seed)
    f = _random_monomial(fam, rng)
    g = _random_monomial(fam, rng)

    assert act(gen, f * g) == act(gen, f) * g + f * act(gen, g)


@pytest.mark.parametrize("seed", range(50))
def test_random_monomial_matches_oracle(seed):
    fam, gen, rng = _random_case(seed)
    p = _random_monomial(fam, rng)

    assert oracle_agreement(fam, p, gen, samples=2, seed=seed) < 1e-6, f"{gen.name} on {p}"
