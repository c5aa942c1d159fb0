from fractions import Fraction
from unittest.mock import patch

import pytest

from src.errors import CutoffTooLarge, NotDominant, RankMismatch, UnsupportedRank
from src.root_systems import Weight
from src.spherical_spectrum import (
    SphereFamily,
    canonical_length,
    enumerate_spectrum,
    index_from_weight,
    index_to_weight,
    interlacing_branching_oracle,
    isotypic_dimension,
    shell_indices,
    spherical_class_multiplicity,
    spherical_multiplicity,
    supported_families,
    validate_index,
)


@pytest.fixture
def odd_a2():
    return SphereFamily("OddA", 2)


def test_family_properties():
    fam = SphereFamily.parse("odd-a", 2)

    assert fam.sphere_dimension == 5
    assert fam.arity == 2
    assert fam.root_index == (0, 0)
    assert fam.branching_pair == "A>A"
    assert str(fam) == "odd-a n=2 (S^5)"
    assert SphereFamily("EvenB", 3).sphere_dimension == 6
    assert SphereFamily("OddD", 3).sphere_dimension == 5


@pytest.mark.parametrize("family, n", [("OddD", 1), ("EvenB", 0), ("OddC", 2)])
def test_family_rejects_unsupported(family, n):
    with pytest.raises(UnsupportedRank):
        SphereFamily(family, n)


@pytest.mark.parametrize(
    "family, n, coords, expected",
    [
        ("OddA", 2, (2, 0, -1), 1),
        ("OddA", 2, (2, 1, 0), 0),
        ("OddA", 2, (1, 1, -1), 0),
        ("OddA", 2, (0, 0, -3), 1),
        ("EvenB", 2, (3, 1), 0),
        ("EvenB", 2, (3, 0), 1),
        ("EvenB", 2, (Fraction(1, 2), Fraction(1, 2)), 0),
        ("OddD", 3, (2, 0, 0), 1),
        ("OddD", 3, (1, 1, -1), 0),
    ],
)
def test_spherical_multiplicity(family, n, coords, expected):
    assert spherical_multiplicity(SphereFamily(family, n), Weight.of(*coords)) == expected


def test_spherical_multiplicity_requires_dominant(odd_a2):
    with pytest.raises(NotDominant):
        spherical_multiplicity(odd_a2, Weight.of(0, 1, 0))


def test_class_multiplicity_accepts_shifted_weights(odd_a2):
    shifted = Weight.of(3, 1, 0)

    assert spherical_multiplicity(odd_a2, shifted) == 0
    assert spherical_class_multiplicity(odd_a2, shifted) == 1
    assert spherical_class_multiplicity(odd_a2, Weight.of(2, 1, 0)) == 1
    assert spherical_class_multiplicity(SphereFamily("OddA", 3), Weight.of(2, 1, 0, 0)) == 0


@pytest.mark.parametrize(
    "pair, big, small, expected",
    [
        ("A>A", (2, 0, -1), (1, 0), 1),
        ("A>A", (2, 0, -1), (1, 1), 0),
        ("A>A", (2, 0, -1), (0, 0), 1),
        ("B>D", (1, 0), (0, 0), 1),
        ("B>D", (1, 0), (1, 1), 0),
        ("B>D", (2, 1), (1, -1), 1),
        ("D>B", (1, 0, 0), (0, 0), 1),
        ("D>B", (1, 1, -1), (1, 1), 1),
        ("D>B", (1, 0, 0), (Fraction(1, 2), Fraction(1, 2)), 0),
    ],
)
def test_interlacing_oracle(pair, big, small, expected):
    assert (
        interlacing_branching_oracle(pair, Weight.of(*big), Weight.of(*small)) == expected
    )


def test_interlacing_oracle_rank_mismatch():
    with pytest.raises(RankMismatch):
        interlacing_branching_oracle("A>A", Weight.of(1, 0, 0), Weight.of(1, 0, 0))


def test_index_weight_round_trip(odd_a2):
    weight = index_to_weight(odd_a2, (2, 1))

    assert weight == Weight.of(2, 0, -1)
    assert index_from_weight(odd_a2, weight) == (2, 1)
    assert index_to_weight(SphereFamily("EvenB", 3), (4,)) == Weight.of(4, 0, 0)


def test_index_from_weight_rejects_non_spherical(odd_a2):
    with pytest.raises(NotDominant):
        index_from_weight(odd_a2, Weight.of(1, 1, -1))


@pytest.mark.parametrize("gamma", [(1,), (1, -1), (1, 2, 3)])
def test_validate_index_rejects_bad_shapes(odd_a2, gamma):
    with pytest.raises(ValueError):
        validate_index(odd_a2, gamma)


@pytest.mark.parametrize(
    "family, n, gamma, expected",
    [
        ("OddA", 1, (1, 1), 3),
        ("OddA", 1, (2, 0), 3),
        ("OddA", 2, (1, 1), 8),
        ("EvenB", 1, (3,), 7),
        ("EvenB", 2, (1,), 5),
        ("OddD", 2, (2,), 9),
        ("OddD", 3, (1,), 6),
    ],
)
def test_isotypic_dimension(family, n, gamma, expected):
    assert isotypic_dimension(SphereFamily(family, n), gamma) == expected


def test_canonical_length():
    fam = SphereFamily("OddA", 1)

    assert canonical_length(fam, (0, 0)) == 1
    assert canonical_length(fam, (1, 0)) == 1
    assert canonical_length(fam, (3, 1)) == 3


def test_shell_indices_odd_a():
    fam = SphereFamily("OddA", 1)

    assert list(shell_indices(fam, 1)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert list(shell_indices(fam, 1, include_root=False)) == [(0, 1), (1, 0), (1, 1)]
    assert list(shell_indices(fam, 2)) == [(0, 2), (1, 2), (2, 0), (2, 1), (2, 2)]
    assert list(shell_indices(fam, 0)) == []


def test_shell_indices_cover_every_index_once():
    fam = SphereFamily("OddA", 2)
    seen = [gamma for k in range(1, 5) for gamma in shell_indices(fam, k)]

    assert len(seen) == len(set(seen)) == 25


def test_enumerate_spectrum_is_lexicographic():
    assert enumerate_spectrum(SphereFamily("EvenB", 1), 3) == [
        ((0,), 1),
        ((1,), 3),
        ((2,), 5),
        ((3,), 7),
    ]
    entries = enumerate_spectrum(SphereFamily("OddA", 1), 2)
    assert [gamma for gamma, _ in entries] == sorted(gamma for gamma, _ in entries)
    assert len(entries) == 9


def test_enumerate_spectrum_limits():
    fam = SphereFamily("OddA", 1)

    with pytest.raises(ValueError):
        enumerate_spectrum(fam, 0)
    with patch("src.config.MAX_SPECTRUM_ENTRIES", 10):
        with pytest.raises(CutoffTooLarge):
            enumerate_spectrum(fam, 5)


def test_supported_families_order():
    families = list(supported_families(2))

    assert [(f.family, f.n) for f in families] == [
        ("OddA", 1),
        ("OddA", 2),
        ("EvenB", 1),
        ("EvenB", 2),
        ("OddD", 2),
    ]
