import math
from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from src.errors import RatioBoundViolated
from src.norms import (
    ORACLE_TOLERANCE,
    MonomialExponents,
    hwv_norm,
    hwv_norm_ratio,
    l2_monomial_norm_sq,
    log_l2_norm_sq,
    monomial_sup,
    monomial_sup_oracle,
    monomial_sup_squared,
    monte_carlo_l2_norm_sq,
    ratio_bound_check,
)
from src.spherical_spectrum import SphereFamily


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (0, 0, Fraction(1)),
        (1, 1, Fraction(1, 4)),
        (2, 1, Fraction(4, 27)),
        (0, 3, Fraction(1)),
        (2, 2, Fraction(1, 16)),
    ],
)
def test_monomial_sup_squared(a, b, expected):
    assert monomial_sup_squared(a, b) == expected


@pytest.mark.parametrize("a, b", [(1, 1), (2, 1), (5, 3), (0, 4), (7, 0), (10, 10)])
def test_sup_oracle_matches_closed_form(a, b):
    assert monomial_sup_oracle(a, b) == pytest.approx(monomial_sup(a, b), abs=1e-9)


def test_sup_oracle_rejects_small_grid():
    with pytest.raises(ValueError):
        monomial_sup_oracle(1, 1, grid_size=10)


def test_negative_exponents_rejected():
    with pytest.raises(ValueError):
        MonomialExponents(-1, 0)


@pytest.mark.parametrize(
    "family, n, gamma, expected",
    [
        ("OddA", 1, (1, 0), Fraction(1, 2)),
        ("OddA", 1, (1, 1), Fraction(1, 6)),
        ("OddA", 2, (0, 0), Fraction(1)),
        ("EvenB", 1, (1,), Fraction(2, 3)),
        ("OddD", 2, (1,), Fraction(1, 2)),
        ("OddD", 2, (2,), Fraction(1, 3)),
    ],
)
def test_l2_norm_exact(family, n, gamma, expected):
    fam = SphereFamily(family, n)

    assert l2_monomial_norm_sq(fam, gamma) == expected
    assert math.exp(log_l2_norm_sq(fam, gamma)) == pytest.approx(float(expected))


def test_hwv_norms_by_family():
    odd_a = SphereFamily("OddA", 2)
    even_b = SphereFamily("EvenB", 2)

    assert hwv_norm(odd_a, (1, 1)) == pytest.approx(0.5)
    assert hwv_norm(even_b, (7,)) == 1.0
    assert hwv_norm(even_b, (1,), "l2") == pytest.approx(math.sqrt(2 / 5))
    assert hwv_norm_ratio(odd_a, (1, 1), (2, 2)) == pytest.approx(2.0)


def test_hwv_norm_unknown_kind():
    with pytest.raises(ValueError):
        hwv_norm(SphereFamily("OddA", 1), (1, 1), "l1")  # type: ignore[arg-type]


@pytest.mark.parametrize(
    "family, n, gamma",
    [("OddA", 1, (1, 1)), ("EvenB", 1, (2,)), ("OddD", 3, (1,))],
)
def test_monte_carlo_agrees_with_exact(family, n, gamma):
    fam = SphereFamily(family, n)

    mean, stderr = monte_carlo_l2_norm_sq(fam, gamma, samples=50_000, seed=7)

    assert abs(mean - float(l2_monomial_norm_sq(fam, gamma))) < 5 * stderr + 1e-12


def test_monte_carlo_is_deterministic():
    fam = SphereFamily("EvenB", 2)

    assert monte_carlo_l2_norm_sq(fam, (1,), 1_000, 3) == monte_carlo_l2_norm_sq(
        fam, (1,), 1_000, 3
    )


def test_ratio_bound_diagonal_is_tight():
    report = ratio_bound_check(MonomialExponents(1, 1), MonomialExponents(1, 1), 6)

    assert report.holds
    assert report.bound == pytest.approx(2.0)
    assert report.max_ratio == pytest.approx(2.0)
    assert len(report.ratios) == 7


def test_ratio_bound_constant_f_uses_maximizer_of_h():
    report = ratio_bound_check(MonomialExponents(0, 0), MonomialExponents(2, 1), 4)

    assert report.holds
    assert report.bound == pytest.approx(math.sqrt(27 / 4))


def test_ratio_bound_vanishing_h_is_unbounded():
    report = ratio_bound_check(MonomialExponents(1, 0), MonomialExponents(1, 1), 3)

    assert report.holds
    assert math.isinf(report.bound)


def test_ratio_bound_violation_raises():
    with patch("src.norms._bound_squared", return_value=Fraction(1)):
        with pytest.raises(RatioBoundViolated):
            ratio_bound_check(MonomialExponents(1, 1), MonomialExponents(1, 1), 2)


def test_ratio_bound_rejects_constant_h():
    with pytest.raises(ValueError):
        ratio_bound_check(MonomialExponents(1, 0), MonomialExponents(0, 0), 2)


def test_ratio_bound_diagonal_factor():
    report = ratio_bound_check(MonomialExponents(1, 1), MonomialExponents(1, 0), 50)

    assert report.holds
    assert report.bound == pytest.approx(math.sqrt(2))
    assert report.max_ratio == pytest.approx(math.sqrt(27 / 16))
    assert report.ratios[0] == report.max_ratio
    assert all(r <= math.sqrt(2) for r in report.ratios)


def test_ratio_bound_constant_f_along_diagonal():
    report = ratio_bound_check(MonomialExponents(0, 0), MonomialExponents(1, 1), 50)

    assert report.bound == pytest.approx(2.0)
    assert report.ratios == pytest.approx([2.0] * 51)


def test_ratio_bound_z_direction():
    report = ratio_bound_check(MonomialExponents(3, 3), MonomialExponents(0, 1), 50)

    assert report.holds
    assert report.bound == pytest.approx(math.sqrt(2))
    assert report.max_ratio <= math.sqrt(2)


@pytest.mark.slow
def test_diagonal_sup_ratio_is_exactly_two():
    for k in range(501):
        assert monomial_sup_squared(k, k) / monomial_sup_squared(k + 1, k + 1) == 4


@pytest.mark.slow
def test_off_diagonal_sup_ratio_below_sqrt_two():
    fam = SphereFamily("OddA", 1)
    for g1 in range(201):
        for g2 in range(g1 + 1):
            assert hwv_norm_ratio(fam, (g1, g2), (g1 + 1, g2)) ** 2 <= 2 + 1e-12
            assert hwv_norm_ratio(fam, (g2, g1), (g2, g1 + 1)) ** 2 <= 2 + 1e-12


@pytest.mark.slow
@pytest.mark.parametrize("n", range(1, 6))
def test_l2_step_ratio_below_sqrt_n_plus_two(n):
    fam = SphereFamily("OddA", n)
    for g1 in range(201):
        for g2 in range(g1 + 1):
            ratio_sq = hwv_norm_ratio(fam, (g1, g2), (g1 + 1, g2), "l2") ** 2
            assert ratio_sq == pytest.approx((n + g1 + g2 + 1) / (g1 + 1))
            assert ratio_sq < n + 2


@pytest.mark.slow
def test_sup_oracle_exhaustive_small_exponents():
    for a in range(31):
        for b in range(31):
            assert abs(monomial_sup_oracle(a, b) - monomial_sup(a, b)) <= ORACLE_TOLERANCE


@pytest.mark.slow
def test_sup_oracle_random_exponents():
    rng = np.random.default_rng(500)
    for a, b in rng.integers(0, 201, size=(500, 2)):
        a, b = int(a), int(b)
        assert abs(monomial_sup_oracle(a, b) - monomial_sup(a, b)) <= ORACLE_TOLERANCE, (a, b)
