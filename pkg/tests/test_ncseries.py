"""Truncated series arithmetic, inversion, substitution, fixed points."""

import random
from fractions import Fraction

import pytest

from cfree.ncseries import (
    NCSeries,
    series_inverse,
    solve_fixed_point_M_from_R,
    substitute_sided,
)

from oracles import free_cumulants_of, moment_from_free_cumulants, tridiag_moment


def random_series(rng, d, N, constant=None, max_terms=6):
    coeffs = {}
    if constant is not None:
        coeffs[()] = constant
    for _ in range(rng.randrange(1, max_terms + 1)):
        n = rng.randrange(1, N + 1)
        w = tuple(rng.randrange(1, d + 1) for _ in range(n))
        coeffs[w] = Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
    return NCSeries(d, N, coeffs)


def test_constructor_rejects_words_beyond_truncation():
    with pytest.raises(ValueError):
        NCSeries(1, 2, {(1, 1, 1): 1})


def test_mixed_truncation_is_an_error():
    a = NCSeries.one(1, 3)
    b = NCSeries.one(1, 4)
    with pytest.raises(ValueError, match="truncation mismatch: 3 vs 4"):
        a + b
    with pytest.raises(ValueError):
        a * b


def test_mixed_variable_count_is_an_error():
    with pytest.raises(ValueError):
        NCSeries.one(1, 3) + NCSeries.one(2, 3)


def test_product_truncates_silently():
    z = NCSeries.variable(1, 2, 1)
    assert (z * z * z).is_zero()
    assert (z * z).coefficient((1, 1)) == 1


def test_truncate_keeps_declared_degree():
    S = NCSeries(1, 4, {(1,): 1, (1, 1, 1): 2})
    T = S.truncate(2)
    assert T.trunc_degree == 4
    assert T.coeffs == {(1,): 1}


def test_inverse_of_one_plus_linear():
    S = NCSeries(2, 2, {(): 1, (1,): 1, (2,): 1})
    inv = series_inverse(S)
    assert inv.coeffs == {
        (): 1, (1,): -1, (2,): -1,
        (1, 1): 1, (1, 2): 1, (2, 1): 1, (2, 2): 1}


def test_inverse_is_two_sided_on_random_series():
    rng = random.Random(21)
    one = NCSeries.one(2, 5)
    for const in (1, Fraction(3, 2), -2):
        for _ in range(8):
            S = random_series(rng, 2, 5, constant=const)
            inv = series_inverse(S)
            assert S * inv == one
            assert inv * S == one


def test_inverse_needs_nonzero_constant():
    with pytest.raises(ValueError):
        series_inverse(NCSeries.variable(1, 3, 1))


def test_left_substitution_puts_factor_before_letter():
    S = NCSeries(2, 4, {(1, 1): 1})
    T = NCSeries(2, 4, {(): 1, (2,): 1})
    got = substitute_sided(S, T, "left")
    assert got.coeffs == {
        (1, 1): 1, (2, 1, 1): 1, (1, 2, 1): 1, (2, 1, 2, 1): 1}


def test_right_substitution_puts_factor_after_letter():
    S = NCSeries(2, 4, {(1, 1): 1})
    T = NCSeries(2, 4, {(): 1, (2,): 1})
    got = substitute_sided(S, T, "right")
    assert got.coeffs == {
        (1, 1): 1, (1, 2, 1): 1, (1, 1, 2): 1, (1, 2, 1, 2): 1}


def test_substitution_is_multiplicative():
    rng = random.Random(4)
    for _ in range(10):
        A = random_series(rng, 2, 4)
        B = random_series(rng, 2, 4)
        T = random_series(rng, 2, 4, constant=1, max_terms=3)
        for side in ("left", "right"):
            assert (substitute_sided(A * B, T, side)
                    == substitute_sided(A, T, side)
                    * substitute_sided(B, T, side))
            assert (substitute_sided(A + B, T, side)
                    == substitute_sided(A, T, side)
                    + substitute_sided(B, T, side))


def test_substitution_sides_agree_in_one_variable():
    rng = random.Random(6)
    for _ in range(5):
        S = random_series(rng, 1, 5)
        T = random_series(rng, 1, 5, constant=1, max_terms=3)
        assert substitute_sided(S, T, "left") == substitute_sided(S, T, "right")


def test_fixed_point_quadratic_cumulants_give_catalan_moments():
    R = NCSeries(1, 8, {(1, 1): 1})
    M = solve_fixed_point_M_from_R(R, "R-w-M")
    assert [M.coefficient((1,) * k) for k in range(1, 9)] == [
        0, 1, 0, 2, 0, 5, 0, 14]


def test_fixed_point_matches_path_oracle_with_mean():
    # cumulants (a, b, 0, ...) describe the tridiagonal with constant a, b
    for a, b in ((1, 1), (Fraction(1, 2), 2), (-1, Fraction(1, 3))):
        R = NCSeries(1, 7, {(1,): a, (1, 1): b})
        M = solve_fixed_point_M_from_R(R, "R-w-M")
        for n in range(1, 8):
            assert M.coefficient((1,) * n) == tridiag_moment(
                (a,) * 4, (b,) * 3, n)


def test_fixed_point_variants_agree():
    rng = random.Random(13)
    for _ in range(6):
        R = random_series(rng, 2, 6)
        R = R - NCSeries.constant(2, 6, R.constant_term())
        a = solve_fixed_point_M_from_R(R, "R-w-M")
        b = solve_fixed_point_M_from_R(R, "R-M-w")
        assert a == b


def test_fixed_point_inverts_partition_sum():
    # moments built from the noncrossing partition sum must solve back
    rng = random.Random(17)
    for _ in range(4):
        R = random_series(rng, 2, 5)
        R = R - NCSeries.constant(2, 5, R.constant_term())
        M = solve_fixed_point_M_from_R(R, "R-w-M")
        for w in M.coeffs:
            assert M.coeffs[w] == moment_from_free_cumulants(R.coeffs, w)
        # and the oracle inversion recovers the cumulants
        memo = {}
        for w, c in R.coeffs.items():
            assert free_cumulants_of(
                lambda u: M.coefficient(u), w, memo) == c


def test_fixed_point_rejects_constant_term():
    with pytest.raises(ValueError):
        solve_fixed_point_M_from_R(NCSeries.one(1, 3))
    with pytest.raises(ValueError):
        solve_fixed_point_M_from_R(NCSeries.variable(1, 3, 1), "sideways")
