"""Cumulant transforms, convolutions, the quadratic shift, named laws."""

import random
from fractions import Fraction

import pytest

from cfree.ncpoly import NCPolynomial
from cfree.ncseries import NCSeries
from cfree.states import (
    CumulantSeries,
    State,
    StatePair,
    bernoulli_pm1,
    boolean_cumulants,
    boolean_power,
    c_cumulant_identity_holds,
    center_rescale_1d,
    cfree_product,
    convolve,
    delta_zero,
    free_cumulants,
    free_meixner_1d,
    free_product_of_semicircles,
    is_free_meixner,
    is_positive,
    moments_from_cumulants,
    phi_map,
    semicircle,
    two_state_cumulants,
    two_state_cumulants_genfun,
)

from oracles import (
    boolean_cumulants_of,
    free_cumulants_of,
    two_state_cumulants_of,
)


def random_state(rng, d, N, lo=-2, hi=2):
    moments = {}
    seen = set()
    for n in range(1, N + 1):
        for w in _words(d, n):
            if w in seen:
                continue
            seen.add(w)
            seen.add(w[::-1])
            moments[w] = rng.randint(lo, hi)
    return State(d, N, moments)


def _words(d, n):
    import itertools
    return list(itertools.product(range(1, d + 1), repeat=n))


def random_pair(rng, d, N):
    return StatePair(random_state(rng, d, N), random_state(rng, d, N))


def ones_state(N):
    return State(1, N, {(1,) * n: 1 for n in range(1, N + 1)})


def test_state_fills_mirror_moments():
    s = State(2, 3, {(1, 2): 5})
    assert s.moment((2, 1)) == 5


def test_state_rejects_broken_symmetry():
    with pytest.raises(ValueError):
        State(2, 2, {(1, 2): 5, (2, 1): 4})
    with pytest.raises(ValueError):
        State(2, 2, {(1, 2): 5, (2, 1): 0})


def test_state_rejects_bad_empty_word():
    with pytest.raises(ValueError):
        State(1, 2, {(): 2})


def test_state_moment_truncation_guard():
    s = State(1, 2, {(1, 1): 1})
    with pytest.raises(ValueError):
        s.moment((1, 1, 1))
    with pytest.raises(ValueError):
        s.apply(NCPolynomial.monomial(1, (1, 1, 1)))


def test_pair_requires_matching_shapes():
    with pytest.raises(ValueError):
        StatePair(delta_zero(1, 4), delta_zero(2, 4))
    with pytest.raises(ValueError):
        StatePair(delta_zero(1, 4), delta_zero(1, 5))


def test_cumulant_series_rejects_constant_term():
    with pytest.raises(ValueError):
        CumulantSeries("free", NCSeries.one(1, 3))
    with pytest.raises(ValueError):
        CumulantSeries("classical", NCSeries.zero(1, 3))


def test_boolean_cumulants_frozen_examples():
    assert boolean_cumulants(delta_zero(2, 4)).series.is_zero()
    sc = semicircle(0, 1, 4)
    eta = boolean_cumulants(sc).series
    assert [eta.coefficient((1,) * n) for n in range(1, 5)] == [0, 1, 0, 1]
    ones = ones_state(5)
    eta1 = boolean_cumulants(ones).series
    assert [eta1.coefficient((1,) * n) for n in range(1, 6)] == [1, 0, 0, 0, 0]


def test_free_cumulants_frozen_examples():
    assert free_cumulants(delta_zero(2, 4)).series.is_zero()
    sc = semicircle(0, 1, 6)
    R = free_cumulants(sc).series
    assert R.coeffs == {(1, 1): 1}
    R1 = free_cumulants(ones_state(6)).series
    assert R1.coeffs == {(1,): 1}


def test_semicircle_moments_are_catalan():
    sc = semicircle(0, 1, 8)
    assert [sc.moment((1,) * n) for n in range(1, 9)] == [
        0, 1, 0, 2, 0, 5, 0, 14]
    with pytest.raises(ValueError):
        semicircle(0, -1, 4)


def test_free_cumulants_match_partition_oracle():
    rng = random.Random(31)
    for d, N in ((1, 8), (2, 5)):
        s = random_state(rng, d, N)
        R = free_cumulants(s).series
        memo = {}
        for n in range(1, N + 1):
            for w in _words(d, n):
                assert R.coefficient(w) == free_cumulants_of(
                    s.moment, w, memo)


def test_boolean_cumulants_match_partition_oracle():
    rng = random.Random(37)
    for d, N in ((1, 8), (2, 5)):
        s = random_state(rng, d, N)
        eta = boolean_cumulants(s).series
        memo = {}
        for n in range(1, N + 1):
            for w in _words(d, n):
                assert eta.coefficient(w) == boolean_cumulants_of(
                    s.moment, w, memo)


def test_two_state_cumulants_match_partition_oracle():
    rng = random.Random(41)
    for d, N in ((1, 7), (2, 5)):
        pair = random_pair(rng, d, N)
        Rfp = two_state_cumulants(pair).series
        psi_cum = free_cumulants(pair.psi).series.coeffs
        memo = {}
        for n in range(1, N + 1):
            for w in _words(d, n):
                assert Rfp.coefficient(w) == two_state_cumulants_of(
                    pair.phi.moment, psi_cum, w, memo)


def test_two_state_routes_agree():
    rng = random.Random(43)
    for d, N in ((1, 8), (2, 6)):
        for _ in range(3):
            pair = random_pair(rng, d, N)
            assert (two_state_cumulants(pair)
                    == two_state_cumulants_genfun(pair))


def test_two_state_special_cases():
    rng = random.Random(47)
    s = random_state(rng, 2, 6)
    same = StatePair(s, s)
    assert two_state_cumulants(same).series == free_cumulants(s).series
    against_delta = StatePair(s, delta_zero(2, 6))
    assert (two_state_cumulants(against_delta).series
            == boolean_cumulants(s).series)


def test_quadratic_two_state_cumulants_of_shift_pair():
    psi = semicircle(0, 1, 8)
    pair = StatePair(phi_map(psi), psi)
    assert two_state_cumulants(pair).series.coeffs == {(1, 1): 1}


def test_moments_from_cumulants_round_trips():
    rng = random.Random(53)
    for d, N in ((1, 7), (2, 5)):
        s = random_state(rng, d, N)
        assert moments_from_cumulants(free_cumulants(s)) == s
        assert moments_from_cumulants(boolean_cumulants(s)) == s
        pair = random_pair(rng, d, N)
        back = moments_from_cumulants(two_state_cumulants(pair), pair.psi)
        assert back == pair.phi


def test_moments_from_cumulants_frozen_examples():
    R = CumulantSeries("free", NCSeries(1, 6, {(1, 1): 1}))
    s = moments_from_cumulants(R)
    assert [s.moment((1,) * n) for n in range(1, 7)] == [0, 1, 0, 2, 0, 5]
    eta0 = CumulantSeries("boolean", NCSeries.zero(2, 4))
    assert moments_from_cumulants(eta0) == delta_zero(2, 4)
    with pytest.raises(ValueError):
        moments_from_cumulants(
            CumulantSeries("two_state", NCSeries.zero(1, 4)))


def test_convolution_examples():
    rng = random.Random(59)
    a = random_state(rng, 2, 6)
    assert convolve("free", a, delta_zero(2, 6)) == a
    assert convolve("boolean", a, delta_zero(2, 6)) == a
    two = convolve("free", semicircle(0, 1, 6), semicircle(0, 1, 6))
    assert [two.moment((1,) * n) for n in range(1, 7)] == [0, 2, 0, 8, 0, 40]
    assert two == semicircle(0, 2, 6)
    with pytest.raises(ValueError):
        convolve("monotone", a, a)


def test_boolean_power_examples():
    rng = random.Random(61)
    a = random_state(rng, 1, 6)
    assert boolean_power(a, 1) == a
    eta = boolean_cumulants(boolean_power(a, Fraction(3, 2))).series
    assert eta == boolean_cumulants(a).series * Fraction(3, 2)
    with pytest.raises(ValueError):
        boolean_power(a, -1)


def test_phi_map_fixed_point_and_meixner_family():
    sc = semicircle(0, 1, 8)
    assert phi_map(sc) == sc
    for b, c in ((0, 0), (1, 0), (Fraction(1, 2), Fraction(-1, 4)), (2, 3)):
        psi = semicircle(b, 1 + c, 8)
        assert phi_map(psi) == free_meixner_1d(b, c, 8)


def test_free_meixner_edge_cases():
    assert free_meixner_1d(0, 0, 8) == semicircle(0, 1, 8)
    bern = free_meixner_1d(0, -1, 8)
    assert bern == bernoulli_pm1(8)
    assert [bern.moment((1,) * n) for n in range(1, 7)] == [0, 1, 0, 1, 0, 1]
    with pytest.raises(ValueError):
        free_meixner_1d(0, -2, 4)


def test_phi_map_on_two_variables_matches_boolean_definition():
    rng = random.Random(67)
    psi = random_state(rng, 2, 6)
    phi = phi_map(psi)
    eta = boolean_cumulants(phi).series
    expect = {}
    for w, c in (1 + psi.mgf()).coeffs.items():
        if len(w) + 2 <= 6:
            for i in (1, 2):
                key = (i,) + w + (i,)
                expect[key] = expect.get(key, 0) + c
    assert eta.coeffs == {w: c for w, c in expect.items() if c != 0}


def test_c_cumulant_identity_on_random_pairs():
    rng = random.Random(71)
    for d, N in ((1, 8), (2, 6)):
        for _ in range(3):
            assert c_cumulant_identity_holds(random_pair(rng, d, N))


def test_quadratic_shift_equivalence_both_directions():
    rng = random.Random(73)
    for d, N in ((1, 8), (2, 6)):
        psi = random_state(rng, d, N)
        phi = phi_map(psi)
        Rfp = two_state_cumulants(StatePair(phi, psi)).series
        quad = NCSeries(d, N, {(i, i): 1 for i in range(1, d + 1)})
        assert Rfp == quad
        # and conversely the quadratic cumulants invert to the shifted state
        back = moments_from_cumulants(
            CumulantSeries("two_state", quad), psi)
        assert back == phi


def test_fisher_scaling_predicate():
    rng = random.Random(79)
    psi = random_state(rng, 1, 6)
    quad = NCSeries(1, 6, {(1, 1): 1})
    for lam in (Fraction(1, 2), 1, 2):
        phi = boolean_power(phi_map(psi), lam)
        Rfp = two_state_cumulants(StatePair(phi, psi)).series
        assert Rfp == quad * lam
        other = moments_from_cumulants(
            CumulantSeries("two_state", quad * lam), psi)
        assert other == phi


def test_two_state_cumulants_scale_with_boolean_power():
    rng = random.Random(83)
    pair = random_pair(rng, 2, 5)
    base = two_state_cumulants(pair).series
    for t in (Fraction(1, 3), 2):
        scaled = StatePair(boolean_power(pair.phi, t), pair.psi)
        assert two_state_cumulants(scaled).series == base * t


def test_cfree_product_singleton_is_identity():
    rng = random.Random(89)
    pair = random_pair(rng, 1, 6)
    prod = cfree_product([pair])
    assert prod.phi == pair.phi
    assert prod.psi == pair.psi


def test_cfree_product_mixed_cumulants_vanish():
    rng = random.Random(97)
    pairs = [random_pair(rng, 1, 5), random_pair(rng, 1, 5)]
    prod = cfree_product(pairs)
    Rfp = two_state_cumulants(prod).series
    Rpsi = free_cumulants(prod.psi).series
    for series in (Rfp, Rpsi):
        for w in series.coeffs:
            assert len(set(w)) == 1
    assert (prod.phi.moment((1, 2))
            == pairs[0].phi.moment((1,)) * pairs[1].phi.moment((1,)))


def test_cfree_product_three_factor_moment_identity():
    rng = random.Random(101)
    pairs = [random_pair(rng, 1, 6), random_pair(rng, 1, 6)]
    prod = cfree_product(pairs)
    phi, psi = prod.phi, prod.psi
    # X and Z live in the first variable, Y in the second
    for a, b, c in ((1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2), (2, 2, 2)):
        X, Y, Z = (1,) * a, (2,) * b, (1,) * c
        lhs = phi.moment(X + Y + Z)
        rhs = (phi.moment(X) * phi.moment(Y) * phi.moment(Z)
               + (phi.moment(X + Z) - phi.moment(X) * phi.moment(Z))
               * psi.moment(Y))
        assert lhs == rhs


def test_cfree_product_centered_interior_factorization():
    rng = random.Random(103)
    pairs = [random_pair(rng, 1, 8), random_pair(rng, 1, 8)]
    prod = cfree_product(pairs)
    phi, psi = prod.phi, prod.psi
    x1 = NCPolynomial.variable(2, 1)
    x2 = NCPolynomial.variable(2, 2)
    # interior factors are centered for psi; endpoints need not be
    p1 = x1 * x1 - psi.moment((1, 1))
    p2 = x2 * x2 - psi.moment((2, 2))
    for left, mid, right in ((x1, p2, x1), (x2, p1, x2),
                             (x1 * x1, p2, x1)):
        assert psi.apply(mid) == 0
        lhs = phi.apply(left * mid * right)
        rhs = phi.apply(left) * phi.apply(mid) * phi.apply(right)
        assert lhs == rhs


def test_positivity_examples():
    assert is_positive(delta_zero(2, 6))
    assert is_positive(semicircle(0, 1, 6), 3)
    assert is_positive(bernoulli_pm1(8))
    bad = State(1, 2, {(1, 1): -1})
    assert not is_positive(bad, 1)
    # fourth moment too small against the second
    bad4 = State(1, 4, {(1, 1): 2, (1, 1, 1, 1): 1})
    assert not is_positive(bad4)
    with pytest.raises(ValueError):
        is_positive(semicircle(0, 1, 4), 3)


def test_positivity_zero_pivot_branch():
    # point mass at 1: Gram matrix is singular but positive
    assert is_positive(ones_state(6))
    # flat degeneracy with a larger fourth moment still has a PSD Gram form
    s = State(1, 4, {(1,): 1, (1, 1): 1, (1, 1, 1): 1, (1, 1, 1, 1): 2})
    assert is_positive(s)
    # a third moment escaping the degenerate directions is caught at a
    # zero pivot whose row does not vanish
    t = State(1, 4, {(1,): 1, (1, 1): 1, (1, 1, 1): 2, (1, 1, 1, 1): 1})
    assert not is_positive(t)


def test_free_meixner_parameter_recovery():
    for b, c in ((0, 0), (1, 0), (Fraction(1, 2), Fraction(1, 3)), (0, -1)):
        got = is_free_meixner(free_meixner_1d(b, c, 8))
        assert got is not None
        B, C = got
        assert B[(1, 1, 1)] == b
        assert C[(1, 1)] == c


def test_free_meixner_two_variable_product():
    psi = free_product_of_semicircles([(1, 2), (-1, 1)], 8)
    phi = phi_map(psi)
    got = is_free_meixner(phi)
    assert got is not None
    B, C = got
    assert B[(1, 1, 1)] == 1 and C[(1, 1)] == 1
    assert B[(2, 2, 2)] == -1 and C[(2, 2)] == 0


def test_free_meixner_rejects_generic_state():
    generic = center_rescale_1d(
        moments_from_cumulants(CumulantSeries(
            "free", NCSeries(1, 8, {(1, 1): 1, (1, 1, 1, 1): 1}))))
    assert is_free_meixner(generic) is None


def test_free_meixner_preconditions():
    with pytest.raises(ValueError):
        is_free_meixner(semicircle(1, 1, 6))
    with pytest.raises(ValueError):
        is_free_meixner(semicircle(0, 2, 6))
    with pytest.raises(ValueError):
        is_free_meixner(semicircle(0, 1, 3))


def test_center_rescale():
    s = center_rescale_1d(semicircle(3, 4, 8))
    assert s == semicircle(0, 1, 8)
    with pytest.raises(ValueError):
        center_rescale_1d(semicircle(0, 2, 8))
    with pytest.raises(ValueError):
        center_rescale_1d(ones_state(4))
    with pytest.raises(ValueError):
        center_rescale_1d(delta_zero(2, 4))
