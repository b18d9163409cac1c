"""Truncated moment functionals and their cumulant coordinate systems.

A State stores the moments of words up to a truncation degree; everything
else (Boolean, free, and two-state cumulants, convolutions, the quadratic
Boolean shift, named laws, positivity) is a transform of that table.  All
transforms are exact and total on their stated domains: degree truncation
is explicit, and inverse pairs are inverse on the nose, not approximately.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache

from .ncpoly import NCPolynomial, check_word, grlex_key, rat
from .ncseries import (
    NCSeries,
    _letter_factors,
    _substitute_dict,
    series_inverse,
    solve_fixed_point_M_from_R,
    substitute_sided,
)
from .partitions import INNER, classify_classes, enumerate_partitions


class State:
    """Unital linear functional on words, truncated at degree N.

    The empty word always has moment 1 and is not stored.  Moments are
    reversal symmetric (self-adjoint variables, rational coefficients);
    a missing mirror entry is filled in, a contradictory one is an error.
    Positivity is a separate check, not a construction invariant.
    """

    __slots__ = ("d", "trunc_degree", "moments")

    def __init__(self, d, trunc_degree, moments=None):
        if d < 1:
            raise ValueError("variable count must be positive")
        if trunc_degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.d = d
        self.trunc_degree = trunc_degree
        clean = {}
        for word, c in (moments or {}).items():
            word = tuple(word)
            check_word(word, d)
            if len(word) > trunc_degree:
                raise ValueError(
                    "moment of degree %d exceeds truncation %d"
                    % (len(word), trunc_degree))
            c = rat(c)
            if word == ():
                if c != 1:
                    raise ValueError("the empty word must have moment 1")
                continue
            clean[word] = c
        for w in list(clean):
            r = w[::-1]
            if r in clean:
                if clean[r] != clean[w]:
                    raise ValueError(
                        "moments break reversal symmetry at %r" % (w,))
            else:
                clean[r] = clean[w]
        self.moments = {w: c for w, c in clean.items() if c != 0}

    @classmethod
    def from_mgf(cls, M: NCSeries) -> "State":
        if M.constant_term() != 0:
            raise ValueError("moment series must have zero constant term")
        return cls(M.d, M.trunc_degree, dict(M.coeffs))

    def moment(self, word):
        word = tuple(word)
        check_word(word, self.d)
        if len(word) > self.trunc_degree:
            raise ValueError(
                "truncation exceeded: word of degree %d, state truncated "
                "at %d" % (len(word), self.trunc_degree))
        if word == ():
            return 1
        return self.moments.get(word, 0)

    def apply(self, p: NCPolynomial):
        """Value on a polynomial; errors if its degree exceeds the truncation."""
        if p.d != self.d:
            raise ValueError("variable count mismatch")
        total = 0
        for w, c in p.terms.items():
            total += c * self.moment(w)
        return total

    def mgf(self) -> NCSeries:
        """Moment series over nonempty words; the constant term is excluded."""
        return NCSeries(self.d, self.trunc_degree, dict(self.moments))

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return (self.d == other.d
                and self.trunc_degree == other.trunc_degree
                and self.moments == other.moments)

    def __repr__(self):
        return "State(d=%d, N=%d, %d stored moments)" % (
            self.d, self.trunc_degree, len(self.moments))


class StatePair:
    """Two states on the same variables and truncation, in role order."""

    __slots__ = ("phi", "psi")

    def __init__(self, phi: State, psi: State):
        if phi.d != psi.d:
            raise ValueError("variable count mismatch")
        if phi.trunc_degree != psi.trunc_degree:
            raise ValueError(
                "truncation mismatch: %d vs %d"
                % (phi.trunc_degree, psi.trunc_degree))
        self.phi = phi
        self.psi = psi

    def __eq__(self, other):
        if not isinstance(other, StatePair):
            return NotImplemented
        return self.phi == other.phi and self.psi == other.psi

    def __repr__(self):
        return "StatePair(%r, %r)" % (self.phi, self.psi)


CUMULANT_KINDS = ("boolean", "free", "two_state")


class CumulantSeries:
    """Cumulants of one kind, packaged as a series with zero constant term."""

    __slots__ = ("kind", "series")

    def __init__(self, kind, series: NCSeries):
        if kind not in CUMULANT_KINDS:
            raise ValueError("unknown cumulant kind %r" % (kind,))
        if series.constant_term() != 0:
            raise ValueError("cumulant series must have zero constant term")
        self.kind = kind
        self.series = series

    def coefficient(self, word):
        return self.series.coefficient(word)

    def __eq__(self, other):
        if not isinstance(other, CumulantSeries):
            return NotImplemented
        return self.kind == other.kind and self.series == other.series

    def __repr__(self):
        return "CumulantSeries(%s, %r)" % (self.kind, self.series)


def boolean_cumulants(s: State) -> CumulantSeries:
    """Boolean cumulants: one minus the reciprocal of the full moment series."""
    eta = 1 - series_inverse(1 + s.mgf())
    return CumulantSeries("boolean", eta)


def free_cumulants(s: State) -> CumulantSeries:
    """Free cumulants, solved degree by degree from the fixed-point relation.

    The moment series satisfies M(w) = R(w(1 + M(w))); at each degree the
    top cumulant appears with coefficient one, everything else involves
    lower degrees only.
    """
    N = s.trunc_degree
    M = s.mgf()
    factors = _letter_factors(1 + M, "right", N)
    R = {}
    for n in range(1, N + 1):
        low = _substitute_dict(R, n, factors)
        words = {w for w in s.moments if len(w) == n}
        words.update(w for w in low if len(w) == n)
        for w in words:
            val = s.moments.get(w, 0) - low.get(w, 0)
            if val:
                R[w] = val
    return CumulantSeries("free", NCSeries(s.d, N, R))


@lru_cache(maxsize=None)
def _nc_layouts(n):
    """Noncrossing partitions of {1..n} as 0-based blocks with inner flags."""
    out = []
    for p in enumerate_partitions("noncrossing", n):
        roles = classify_classes(p)
        blocks = tuple(tuple(i - 1 for i in c) for c in p.classes)
        inner = tuple(r == INNER for r in roles)
        out.append((blocks, inner))
    return tuple(out)


def two_state_cumulants(pair: StatePair) -> CumulantSeries:
    """Two-state cumulants by recursive inversion of the partition sum.

    Outer blocks carry the unknown two-state cumulants, inner blocks the
    free cumulants of the second state; the single-block partition isolates
    the top cumulant with coefficient one.
    """
    phi, psi = pair.phi, pair.psi
    d, N = phi.d, phi.trunc_degree
    Rpsi = free_cumulants(psi).series.coeffs
    out = {}
    for n in range(1, N + 1):
        layouts = [lay for lay in _nc_layouts(n) if len(lay[0]) > 1]
        for w in itertools.product(range(1, d + 1), repeat=n):
            total = phi.moments.get(w, 0)
            for blocks, inner in layouts:
                prod = 1
                for blk, is_inner in zip(blocks, inner):
                    sub = tuple(w[i] for i in blk)
                    prod *= Rpsi.get(sub, 0) if is_inner else out.get(sub, 0)
                    if prod == 0:
                        break
                if prod:
                    total -= prod
            if total:
                out[w] = total
    return CumulantSeries("two_state", NCSeries(d, N, out))


def two_state_cumulants_genfun(pair: StatePair) -> CumulantSeries:
    """Two-state cumulants through the generating-function change of variable.

    The Boolean cumulant series of the first state, left-multiplied by the
    full moment series of the second, equals the two-state cumulant series
    evaluated at z_i = (1 + M(w)) w_i; composing with the inverse
    substitution w_i = (1 + R(z))^{-1} z_i recovers the cumulants.
    """
    phi, psi = pair.phi, pair.psi
    T = 1 + psi.mgf()
    A = T * boolean_cumulants(phi).series
    Rpsi = free_cumulants(psi).series
    U = series_inverse(1 + Rpsi)
    return CumulantSeries("two_state", substitute_sided(A, U, "left"))


def _two_state_moments(Rfp, Rpsi, d, N):
    """Direct partition sum: outer blocks two-state, inner blocks free."""
    out = {}
    for n in range(1, N + 1):
        layouts = _nc_layouts(n)
        for w in itertools.product(range(1, d + 1), repeat=n):
            total = 0
            for blocks, inner in layouts:
                prod = 1
                for blk, is_inner in zip(blocks, inner):
                    sub = tuple(w[i] for i in blk)
                    prod *= Rpsi.get(sub, 0) if is_inner else Rfp.get(sub, 0)
                    if prod == 0:
                        break
                total += prod
            if total:
                out[w] = total
    return out


def moments_from_cumulants(c: CumulantSeries, aux: State = None) -> State:
    """Invert a cumulant series back to moments; two_state needs aux = psi."""
    S = c.series
    if c.kind == "boolean":
        return State.from_mgf(series_inverse(1 - S) - 1)
    if c.kind == "free":
        return State.from_mgf(solve_fixed_point_M_from_R(S, "R-w-M"))
    if aux is None:
        raise ValueError("two-state inversion needs the second state")
    if aux.d != S.d or aux.trunc_degree != S.trunc_degree:
        raise ValueError("second state does not match the cumulant series")
    Rpsi = free_cumulants(aux).series.coeffs
    moments = _two_state_moments(S.coeffs, Rpsi, S.d, S.trunc_degree)
    return State(S.d, S.trunc_degree, moments)


def convolve(kind, a: State, b: State) -> State:
    """Additive convolution in free or Boolean cumulant coordinates."""
    if kind == "free":
        ca, cb = free_cumulants(a), free_cumulants(b)
    elif kind == "boolean":
        ca, cb = boolean_cumulants(a), boolean_cumulants(b)
    else:
        raise ValueError("unknown convolution kind %r" % (kind,))
    return moments_from_cumulants(
        CumulantSeries(kind, ca.series + cb.series))


def boolean_power(a: State, lam) -> State:
    """Boolean convolution power: scale the Boolean cumulant series."""
    lam = rat(lam)
    if lam < 0:
        raise ValueError("Boolean power requires a nonnegative exponent")
    eta = boolean_cumulants(a).series
    return moments_from_cumulants(CumulantSeries("boolean", eta * lam))


def quadratic_shift_eta(psi: State) -> NCSeries:
    """The series summing w_i (1 + M(w)) w_i over letters i."""
    d, N = psi.d, psi.trunc_degree
    eta = {}
    for w, c in itertools.chain([((), 1)], psi.moments.items()):
        if len(w) + 2 <= N:
            for i in range(1, d + 1):
                key = (i,) + w + (i,)
                eta[key] = eta.get(key, 0) + c
    return NCSeries(d, N, eta)


def phi_map(psi: State) -> State:
    """Quadratic Boolean shift: the output's Boolean cumulant series is
    the sum over letters of w_i (1 + M(w)) w_i."""
    return moments_from_cumulants(
        CumulantSeries("boolean", quadratic_shift_eta(psi)))


def _jacobi_state_1d(betas, gammas, N) -> State:
    """One-variable state from tridiagonal recursion data.

    betas has one entry more than gammas; moment n is the (0,0) entry of
    the n-th power of the tridiagonal operator.
    """
    if len(betas) != len(gammas) + 1:
        raise ValueError("need one more diagonal entry than off-diagonal")
    r = len(betas)
    v = [1] + [0] * (r - 1)
    moments = {}
    for n in range(1, N + 1):
        nxt = []
        for k in range(r):
            x = betas[k] * v[k]
            if k + 1 < r:
                x += v[k + 1]
            if k > 0:
                x += gammas[k - 1] * v[k - 1]
            nxt.append(x)
        v = nxt
        moments[(1,) * n] = v[0]
    return State(1, N, moments)


def semicircle(mean, var, N) -> State:
    """One-variable semicircular law with the given mean and variance."""
    mean, var = rat(mean), rat(var)
    if var < 0:
        raise ValueError("variance must be nonnegative")
    rows = N // 2 + 2
    return _jacobi_state_1d((mean,) * rows, (var,) * (rows - 1), N)


def free_meixner_1d(b, c, N) -> State:
    """One-variable quadratic-shift family member, centered with variance 1."""
    b, c = rat(b), rat(c)
    if 1 + c < 0:
        raise ValueError("1 + c must be nonnegative")
    if 1 + c == 0:
        return _jacobi_state_1d((0, b), (1,), N)
    rows = N // 2 + 2
    return _jacobi_state_1d(
        (0,) + (b,) * (rows - 1), (1,) + (1 + c,) * (rows - 2), N)


def free_product_of_semicircles(params, N) -> State:
    """Joint law of freely independent semicircular variables.

    params lists (mean, variance) per variable; the free cumulant series
    is the sum of the one-variable quadratics in disjoint letters.
    """
    d = len(params)
    R = {}
    for i, (mean, var) in enumerate(params, start=1):
        mean, var = rat(mean), rat(var)
        if var < 0:
            raise ValueError("variance must be nonnegative")
        if mean != 0:
            R[(i,)] = mean
        if var != 0:
            R[(i, i)] = var
    return moments_from_cumulants(
        CumulantSeries("free", NCSeries(d, N, R)))


def delta_zero(d, N) -> State:
    """Point mass at the origin: every nonempty word has moment zero."""
    return State(d, N)


def bernoulli_pm1(N) -> State:
    """Symmetric two-point law at plus and minus one."""
    return State(1, N, {(1,) * n: 1 for n in range(2, N + 1, 2)})


def cfree_product(pairs) -> StatePair:
    """Product of one-variable pairs with jointly vanishing mixed cumulants.

    Both the free cumulants of the second states and the two-state
    cumulants of the pairs are embedded in disjoint letters and summed;
    mixed words carry no cumulant.
    """
    if not pairs:
        raise ValueError("need at least one pair")
    d = len(pairs)
    N = pairs[0].phi.trunc_degree
    Rpsi = {}
    Rfp = {}
    for k, pr in enumerate(pairs, start=1):
        if pr.phi.d != 1:
            raise ValueError("factors must be one-variable pairs")
        if pr.phi.trunc_degree != N:
            raise ValueError("truncation mismatch across factors")
        for w, c in free_cumulants(pr.psi).series.coeffs.items():
            Rpsi[(k,) * len(w)] = c
        for w, c in two_state_cumulants(pr).series.coeffs.items():
            Rfp[(k,) * len(w)] = c
    psi = moments_from_cumulants(
        CumulantSeries("free", NCSeries(d, N, Rpsi)))
    phi = State(d, N, _two_state_moments(Rfp, Rpsi, d, N))
    return StatePair(phi, psi)


def _psd_exact(rows):
    """Exact PSD decision by symmetric elimination.

    A zero pivot is fine only when its whole trailing row vanishes;
    a negative pivot refutes positivity immediately.
    """
    n = len(rows)
    A = [[Fraction(x) for x in row] for row in rows]
    for i in range(n):
        piv = A[i][i]
        if piv < 0:
            return False
        if piv == 0:
            if any(A[i][j] != 0 for j in range(i + 1, n)):
                return False
            continue
        for r in range(i + 1, n):
            f = A[r][i] / piv
            if f == 0:
                continue
            Ai = A[i]
            Ar = A[r]
            for j in range(i + 1, n):
                Ar[j] -= f * Ai[j]
    return True


def _words_up_to(d, k):
    out = []
    for n in range(k + 1):
        out.extend(itertools.product(range(1, d + 1), repeat=n))
    return sorted(out, key=grlex_key)


def is_positive(s: State, up_to_degree=None) -> bool:
    """Positivity of the Gram form over words of degree at most k."""
    k = s.trunc_degree // 2 if up_to_degree is None else up_to_degree
    if 2 * k > s.trunc_degree:
        raise ValueError(
            "positivity to degree %d needs truncation %d" % (k, 2 * k))
    words = _words_up_to(s.d, k)
    G = [[s.moment(u[::-1] + v) for v in words] for u in words]
    return _psd_exact(G)


def is_free_meixner(s: State):
    """Fit and verify the quadratic second-derivative law of the Boolean
    cumulant series.

    The state must be centered with identity covariance.  Returns the
    coefficient tables (B, C) when the law holds up to the truncation,
    None when it fails.  B is indexed by letter triples, C by letter pairs.
    """
    d, N = s.d, s.trunc_degree
    if N < 4:
        raise ValueError("need truncation at least 4 to fit the parameters")
    for i in range(1, d + 1):
        if s.moment((i,)) != 0:
            raise ValueError("state must be centered")
        for j in range(1, d + 1):
            if s.moment((i, j)) != (1 if i == j else 0):
                raise ValueError("state must have identity covariance")
    eta = boolean_cumulants(s).series
    e = eta.coefficient
    B = {}
    C = {}
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            for k in range(1, d + 1):
                B[(i, j, k)] = e((j, i, k))
            C[(i, j)] = (e((j, i, i, j))
                         - sum(B[(i, j, m)] * e((m, i, j))
                               for m in range(1, d + 1))
                         - 1)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            for n in range(N - 2 + 1):
                for v in itertools.product(range(1, d + 1), repeat=n):
                    lhs = e((j, i) + v)
                    rhs = (1 if (i == j and n == 0) else 0)
                    rhs += sum(B[(i, j, m)] * e((m,) + v)
                               for m in range(1, d + 1))
                    quad = 0
                    for cut in range(n + 1):
                        quad += e((i,) + v[:cut]) * e((j,) + v[cut:])
                    rhs += (1 + C[(i, j)]) * quad
                    if lhs != rhs:
                        return None
    return B, C


def center_rescale_1d(s: State) -> State:
    """Shift to mean zero and scale to variance one, in one variable only.

    Errors when the variance is zero, negative, or not the square of a
    rational number, since the scaled moments would leave the rationals.
    """
    if s.d != 1:
        raise ValueError("centering helper is one-variable only")
    if s.trunc_degree < 2:
        raise ValueError("need at least the second moment")
    mean = s.moment((1,))
    shifted = []
    for n in range(s.trunc_degree + 1):
        total = 0
        for k in range(n + 1):
            total += (math.comb(n, k) * (-mean) ** (n - k) * s.moment((1,) * k))
        shifted.append(total)
    var = shifted[2]
    if var <= 0:
        raise ValueError("variance must be positive to rescale")
    var = Fraction(var)
    pnum = math.isqrt(var.numerator)
    pden = math.isqrt(var.denominator)
    if pnum * pnum != var.numerator or pden * pden != var.denominator:
        raise ValueError(
            "variance %s is not the square of a rational" % (var,))
    sigma = Fraction(pnum, pden)
    return State(1, s.trunc_degree,
                 {(1,) * n: shifted[n] / sigma ** n
                  for n in range(1, s.trunc_degree + 1)})


def c_cumulant_identity_holds(pair: StatePair) -> bool:
    """Coefficient identity tying both cumulant series to both moment series.

    One plus the free cumulants of the second state minus the two-state
    cumulants, evaluated at z_i = (1 + M(w)) w_i, must equal the second
    moment series times the reciprocal of the first.
    """
    Rpsi = free_cumulants(pair.psi).series
    Rfp = two_state_cumulants(pair).series
    lhs = 1 + Rpsi - Rfp
    T = 1 + pair.psi.mgf()
    pulled = substitute_sided(lhs, T, "left")
    rhs = T * series_inverse(1 + pair.phi.mgf())
    return pulled == rhs
