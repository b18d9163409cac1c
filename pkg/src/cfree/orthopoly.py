"""Monic orthogonal polynomial systems, first and second kind.

One-variable states are described by tridiagonal recursion data; the
multivariate analogue expands x_i P against the system itself, with one
same-degree coefficient block per letter and one lower block next to the
leading letter.  Everything is extracted from moments by exact elimination
and every structural claim is verified rather than assumed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .ncpoly import NCPolynomial, apply_state_partial, diff_quotient, grlex_key, rat
from .ncseries import NCSeries
from .states import (
    State,
    boolean_cumulants,
    is_positive,
    quadratic_shift_eta,
)


class JacobiParams1D:
    """Tridiagonal recursion data (beta_0, beta_1, ...), (gamma_1, ...).

    gamma entries must be positive; a termination index k declares the
    underlying measure supported on k points, with beta of length k and
    gamma of length k-1.  Untruncated data may carry one extra gamma
    beyond the usual beta-count minus one (even-degree extraction).
    """

    __slots__ = ("beta", "gamma", "termination")

    def __init__(self, beta, gamma, termination=None):
        beta = tuple(rat(b) for b in beta)
        gamma = tuple(rat(g) for g in gamma)
        if not beta:
            raise ValueError("need at least one diagonal entry")
        if termination is not None:
            if termination != len(beta) or len(gamma) != termination - 1:
                raise ValueError(
                    "termination at %d needs %d diagonal and %d "
                    "off-diagonal entries" % (termination, termination,
                                              termination - 1))
        elif len(gamma) not in (len(beta) - 1, len(beta)):
            raise ValueError("off-diagonal count must be within one of the "
                             "diagonal count")
        if any(g <= 0 for g in gamma):
            raise ValueError("off-diagonal entries must be positive")
        self.beta = beta
        self.gamma = gamma
        self.termination = termination

    def __eq__(self, other):
        if not isinstance(other, JacobiParams1D):
            return NotImplemented
        return (self.beta == other.beta and self.gamma == other.gamma
                and self.termination == other.termination)

    def __repr__(self):
        return "JacobiParams1D(%r, %r, termination=%r)" % (
            self.beta, self.gamma, self.termination)


class PolyFamily:
    """Monic family indexed by words: the leading word has coefficient one
    and every other word is strictly shorter."""

    __slots__ = ("d", "polys")

    def __init__(self, d, polys):
        clean = {}
        for word, p in polys.items():
            word = tuple(word)
            if not isinstance(p, NCPolynomial) or p.d != d:
                raise ValueError("family entries must share the variable count")
            if p.coefficient(word) != 1:
                raise ValueError("entry %r is not monic" % (word,))
            if any(len(w) >= len(word) and w != word for w in p.terms):
                raise ValueError(
                    "entry %r has a term at or above its own degree" % (word,))
            clean[word] = p
        self.d = d
        self.polys = clean

    def poly(self, word) -> NCPolynomial:
        return self.polys[tuple(word)]

    def words(self):
        return sorted(self.polys, key=grlex_key)

    def __eq__(self, other):
        if not isinstance(other, PolyFamily):
            return NotImplemented
        return self.d == other.d and self.polys == other.polys

    def __repr__(self):
        return "PolyFamily(d=%d, %d entries)" % (self.d, len(self.polys))


def poly_inner(s: State, p: NCPolynomial, q: NCPolynomial):
    """Pairing through the state: reverse the left factor, multiply, apply."""
    return s.apply(p.star() * q)


def jacobi_from_moments(s: State) -> JacobiParams1D:
    """Recursion data of a one-variable state by monic orthogonalization.

    Produces every entry the truncation supports; a vanishing squared norm
    terminates the sequence (finitely supported state), a negative one is
    rejected as non-positive.
    """
    if s.d != 1:
        raise ValueError("Jacobi parameters are one-variable only")
    N = s.trunc_degree

    def inner(p, q):
        total = 0
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                if a and b:
                    total += a * b * s.moment((1,) * (i + j))
        return total

    def shift(p):
        return [0] + list(p)

    betas = []
    gammas = []
    prev = None
    cur = [1]
    h_prev = None
    n = 0
    while True:
        if 2 * n <= N:
            h = inner(cur, cur)
            if h < 0:
                raise ValueError(
                    "negative squared norm at degree %d: state is not "
                    "positive" % n)
            if h == 0:
                return JacobiParams1D(betas, gammas, termination=n)
            if n >= 1:
                gammas.append(h / Fraction(h_prev))
        else:
            break
        if 2 * n + 1 <= N:
            betas.append(inner(shift(cur), cur) / Fraction(h))
        else:
            break
        if len(betas) + len(gammas) >= N:
            # no further entry is determined by the available moments
            break
        nxt = [a - betas[n] * b for a, b in
               itertools.zip_longest(shift(cur), cur, fillvalue=0)]
        if n >= 1:
            nxt = [a - gammas[n - 1] * b for a, b in
                   itertools.zip_longest(nxt, prev, fillvalue=0)]
        prev, cur, h_prev = cur, nxt, h
        n += 1
    return JacobiParams1D(betas, gammas)


def moments_from_jacobi(j: JacobiParams1D, N) -> State:
    """Moments of the tridiagonal operator, exact to degree N."""
    if j.termination is not None:
        betas, gammas = j.beta, j.gamma
    else:
        need_b = (N + 1) // 2
        need_g = N // 2
        if len(j.beta) < need_b or len(j.gamma) < need_g:
            raise ValueError(
                "insufficient Jacobi parameters for degree %d: need %d "
                "diagonal and %d off-diagonal entries" % (N, need_b, need_g))
        rows = N // 2 + 1
        betas = (tuple(j.beta) + (0,) * rows)[:rows]
        gammas = j.gamma[:rows - 1]
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


def family_from_jacobi_1d(j: JacobiParams1D, up_to_degree) -> PolyFamily:
    """The monic family generated by the three-term recursion."""
    limit = len(j.beta) if j.termination is not None else min(
        len(j.beta), len(j.gamma) + 1)
    if up_to_degree > limit:
        raise ValueError(
            "insufficient Jacobi parameters for degree %d" % up_to_degree)
    x = NCPolynomial.variable(1, 1)
    polys = {(): NCPolynomial.one(1)}
    prev = NCPolynomial.zero(1)
    cur = NCPolynomial.one(1)
    for n in range(up_to_degree):
        nxt = (x - j.beta[n]) * cur
        if n >= 1:
            nxt = nxt - j.gamma[n - 1] * prev
        prev, cur = cur, nxt
        polys[(1,) * (n + 1)] = cur
    return PolyFamily(1, polys)


def strip(j: JacobiParams1D) -> JacobiParams1D:
    """Drop the leading diagonal and off-diagonal entries."""
    if len(j.beta) < 2 and j.termination is None:
        raise ValueError("nothing left to strip")
    term = None if j.termination is None else j.termination - 1
    if term == 0:
        raise ValueError("cannot strip a one-point measure")
    return JacobiParams1D(j.beta[1:], j.gamma[1:], termination=term)


def unstrip(j: JacobiParams1D) -> JacobiParams1D:
    """Prepend a zero diagonal entry and a unit off-diagonal entry."""
    term = None if j.termination is None else j.termination + 1
    return JacobiParams1D((0,) + j.beta, (1,) + j.gamma, termination=term)


def check_mgf_strip_relation(mu: State, nu: State) -> bool:
    """One-variable shift relation between two states.

    Holds exactly when the Boolean cumulant series of the first equals
    z^2 times the full moment series of the second.
    """
    if mu.d != 1 or nu.d != 1:
        raise ValueError("the strip relation is one-variable only")
    if mu.trunc_degree != nu.trunc_degree:
        raise ValueError("truncation mismatch")
    return boolean_cumulants(mu).series == quadratic_shift_eta(nu)


def mops(s: State, up_to_degree) -> PolyFamily:
    """Monic orthogonal system through degree k, when it exists.

    Each candidate subtracts the projection onto all strictly lower
    degrees (null directions are skipped; for a positive state they are
    orthogonal to everything).  The family is returned only if distinct
    same-degree members pair to zero; otherwise None.
    """
    k = up_to_degree
    if 2 * k > s.trunc_degree:
        raise ValueError(
            "orthogonalization to degree %d needs truncation %d" % (k, 2 * k))
    if not is_positive(s, k):
        raise ValueError("state is not positive up to degree %d" % k)
    polys = {(): NCPolynomial.one(s.d)}
    norms = {(): 1}
    by_degree = {0: [()]}
    for n in range(1, k + 1):
        by_degree[n] = []
        for w in itertools.product(range(1, s.d + 1), repeat=n):
            p = NCPolynomial.monomial(s.d, w)
            for m in range(n):
                for v in by_degree[m]:
                    if norms[v] == 0:
                        continue
                    c = poly_inner(s, polys[v], p)
                    if c != 0:
                        p = p - (c / Fraction(norms[v])) * polys[v]
            polys[w] = p
            norms[w] = poly_inner(s, p, p)
            by_degree[n].append(w)
        for a, b in itertools.combinations(by_degree[n], 2):
            if poly_inner(s, polys[a], polys[b]) != 0:
                return None
    return PolyFamily(s.d, polys)


def second_kind(P: PolyFamily, mu: State) -> PolyFamily:
    """Associated family: split off the trailing letter and average it out.

    Entry u comes from the member at u extended by the letter 1, split in
    direction 1, with the state applied to the right factors.
    """
    out = {}
    for word in P.polys:
        if not word or word[-1] != 1:
            continue
        t = diff_quotient(1, P.polys[word])
        out[word[:-1]] = apply_state_partial("right", mu, t)
    return PolyFamily(P.d, out)


class MatricialJacobi:
    """Recursion coefficients of a multivariate monic orthogonal system.

    delta maps (letter, same-degree word, word) to the coefficient of the
    same-degree member; gamma maps each word to the coefficient of the
    member one level down with the leading letter removed.  Zero entries
    are not stored.
    """

    __slots__ = ("d", "depth", "delta", "gamma")

    def __init__(self, d, depth, delta, gamma):
        self.d = d
        self.depth = depth
        self.delta = {key: c for key, c in delta.items() if c != 0}
        self.gamma = {key: c for key, c in gamma.items() if c != 0}

    def delta_entry(self, i, v, u):
        return self.delta.get((i, tuple(v), tuple(u)), 0)

    def gamma_entry(self, u):
        return self.gamma.get(tuple(u), 0)

    def __repr__(self):
        return "MatricialJacobi(d=%d, depth=%d)" % (self.d, self.depth)


def _expand_in_family(P: PolyFamily, q: NCPolynomial):
    """Coefficients of q in the monic family, by leading-term elimination."""
    coeffs = {}
    r = q
    while not r.is_zero():
        w = max(r.terms, key=grlex_key)
        c = r.terms[w]
        if w not in P.polys:
            raise ValueError("family does not reach word %r" % (w,))
        coeffs[w] = c
        r = r - c * P.polys[w]
    return coeffs


def matricial_params(s: State, up_to_degree) -> MatricialJacobi:
    """Expand x_i times each family member and read off the coefficients.

    Only three slots may be hit: the member one level up, same-degree
    members, and the member below with the leading letter stripped (only
    when the multiplier matches that letter).  Anything else is an error.
    """
    k = up_to_degree
    P = mops(s, k + 1)
    if P is None:
        raise ValueError("state has no orthogonal system to degree %d"
                         % (k + 1))
    delta = {}
    gamma = {}
    for n in range(k + 1):
        for u in itertools.product(range(1, s.d + 1), repeat=n):
            pu = P.polys[u]
            for i in range(1, s.d + 1):
                q = NCPolynomial.variable(s.d, i) * pu
                coeffs = _expand_in_family(P, q)
                if coeffs.pop((i,) + u, None) != 1:
                    raise ValueError(
                        "state recursion violates MOPS three-term structure")
                for w, c in coeffs.items():
                    if len(w) == n:
                        delta[(i, w, u)] = c
                    elif len(w) == n - 1 and i == u[0] and w == u[1:]:
                        gamma[u] = c
                    else:
                        raise ValueError(
                            "state recursion violates MOPS three-term "
                            "structure")
    return MatricialJacobi(s.d, k, delta, gamma)


def check_ops_second_kind(phi: State, psi: State, up_to_degree) -> dict:
    """Three views of the quadratic-shift relation between two states.

    a: the Boolean cumulant series of the first state is the quadratic
    shift of the second's moment series.  b: the recursion coefficients of
    the first are those of the second pushed down one level, with zero and
    identity blocks at the top.  c: splitting off leading letters of the
    first family and averaging with the first state yields the second
    family.  The three answers agree for states with orthogonal systems;
    failures report False rather than raising.
    """
    k = up_to_degree
    if phi.d != psi.d or phi.trunc_degree != psi.trunc_degree:
        raise ValueError("states must share variables and truncation")
    if 2 * (k + 1) > phi.trunc_degree:
        raise ValueError(
            "equivalence check to degree %d needs truncation %d"
            % (k, 2 * (k + 1)))
    d = phi.d
    for i in range(1, d + 1):
        if phi.moment((i,)) != 0:
            raise ValueError("first state must be centered")
        for j in range(1, d + 1):
            if phi.moment((i, j)) != (1 if i == j else 0):
                raise ValueError("first state must have identity covariance")

    a_holds = boolean_cumulants(phi).series == quadratic_shift_eta(psi)

    b_holds = True
    try:
        mj_phi = matricial_params(phi, k)
        mj_psi = matricial_params(psi, k - 1) if k >= 1 else None
    except ValueError:
        b_holds = False
    else:
        for i in range(1, d + 1):
            if mj_phi.delta_entry(i, (), ()) != 0:
                b_holds = False
        for m in range(1, d + 1):
            if mj_phi.gamma_entry((m,)) != 1:
                b_holds = False
        for n in range(1, k + 1):
            for u in itertools.product(range(1, d + 1), repeat=n - 1):
                for v in itertools.product(range(1, d + 1), repeat=n - 1):
                    for i in range(1, d + 1):
                        for m in range(1, d + 1):
                            for kk in range(1, d + 1):
                                want = (mj_psi.delta_entry(i, v, u)
                                        if kk == m else 0)
                                if mj_phi.delta_entry(
                                        i, v + (kk,), u + (m,)) != want:
                                    b_holds = False
            if n >= 2:
                for u in itertools.product(range(1, d + 1), repeat=n - 1):
                    for m in range(1, d + 1):
                        if (mj_phi.gamma_entry(u + (m,))
                                != mj_psi.gamma_entry(u)):
                            b_holds = False

    c_holds = True
    P = mops(phi, k) if 2 * k <= phi.trunc_degree else None
    Q = mops(psi, max(k - 1, 0))
    if P is None or Q is None:
        c_holds = False
    else:
        for word in P.polys:
            if not word:
                continue
            u, m = word[:-1], word[-1]
            for j in range(1, d + 1):
                got = apply_state_partial(
                    "right", phi, diff_quotient(j, P.polys[word]))
                want = Q.polys[u] if j == m else NCPolynomial.zero(d)
                if got != want:
                    c_holds = False
    return {"a": a_holds, "b": b_holds, "c": c_holds}
