"""Truncated formal power series in d non-commuting variables.

Every series carries its truncation degree N; all arithmetic truncates to
degree N, and combining series with different N is an error rather than a
silent re-truncation.
"""

from __future__ import annotations

from fractions import Fraction

from .ncpoly import check_word, grlex_key, rat


def exact_div(a, b):
    """Exact rational division; never falls into float division."""
    return Fraction(a) / Fraction(b)


class NCSeries:
    __slots__ = ("d", "trunc_degree", "coeffs")

    def __init__(self, d, trunc_degree, coeffs=None):
        if d < 1:
            raise ValueError("variable count must be positive")
        if trunc_degree < 0:
            raise ValueError("truncation degree must be nonnegative")
        self.d = d
        self.trunc_degree = trunc_degree
        clean = {}
        for word, c in (coeffs or {}).items():
            word = tuple(word)
            check_word(word, d)
            if len(word) > trunc_degree:
                raise ValueError(
                    "word of degree %d exceeds truncation %d"
                    % (len(word), trunc_degree))
            c = rat(c)
            if c != 0:
                clean[word] = c
        self.coeffs = clean

    @classmethod
    def zero(cls, d, N):
        return cls(d, N)

    @classmethod
    def one(cls, d, N):
        return cls(d, N, {(): 1})

    @classmethod
    def constant(cls, d, N, c):
        return cls(d, N, {(): c})

    @classmethod
    def variable(cls, d, N, i):
        return cls(d, N, {(i,): 1})

    def coefficient(self, word):
        return self.coeffs.get(tuple(word), 0)

    def constant_term(self):
        return self.coeffs.get((), 0)

    def is_zero(self):
        return not self.coeffs

    def sorted_terms(self):
        return [(w, self.coeffs[w]) for w in sorted(self.coeffs, key=grlex_key)]

    def truncate(self, n):
        """Copy with all terms of degree > n dropped; truncation stays N."""
        return NCSeries(self.d, self.trunc_degree,
                        {w: c for w, c in self.coeffs.items() if len(w) <= n})

    def _check_compat(self, other):
        if self.d != other.d:
            raise ValueError("variable count mismatch")
        if self.trunc_degree != other.trunc_degree:
            raise ValueError(
                "truncation mismatch: %d vs %d"
                % (self.trunc_degree, other.trunc_degree))

    def __eq__(self, other):
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (self.d == other.d
                and self.trunc_degree == other.trunc_degree
                and self.coeffs == other.coeffs)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCSeries.constant(self.d, self.trunc_degree, other)
        if not isinstance(other, NCSeries):
            return NotImplemented
        self._check_compat(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return NCSeries(self.d, self.trunc_degree, out)

    __radd__ = __add__

    def __neg__(self):
        return NCSeries(self.d, self.trunc_degree,
                        {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = NCSeries.constant(self.d, self.trunc_degree, other)
        if not isinstance(other, NCSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return NCSeries.zero(self.d, self.trunc_degree)
            return NCSeries(self.d, self.trunc_degree,
                            {w: c * other for w, c in self.coeffs.items()})
        if not isinstance(other, NCSeries):
            return NotImplemented
        self._check_compat(other)
        N = self.trunc_degree
        out = {}
        for w1, c1 in self.coeffs.items():
            room = N - len(w1)
            for w2, c2 in other.coeffs.items():
                if len(w2) <= room:
                    w = w1 + w2
                    out[w] = out.get(w, 0) + c1 * c2
        return NCSeries(self.d, N, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __repr__(self):
        return "NCSeries(d=%d, N=%d, %d terms)" % (
            self.d, self.trunc_degree, len(self.coeffs))


def series_inverse(S: NCSeries) -> NCSeries:
    """Two-sided inverse modulo degree N+1 of a series with nonzero constant."""
    c = S.constant_term()
    if c == 0:
        raise ValueError("series with zero constant term has no inverse")
    N = S.trunc_degree
    # S = c(1 - A) with A of strictly positive minimal degree, so the inverse
    # is (1 + A + ... + A^N)/c.
    if c == 1:
        A = {w: -k for w, k in S.coeffs.items() if w}
    else:
        A = {w: -exact_div(k, c) for w, k in S.coeffs.items() if w}
    acc = {(): 1}
    power = dict(A)
    for _ in range(N):
        if not power:
            break
        for w, k in power.items():
            acc[w] = acc.get(w, 0) + k
        nxt = {}
        for w1, c1 in power.items():
            room = N - len(w1)
            for w2, c2 in A.items():
                if len(w2) <= room:
                    w = w1 + w2
                    nxt[w] = nxt.get(w, 0) + c1 * c2
        power = {w: k for w, k in nxt.items() if k != 0}
    if c != 1:
        inv_c = exact_div(1, c)
        acc = {w: k * inv_c for w, k in acc.items()}
    return NCSeries(S.d, N, acc)


def _letter_factors(T: NCSeries, side, limit):
    """Per-letter factor lists for substitution, sorted by word length.

    Left substitution sends z_i to T*w_i, so the factor words are the words
    of T followed by the letter i; right substitution sends z_i to w_i*T.
    """
    factors = {}
    for i in range(1, T.d + 1):
        f = {}
        for w, c in T.coeffs.items():
            if len(w) + 1 <= limit:
                key = ((i,) + w) if side == "right" else (w + (i,))
                f[key] = f.get(key, 0) + c
        factors[i] = sorted(f.items(), key=lambda it: len(it[0]))
    return factors


def _substitute_dict(Q, limit, factors):
    """Horner-style substitution of per-letter factor series into Q.

    Q maps words to coefficients; each word (u1,...,un) is replaced by the
    concatenated product factors[u1]...factors[un], truncated to degree limit.
    factors maps each letter to a length-sorted (word, coeff) list.  The
    per-branch limit shrinks by at least one per letter, which is what
    keeps deep branches cheap.
    """
    out = {}
    c0 = Q.get(())
    if c0:
        out[()] = c0
    if limit <= 0:
        return out
    by_first = {}
    for w, c in Q.items():
        if w:
            by_first.setdefault(w[0], {})[w[1:]] = c
    for i, Qi in by_first.items():
        sub = _substitute_dict(Qi, limit - 1, factors)
        if not sub:
            continue
        for wf, cf in factors[i]:
            room = limit - len(wf)
            if room < 0:
                break
            for ws, cs in sub.items():
                if len(ws) <= room:
                    w = wf + ws
                    out[w] = out.get(w, 0) + cf * cs
    return {w: c for w, c in out.items() if c != 0}


def substitute_sided(S: NCSeries, T: NCSeries, side) -> NCSeries:
    """Substitute each letter of S: left sends z_i to T*w_i, right to w_i*T.

    Products concatenate in word order and truncate at N.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    S._check_compat(T)
    N = S.trunc_degree
    factors = _letter_factors(T, side, N)
    return NCSeries(S.d, N, _substitute_dict(S.coeffs, N, factors))


FIXED_POINT_VARIANTS = ("R-w-M", "R-M-w")


def solve_fixed_point_M_from_R(R: NCSeries, variant="R-w-M") -> NCSeries:
    """Solve the moment series M from a cumulant series R degree by degree.

    Variant 'R-w-M' solves M(w) = R evaluated at z_i = w_i*(1+M(w));
    variant 'R-M-w' solves M(w) = R evaluated at z_i = (1+M(w))*w_i.
    The degree-n coefficient of M only involves lower degrees of M, so each
    round substitutes the already-known part and reads off one degree.
    """
    if variant not in FIXED_POINT_VARIANTS:
        raise ValueError("unknown variant %r" % (variant,))
    if R.constant_term() != 0:
        raise ValueError("cumulant series must have zero constant term")
    side = "right" if variant == "R-w-M" else "left"
    N = R.trunc_degree
    M = {(): 1}  # holds 1 + M during the solve
    for n in range(1, N + 1):
        factors = {}
        for i in range(1, R.d + 1):
            f = {}
            for w, c in M.items():
                if len(w) + 1 <= n:
                    key = ((i,) + w) if side == "right" else (w + (i,))
                    f[key] = f.get(key, 0) + c
            factors[i] = sorted(f.items(), key=lambda it: len(it[0]))
        S = _substitute_dict(R.coeffs, n, factors)
        for w, c in S.items():
            if len(w) == n:
                M[w] = c
    del M[()]
    return NCSeries(R.d, N, M)
