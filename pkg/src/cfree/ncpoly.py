"""Sparse exact-rational polynomials in d non-commuting variables.

Words are tuples of variable indices in 1..d; the empty tuple is the unit
monomial.  Coefficients are exact rationals: plain ``int`` where no division
has occurred, ``fractions.Fraction`` otherwise.  The two mix freely under
arithmetic and equality, so no coercion pass is ever needed; use
:func:`as_fraction` at serialization boundaries.
"""

from __future__ import annotations

from fractions import Fraction


Word = tuple
Scalar = (int, Fraction)


def rat(x):
    """Parse an exact rational from int, Fraction, or a string like '-3/7'."""
    if isinstance(x, int) or isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("not an exact rational: %r" % (x,))


def as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def grlex_key(word):
    """Sort key for graded lexicographic word order."""
    return (len(word), word)


def check_word(word, d):
    if not all(isinstance(i, int) and 1 <= i <= d for i in word):
        raise ValueError("word %r has letters outside 1..%d" % (word, d))


class NCPolynomial:
    """Element of the free algebra on x_1..x_d over the rationals.

    ``terms`` maps words to nonzero coefficients; the zero polynomial is the
    empty map.  Instances are immutable by convention.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d, terms=None):
        if d < 0:
            raise ValueError("variable count must be nonnegative")
        self.d = d
        clean = {}
        for word, c in (terms or {}).items():
            word = tuple(word)
            check_word(word, d)
            c = rat(c)
            if c != 0:
                clean[word] = c
        self.terms = clean

    @classmethod
    def zero(cls, d):
        return cls(d)

    @classmethod
    def one(cls, d):
        return cls(d, {(): 1})

    @classmethod
    def constant(cls, d, c):
        return cls(d, {(): c})

    @classmethod
    def variable(cls, d, i):
        return cls(d, {(i,): 1})

    @classmethod
    def monomial(cls, d, word, coeff=1):
        return cls(d, {tuple(word): coeff})

    def coefficient(self, word):
        return self.terms.get(tuple(word), 0)

    def degree(self):
        """Maximal word length; -1 for the zero polynomial."""
        return max((len(w) for w in self.terms), default=-1)

    def is_zero(self):
        return not self.terms

    def sorted_terms(self):
        """Terms as (word, coeff) pairs in graded-lex order."""
        return [(w, self.terms[w]) for w in sorted(self.terms, key=grlex_key)]

    def __eq__(self, other):
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.d != other.d:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return NCPolynomial(self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return NCPolynomial(self.d, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if other == 0:
                return NCPolynomial.zero(self.d)
            return NCPolynomial(
                self.d, {w: c * other for w, c in self.terms.items()})
        if not isinstance(other, NCPolynomial):
            return NotImplemented
        if self.d != other.d:
            raise ValueError("variable count mismatch")
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return NCPolynomial(self.d, out)

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self * other
        return NotImplemented

    def _coerce(self, other):
        if isinstance(other, NCPolynomial):
            return other
        if isinstance(other, Scalar):
            return NCPolynomial.constant(self.d, other)
        return NotImplemented

    def star(self):
        """Adjoint for self-adjoint generators: reverse every word."""
        return NCPolynomial(
            self.d, {tuple(reversed(w)): c for w, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "NCPolynomial(d=%d, 0)" % self.d
        bits = []
        for w, c in self.sorted_terms():
            mono = "".join("x%d" % i for i in w) or "1"
            bits.append("%s*%s" % (c, mono))
        return "NCPolynomial(d=%d, %s)" % (self.d, " + ".join(bits))


class TensorPolynomial:
    """Element of the tensor square of the free algebra.

    Terms map pairs (left word, right word) to nonzero coefficients.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d, terms=None):
        self.d = d
        clean = {}
        for (w1, w2), c in (terms or {}).items():
            w1, w2 = tuple(w1), tuple(w2)
            check_word(w1, d)
            check_word(w2, d)
            c = rat(c)
            if c != 0:
                clean[(w1, w2)] = c
        self.terms = clean

    @classmethod
    def zero(cls, d):
        return cls(d)

    @classmethod
    def elementary(cls, p: NCPolynomial, q: NCPolynomial):
        """The tensor p (x) q."""
        if p.d != q.d:
            raise ValueError("variable count mismatch")
        out = {}
        for w1, c1 in p.terms.items():
            for w2, c2 in q.terms.items():
                key = (w1, w2)
                out[key] = out.get(key, 0) + c1 * c2
        return cls(p.d, out)

    def is_zero(self):
        return not self.terms

    def coefficient(self, w1, w2):
        return self.terms.get((tuple(w1), tuple(w2)), 0)

    def __eq__(self, other):
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __add__(self, other):
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        if self.d != other.d:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TensorPolynomial(self.d, out)

    def __neg__(self):
        return TensorPolynomial(self.d, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        # componentwise product: (a (x) b)(c (x) e) = ac (x) be
        if isinstance(other, Scalar):
            return TensorPolynomial(
                self.d, {k: c * other for k, c in self.terms.items()})
        if not isinstance(other, TensorPolynomial):
            return NotImplemented
        if self.d != other.d:
            raise ValueError("variable count mismatch")
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return TensorPolynomial(self.d, out)

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self * other
        return NotImplemented

    def __repr__(self):
        n = len(self.terms)
        return "TensorPolynomial(d=%d, %d terms)" % (self.d, n)


def diff_quotient(i, p: NCPolynomial) -> TensorPolynomial:
    """Partial difference quotient in direction i.

    Linear extension of splitting a word at every occurrence of the letter i:
    the letter is removed and the word's two remaining parts become the tensor
    factors.  The unit maps to zero.
    """
    if not 1 <= i <= p.d:
        raise ValueError("variable index %d out of range 1..%d" % (i, p.d))
    out = {}
    for w, c in p.terms.items():
        for j, letter in enumerate(w):
            if letter == i:
                key = (w[:j], w[j + 1:])
                out[key] = out.get(key, 0) + c
    return TensorPolynomial(p.d, out)


def left_derivative(i, p: NCPolynomial) -> NCPolynomial:
    """Strip a matching first letter i; words not starting with i map to zero."""
    if not 1 <= i <= p.d:
        raise ValueError("variable index %d out of range 1..%d" % (i, p.d))
    out = {}
    for w, c in p.terms.items():
        if w and w[0] == i:
            key = w[1:]
            out[key] = out.get(key, 0) + c
    return NCPolynomial(p.d, out)


def apply_state_partial(side, s, t: TensorPolynomial) -> NCPolynomial:
    """Apply a state to one tensor factor.

    side 'left' computes (s tensor id)[t]; side 'right' computes
    (id tensor s)[t].  The state s is any object with fields d, trunc_degree
    and a moment(word) method.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if s.d != t.d:
        raise ValueError("variable count mismatch")
    out = {}
    for (w1, w2), c in t.terms.items():
        applied, kept = (w1, w2) if side == "left" else (w2, w1)
        if len(applied) > s.trunc_degree:
            raise ValueError("truncation exceeded: word of degree %d, state "
                             "truncated at %d" % (len(applied), s.trunc_degree))
        m = s.moment(applied)
        if m != 0:
            out[kept] = out.get(kept, 0) + c * m
    return NCPolynomial(t.d, out)


def mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a, b):
    n, m, k = len(a), len(b[0]) if b else 0, len(b)
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m))
        for i in range(n))


def mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c, a):
    return tuple(tuple(c * x for x in row) for row in a)


def evaluate(p: NCPolynomial, ops):
    """Substitute square matrices for the variables; the unit becomes identity.

    ops is a sequence of d square matrices (tuples of tuples of rationals),
    all of the same dimension.
    """
    ops = [tuple(tuple(rat(x) for x in row) for row in m) for m in ops]
    if len(ops) != p.d:
        raise ValueError("expected %d matrices, got %d" % (p.d, len(ops)))
    sizes = {len(m) for m in ops} | {len(row) for m in ops for row in m}
    if len(sizes) > 1:
        raise ValueError("matrices must all be square of equal dimension")
    n = sizes.pop() if sizes else 0
    if n == 0:
        raise ValueError("matrices must be nonempty")
    acc = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    for w, c in p.terms.items():
        m = mat_identity(n)
        for letter in w:
            m = mat_mul(m, ops[letter - 1])
        acc = mat_add(acc, mat_scale(c, m))
    return acc
