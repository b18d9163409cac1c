"""Set partitions of {1..n}: enumeration, crossing tests, class roles.

The same restricted-growth-string generator drives all three lattices (all
partitions, non-crossing ones, interval ones); the crossing test is a direct
quantifier check so it doubles as the brute-force oracle for the filtered
enumerations.
"""

from __future__ import annotations

MAX_GROUND_SET = 12

INNER = "inner"
OUTER = "outer"
IN_S = "in_S"
BELOW_S = "below_S"
ABOVE_S = "above_S"


class SetPartition:
    """Partition of {1..n} into disjoint classes, sorted by minimum element."""

    __slots__ = ("n", "classes")

    def __init__(self, n, classes):
        classes = tuple(tuple(sorted(c)) for c in classes)
        classes = tuple(sorted(classes, key=lambda c: c[0] if c else 0))
        seen = [x for c in classes for x in c]
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError("classes do not partition 1..%d: %r" % (n, classes))
        if any(not c for c in classes):
            raise ValueError("empty class")
        self.n = n
        self.classes = classes

    def __eq__(self, other):
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.n == other.n and self.classes == other.classes

    def __hash__(self):
        return hash((self.n, self.classes))

    def __repr__(self):
        return "SetPartition(%d, %r)" % (self.n, list(self.classes))

    def class_of(self, x):
        for c in self.classes:
            if x in c:
                return c
        raise ValueError("%d not in ground set" % x)

    def is_noncrossing(self):
        # a crossing is i < j < k < l with i,k in one class and j,l in another
        cls_index = {}
        for ci, c in enumerate(self.classes):
            for x in c:
                cls_index[x] = ci
        n = self.n
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                if cls_index[i] == cls_index[j]:
                    continue
                for k in range(j + 1, n + 1):
                    if cls_index[k] != cls_index[i]:
                        continue
                    for l in range(k + 1, n + 1):
                        if cls_index[l] == cls_index[j]:
                            return False
        return True

    def is_interval(self):
        return all(c[-1] - c[0] + 1 == len(c) for c in self.classes)


def _rgs_partitions(n):
    # restricted growth strings: a[0]=0, a[i] <= 1 + max(a[:i])
    a = [0] * n
    while True:
        classes = {}
        for idx, lab in enumerate(a):
            classes.setdefault(lab, []).append(idx + 1)
        yield SetPartition(n, list(classes.values()))
        i = n - 1
        while i > 0:
            if a[i] <= max(a[:i]):
                a[i] += 1
                for j in range(i + 1, n):
                    a[j] = 0
                break
            i -= 1
        else:
            return


KINDS = ("all", "noncrossing", "interval")


def enumerate_partitions(kind, n):
    """All set partitions of {1..n} of the given kind, deterministic order."""
    if kind not in KINDS:
        raise ValueError("unknown kind %r" % (kind,))
    if not 1 <= n <= MAX_GROUND_SET:
        raise ValueError("ground set size %d out of range 1..%d"
                         % (n, MAX_GROUND_SET))
    out = []
    for p in _rgs_partitions(n):
        if kind == "noncrossing" and not p.is_noncrossing():
            continue
        if kind == "interval" and not p.is_interval():
            continue
        out.append(p)
    return out


def classify_classes(p: SetPartition):
    """Tag each class of a non-crossing partition inner or outer.

    A class is inner when another class has elements strictly on both sides
    of it; for non-crossing partitions that is equivalent to some other class
    straddling its minimum (equivalence exercised by the test suite).
    """
    if not p.is_noncrossing():
        raise ValueError("classification requires a non-crossing partition")
    roles = []
    for c in p.classes:
        lo, hi = c[0], c[-1]
        straddled = any(
            other is not c and other[0] < lo and other[-1] > hi
            for other in p.classes)
        roles.append(INNER if straddled else OUTER)
    return tuple(roles)


def outer_classes(p: SetPartition):
    roles = classify_classes(p)
    return tuple(c for c, r in zip(p.classes, roles) if r == OUTER)


def inner_classes(p: SetPartition):
    roles = classify_classes(p)
    return tuple(c for c, r in zip(p.classes, roles) if r == INNER)


def singletons(p: SetPartition):
    """One-element classes in canonical order."""
    return tuple(c for c in p.classes if len(c) == 1)


def outer_order_relations(p: SetPartition, S):
    """Position of each outer class relative to a chosen outer subset S.

    Returns a dict mapping every outer class to one of in_S, below_S,
    above_S.  A class C not in S is below_S when some element of C lies to
    the left of some element of the union of S, above_S when every element
    lies to the right of every element of that union.  With S empty, every
    outer class is tagged above_S.
    """
    outs = outer_classes(p)
    S = {tuple(sorted(c)) for c in S}
    if not S <= set(outs):
        raise ValueError("S must be a set of outer classes")
    s_elems = sorted(x for c in S for x in c)
    tags = {}
    for c in outs:
        if c in S:
            tags[c] = IN_S
        elif not s_elems:
            tags[c] = ABOVE_S
        elif any(x < s_elems[-1] for x in c):
            tags[c] = BELOW_S
        else:
            tags[c] = ABOVE_S
    return tags
