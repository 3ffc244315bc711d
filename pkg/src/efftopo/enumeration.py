"""Exhaustive enumeration of small effect algebras up to isomorphism.

Labels are fixed throughout: ``0`` is zero, ``n - 1`` is one and the
elements in between are the "middles".  ``0 ⊕ x = x`` for every ``x`` and
``x ⊕ 1`` is undefined for ``x ≠ 0``; both hold in every effect algebra,
so only the sums of pairs of middles are searched.
"""
from itertools import permutations, product

from . import guards
from .catalog import canonical_form
from .core import RawTable, validate
from .errors import InvalidTable

_UNSET = -2


def _names(n):
    return ["0"] + [f"e{i}" for i in range(1, n - 1)] + ["1"]


def _frame(n):
    table = [[_UNSET] * n for _ in range(n)]
    one = n - 1
    for x in range(n):
        table[0][x] = table[x][0] = x
        if x:
            table[one][x] = table[x][one] = None
    return table


def _involutions(items):
    if not items:
        yield {}
        return
    first, rest = items[0], items[1:]
    for partner in [first] + rest:
        remaining = [x for x in rest if x != partner]
        for inv in _involutions(remaining):
            inv = dict(inv)
            inv[first] = partner
            inv[partner] = first
            yield inv


def _assoc_ok(T, n, touched):
    """Check every triple whose relevant entries are all known and mention ``touched``."""
    i, j = touched
    rng = range(n)
    for a in rng:
        for b in rng:
            x = T[a][b]
            if x is None or x == _UNSET:
                continue
            for c in rng:
                y = T[x][c]
                if y is None or y == _UNSET:
                    continue
                z = T[b][c]
                if z == _UNSET:
                    continue
                involved = {(a, b), (b, a), (x, c), (c, x), (b, c), (c, b)}
                if z is None:
                    if (i, j) in involved:
                        return False
                    continue
                w = T[a][z]
                if w == _UNSET:
                    continue
                if (i, j) in involved or (a, z) in ((i, j), (j, i)):
                    if w != y:
                        return False
    return True


def _search(n):
    """Labelled tables on ``n`` elements passing the incremental axiom checks."""
    one = n - 1
    mids = list(range(1, n - 1))
    for supp in _involutions(mids):
        T = _frame(n)
        for a in mids:
            T[a][supp[a]] = one
        if any(not _assoc_ok(T, n, (a, supp[a])) for a in mids):
            continue
        pairs = [(a, b) for a in mids for b in mids if a <= b and supp[a] != b]

        def extend(k):
            if k == len(pairs):
                yield [row[:] for row in T]
                return
            a, b = pairs[k]
            for v in [None] + mids:
                if v is not None:
                    # cancellation: x ⊕ y = x forces y = 0, and rows are injective
                    if v in (a, b) or v in T[a] or v in T[b]:
                        continue
                T[a][b] = T[b][a] = v
                if _assoc_ok(T, n, (a, b)):
                    yield from extend(k + 1)
                T[a][b] = T[b][a] = _UNSET

        yield from extend(0)


def _to_raw(n, T):
    sums = {(a, b): T[a][b] for a in range(n) for b in range(n) if T[a][b] is not None}
    return RawTable(n, _names(n), 0, n - 1, sums)


def enumerate_size(n: int):
    """All effect algebras with exactly ``n`` elements, one per isomorphism class."""
    if n < 2:
        raise ValueError("effect algebras here have at least two elements")
    guards.require("enumeration", n, "enumeration")
    seen = {}
    for T in _search(n):
        try:
            E = validate(_to_raw(n, T))
        except InvalidTable:
            continue
        seen.setdefault(canonical_form(E), E)
    out = []
    for k, (key, E) in enumerate(sorted(seen.items())):
        out.append(validate(E.table, name=f"EA{n}_{k}"))
    return out


def enumerate_all(max_n: int):
    """Every effect algebra with ``2 ≤ |E| ≤ max_n`` elements, up to isomorphism."""
    guards.require("enumeration", max_n, "enumeration")
    out = []
    for n in range(2, max_n + 1):
        out.extend(enumerate_size(n))
    return out


# ---------------------------------------------------------------------------
# independent oracle: generate every table, filter by the raw axioms


def naive_is_effect_algebra(n, s):
    """Direct transcription of the four axioms over a dict table ``s``."""
    zero, one = 0, n - 1
    for (a, b), c in s.items():
        if s.get((b, a)) != c:
            return False
    for a in range(n):
        for b in range(n):
            ab = s.get((a, b))
            if ab is None:
                continue
            for c in range(n):
                abc = s.get((ab, c))
                if abc is None:
                    continue
                bc = s.get((b, c))
                if bc is None or s.get((a, bc)) != abc:
                    return False
    for a in range(n):
        if sum(1 for b in range(n) if s.get((a, b)) == one) != 1:
            return False
        if (a, one) in s and a != zero:
            return False
    return True


def naive_canonical(n, s):
    """Least encoding over every relabelling of the middles."""
    mids = list(range(1, n - 1))
    best = None
    for perm in permutations(mids):
        relabel = {0: 0, n - 1: n - 1}
        relabel.update(zip(mids, perm))
        inv = {v: k for k, v in relabel.items()}
        code = tuple(
            -1 if (inv[a], inv[b]) not in s else relabel[s[(inv[a], inv[b])]]
            for a in range(n)
            for b in range(n)
        )
        if best is None or code < best:
            best = code
    return best


def naive_classes(n: int, limit: int = 5):
    """Canonical codes of all effect algebras on ``n`` elements, by brute force."""
    if n > limit:
        raise ValueError(f"naive enumeration is only run up to {limit} elements")
    one = n - 1
    mids = list(range(1, n - 1))
    pairs = [(a, b) for a in mids for b in mids if a <= b]
    base = {}
    for x in range(n):
        base[(0, x)] = base[(x, 0)] = x
    classes = set()
    for values in product([None] + list(range(n)), repeat=len(pairs)):
        s = dict(base)
        for (a, b), v in zip(pairs, values):
            if v is not None:
                s[(a, b)] = s[(b, a)] = v
        if naive_is_effect_algebra(n, s):
            classes.add(naive_canonical(n, s))
    return classes


def table_code(E):
    """Dict form of a labelled instance, for use with :func:`naive_canonical`."""
    return {(a, b): E.oplus(a, b) for a in range(E.n) for b in range(E.n) if E.oplus(a, b) is not None}
