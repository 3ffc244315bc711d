"""Standard families of effect algebras, combinators, and negative fixtures."""
import random
import re
from itertools import permutations, product
from dataclasses import dataclass
from typing import Tuple

from . import guards
from .core import EffectAlgebra, RawTable, members, validate
from .errors import MutationNotApplicable


def _zero_sums(n, zero, sums):
    for x in range(n):
        sums[(zero, x)] = x
        sums[(x, zero)] = x


def mv_chain(n: int) -> EffectAlgebra:
    """The chain ``0 < a < 2a < … < na = 1`` with truncated addition."""
    if n < 1:
        raise ValueError("chain length must be at least 1")
    guards.require("chain", n + 1, "catalog")
    names = ["0"] + ["a" if i == 1 else f"{i}a" for i in range(1, n)] + ["1"]
    sums = {(i, j): i + j for i in range(n + 1) for j in range(n + 1) if i + j <= n}
    return validate(RawTable(n + 1, names, 0, n, sums), name=f"C{n}")


_GENERATORS = "pqrstuvwxyz"


def boolean_algebra(k: int) -> EffectAlgebra:
    """Subsets of ``k`` generators; ⊕ is disjoint union."""
    if not 1 <= k <= len(_GENERATORS):
        raise ValueError(f"number of generators must be in 1..{len(_GENERATORS)}")
    size = 1 << k
    guards.require("boolean algebra", size, "catalog")
    full = size - 1

    def name(m):
        if m == 0:
            return "0"
        if m == full:
            return "1"
        return "".join(_GENERATORS[i] for i in range(k) if m >> i & 1)

    sums = {(a, b): a | b for a in range(size) for b in range(size) if a & b == 0}
    return validate(RawTable(size, [name(m) for m in range(size)], 0, full, sums), name=f"B{k}")


def _middles(E):
    return [x for x in range(E.n) if x not in (E.zero, E.one)]


def horizontal_sum(E1: EffectAlgebra, E2: EffectAlgebra, name=None) -> EffectAlgebra:
    """Glue two algebras along their zeros and ones, with no cross sums."""
    mid1, mid2 = _middles(E1), _middles(E2)
    n = len(mid1) + len(mid2) + 2
    guards.require("horizontal sum", n, "catalog")
    n1 = [E1.names[x] for x in mid1]
    n2 = [E2.names[x] for x in mid2]
    z, o = E1.names[E1.zero], E1.names[E1.one]
    if set(n1) & set(n2) or {z, o} & set(n2):
        n1 = [f"{s}_1" for s in n1]
        n2 = [f"{s}_2" for s in n2]
    names = [z] + n1 + n2 + [o]
    one = n - 1
    sums = {(0, one): one, (one, 0): one}
    _zero_sums(n, 0, sums)
    offset = 1
    for E, mid in ((E1, mid1), (E2, mid2)):
        pos = {x: offset + k for k, x in enumerate(mid)}
        pos[E.one] = one
        for a in mid:
            for b in mid:
                c = E.oplus(a, b)
                if c is not None:
                    sums[(pos[a], pos[b])] = pos[c]
        offset += len(mid)
    return validate(RawTable(n, names, 0, one, sums), name=name or f"{E1.name}+{E2.name}")


def direct_product(E1: EffectAlgebra, E2: EffectAlgebra, name=None) -> EffectAlgebra:
    """Componentwise sum on pairs, element ``(i, j)`` at index ``i * |E2| + j``."""
    n2 = E2.n
    n = E1.n * n2
    guards.require("direct product", n, "catalog")
    names = [f"({E1.names[i]},{E2.names[j]})" for i in range(E1.n) for j in range(n2)]
    sums = {}
    for a1 in range(E1.n):
        for b1 in range(E1.n):
            c1 = E1.oplus(a1, b1)
            if c1 is None:
                continue
            for a2 in range(n2):
                for b2 in range(n2):
                    c2 = E2.oplus(a2, b2)
                    if c2 is not None:
                        sums[(a1 * n2 + a2, b1 * n2 + b2)] = c1 * n2 + c2
    return validate(
        RawTable(n, names, E1.zero * n2 + E2.zero, E1.one * n2 + E2.one, sums),
        name=name or f"{E1.name}x{E2.name}",
    )


def mo(m: int) -> EffectAlgebra:
    """Horizontal sum of ``m`` copies of the four-element Boolean algebra."""
    E = boolean_algebra(2)
    for _ in range(m - 1):
        E = horizontal_sum(E, boolean_algebra(2))
    return _renamed(E, f"MO{m}")


def _renamed(E, name):
    return validate(E.table, name=name)


# ---------------------------------------------------------------------------
# catalogue specifications


@dataclass(frozen=True)
class CatalogSpec:
    kind: str                       # chain | boolean | horizontal_sum | product | file
    params: Tuple = ()
    operands: Tuple["CatalogSpec", ...] = ()


MAX_SPEC_DEPTH = 6

_TOKEN = re.compile(r"\s*(?:(hsum|product)\(|(chain|boolean):(\d+)|file:([^,()\s]+)|(,)|(\)))")


def parse_spec(text: str) -> CatalogSpec:
    """Parse ``chain:N``, ``boolean:K``, ``file:PATH``, ``hsum(A,B)`` or ``product(A,B)``."""
    pos = 0

    def parse(depth):
        nonlocal pos
        if depth > MAX_SPEC_DEPTH:
            raise ValueError(f"spec nesting deeper than {MAX_SPEC_DEPTH}")
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse spec at offset {pos}: {text[pos:]!r}")
        pos = m.end()
        if m.group(1):
            left = parse(depth + 1)
            _expect(",")
            right = parse(depth + 1)
            _expect(")")
            kind = "horizontal_sum" if m.group(1) == "hsum" else "product"
            return CatalogSpec(kind, (), (left, right))
        if m.group(2):
            value = int(m.group(3))
            if value < 1:
                raise ValueError("spec parameters must be positive")
            return CatalogSpec(m.group(2), (value,))
        if m.group(4):
            return CatalogSpec("file", (m.group(4),))
        raise ValueError(f"unexpected token at offset {m.start()}")

    def _expect(tok):
        nonlocal pos
        m = _TOKEN.match(text, pos)
        if not m or m.group(0).strip() != tok:
            raise ValueError(f"expected {tok!r} at offset {pos}")
        pos = m.end()

    spec = parse(0)
    if text[pos:].strip():
        raise ValueError(f"trailing text in spec: {text[pos:]!r}")
    return spec


def build(spec: CatalogSpec) -> EffectAlgebra:
    if spec.kind == "chain":
        return mv_chain(*spec.params)
    if spec.kind == "boolean":
        return boolean_algebra(*spec.params)
    if spec.kind == "file":
        from .io import load_ea

        return load_ea(spec.params[0])
    left, right = (build(s) for s in spec.operands)
    if spec.kind == "horizontal_sum":
        return horizontal_sum(left, right)
    if spec.kind == "product":
        return direct_product(left, right)
    raise ValueError(f"unknown catalog kind {spec.kind!r}")


def standard_catalog():
    """Named instances used throughout the test-suite and the harness."""
    out = [mv_chain(n) for n in range(1, 7)]
    out += [boolean_algebra(k) for k in range(1, 4)]
    out += [mo(2), mo(3)]
    C = {n: mv_chain(n) for n in range(1, 6)}
    out += [
        horizontal_sum(C[2], C[2], name="C2+C2"),
        horizontal_sum(C[3], C[3], name="C3+C3"),
        horizontal_sum(C[2], boolean_algebra(2), name="C2+B2"),
        horizontal_sum(C[3], C[2], name="C3+C2"),
        direct_product(C[2], C[2], name="C2xC2"),
        direct_product(boolean_algebra(2), C[2], name="B2xC2"),
        direct_product(C[3], C[2], name="C3xC2"),
        direct_product(C[1], C[5], name="C1xC5"),
        direct_product(C[2], C[5], name="C2xC5"),
        direct_product(C[3], C[5], name="C3xC5"),
        direct_product(boolean_algebra(3), C[2], name="B3xC2"),
        direct_product(boolean_algebra(2), C[5], name="B2xC5"),
        direct_product(mo(2), C[3], name="MO2xC3"),
    ]
    return out


# ---------------------------------------------------------------------------
# negative fixtures

# strategy -> rejection kinds it is guaranteed to trigger
MUTATIONS = {
    "redirect": frozenset({"axiom2", "axiom3", "axiom4", "order"}),
    "redirect_to_one": frozenset({"axiom3"}),
    "redirect_supplement": frozenset({"axiom3"}),
    "drop_supplement": frozenset({"axiom3"}),
    "extra_supplement": frozenset({"axiom3"}),
    "add_top_sum": frozenset({"axiom4"}),
    "break_symmetry": frozenset({"axiom1"}),
    "drop_zero_sum": frozenset({"axiom2"}),
    "collapse_to_self": frozenset({"axiom2", "axiom3"}),
}


def mutate_negative(E: EffectAlgebra, strategy: str, seed: int = 0) -> RawTable:
    """Apply one documented corruption to the sum table of ``E``.

    ``MUTATIONS[strategy]`` lists the rejection kinds validation will report.
    Raises :class:`MutationNotApplicable` when ``E`` has no suitable site.
    """
    if strategy not in MUTATIONS:
        raise ValueError(f"unknown mutation strategy {strategy!r}")
    rng = random.Random(seed)
    n, zero, one = E.n, E.zero, E.one
    sums = dict(E.table.sums)
    mids = _middles(E)
    pick = lambda seq: seq[rng.randrange(len(seq))] if seq else None

    def set_pair(a, b, v):
        if v is None:
            sums.pop((a, b), None)
            sums.pop((b, a), None)
        else:
            sums[(a, b)] = sums[(b, a)] = v

    inner = sorted((a, b) for (a, b) in E.table.sums if a <= b and a in mids and b in mids)
    if strategy == "redirect":
        site = pick(inner)
        if site is None:
            raise MutationNotApplicable(strategy)
        old = sums[site]
        set_pair(*site, pick([c for c in range(n) if c != old]))
    elif strategy == "redirect_to_one":
        site = pick([p for p in inner if sums[p] != one])
        if site is None:
            raise MutationNotApplicable(strategy)
        set_pair(*site, one)
    elif strategy in ("redirect_supplement", "drop_supplement"):
        a = pick(mids)
        if a is None:
            raise MutationNotApplicable(strategy)
        value = None if strategy == "drop_supplement" else pick([c for c in range(n) if c != one])
        set_pair(a, E.ortho[a], value)
    elif strategy == "extra_supplement":
        site = pick([(a, b) for a in mids for b in mids if a <= b and E.oplus(a, b) is None])
        if site is None:
            raise MutationNotApplicable(strategy)
        set_pair(*site, one)
    elif strategy == "add_top_sum":
        a = pick([x for x in range(n) if x != zero])
        set_pair(a, one, one)
    elif strategy == "break_symmetry":
        a, b = pick([(a, b) for a in range(n) for b in range(n) if a != b and (a, b) in sums])
        others = [c for c in range(n) if c != sums[(a, b)]]
        sums[(a, b)] = pick(others)
    elif strategy == "drop_zero_sum":
        x = pick(mids)
        if x is None:
            raise MutationNotApplicable(strategy)
        set_pair(zero, x, None)
    elif strategy == "collapse_to_self":
        site = pick([(a, b) for a in mids for b in mids if E.oplus(a, b) is not None])
        if site is None:
            raise MutationNotApplicable(strategy)
        set_pair(*site, site[0])
    return RawTable(n, E.names, zero, one, sums)


# ---------------------------------------------------------------------------
# isomorphism


def fingerprint(E: EffectAlgebra, x: int):
    """Isomorphism-invariant data about one element."""
    return (
        x == E.zero,
        x == E.one,
        E.ords[x],
        bin(E.down[x]).count("1"),
        bin(E.up[x]).count("1"),
        bool(E.atom_mask >> x & 1),
        E.ortho[x] == x,
        sum(E.oplus(x, y) is not None for y in range(E.n)),
    )


def are_isomorphic(E1: EffectAlgebra, E2: EffectAlgebra) -> bool:
    """Search for a ⊕-preserving bijection, pruned by element fingerprints."""
    if E1.n != E2.n:
        return False
    f1 = [fingerprint(E1, x) for x in range(E1.n)]
    f2 = [fingerprint(E2, x) for x in range(E2.n)]
    if sorted(f1) != sorted(f2):
        return False
    n = E1.n
    order = sorted(range(n), key=lambda x: (sum(1 for y in f1 if y == f1[x]), x))
    image = [None] * n
    used = [False] * n

    def consistent(x):
        fx = image[x]
        for y in range(n):
            fy = image[y]
            if fy is None:
                continue
            for a, b, fa, fb in ((x, y, fx, fy), (y, x, fy, fx)):
                c = E1.oplus(a, b)
                d = E2.oplus(fa, fb)
                if (c is None) != (d is None):
                    return False
                if c is not None and image[c] is not None and image[c] != d:
                    return False
        return True

    def search(k):
        if k == n:
            return all(
                (E1.oplus(a, b) is None and E2.oplus(image[a], image[b]) is None)
                or (E1.oplus(a, b) is not None and image[E1.oplus(a, b)] == E2.oplus(image[a], image[b]))
                for a in range(n)
                for b in range(n)
            )
        x = order[k]
        for y in range(n):
            if not used[y] and f2[y] == f1[x]:
                image[x], used[y] = y, True
                if consistent(x) and search(k + 1):
                    return True
                image[x], used[y] = None, False
        return False

    return search(0)


def canonical_form(E: EffectAlgebra):
    """Lexicographically least relabelled table among fingerprint-sorted orders.

    Elements are arranged by fingerprint class; only permutations within a
    class are tried, so the cost is the product of class-size factorials.
    """
    fps = [fingerprint(E, x) for x in range(E.n)]
    classes = {}
    for x in range(E.n):
        classes.setdefault(fps[x], []).append(x)
    keys = sorted(classes)
    best = None
    for choice in product(*(permutations(classes[k]) for k in keys)):
        order = [x for block in choice for x in block]
        pos = {x: i for i, x in enumerate(order)}
        code = tuple(
            -1 if E.oplus(a, b) is None else pos[E.oplus(a, b)] for a in order for b in order
        )
        if best is None or code < best:
            best = code
    return (tuple(keys), tuple(len(classes[k]) for k in keys), best)
