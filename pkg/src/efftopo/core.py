"""Finite effect algebras presented by partial sum tables.

Elements are the integers ``0 .. n-1``; subsets of the carrier are encoded
as int bitmasks (bit ``i`` set iff element ``i`` is a member).  Undefined
sums are represented by ``None``.
"""
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Optional, Tuple

from . import guards
from .errors import (
    AxiomViolation,
    DecompositionFailed,
    DegenerateAlgebra,
    InternalInconsistency,
    LemmaViolation,
    MalformedTable,
    NotALattice,
    NotAPartialOrder,
    NotAtomic,
    NotSharplyDominating,
    UniquenessViolated,
    ZeroHasNoIndex,
)


def members(mask: int):
    """Indices of the set bits of ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


@dataclass(frozen=True)
class RawTable:
    """An unvalidated partial sum table.

    ``sums`` maps ordered pairs ``(a, b)`` to ``a ⊕ b``; a pair that is
    absent is undefined.  Symmetry is required, not assumed.
    """

    size: int
    names: Tuple[str, ...]
    zero: int
    one: int
    sums: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "sums", dict(self.sums))


@dataclass(frozen=True)
class AtomDecomposition:
    parts: Tuple[Tuple[int, int], ...]  # (atom, multiplicity), atoms ascending


@dataclass(frozen=True)
class SharpDecomposition:
    sharp_part: int
    residual: AtomDecomposition


@dataclass(frozen=True)
class SharpStructure:
    is_sub_effect_algebra: bool
    is_full_sublattice: bool
    is_orthomodular: bool
    is_boolean: bool


# ---------------------------------------------------------------------------
# validation


def _check_well_formed(raw: RawTable):
    n = raw.size
    if not isinstance(n, int) or n < 1:
        raise MalformedTable(f"size must be a positive integer, got {n!r}")
    if len(raw.names) != n:
        raise MalformedTable(f"{len(raw.names)} names for {n} elements")
    if len(set(raw.names)) != n:
        raise MalformedTable("element names are not distinct")
    for idx in (raw.zero, raw.one):
        if not 0 <= idx < n:
            raise MalformedTable(f"index {idx} out of range")
    for (a, b), c in raw.sums.items():
        if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
            raise MalformedTable(f"sum entry {(a, b)} -> {c} out of range")


def _check_axioms(raw: RawTable):
    """Raise on the first violated axiom, checked in the order 1, 4, 3, 2."""
    n, s, zero, one = raw.size, raw.sums, raw.zero, raw.one
    for (a, b) in sorted(s):
        if s.get((b, a)) != s[(a, b)]:
            raise AxiomViolation(1, (a, b), f"{a}⊕{b} defined as {s[(a, b)]} but {b}⊕{a} is {s.get((b, a))}")
    for a in range(n):
        if a != zero and (a, one) in s:
            raise AxiomViolation(4, (a,), f"{a}⊕1 is defined although {a} is not zero")
    for a in range(n):
        supp = [b for b in range(n) if s.get((a, b)) == one]
        if len(supp) != 1:
            raise AxiomViolation(3, (a, *supp), f"{a} has {len(supp)} orthosupplements")
    for (a, b) in sorted(s):
        x = s[(a, b)]
        for c in range(n):
            y = s.get((x, c))
            if y is None:
                continue
            z = s.get((b, c))
            if z is None or s.get((a, z)) != y:
                raise AxiomViolation(2, (a, b, c), f"({a}⊕{b})⊕{c} defined but {a}⊕({b}⊕{c}) is not equal")


def _derived_order(raw: RawTable):
    n = raw.size
    leq = [[False] * n for _ in range(n)]
    for (d, _f), e in raw.sums.items():
        leq[d][e] = True
    for a in range(n):
        if not leq[a][a]:
            raise NotAPartialOrder((a,), f"{a} ≤ {a} fails")
    for a in range(n):
        for b in range(a + 1, n):
            if leq[a][b] and leq[b][a]:
                raise NotAPartialOrder((a, b), f"{a} ≤ {b} ≤ {a} with {a} ≠ {b}")
    for a in range(n):
        for b in range(n):
            if leq[a][b]:
                for c in range(n):
                    if leq[b][c] and not leq[a][c]:
                        raise NotAPartialOrder((a, b, c), "transitivity fails")
    return tuple(tuple(row) for row in leq)


def validate(raw: RawTable, name: str = "E") -> "EffectAlgebra":
    """Check the four axioms and build the derived structure.

    Raises :class:`MalformedTable`, :class:`DegenerateAlgebra`,
    :class:`AxiomViolation` or :class:`NotAPartialOrder`.
    """
    _check_well_formed(raw)
    if raw.zero == raw.one:
        raise DegenerateAlgebra("zero and one coincide")
    _check_axioms(raw)
    order = _derived_order(raw)
    E = EffectAlgebra(raw, name, order)
    E._self_check()
    return E


# ---------------------------------------------------------------------------
# the validated object


class EffectAlgebra:
    """A validated finite effect algebra.

    Build instances with :func:`validate`.  All attributes are immutable
    and derived flags are cached on first use.
    """

    def __init__(self, raw: RawTable, name: str, order):
        n = raw.size
        self.table = raw
        self.name = name
        self.n = n
        self.names = raw.names
        self.zero = raw.zero
        self.one = raw.one
        self.order = order
        self._sum = tuple(tuple(raw.sums.get((a, b)) for b in range(n)) for a in range(n))
        self.down = tuple(mask_of(a for a in range(n) if order[a][b]) for b in range(n))
        self.up = tuple(mask_of(b for b in range(n) if order[a][b]) for a in range(n))
        self.ortho = tuple(next(b for b in range(n) if self._sum[a][b] == self.one) for a in range(n))
        self.full = (1 << n) - 1

    def __repr__(self):
        return f"<EffectAlgebra {self.name!r} with {self.n} elements>"

    # primitive operations

    def oplus(self, a: int, b: int) -> Optional[int]:
        return self._sum[a][b]

    def ominus(self, a: int, b: int) -> Optional[int]:
        """The ``c`` with ``b ⊕ c = a``, or ``None`` when ``b ≰ a``."""
        row = self._sum[b]
        for c in range(self.n):
            if row[c] == a:
                return c
        return None

    def leq(self, a: int, b: int) -> bool:
        return self.order[a][b]

    def interval(self, a: int, b: int) -> int:
        return self.up[a] & self.down[b]

    def index(self, name: str) -> int:
        return self.names.index(name)

    def label(self, elements):
        if isinstance(elements, int):
            return self.names[elements]
        return [self.label(e) for e in elements]

    def _self_check(self):
        n, o = self.n, self.ortho
        for a in range(n):
            if o[o[a]] != a:
                raise InternalInconsistency(f"orthosupplement of {a} is not involutive")
            if not (self.order[self.zero][a] and self.order[a][self.one]):
                raise InternalInconsistency(f"{a} is not between zero and one")
            for b in range(n):
                if self.order[a][b] != self.order[o[b]][o[a]]:
                    raise InternalInconsistency(f"order reversal fails for {(a, b)}")
                if (self._sum[a][b] is not None) != self.order[a][o[b]]:
                    raise InternalInconsistency(f"{a}⊕{b} definedness disagrees with {a} ≤ {b}'")

    # lattice structure

    @cached_property
    def _lattice(self):
        n, up, down = self.n, self.up, self.down
        join = [[0] * n for _ in range(n)]
        meet = [[0] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                ub = up[a] & up[b]
                lub = [u for u in members(ub) if ub & ~up[u] == 0]
                lb = down[a] & down[b]
                glb = [d for d in members(lb) if lb & ~down[d] == 0]
                if len(lub) != 1 or len(glb) != 1:
                    return None, (a, b)
                join[a][b] = join[b][a] = lub[0]
                meet[a][b] = meet[b][a] = glb[0]
        return (tuple(map(tuple, meet)), tuple(map(tuple, join))), None

    @property
    def is_lattice(self) -> bool:
        return self._lattice[0] is not None

    def lattice_tables(self):
        tables, witness = self._lattice
        if tables is None:
            raise NotALattice(witness)
        return tables

    def meet(self, a: int, b: int) -> int:
        return self.lattice_tables()[0][a][b]

    def join(self, a: int, b: int) -> int:
        return self.lattice_tables()[1][a][b]

    def join_all(self, elements) -> int:
        j = self.lattice_tables()[1]
        r = self.zero
        for e in elements:
            r = j[r][e]
        return r

    def meet_all(self, elements) -> int:
        m = self.lattice_tables()[0]
        r = self.one
        for e in elements:
            r = m[r][e]
        return r

    # cached element sets and flags

    @cached_property
    def atom_mask(self) -> int:
        return mask_of(a for a in range(self.n) if a != self.zero and self.down[a] == (1 << a) | (1 << self.zero))

    @cached_property
    def sharp_mask(self) -> int:
        m = self.lattice_tables()[0]
        return mask_of(x for x in range(self.n) if m[x][self.ortho[x]] == self.zero)

    @cached_property
    def ords(self) -> Tuple[int, ...]:
        return tuple(0 if x == self.zero else isotropic_index(self, x) for x in range(self.n))

    @cached_property
    def is_atomic(self) -> bool:
        return all(self.down[x] & self.atom_mask for x in range(self.n) if x != self.zero)

    @cached_property
    def is_distributive(self) -> bool:
        return distributivity_witness(self) is None

    @cached_property
    def is_mv(self) -> bool:
        return incompatible_pair(self) is None

    @cached_property
    def is_o_continuous(self) -> bool:
        return o_continuity_witness(self) is None

    @cached_property
    def is_algebraic(self) -> bool:
        return algebraic_witness(self) is None

    @cached_property
    def _directed(self):
        return _directed_family(self, self.up)

    @cached_property
    def _down_directed(self):
        return _directed_family(self, self.down)


# ---------------------------------------------------------------------------
# element-level operations


def orthosupplement(E: EffectAlgebra, a: int) -> int:
    return E.ortho[a]


def ominus(E: EffectAlgebra, a: int, b: int) -> Optional[int]:
    return E.ominus(a, b)


def leq(E: EffectAlgebra, a: int, b: int) -> bool:
    return E.leq(a, b)


def interval(E: EffectAlgebra, a: int, b: int) -> int:
    return E.interval(a, b)


def lattice_ops(E: EffectAlgebra):
    """``(meet, join)`` as nested tuples; raises :class:`NotALattice`."""
    return E.lattice_tables()


def covers(E: EffectAlgebra):
    """Covering pairs ``(a, b)``: ``a < b`` with nothing strictly between."""
    out = []
    for a in range(E.n):
        for b in members(E.up[a] & ~(1 << a)):
            if E.interval(a, b) == (1 << a) | (1 << b):
                out.append((a, b))
    return out


def distributivity_witness(E: EffectAlgebra):
    """First triple ``(x, y, z)`` with ``x∧(y∨z) ≠ (x∧y)∨(x∧z)``, or None."""
    m, j = E.lattice_tables()
    rng = range(E.n)
    for x in rng:
        for y in rng:
            for z in rng:
                if m[x][j[y][z]] != j[m[x][y]][m[x][z]]:
                    return (x, y, z)
    return None


def is_distributive(E: EffectAlgebra) -> bool:
    return E.is_distributive


def atoms(E: EffectAlgebra) -> int:
    return E.atom_mask


def is_atomic(E: EffectAlgebra) -> bool:
    return E.is_atomic


def is_sharp(E: EffectAlgebra, x: int) -> bool:
    return bool(E.sharp_mask >> x & 1)


def sharp_set(E: EffectAlgebra) -> int:
    return E.sharp_mask


def _bound_in(E, subset, a, b, upper):
    """Least upper (or greatest lower) bound of a, b computed inside ``subset``."""
    rel = E.up if upper else E.down
    cands = subset & rel[a] & rel[b]
    best = [c for c in members(cands) if cands & ~rel[c] == 0]
    return best[0] if best else None


def sharp_structure(E: EffectAlgebra) -> SharpStructure:
    S = E.sharp_mask
    sharp = list(members(S))
    inS = lambda x: x is not None and bool(S >> x & 1)

    sub_ea = inS(E.zero) and inS(E.one) and all(inS(E.ortho[a]) for a in sharp)
    sub_ea = sub_ea and all(
        E.oplus(a, b) is None or inS(E.oplus(a, b)) for a in sharp for b in sharp
    )

    full = True
    sjoin, smeet = {}, {}
    for a in sharp:
        for b in sharp:
            sj = _bound_in(E, S, a, b, upper=True)
            sm = _bound_in(E, S, a, b, upper=False)
            sjoin[a, b], smeet[a, b] = sj, sm
            if sj != E.join(a, b) or sm != E.meet(a, b):
                full = False

    ortholattice = all(sjoin[a, E.ortho[a]] == E.one and smeet[a, E.ortho[a]] == E.zero for a in sharp)
    total = all(v is not None for v in sjoin.values()) and all(v is not None for v in smeet.values())
    orthomodular = total and ortholattice and all(
        b == sjoin[a, smeet[b, E.ortho[a]]]
        for a in sharp for b in sharp if E.leq(a, b)
    )
    distributive = total and all(
        smeet[x, sjoin[y, z]] == sjoin[smeet[x, y], smeet[x, z]]
        for x in sharp for y in sharp for z in sharp
    )
    return SharpStructure(sub_ea, full, orthomodular, orthomodular and distributive)


def multiple(E: EffectAlgebra, x: int, k: int) -> Optional[int]:
    """The ``k``-fold sum ``x ⊕ … ⊕ x``; ``0x`` is zero."""
    s = E.zero
    for _ in range(k):
        s = E.oplus(s, x)
        if s is None:
            return None
    return s


def isotropic_index(E: EffectAlgebra, x: int) -> int:
    if x == E.zero:
        raise ZeroHasNoIndex("the isotropic index of zero is infinite")
    s, k = x, 1
    while True:
        nxt = E.oplus(s, x)
        if nxt is None:
            return k
        s, k = nxt, k + 1
        if k > E.n:
            raise InternalInconsistency(f"{x} has unbounded multiples")


def is_compatible(E: EffectAlgebra, a: int, b: int) -> bool:
    c = E.ominus(b, E.meet(a, b))
    return E.oplus(a, c) == E.join(a, b)


def incompatible_pair(E: EffectAlgebra):
    for a in range(E.n):
        for b in range(E.n):
            if not is_compatible(E, a, b):
                return (a, b)
    return None


def is_mv(E: EffectAlgebra) -> bool:
    return E.is_mv


def is_principal_element(E: EffectAlgebra, x: int) -> bool:
    """Sums of pairs below ``x`` stay below ``x``.

    On lattice instances the answer is cross-checked against sharpness.
    """
    below = list(members(E.down[x]))
    principal = all(
        E.oplus(a, b) is None or E.leq(E.oplus(a, b), x) for a in below for b in below
    )
    if E.is_lattice and principal != is_sharp(E, x):
        raise LemmaViolation("PrincipalIffSharp", {"element": E.names[x], "principal": principal})
    return principal


def finite_elements(E: EffectAlgebra) -> int:
    """Zero together with every defined sum of finitely many atoms."""
    if not E.is_atomic:
        raise NotAtomic("finite elements need an atomic algebra")
    reached = 1 << E.zero
    frontier = [E.zero]
    while frontier:
        nxt = []
        for u in frontier:
            for a in members(E.atom_mask):
                v = E.oplus(u, a)
                if v is not None and not reached >> v & 1:
                    reached |= 1 << v
                    nxt.append(v)
        frontier = nxt
    for x in range(E.n):
        if x != E.zero and not reached >> x & 1:
            raise InternalInconsistency(f"{x} is not a sum of atoms in a finite algebra")
        if x != E.zero and _peel(E, x) is None:
            raise InternalInconsistency(f"atom peeling fails for {x}")
    return reached


# ---------------------------------------------------------------------------
# directed subsets, compactness, continuity


def _directed_family(E, rel):
    """All nonempty subsets in which each pair has a bound (per ``rel``) inside."""
    out = []
    n = E.n
    for Y in range(1, 1 << n):
        els = list(members(Y))
        ok = True
        for i, a in enumerate(els):
            for b in els[i:]:
                if not rel[a] & rel[b] & Y:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(Y)
    return tuple(out)


def directed_subsets(E: EffectAlgebra, guard: str = "subsets"):
    guards.require("directed subsets", E.n, guard)
    return E._directed


def down_directed_subsets(E: EffectAlgebra, guard: str = "subsets"):
    guards.require("down-directed subsets", E.n, guard)
    return E._down_directed


def is_compact_element(E: EffectAlgebra, u: int) -> bool:
    """``u ≤ ⋁D`` for directed ``D`` forces ``u ≤ d`` for some ``d ∈ D``."""
    E.lattice_tables()
    for D in directed_subsets(E):
        if E.leq(u, E.join_all(members(D))) and not any(E.leq(u, d) for d in members(D)):
            return False
    return True


def algebraic_witness(E: EffectAlgebra):
    """An element that is not the join of the compact elements below it."""
    compact = [u for u in range(E.n) if is_compact_element(E, u)]
    for x in range(E.n):
        if E.join_all(c for c in compact if E.leq(c, x)) != x:
            return x
    return None


def is_algebraic(E: EffectAlgebra) -> bool:
    return E.is_algebraic


def o_continuity_witness(E: EffectAlgebra):
    """A directed ``D`` and ``y`` with ``(⋁D)∧y ≠ ⋁{d∧y}``, or None."""
    m, _ = E.lattice_tables()
    for D in directed_subsets(E):
        els = list(members(D))
        top = E.join_all(els)
        for y in range(E.n):
            if m[top][y] != E.join_all(m[d][y] for d in els):
                return (D, y)
    return None


def is_o_continuous(E: EffectAlgebra) -> bool:
    return E.is_o_continuous


# ---------------------------------------------------------------------------
# orthogonal families and decompositions


def oplus_family(E: EffectAlgebra, elements) -> Optional[int]:
    """⊕ of a finite multiset, or None if some partial sum is undefined."""
    elems = sorted(elements)

    def fold(seq):
        s = E.zero
        for e in seq:
            s = E.oplus(s, e)
            if s is None:
                return None
        return s

    result = fold(elems)
    shuffled = list(elems)
    random.Random(repr(elems)).shuffle(shuffled)
    if fold(shuffled) != result:
        raise InternalInconsistency(f"sum of {elems} depends on the order of summation")
    return result


def _peel(E, x):
    """Greedy lowest-index atom peeling; returns the list of atoms removed."""
    seq = []
    r = x
    while r != E.zero:
        below = E.down[r] & E.atom_mask
        if not below:
            return None
        a = next(members(below))
        seq.append(a)
        r = E.ominus(r, a)
    return seq


def _require_atomic_lattice(E):
    E.lattice_tables()
    if not E.is_atomic:
        raise NotAtomic("operation needs an atomic lattice effect algebra")


def atom_decomposition(E: EffectAlgebra, x: int) -> AtomDecomposition:
    """Write ``x`` as ``⊕ k·a`` over distinct atoms by greedy peeling.

    The result must also equal the join of the ``k·a`` terms.
    """
    _require_atomic_lattice(E)
    if x == E.zero:
        raise ZeroHasNoIndex("zero has no atom decomposition")
    seq = _peel(E, x)
    if seq is None:
        raise DecompositionFailed(f"no atom below a nonzero residual of {x}")
    counts = {}
    for a in seq:
        counts[a] = counts.get(a, 0) + 1
    dec = AtomDecomposition(tuple(sorted(counts.items())))
    terms = [multiple(E, a, k) for a, k in dec.parts]
    if None in terms or oplus_family(E, terms) != x:
        raise DecompositionFailed(f"⊕-recombination of {dec.parts} differs from {x}")
    if E.join_all(terms) != x:
        raise DecompositionFailed(f"join of {dec.parts} differs from {x}")
    return dec


def _below_has_nonzero_sharp(E, r):
    return bool(E.down[r] & E.sharp_mask & ~(1 << E.zero))


def sharp_decomposition(E: EffectAlgebra, x: int) -> SharpDecomposition:
    """The unique sharp part ``w ≤ x`` leaving no sharp element in ``x ⊖ w``."""
    _require_atomic_lattice(E)
    if x == E.zero:
        raise ZeroHasNoIndex("zero has no sharp decomposition")
    found = []
    for w in members(E.sharp_mask & E.down[x]):
        r = E.ominus(x, w)
        if _below_has_nonzero_sharp(E, r):
            continue
        if r == E.zero:
            found.append(SharpDecomposition(w, AtomDecomposition(())))
            continue
        dec = atom_decomposition(E, r)
        if all(k < E.ords[a] for a, k in dec.parts):
            found.append(SharpDecomposition(w, dec))
    if len(found) != 1:
        raise UniquenessViolated(x, [d.sharp_part for d in found])
    return found[0]


def _min_sharp_above(E, u):
    cands = E.sharp_mask & E.up[u]
    least = [c for c in members(cands) if cands & ~E.up[c] == 0]
    if not least:
        raise NotSharplyDominating(u)
    return least[0]


def smallest_sharp_above(E: EffectAlgebra, u: int) -> int:
    """Least sharp element dominating ``u``, by brute force.

    On atomic distributive instances the result is also checked against the
    join of ``ord(a)·a`` over the atom decomposition of ``u`` and for
    monotonicity in ``u``.
    """
    E.lattice_tables()
    hat = _min_sharp_above(E, u)
    if E.is_atomic and E.is_distributive:
        if u == E.zero:
            formula = E.zero
        else:
            dec = atom_decomposition(E, u)
            formula = E.join_all(multiple(E, a, E.ords[a]) for a, _k in dec.parts)
        if formula != hat:
            raise LemmaViolation("Lem3.5", {"u": E.names[u], "hat": E.names[hat], "formula": E.names[formula]})
        for u2 in members(E.up[u]):
            if not E.leq(hat, _min_sharp_above(E, u2)):
                raise LemmaViolation("Lem3.5", {"u1": E.names[u], "u2": E.names[u2]})
    return hat
