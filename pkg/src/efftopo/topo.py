"""Finite topologies and the intrinsic topologies of an effect algebra.

A topology on ``{0, …, n-1}`` is stored through the minimal open
neighbourhood of every point (on a finite carrier the intersection of all
opens containing ``x`` is itself open).  Two topologies are equal exactly
when these neighbourhoods agree, so comparisons never need the full open
family; :attr:`Topology.opens` materialises it on demand, sorted by bitmask
value, subject to the ``topology`` size guard.
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence, Tuple

from . import guards
from .core import EffectAlgebra, directed_subsets, down_directed_subsets, finite_elements, mask_of, members
from .errors import CarrierMismatch, DomainMismatch, OracleMismatch


def _as_mask(s) -> int:
    return s if isinstance(s, int) else mask_of(s)


@dataclass(frozen=True)
class Topology:
    n: int
    nbhd: Tuple[int, ...]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @classmethod
    def discrete(cls, n):
        return cls(n, tuple(1 << x for x in range(n)))

    @classmethod
    def indiscrete(cls, n):
        return cls(n, ((1 << n) - 1,) * n)

    @classmethod
    def from_opens(cls, n, opens):
        """Build from an explicit open family, which must already be a topology."""
        fam = {_as_mask(o) for o in opens}
        full = (1 << n) - 1
        if 0 not in fam or full not in fam:
            raise ValueError("open family must contain the empty set and the carrier")
        for a in fam:
            if a & ~full:
                raise ValueError(f"open set {a:b} exceeds the carrier")
            for b in fam:
                if a | b not in fam or a & b not in fam:
                    raise ValueError("open family is not closed under union and intersection")
        T = topology_from_subbasis(n, fam)
        if set(T.opens) != fam:
            raise ValueError("open family is not a topology")
        return T

    def is_open(self, s) -> bool:
        s = _as_mask(s)
        return all(self.nbhd[x] & ~s == 0 for x in members(s))

    def is_closed(self, s) -> bool:
        return self.is_open(self.full & ~_as_mask(s))

    @cached_property
    def opens(self) -> Tuple[int, ...]:
        """Every open set, as ascending bitmasks (unions of the basis)."""
        guards.require("open family", self.n, "topology")
        fam = {0}
        for b in sorted(set(self.nbhd)):
            fam |= {u | b for u in fam}
        return tuple(sorted(fam))

    def open_count(self) -> int:
        return len(self.opens)


def topology_from_subbasis(n: int, subbasis: Iterable) -> Topology:
    """Topology generated by ``subbasis`` (finite intersections, then unions).

    The empty intersection is the carrier, so an empty subbasis gives the
    indiscrete topology.
    """
    full = (1 << n) - 1
    sets = [_as_mask(s) for s in subbasis]
    for s in sets:
        if s & ~full:
            raise ValueError(f"subbasis member {s:b} exceeds a carrier of size {n}")
    nb = []
    for x in range(n):
        m = full
        for s in sets:
            if s >> x & 1:
                m &= s
        nb.append(m)
    return Topology(n, tuple(nb))


def is_hausdorff(T: Topology) -> bool:
    return all(T.nbhd[x] & T.nbhd[y] == 0 for x in range(T.n) for y in range(x + 1, T.n))


def is_discrete(T: Topology) -> bool:
    return all(T.nbhd[x] == 1 << x for x in range(T.n))


def is_compact(T: Topology) -> bool:
    # a finite carrier has finitely many opens, so every cover is finite
    return True


def finer_than(T1: Topology, T2: Topology) -> bool:
    """True when every open set of ``T2`` is open in ``T1``."""
    if T1.n != T2.n:
        raise CarrierMismatch(f"carriers of size {T1.n} and {T2.n}")
    return all(a & ~b == 0 for a, b in zip(T1.nbhd, T2.nbhd))


def topologies_equal(T1: Topology, T2: Topology) -> bool:
    if T1.n != T2.n:
        raise CarrierMismatch(f"carriers of size {T1.n} and {T2.n}")
    return T1.nbhd == T2.nbhd


def product_topology(T1: Topology, T2: Topology) -> Topology:
    """Product on pairs ``(i, j)`` encoded as ``i * T2.n + j``."""
    n2 = T2.n
    nb = []
    for i in range(T1.n):
        for j in range(n2):
            m = 0
            for a in members(T1.nbhd[i]):
                m |= T2.nbhd[j] << (a * n2)
            nb.append(m)
    return Topology(T1.n * n2, tuple(nb))


def subspace_topology(T: Topology, s) -> Topology:
    """Trace topology on the points of ``s``, renumbered in ascending order."""
    pts = list(members(_as_mask(s)))
    pos = {p: k for k, p in enumerate(pts)}
    smask = mask_of(pts)
    return Topology(len(pts), tuple(mask_of(pos[q] for q in members(T.nbhd[p] & smask)) for p in pts))


def is_continuous(f: Sequence[int], Tdom: Topology, Tcod: Topology) -> bool:
    """Preimage of every basic open (hence every open) is open.

    ``f[x] is None`` leaves ``x`` outside the domain of a partial map; the
    domain then carries the trace of ``Tdom``.
    """
    if len(f) != Tdom.n or any(v is not None and not 0 <= v < Tcod.n for v in f):
        raise DomainMismatch("map does not send the domain carrier into the codomain carrier")
    dom = mask_of(x for x in range(Tdom.n) if f[x] is not None)
    for y in range(Tcod.n):
        target = Tcod.nbhd[y]
        pre = mask_of(x for x in members(dom) if target >> f[x] & 1)
        if any(Tdom.nbhd[x] & dom & ~pre for x in members(pre)):
            return False
    return True


# ---------------------------------------------------------------------------
# topologies of an effect algebra


def interval_topology(E: EffectAlgebra) -> Topology:
    """Closed intervals ``[a, b]`` form a subbasis of closed sets."""
    full = E.full
    closed = {E.interval(a, b) for a in range(E.n) for b in members(E.up[a])}
    return topology_from_subbasis(E.n, [full & ~c for c in closed])


@dataclass(frozen=True)
class _DirectedIndex:
    ups: dict    # join -> directed subsets with that join
    downs: dict  # meet -> down-directed subsets with that meet


def _directed_index(E: EffectAlgebra, guard: str) -> _DirectedIndex:
    ups, downs = {}, {}
    for Y in directed_subsets(E, guard):
        ups.setdefault(E.join_all(members(Y)), []).append(Y)
    for Z in down_directed_subsets(E, guard):
        downs.setdefault(E.meet_all(members(Z)), []).append(Z)
    return _DirectedIndex(ups, downs)


def _open_by_directed_criterion(E, U, index, points=None):
    """Every (directed Y, down-directed Z) meeting at a point of U has [y, z] ⊆ U."""
    good_z = []
    for y in range(E.n):
        good_z.append(mask_of(z for z in members(E.up[y]) if E.interval(y, z) & ~U == 0))
    for x in members(U if points is None else points & U):
        for Y in index.ups.get(x, ()):
            ys = list(members(Y))
            for Z in index.downs.get(x, ()):
                if not any(good_z[y] & Z for y in ys):
                    return False
    return True


def lemma22_is_open(E: EffectAlgebra, U) -> bool:
    """Open-set test for the order topology via directed / down-directed pairs."""
    E.lattice_tables()
    guards.require("directed-pair open-set criterion", E.n, "lemma22")
    return _open_by_directed_criterion(E, _as_mask(U), _directed_index(E, "lemma22"))


def order_topology(E: EffectAlgebra) -> Topology:
    """Order topology of a finite lattice effect algebra.

    A finite directed set contains its join, so the topology is discrete.
    That fast path is cross-checked: for small carriers every subset is run
    through the directed-pair criterion; for larger ones (up to the
    ``topology`` guard) each singleton is.
    """
    E.lattice_tables()
    guards.require("order topology", E.n, "topology")
    fast = Topology.discrete(E.n)
    if E.n <= guards.limits().lemma22:
        index = _directed_index(E, "lemma22")
        opens = [U for U in range(1 << E.n) if _open_by_directed_criterion(E, U, index)]
        oracle = Topology.from_opens(E.n, opens)
    else:
        index = _directed_index(E, "topology")
        nb = []
        for x in range(E.n):
            nb.append(1 << x if _open_by_directed_criterion(E, 1 << x, index) else None)
        if None in nb:
            raise OracleMismatch(f"singleton {{{nb.index(None)}}} fails the open-set criterion")
        oracle = Topology(E.n, tuple(nb))
    if oracle != fast:
        raise OracleMismatch("order topology fast path disagrees with the open-set criterion")
    return fast


@dataclass(frozen=True)
class Ideal:
    members: int

    def elements(self):
        return list(members(self.members))


@dataclass(frozen=True)
class DualIdeal:
    members: int

    def elements(self):
        return list(members(self.members))


def _ideal_family(E, below, bound_table, anchor):
    guards.require("ideal enumeration", E.n, "topology")
    out = []
    for S in range(1, 1 << E.n):
        if not S >> anchor & 1:
            continue
        els = list(members(S))
        if any(below[a] & ~S for a in els):
            continue
        if any(not S >> bound_table[a][b] & 1 for a in els for b in els):
            continue
        out.append(S)
    principal = {below[x] for x in range(E.n)}
    if set(out) != principal:
        raise OracleMismatch("ideals of a finite lattice must be exactly the principal ones")
    return out


def ideals(E: EffectAlgebra):
    """All nonempty down-closed, join-closed subsets."""
    _meet, join = E.lattice_tables()
    return [Ideal(S) for S in _ideal_family(E, E.down, join, E.zero)]


def dual_ideals(E: EffectAlgebra):
    meet, _join = E.lattice_tables()
    return [DualIdeal(S) for S in _ideal_family(E, E.up, meet, E.one)]


def completely_irreducible(E: EffectAlgebra, family):
    """Members that are not an intersection of other members.

    It suffices to intersect all strictly larger members; one contained in
    no other member counts as irreducible.
    """
    full = E.full
    out = []
    for I in family:
        inter = full
        bigger = False
        for J in family:
            if J.members != I.members and I.members & ~J.members == 0:
                inter &= J.members
                bigger = True
        if not bigger or inter != I.members:
            out.append(I)
    return out


def frink_ideal_topology(E: EffectAlgebra) -> Topology:
    sub = [I.members for I in completely_irreducible(E, ideals(E))]
    sub += [F.members for F in completely_irreducible(E, dual_ideals(E))]
    return topology_from_subbasis(E.n, sub)


# ---------------------------------------------------------------------------
# continuity of the algebra's operations


def is_upper_set(E: EffectAlgebra, s: int) -> bool:
    return all(E.up[x] & ~s == 0 for x in members(s))


def clopen_upper_sets(E: EffectAlgebra, T: Topology):
    guards.require("upper-set enumeration", E.n, "topology")
    return [s for s in range(1 << E.n) if is_upper_set(E, s) and T.is_open(s) and T.is_closed(s)]


def binary_op_continuous(E: EffectAlgebra, T: Topology, op) -> bool:
    """Continuity of a total binary operation ``E × E → E``."""
    f = [op(a, b) for a, b in product(range(E.n), repeat=2)]
    return is_continuous(f, product_topology(T, T), T)


def oplus_domain(E: EffectAlgebra):
    """Pairs ``(a, b)`` with ``a ⊕ b`` defined, ascending in ``a * n + b``."""
    return [(a, b) for a in range(E.n) for b in range(E.n) if E.oplus(a, b) is not None]


def oplus_continuous(E: EffectAlgebra, T: Topology) -> bool:
    """⊕ on its domain with the trace of the product topology."""
    dom = oplus_domain(E)
    Tdom = subspace_topology(product_topology(T, T), mask_of(a * E.n + b for a, b in dom))
    return is_continuous([E.oplus(a, b) for a, b in dom], Tdom, T)


def oplus_continuous_at(E: EffectAlgebra, T: Topology, a: int, b: int) -> bool:
    """Local continuity of ⊕ at the point ``(a, b)`` of its domain."""
    dom = oplus_domain(E)
    Tdom = subspace_topology(product_topology(T, T), mask_of(x * E.n + y for x, y in dom))
    k = dom.index((a, b))
    target = T.nbhd[E.oplus(a, b)]
    return all(target >> E.oplus(*dom[j]) & 1 for j in members(Tdom.nbhd[k]))


def lattice_ops_continuous(E: EffectAlgebra, T: Topology) -> bool:
    return binary_op_continuous(E, T, E.meet) and binary_op_continuous(E, T, E.join)


def separation_witness(E: EffectAlgebra, T: Topology):
    """A pair ``x ≰ y`` not separated by a clopen upper set, or None."""
    uppers = clopen_upper_sets(E, T)
    for x in range(E.n):
        for y in range(E.n):
            if not E.leq(x, y) and not any(U >> x & 1 and not U >> y & 1 for U in uppers):
                return (x, y)
    return None


def is_totally_order_disconnected(E: EffectAlgebra) -> bool:
    T = order_topology(E)
    return lattice_ops_continuous(E, T) and separation_witness(E, T) is None


def clopen_interval_witness(E: EffectAlgebra, T: Topology):
    """A finite ``u`` for which ``[u, 1]`` or ``[0, u']`` is not clopen, or None."""
    for u in members(finite_elements(E)):
        for s in (E.interval(u, E.one), E.interval(E.zero, E.ortho[u])):
            if not (T.is_open(s) and T.is_closed(s)):
                return u
    return None
